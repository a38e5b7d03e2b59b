# relay-kit/src/relay_kit/schemas/results.py

"""
Defines the structured return types of the capacity and certificate analyses
and the `RunReport` envelope written by every CLI command.
"""

import math
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel import ChannelRealization, NoiseKind

SCHEMA_VERSION = "1"


class CapacityEstimate(BaseModel):
    """A Monte Carlo estimate of ergodic mutual information per channel use."""

    mean_bits: float = Field(..., description="Mean bits per channel use (block MI / T).")
    stderr: float = Field(..., ge=0.0, description="Standard error of the mean.")
    samples: int = Field(..., ge=1)
    power: float = Field(..., gt=0.0, description="The linear power P.")
    mode: NoiseKind = "white"
    time_slots: int = Field(1, ge=1)

    model_config = ConfigDict(frozen=True)

    @property
    def p_db(self) -> float:
        return 10.0 * math.log10(self.power)


class SlopeEstimate(BaseModel):
    """
    The high-SNR slope of mean bits against log2 P.

    `slope` is the least-squares fit over the whole grid; `endpoint_slope` is
    the two-point difference between the first and last grid points.
    """

    slope: float
    intercept: float
    endpoint_slope: float
    powers: List[float] = Field(..., min_length=2)
    capacities: List[CapacityEstimate]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_grid(self) -> "SlopeEstimate":
        if any(b <= a for a, b in zip(self.powers, self.powers[1:])):
            raise ValueError("The power grid must be strictly increasing.")
        if len(self.capacities) != len(self.powers):
            raise ValueError("There must be one capacity estimate per grid point.")
        return self


class RankCertificate(BaseModel):
    """The outcome of the exact rank check on a 0/1 certificate realization."""

    nu: int = Field(..., ge=0)
    rank: int = Field(..., ge=0)
    bound: int = Field(..., description="nu if layered, nu * (T - l_G + 1) otherwise.")
    expected_rank: int = Field(..., description="The exact rank the path family predicts.")
    layered: bool
    time_slots: int = Field(..., ge=1)
    longest_path: int = Field(..., ge=1)
    path_delays: Tuple[int, ...] = ()
    passed: bool
    realization: Optional[ChannelRealization] = Field(None, exclude=True)

    model_config = ConfigDict(frozen=True)

    def to_report(self) -> Dict[str, Any]:
        return {
            "nu": self.nu,
            "rank": self.rank,
            "bound": self.bound,
            "layered": self.layered,
            "T": self.time_slots,
            "l_G": self.longest_path,
            "pass": self.passed,
        }


class RankGainReport(BaseModel):
    """Links the certificate's exact rank to the slope of its mutual information."""

    nu: int
    rank: int
    rank_per_use: float
    slope: float
    time_slots: int
    layered: bool
    powers: List[float]
    mean_bits: List[float]

    model_config = ConfigDict(frozen=True)


class RunReport(BaseModel):
    """The envelope of a single CLI invocation."""

    schema_version: str = SCHEMA_VERSION
    command: str
    inputs: Dict[str, Any] = Field(
        default_factory=dict, description="Network hash and the parameters of the run."
    )
    outputs: Any = Field(None, description="The command-specific payload.")
    wall_time: Optional[float] = Field(None, ge=0.0, description="Seconds; never printed.")

    def payload(self) -> Dict[str, Any]:
        """The deterministic part of the report, as printed on stdout."""
        return self.model_dump(exclude={"wall_time"})
