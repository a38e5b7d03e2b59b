# relay-kit/src/relay_kit/schemas/channel.py

"""
Defines the models of the amplify-and-forward layer: one draw of every link's
channel matrix, the protocol configuration, the end-to-end equivalent channel,
and the effective noise seen by the destination.

These models carry numpy arrays, so they allow arbitrary types. Arrays are
never serialized raw; a realization is reproduced from its seed and the hash
of the network it was drawn for.
"""

import math
from typing import Any, Dict, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Edge = Tuple[int, int]
NoiseKind = Literal["white", "colored"]


class ChannelRealization(BaseModel):
    """
    One quasi-static draw of all link matrices.

    `matrices[(u, v)]` is the N_v x N_u matrix of the link u -> v.
    """

    matrices: Dict[Edge, Any] = Field(..., description="Edge -> complex ndarray.")
    seed: Optional[int] = Field(None, description="The seed the draw came from.")
    network_hash: Optional[str] = None

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def matrix(self, tx: int, rx: int) -> np.ndarray:
        return self.matrices[(tx, rx)]

    def with_matrix(self, edge: Edge, value: np.ndarray) -> "ChannelRealization":
        """Returns a copy with one link replaced; the copy no longer has a seed."""
        matrices = dict(self.matrices)
        matrices[edge] = np.asarray(value)
        return ChannelRealization(matrices=matrices, network_hash=self.network_hash)

    def reference(self) -> Dict[str, Any]:
        return {"seed": self.seed, "network_hash": self.network_hash}


class AFConfig(BaseModel):
    """
    Parameters of the amplify-and-forward protocol.

    `gain` and `threshold` stay `None` unless set explicitly; the effective
    values 1/sqrt(log2 P) and P*log2 P are derived from `power` on access.
    """

    power: float = Field(..., gt=1.0, description="Total source power P (linear).")
    gain: Optional[float] = Field(None, gt=0.0, description="Relay amplification g.")
    threshold: Optional[float] = Field(
        None, gt=0.0, description="Relay activation threshold on received power."
    )
    time_slots: int = Field(1, ge=1, description="Block length T in slots.")
    single_block: bool = Field(
        False,
        description="Collapse a layered network to its single-delay channel (T must be 1).",
    )
    enforce_activation: bool = Field(
        True, description="Silence relays whose received power exceeds the threshold."
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_single_block(self) -> "AFConfig":
        if self.single_block and self.time_slots != 1:
            raise ValueError("single_block mode requires time_slots == 1.")
        return self

    @property
    def log_power(self) -> float:
        return math.log2(self.power)

    @property
    def effective_gain(self) -> float:
        return self.gain if self.gain is not None else 1.0 / math.sqrt(self.log_power)

    @property
    def effective_threshold(self) -> float:
        if self.threshold is not None:
            return self.threshold
        return self.power * self.log_power

    def at_power(self, power: float) -> "AFConfig":
        """Returns the same configuration at a new power, with defaults re-derived."""
        return AFConfig.model_validate({**self.model_dump(), "power": power})


class EquivalentChannel(BaseModel):
    """
    The end-to-end linear channel from the stacked source inputs to the
    stacked destination outputs.

    `delay_matrices[d]` is H_d, the sum over every route with d relays. In
    block mode `block_matrix` is the T*N_dst x T*N_src block-Toeplitz matrix
    with block (t2, t1) = H_{t2 - t1}; in single-block mode it is H_delta.
    """

    delay_matrices: Tuple[Any, ...]
    block_matrix: Any
    longest_path: int = Field(..., ge=1, description="l_G, edges of the longest simple route.")
    time_slots: int = Field(..., ge=1)
    single_block: bool = False
    delay: Optional[int] = Field(
        None, description="The common relay count used in single-block mode."
    )

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def rx_antennas(self) -> int:
        return self.delay_matrices[0].shape[0]

    @property
    def tx_antennas(self) -> int:
        return self.delay_matrices[0].shape[1]

    def block(self, t2: int, t1: int) -> np.ndarray:
        """Block (t2, t1) of the block matrix, 0-based slots."""
        rows, cols = self.rx_antennas, self.tx_antennas
        return self.block_matrix[t2 * rows : (t2 + 1) * rows, t1 * cols : (t1 + 1) * cols]


class NoiseModel(BaseModel):
    """The covariance of the total noise at the destination over one block."""

    kind: NoiseKind
    covariance: Any

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def check_covariance(self) -> "NoiseModel":
        cov = np.asarray(self.covariance)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise ValueError(f"Covariance must be square, got shape {cov.shape}.")
        if not np.allclose(cov, cov.conj().T, atol=1e-9):
            raise ValueError("Covariance must be Hermitian.")
        if self.kind == "white" and not np.allclose(cov, np.eye(cov.shape[0])):
            raise ValueError("White noise must have identity covariance.")
        return self

    @classmethod
    def white(cls, dimension: int) -> "NoiseModel":
        return cls(kind="white", covariance=np.eye(dimension, dtype=complex))

    @property
    def dimension(self) -> int:
        return self.covariance.shape[0]

    @property
    def max_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.covariance)[-1])
