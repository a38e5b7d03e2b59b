# relay-kit/src/relay_kit/schemas/context.py

"""
Defines the AnalysisContext, the immutable record that identifies one run
for logging and reporting.
"""

from typing import Optional
from uuid import uuid4

from pydantic import BaseModel, ConfigDict, Field


class AnalysisContext(BaseModel):
    """
    Identifies a single analysis run.

    Components never modify it.
    """

    run_id: str = Field(default_factory=lambda: uuid4().hex[:12])
    command: str
    network_hash: Optional[str] = None
    seed: Optional[int] = None

    model_config = ConfigDict(frozen=True)
