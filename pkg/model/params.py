"""
Parameter schema for one graph instance.

``ModelParams`` is the full recipe for an instance: the variant tag,
the branching count m, the generation index t and, for the stochastic
variant only, the deletion probability p and the RNG seed.
"""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.exceptions import InvalidParametersError

MAX_SEED = 2**64 - 1


class Variant(str, Enum):
    """Graph family."""
    BASE = "base"                 # star seed, G(t;m)
    WHEEL_SEED = "wheel"          # wheel seed, G1(t;m)
    WHEEL_DELETED = "deleted"     # wheel seed with rim deletion, G2(t;m,p)


class ModelParams(BaseModel):
    """
    Recipe for one graph instance.

    Attributes:
        variant: Graph family.
        m: Branching count (m >= 2).
        t: Generation index (t >= 0).
        p: Rim-edge deletion probability, present only for WHEEL_DELETED.
        seed: 64-bit unsigned RNG seed, present only for WHEEL_DELETED.
    """

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    variant: Variant = Variant.BASE
    m: int = Field(..., ge=2, description="Branching count")
    t: int = Field(..., ge=0, description="Generation index")
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Deletion probability")
    seed: Optional[int] = Field(default=None, ge=0, le=MAX_SEED, description="RNG seed")

    @model_validator(mode="after")
    def check_stochastic_fields(self) -> "ModelParams":
        """p and seed are present iff the variant is WHEEL_DELETED."""
        stochastic = self.variant is Variant.WHEEL_DELETED
        if stochastic and (self.p is None or self.seed is None):
            raise ValueError("variant 'deleted' requires both p and seed")
        if not stochastic and (self.p is not None or self.seed is not None):
            raise ValueError(f"variant '{self.variant.value}' takes no p or seed")
        return self

    @classmethod
    def create(cls, **kwargs: Any) -> "ModelParams":
        """
        Validate and build parameters, mapping validation failures
        to InvalidParametersError.
        """
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidParametersError(
                "Invalid model parameters",
                details={"errors": [err["msg"] for err in e.errors()], "input": kwargs},
            ) from e

    @property
    def label(self) -> str:
        """Short file-name friendly tag, e.g. ``deleted_m3_t2_p0.5_s7``."""
        tag = f"{self.variant.value}_m{self.m}_t{self.t}"
        if self.variant is Variant.WHEEL_DELETED:
            tag += f"_p{self.p:g}_s{self.seed}"
        return tag

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "variant": self.variant.value,
            "m": self.m,
            "t": self.t,
            "p": self.p,
            "seed": self.seed,
        }
