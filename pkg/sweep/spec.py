"""
Sweep grid definition and the figure presets.
"""

from enum import Enum
from itertools import product
from typing import Any, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.exceptions import InvalidParametersError
from model.params import MAX_SEED, Variant


class Quantity(str, Enum):
    """Quantities a sweep can emit."""
    VERTICES = "vertices"
    EDGES = "edges"
    AVERAGE_DEGREE = "average_degree"
    DIAMETER = "diameter"
    CLUSTERING = "clustering"
    ASSORTATIVITY = "assortativity"
    MEAN_HITTING = "mean_hitting"


class SweepCell(BaseModel):
    """One grid point; seeds are evaluated together so they can be aggregated."""
    model_config = ConfigDict(frozen=True)

    variant: Variant
    m: int
    t: int
    p: Optional[float] = None
    seeds: Tuple[int, ...] = ()


class SweepSpec(BaseModel):
    """
    Parameter grid for ``sweep``.

    Attributes:
        variant: Graph family
        m_values: Branching counts
        t_values: Generation indices
        p_values: Deletion probabilities (deleted family only)
        seeds: Seeds per cell (deleted family only)
        quantities: Quantities to emit per cell
        measure: Build instances and measure, not just closed forms
        output: CSV path; stdout when absent
    """

    model_config = ConfigDict(frozen=True)

    variant: Variant = Variant.BASE
    m_values: List[int] = Field(..., min_length=1)
    t_values: List[int] = Field(..., min_length=1)
    p_values: Optional[List[float]] = Field(default=None)
    seeds: List[int] = Field(default_factory=lambda: [0])
    quantities: List[Quantity] = Field(..., min_length=1)
    measure: bool = Field(default=True, description="Measure built instances alongside closed forms")
    output: Optional[str] = Field(default=None, description="CSV output path")

    @field_validator("m_values")
    @classmethod
    def validate_m(cls, v: List[int]) -> List[int]:
        if any(m < 2 for m in v):
            raise ValueError("every m must be >= 2")
        return v

    @field_validator("t_values")
    @classmethod
    def validate_t(cls, v: List[int]) -> List[int]:
        if any(t < 0 for t in v):
            raise ValueError("every t must be >= 0")
        return v

    @field_validator("p_values")
    @classmethod
    def validate_p(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and any(not 0.0 <= p <= 1.0 for p in v):
            raise ValueError("every p must lie in [0, 1]")
        return v

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("at least one seed is required")
        if any(not 0 <= s <= MAX_SEED for s in v):
            raise ValueError("seeds must be 64-bit unsigned integers")
        return v

    @model_validator(mode="after")
    def check_p_values(self) -> "SweepSpec":
        """p-list only, and always, for the deleted family."""
        if self.variant is Variant.WHEEL_DELETED and not self.p_values:
            raise ValueError("variant 'deleted' needs a non-empty p list")
        if self.variant is not Variant.WHEEL_DELETED and self.p_values:
            raise ValueError(f"variant '{self.variant.value}' takes no p list")
        return self

    @classmethod
    def create(cls, **kwargs: Any) -> "SweepSpec":
        """Validate, mapping pydantic errors to InvalidParametersError."""
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise InvalidParametersError(
                "Invalid sweep specification",
                details={"errors": [err["msg"] for err in e.errors()]},
            ) from e

    def cells(self) -> Iterator[SweepCell]:
        """Grid points in row-major (m, t, p) order."""
        stochastic = self.variant is Variant.WHEEL_DELETED
        p_values = self.p_values if stochastic else [None]
        for m, t, p in product(self.m_values, self.t_values, p_values):
            yield SweepCell(
                variant=self.variant,
                m=m,
                t=t,
                p=p,
                seeds=tuple(self.seeds) if stochastic else (),
            )


FIGURE_M = [2, 4, 6, 8]


def figure_preset(figure: int, **overrides: Any) -> SweepSpec:
    """
    Grids behind the four result figures.

    2: wheel clustering against t; 3: deleted-family clustering against
    t and p; 4: assortativity of the star-seeded family against t;
    5: published r2 against t and p, with sampled Pearson values.
    """
    presets = {
        2: dict(variant=Variant.WHEEL_SEED, m_values=FIGURE_M, t_values=list(range(0, 13)),
                quantities=[Quantity.CLUSTERING]),
        3: dict(variant=Variant.WHEEL_DELETED, m_values=FIGURE_M, t_values=list(range(0, 13)),
                p_values=[0.0, 0.1, 0.3, 0.5, 0.7, 0.9], seeds=[0],
                quantities=[Quantity.CLUSTERING]),
        4: dict(variant=Variant.BASE, m_values=FIGURE_M, t_values=list(range(1, 13)),
                quantities=[Quantity.ASSORTATIVITY]),
        5: dict(variant=Variant.WHEEL_DELETED, m_values=FIGURE_M, t_values=list(range(1, 13)),
                p_values=[0.1, 0.3, 0.5, 0.7, 0.9], seeds=[0, 1, 2],
                quantities=[Quantity.ASSORTATIVITY]),
    }
    if figure not in presets:
        raise InvalidParametersError(f"No preset for figure {figure}", details={"known": sorted(presets)})
    return SweepSpec.create(**{**presets[figure], **{k: v for k, v in overrides.items() if v is not None}})
