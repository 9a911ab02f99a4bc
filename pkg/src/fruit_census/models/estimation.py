"""Yield estimation data models.

This module defines the spatial region filter, the height-to-weight
polynomial, the yield configuration, and the YieldReport produced from
reliable tracks.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator

from fruit_census.models.detection import FruitClass

PUBLISHED_COEFFICIENTS: tuple[float, float, float, float] = (0.00178, 0.00993, -7.36, 192.0)
"""Published cubic (a3, a2, a1, a0) mapping height in mm to weight in grams."""

CALIBRATION_POINTS: tuple[tuple[float, float], ...] = ((35.0, 13.5), (40.0, 18.1), (42.0, 23.0))
"""Harvested (height mm, weight g) samples the published cubic was derived from."""

WeightModelName = Literal["paper", "fitted"]


class RegionFilter(BaseModel):
    """Optional world-frame bounds a track center must lie within.

    Unset bounds are open. Bounds are inclusive.

    Example:
        >>> region = RegionFilter(z_min=0.9)
        >>> region.contains((0.0, 0.0, 1.0))
        True
    """

    model_config = {"frozen": True, "extra": "forbid"}

    x_min: float | None = None
    x_max: float | None = None
    y_min: float | None = None
    y_max: float | None = None
    z_min: float | None = None
    z_max: float | None = None

    @model_validator(mode="after")
    def validate_bounds(self) -> RegionFilter:
        """Ensure min < max on every axis where both are set."""
        for axis in ("x", "y", "z"):
            lo = getattr(self, f"{axis}_min")
            hi = getattr(self, f"{axis}_max")
            if lo is not None and hi is not None and not lo < hi:
                raise ValueError(f"{axis}_min={lo} must be < {axis}_max={hi}")
        return self

    def contains(self, point: tuple[float, float, float] | np.ndarray) -> bool:
        """Check whether a world point satisfies every configured bound."""
        for value, axis in zip(point, ("x", "y", "z"), strict=True):
            lo = getattr(self, f"{axis}_min")
            hi = getattr(self, f"{axis}_max")
            if lo is not None and value < lo:
                return False
            if hi is not None and value > hi:
                return False
        return True


class WeightModel(BaseModel):
    """Cubic polynomial mapping fruit height (mm) to weight (g).

    Attributes:
        a3: Cubic coefficient.
        a2: Quadratic coefficient.
        a1: Linear coefficient.
        a0: Constant term.
        provenance: ``paper`` for the published cubic, ``fitted`` for a model
            solved from calibration samples.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    a3: float = 0.0
    a2: float
    a1: float
    a0: float
    provenance: WeightModelName

    @model_validator(mode="after")
    def validate_finite(self) -> WeightModel:
        """Ensure the polynomial is finite over plausible fruit heights (20-60 mm)."""
        heights = np.linspace(20.0, 60.0, 41)
        values = ((self.a3 * heights + self.a2) * heights + self.a1) * heights + self.a0
        if not np.all(np.isfinite(values)):
            raise ValueError("weight model must be finite on [20, 60] mm")
        return self

    @classmethod
    def paper(cls) -> WeightModel:
        """The published cubic, verbatim."""
        a3, a2, a1, a0 = PUBLISHED_COEFFICIENTS
        return cls(a3=a3, a2=a2, a1=a1, a0=a0, provenance="paper")

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        """Coefficients (a3, a2, a1, a0)."""
        return (self.a3, self.a2, self.a1, self.a0)


class YieldConfig(BaseModel):
    """Filters and weight mapping applied to reliable tracks.

    Attributes:
        region: Spatial bounds a kept track's center must satisfy.
        min_volume: Smallest kept cube volume (cubic meters).
        target_class: Class kept; None disables the class filter.
        weight_model: Which height-to-weight model to use.
        calibration_points: (height mm, weight g) samples for the fitted model.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    region: RegionFilter = Field(default_factory=RegionFilter)
    min_volume: float = Field(default=1.2e-5, ge=0, description="Minimum volume (m^3)")
    target_class: int | None = Field(default=int(FruitClass.RIPENED), ge=0)
    weight_model: WeightModelName = "paper"
    calibration_points: tuple[tuple[float, float], ...] = Field(
        default=CALIBRATION_POINTS, min_length=3, max_length=3
    )


class FilterStats(BaseModel):
    """Tracks rejected by the yield filters, by first failing cause."""

    model_config = {"frozen": True, "extra": "forbid"}

    region: int = Field(default=0, ge=0)
    volume: int = Field(default=0, ge=0)
    wrong_class: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        """Total rejected tracks."""
        return self.region + self.volume + self.wrong_class


class TrackWeight(BaseModel):
    """Weight estimate for one kept track."""

    model_config = {"frozen": True, "extra": "forbid"}

    track_id: int = Field(..., ge=0)
    height_mm: float = Field(..., gt=0)
    weight_g: float


class YieldReport(BaseModel):
    """Count and weight estimate after filtering.

    Attributes:
        count: Number of kept tracks.
        tracks: Per-track height and weight, ascending track id.
        total_weight_g: Sum of per-track weights.
        average_weight_g: Mean weight, None when nothing was kept.
        rejections: Filter rejections by cause.
        weight_model: Model used for the weights.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    count: int = Field(..., ge=0)
    tracks: list[TrackWeight] = Field(default_factory=list)
    total_weight_g: float = 0.0
    average_weight_g: float | None = None
    rejections: FilterStats = Field(default_factory=FilterStats)
    weight_model: WeightModel

    @model_validator(mode="after")
    def validate_totals(self) -> YieldReport:
        """Ensure count and total agree with the per-track entries."""
        if self.count != len(self.tracks):
            raise ValueError(f"count={self.count} but {len(self.tracks)} track entries")
        total = sum(t.weight_g for t in self.tracks)
        if abs(total - self.total_weight_g) > 1e-9 * max(1.0, abs(total)):
            raise ValueError(f"total_weight_g={self.total_weight_g} != sum of weights {total}")
        return self
