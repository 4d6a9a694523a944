"""Domino array geometry.

Each domino is a plate of height ``H`` and thickness ``t`` standing on a flat
surface; neighbours are separated by a gap ``d``. The wave advances one pitch
``L = d + t`` per collision. Contact geometry uses the thin-domino picture:
the striker's top edge meets the next domino after tilting by
``arcsin(d/H)``, so thickness only enters through the pitch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InvalidGap, InvalidGeometry, NonPositiveHeight, OverlappingSpacing

STANDARD_GRAVITY = 9.80665  # m/s^2

#: Beyond this spacing ratio the striker hits its neighbour below the mid point.
PRACTICAL_LIMIT = math.sqrt(3.0) / 2.0


class SpacingRegime(enum.Enum):
    PROPAGATING = "Propagating"
    BEYOND_PRACTICAL_LIMIT = "BeyondPracticalLimit"
    OVERLAPPING = "Overlapping"


@dataclass(frozen=True)
class DominoGeometry:
    """Physical dimensions of a single domino (SI units)."""

    height: float
    thickness: float
    width: float = 0.025
    mass: float = 0.01

    def __post_init__(self):
        for name in ("height", "width", "mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidGeometry(f"{name} must be positive, got {value!r}")
        if not (math.isfinite(self.thickness) and self.thickness >= 0):
            raise InvalidGeometry(f"thickness must be non-negative, got {self.thickness!r}")
        if self.thickness >= self.height:
            raise InvalidGeometry("thickness must be smaller than height")

    @classmethod
    def from_ratio(cls, height: float, t_over_h: float, **kwargs) -> "DominoGeometry":
        return cls(height=height, thickness=t_over_h * height, **kwargs)

    @property
    def moment_of_inertia(self) -> float:
        """Thin plate rotating about its base edge: m H^2 / 3."""
        return self.mass * self.height**2 / 3.0


@dataclass(frozen=True)
class ArraySpec:
    geometry: DominoGeometry
    gap: float
    count: int
    pitch: float = field(init=False)
    spacing_ratio: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.gap) and self.gap > 0):
            raise InvalidGap(f"gap must be positive, got {self.gap!r}")
        if self.count < 2:
            raise ValueError(f"an array needs at least two dominoes, got {self.count}")
        ratio = self.gap / self.geometry.height
        if ratio >= 1.0:
            raise OverlappingSpacing(
                f"d/H = {ratio:.4g} >= 1: the domino lies flat before reaching its neighbour"
            )
        object.__setattr__(self, "pitch", self.gap + self.geometry.thickness)
        object.__setattr__(self, "spacing_ratio", ratio)

    @property
    def height(self) -> float:
        return self.geometry.height

    @property
    def contact_angle(self) -> float:
        """Tilt from vertical at which the striker touches its neighbour (rad)."""
        return math.asin(self.spacing_ratio)

    @property
    def contact_height(self) -> float:
        """Height above the floor of the contact point, sqrt(H^2 - d^2)."""
        return self.geometry.height * math.cos(self.contact_angle)

    @property
    def regime(self) -> SpacingRegime:
        return spacing_regime(self)


def make_array_spec(geometry: DominoGeometry, gap: float, count: int = 2) -> ArraySpec:
    return ArraySpec(geometry=geometry, gap=gap, count=count)


def array_from_ratios(
    d_over_h: float, t_over_h: float, height: float = 1.0, count: int = 2
) -> ArraySpec:
    """Build a spec from the dimensionless ratios at a chosen absolute height."""
    geometry = DominoGeometry.from_ratio(height, t_over_h)
    return ArraySpec(geometry=geometry, gap=d_over_h * height, count=count)


def spacing_regime(spec: ArraySpec) -> SpacingRegime:
    # The limit itself counts as propagating; only strictly wider gaps are flagged.
    ratio = spec.spacing_ratio
    if ratio >= 1.0:
        return SpacingRegime.OVERLAPPING
    if ratio > PRACTICAL_LIMIT:
        return SpacingRegime.BEYOND_PRACTICAL_LIMIT
    return SpacingRegime.PROPAGATING


def normalize_speed(v: float, height: float) -> float:
    """Return ``v / sqrt(g H)``."""
    if not height > 0:
        raise NonPositiveHeight(f"height must be positive, got {height!r}")
    if v < 0:
        raise ValueError(f"speed must be non-negative, got {v!r}")
    return v / math.sqrt(STANDARD_GRAVITY * height)


def denormalize_speed(v_norm: float, height: float) -> float:
    if not height > 0:
        raise NonPositiveHeight(f"height must be positive, got {height!r}")
    return v_norm * math.sqrt(STANDARD_GRAVITY * height)
