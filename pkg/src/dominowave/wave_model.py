"""Limiting speed of a toppling-domino wave under a pairwise impulsive collision model.

Each domino is a thin rigid plate pivoting about its base edge without
slipping. Starting upright with angular speed ``w0`` it gains

    w(theta)^2 = w0^2 + (3 g / H) (1 - cos theta)

by the time it has tilted to ``theta``. At the contact angle it strikes the
next domino; an instantaneous horizontal impulse with equal moment arms on
both plates hands the struck domino ``(1 + e) / 2`` of the striker's angular
speed, and the striker drops out. The wave settles on the fixed point of
this fall/collide map; its speed is one pitch per fall time.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import Divergent, EmptyGrid, InsufficientData, NonFalling, NonPropagating
from .geometry import (
    PRACTICAL_LIMIT,
    STANDARD_GRAVITY,
    ArraySpec,
    SpacingRegime,
    array_from_ratios,
    normalize_speed,
    spacing_regime,
)
from .numerics import adaptive_simpson, golden_section_minimize

DEFAULT_RESTITUTION = 0.7
DEFAULT_T_OVER_H = 0.15
QUAD_TOL = 1e-10  # s


@dataclass(frozen=True)
class CollisionParams:
    restitution: float = DEFAULT_RESTITUTION

    def __post_init__(self):
        if not 0.0 <= self.restitution <= 1.0:
            raise ValueError(f"restitution must lie in [0, 1], got {self.restitution!r}")

    @property
    def transfer(self) -> float:
        """Fraction of the striker's angular speed passed to the struck domino."""
        return 0.5 * (1.0 + self.restitution)


class Status(enum.Enum):
    CONVERGED = "Converged"
    DIVERGENT = "Divergent"
    NON_PROPAGATING = "NonPropagating"


@dataclass(frozen=True)
class SpeedPrediction:
    collision_period: float
    wave_speed: float
    normalized_speed: float
    fixed_point_omega: float
    status: Status = Status.CONVERGED


@dataclass(frozen=True)
class ImpactSeries:
    impact_times: list[float]
    pre_impact_omegas: list[float]
    post_impact_omegas: list[float]
    divergent: bool = False

    def __len__(self):
        return len(self.impact_times)

    @property
    def periods(self) -> list[float]:
        """Time between successive impacts, the first measured from release."""
        times = [0.0] + list(self.impact_times)
        return [b - a for a, b in zip(times, times[1:])]


def _require_propagating(spec: ArraySpec) -> None:
    regime = spacing_regime(spec)
    if regime is not SpacingRegime.PROPAGATING:
        raise NonPropagating(
            f"d/H = {spec.spacing_ratio:.4g} exceeds the practical limit "
            f"sqrt(3)/2 = {PRACTICAL_LIMIT:.4f}: the striker hits below its neighbour's mid point"
        )


def energy_gain(spec: ArraySpec) -> float:
    """Increase in w^2 while toppling from upright to the contact angle."""
    return 3.0 * STANDARD_GRAVITY / spec.height * (1.0 - math.cos(spec.contact_angle))


def angular_velocity(spec: ArraySpec, omega0: float, theta: float) -> float:
    """Angular speed after tilting to ``theta`` from upright."""
    k = 3.0 * STANDARD_GRAVITY / spec.height
    return math.sqrt(omega0 * omega0 + k * (1.0 - math.cos(theta)))


def fall_time(spec: ArraySpec, omega0: float) -> float:
    """Time for a domino released upright at ``omega0`` to reach its neighbour."""
    if not omega0 > 0:
        raise NonFalling(f"an upright domino needs a positive push, got omega0={omega0!r}")
    _require_propagating(spec)
    k = 3.0 * STANDARD_GRAVITY / spec.height
    w2 = omega0 * omega0

    def integrand(theta):
        return 1.0 / math.sqrt(w2 + k * (1.0 - math.cos(theta)))

    return adaptive_simpson(integrand, 0.0, spec.contact_angle, tol=QUAD_TOL)


def collision_map(spec: ArraySpec, params: CollisionParams, omega0: float) -> float:
    """Initial angular speed of the next domino given this one's initial speed."""
    if not omega0 > 0:
        raise NonFalling(f"omega0 must be positive, got {omega0!r}")
    return params.transfer * math.sqrt(omega0 * omega0 + energy_gain(spec))


def limiting_omega(spec: ArraySpec, params: CollisionParams) -> float:
    """Fixed point of :func:`collision_map`: ``a sqrt(gain / (1 - a^2))``."""
    _require_propagating(spec)
    a = params.transfer
    if a >= 1.0:
        raise Divergent("e = 1: every collision adds energy, the wave never settles")
    return a * math.sqrt(energy_gain(spec) / (1.0 - a * a))


def limiting_speed(spec: ArraySpec, params: CollisionParams) -> SpeedPrediction:
    omega = limiting_omega(spec, params)
    period = fall_time(spec, omega)
    speed = spec.pitch / period
    return SpeedPrediction(
        collision_period=period,
        wave_speed=speed,
        normalized_speed=normalize_speed(speed, spec.height),
        fixed_point_omega=omega,
    )


def predict_normalized(
    d_over_h: float,
    t_over_h: float = DEFAULT_T_OVER_H,
    restitution: float = DEFAULT_RESTITUTION,
) -> float:
    """Normalized limiting speed ``v / sqrt(gH)`` from dimensionless inputs alone."""
    spec = array_from_ratios(d_over_h, t_over_h)
    return limiting_speed(spec, CollisionParams(restitution)).normalized_speed


@dataclass(frozen=True)
class CurvePoint:
    d_over_h: float
    normalized_speed: float = math.nan
    status: Status = Status.CONVERGED
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status is Status.CONVERGED


def _curve_point(args) -> CurvePoint:
    d_over_h, t_over_h, restitution = args
    try:
        return CurvePoint(d_over_h, predict_normalized(d_over_h, t_over_h, restitution))
    except Divergent as exc:
        return CurvePoint(d_over_h, status=Status.DIVERGENT, message=str(exc))
    except (NonPropagating, ValueError) as exc:
        return CurvePoint(d_over_h, status=Status.NON_PROPAGATING, message=str(exc))


def speed_curve(
    grid: Iterable[float],
    t_over_h: float = DEFAULT_T_OVER_H,
    restitution: float = DEFAULT_RESTITUTION,
    workers: int | None = None,
) -> list[CurvePoint]:
    """Evaluate the normalized speed at each ``d/H`` in ``grid``, keeping input order.

    Failures are recorded per row. With ``workers > 1`` points are computed in
    worker processes; the result is identical to the sequential one.
    """
    jobs = [(float(r), t_over_h, restitution) for r in grid]
    if not jobs:
        raise EmptyGrid("speed_curve needs at least one d/H value")
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_curve_point, jobs))
    return [_curve_point(job) for job in jobs]


def simulate_chain(
    spec: ArraySpec, params: CollisionParams, omega_init: float
) -> ImpactSeries:
    """Topple ``spec.count`` dominoes in sequence and record every impact."""
    if not omega_init > 0:
        raise NonFalling(f"omega_init must be positive, got {omega_init!r}")
    _require_propagating(spec)
    theta_c = spec.contact_angle
    times, pre, post = [], [], []
    t, omega = 0.0, omega_init
    for _ in range(spec.count - 1):
        t += fall_time(spec, omega)
        striker = angular_velocity(spec, omega, theta_c)
        omega = params.transfer * striker
        times.append(t)
        pre.append(striker)
        post.append(omega)
    return ImpactSeries(times, pre, post, divergent=params.transfer >= 1.0)


class Calibration(NamedTuple):
    restitution: float
    rms: float


def _fit_points(dataset) -> list[tuple[float, float]]:
    points = getattr(dataset, "points", dataset)
    usable = [
        (p.d_over_h, p.v_norm)
        for p in points
        if p.reliable and 0.0 < p.d_over_h <= PRACTICAL_LIMIT
    ]
    if len(usable) < 2:
        raise InsufficientData(
            f"calibration needs at least 2 reliable points with 0 < d/H <= sqrt(3)/2, got {len(usable)}"
        )
    return sorted(usable)


def model_rms(
    points: Sequence[tuple[float, float]], restitution: float, t_over_h: float
) -> float:
    sq = [
        (predict_normalized(r, t_over_h, restitution) - v) ** 2 for r, v in points
    ]
    return math.sqrt(math.fsum(sq) / len(sq))


E_MAX = 0.999


def calibrate_restitution(
    dataset, t_over_h: float = DEFAULT_T_OVER_H, step: float = 1e-3, tol: float = 1e-4
) -> Calibration:
    """Fit the restitution coefficient to the reliable points of ``dataset``.

    A grid search over ``[0, 0.999]`` brackets the minimum RMS residual, then
    golden-section search refines it to ``tol``.
    """
    points = _fit_points(dataset)
    n = int(round(E_MAX / step))
    grid = [min(E_MAX, k * step) for k in range(n + 1)]
    scores = [model_rms(points, e, t_over_h) for e in grid]
    best = min(range(len(grid)), key=scores.__getitem__)
    lo, hi = max(0.0, grid[best] - step), min(E_MAX, grid[best] + step)
    e_star = golden_section_minimize(lambda e: model_rms(points, e, t_over_h), lo, hi, tol)
    rms = model_rms(points, e_star, t_over_h)
    if scores[best] < rms:
        e_star, rms = grid[best], scores[best]
    return Calibration(e_star, rms)
