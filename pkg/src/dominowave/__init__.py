"""Domino-wave speeds: a pairwise collision model, acoustic measurement and validation."""

from .errors import DominoError, Divergent, NonPropagating, PhysicalDomainError
from .geometry import (
    PRACTICAL_LIMIT,
    STANDARD_GRAVITY,
    ArraySpec,
    DominoGeometry,
    SpacingRegime,
    array_from_ratios,
    denormalize_speed,
    make_array_spec,
    normalize_speed,
    spacing_regime,
)
from .validation import (
    Dataset,
    MeasurementPoint,
    Orientation,
    ValidationReport,
    builtin_dataset,
    load_dataset_csv,
    range_check,
    residuals,
    validate_model,
)
from .wave_model import (
    CollisionParams,
    CurvePoint,
    ImpactSeries,
    SpeedPrediction,
    Status,
    calibrate_restitution,
    collision_map,
    fall_time,
    limiting_omega,
    limiting_speed,
    predict_normalized,
    simulate_chain,
    speed_curve,
)

__version__ = "0.1.0"
