"""Measured domino-wave speeds and their comparison with the model."""

from __future__ import annotations

import csv
import enum
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DuplicateSpacing, EmptyOverlap, ParseError, UnknownDataset
from .geometry import PRACTICAL_LIMIT
from .wave_model import (
    DEFAULT_RESTITUTION,
    DEFAULT_T_OVER_H,
    CurvePoint,
    speed_curve,
)


class Orientation(enum.Enum):
    VERTICAL = "Vertical"
    HORIZONTAL = "Horizontal"
    EXTERNAL = "External"


@dataclass(frozen=True)
class MeasurementPoint:
    d_over_h: float
    v_norm: float
    orientation: Orientation = Orientation.EXTERNAL
    reliable: bool = True
    source: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.d_over_h) and self.d_over_h > 0):
            raise ValueError(f"d/H must be positive, got {self.d_over_h!r}")
        if not (math.isfinite(self.v_norm) and self.v_norm > 0):
            raise ValueError(f"normalized speed must be positive, got {self.v_norm!r}")


@dataclass(frozen=True)
class Dataset:
    name: str
    points: tuple[MeasurementPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError(f"dataset {self.name!r} is empty")
        seen = set()
        for p in self.points:
            if p.d_over_h in seen:
                raise DuplicateSpacing(f"d/H = {p.d_over_h} appears twice in {self.name!r}")
            seen.add(p.d_over_h)

    def __len__(self):
        return len(self.points)

    @property
    def reliable_points(self) -> tuple[MeasurementPoint, ...]:
        return tuple(p for p in self.points if p.reliable)


# Author's own measurements: d/H and v / sqrt(gH).
LARHAM_VERTICAL = (
    (0.04, 1.07), (0.14, 1.33), (0.23, 1.53), (0.33, 1.51), (0.43, 1.47),
    (0.53, 1.50), (0.62, 1.40), (0.72, 1.33), (0.82, 1.23),
)
LARHAM_HORIZONTAL = ((0.28, 1.15), (0.47, 1.19), (0.67, 1.15), (0.87, 0.68))

# Which entries count as "less reliable". The default flags the extreme
# spacing at both ends of each table; the alternative flags the two closest
# and the two widest spacings across both tables.
UNRELIABLE = {
    "extremes": {"larham_vertical": {0.04, 0.82}, "larham_horizontal": {0.28, 0.87}},
    "closest_widest": {"larham_vertical": {0.04, 0.14, 0.82}, "larham_horizontal": {0.87}},
}
BUILTIN = {
    "larham_vertical": (LARHAM_VERTICAL, Orientation.VERTICAL),
    "larham_horizontal": (LARHAM_HORIZONTAL, Orientation.HORIZONTAL),
}


def builtin_dataset(name: str, reliability: str = "extremes") -> Dataset:
    if name not in BUILTIN:
        raise UnknownDataset(f"unknown dataset {name!r}; choose from {sorted(BUILTIN)}")
    if reliability not in UNRELIABLE:
        raise ValueError(f"unknown reliability reading {reliability!r}")
    table, orientation = BUILTIN[name]
    flagged = UNRELIABLE[reliability][name]
    return Dataset(
        name,
        tuple(
            MeasurementPoint(r, v, orientation, reliable=r not in flagged, source=name)
            for r, v in table
        ),
    )


CSV_COLUMNS = ("d_over_H", "v_norm", "reliable", "source")


def load_dataset_csv(source, name: str | None = None) -> Dataset:
    """Parse ``d_over_H,v_norm,reliable,source`` rows (header required).

    ``source`` may be a path, CSV text, or an open text stream. Row numbers
    in errors are file line numbers, the header being line 1.
    """
    if isinstance(source, (str, os.PathLike)) and not (isinstance(source, str) and "\n" in source):
        with open(source, newline="") as fh:
            return load_dataset_csv(fh, name or os.path.splitext(os.path.basename(source))[0])
    if isinstance(source, str):
        source = io.StringIO(source)

    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        raise ParseError("empty file: header row required", row=1)
    header = [h.strip() for h in header]
    missing = [c for c in CSV_COLUMNS if c not in header]
    if missing:
        raise ParseError(f"missing columns {missing}", row=1)
    col = {c: header.index(c) for c in CSV_COLUMNS}

    points = []
    seen: dict[float, int] = {}
    for row in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        try:
            r = float(row[col["d_over_H"]])
            v = float(row[col["v_norm"]])
            flag = row[col["reliable"]].strip()
            label = row[col["source"]].strip()
        except (ValueError, IndexError) as exc:
            raise ParseError(f"bad field ({exc})", row=line) from exc
        if flag not in ("0", "1"):
            raise ParseError(f"reliable must be 0 or 1, got {flag!r}", row=line)
        if r in seen:
            raise DuplicateSpacing(f"row {line}: d/H = {r} already given on row {seen[r]}")
        seen[r] = line
        try:
            points.append(MeasurementPoint(r, v, Orientation.EXTERNAL, flag == "1", label))
        except ValueError as exc:
            raise ParseError(str(exc), row=line) from exc
    if not points:
        raise ParseError("no data rows", row=reader.line_num)
    return Dataset(name or "external", tuple(points))


def load_dataset(spec: str) -> Dataset:
    """A builtin dataset name or a CSV path."""
    if spec in BUILTIN:
        return builtin_dataset(spec)
    return load_dataset_csv(spec)


def range_check(dataset: Dataset, lo: float = 1.0, hi: float = 1.6) -> bool:
    """True iff every reliable point has ``lo <= v_norm <= hi``."""
    return all(lo <= p.v_norm <= hi for p in dataset.reliable_points)


@dataclass(frozen=True)
class Residual:
    d_over_h: float
    measured: float
    model: float

    @property
    def residual(self) -> float:
        return self.model - self.measured


@dataclass(frozen=True)
class Excluded:
    point: MeasurementPoint
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    model_label: str
    dataset_name: str
    residuals: tuple[Residual, ...]
    rms: float
    range_check_pass: bool
    excluded_points: tuple[Excluded, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "model_label": self.model_label,
            "dataset": self.dataset_name,
            "rms": self.rms,
            "range_check_pass": self.range_check_pass,
            "residuals": [
                {"d_over_H": r.d_over_h, "measured": r.measured, "model": r.model, "residual": r.residual}
                for r in self.residuals
            ],
            "excluded_points": [
                {"d_over_H": e.point.d_over_h, "v_norm": e.point.v_norm, "reason": e.reason}
                for e in self.excluded_points
            ],
        }


def _as_curve_point(item) -> CurvePoint:
    if isinstance(item, CurvePoint):
        return item
    r, v = item
    return CurvePoint(float(r), float(v))


def residuals(curve: Iterable, dataset: Dataset, model_label: str = "model") -> ValidationReport:
    """Compare a model curve with the reliable points of ``dataset``.

    The curve must hold a value at each measured d/H; nothing is
    interpolated. Unreliable points, points past the propagation limit and
    points the curve does not cover are listed as excluded.
    """
    by_ratio = {}
    for item in curve:
        cp = _as_curve_point(item)
        by_ratio[cp.d_over_h] = cp

    kept, excluded = [], []
    for p in sorted(dataset.points, key=lambda p: p.d_over_h):
        cp = by_ratio.get(p.d_over_h)
        if not p.reliable:
            excluded.append(Excluded(p, "unreliable"))
        elif p.d_over_h > PRACTICAL_LIMIT:
            excluded.append(Excluded(p, "beyond practical limit"))
        elif cp is None:
            excluded.append(Excluded(p, "not covered by curve"))
        elif not cp.ok or not math.isfinite(cp.normalized_speed):
            excluded.append(Excluded(p, f"model failed: {cp.status.value}"))
        else:
            kept.append(Residual(p.d_over_h, p.v_norm, cp.normalized_speed))
    if not kept:
        raise EmptyOverlap(f"no reliable point of {dataset.name!r} lies in the model's domain")
    rms = math.sqrt(math.fsum(r.residual**2 for r in kept) / len(kept))
    return ValidationReport(
        model_label, dataset.name, tuple(kept), rms, range_check(dataset), tuple(excluded)
    )


def validate_model(
    dataset: Dataset,
    restitution: float = DEFAULT_RESTITUTION,
    t_over_h: float = DEFAULT_T_OVER_H,
) -> ValidationReport:
    """Evaluate the model at each measured spacing and report the residuals."""
    grid = sorted({p.d_over_h for p in dataset.points if p.d_over_h <= PRACTICAL_LIMIT})
    curve = speed_curve(grid, t_over_h, restitution) if grid else []
    label = f"pairwise e={restitution:g} t/H={t_over_h:g}"
    return residuals(curve, dataset, label)
