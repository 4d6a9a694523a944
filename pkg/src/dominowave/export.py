"""CSV, JSON and SVG output for curves, datasets and validation reports."""

from __future__ import annotations

import csv
import io
import json
import math
import xml.etree.ElementTree as ET
from typing import Iterable, Sequence

from .validation import Dataset, Orientation, ValidationReport
from .wave_model import CurvePoint, ImpactSeries


def fmt(x: float) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(x, ".6g")


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().encode()


def curve_csv(curve: Iterable[CurvePoint]) -> bytes:
    return _csv(
        ("d_over_H", "normalized_speed", "status"),
        ((fmt(c.d_over_h), fmt(c.normalized_speed), c.status.value) for c in curve),
    )


def dataset_csv(dataset: Dataset) -> bytes:
    return _csv(
        ("d_over_H", "v_norm", "reliable", "source"),
        ((fmt(p.d_over_h), fmt(p.v_norm), int(p.reliable), p.source) for p in dataset.points),
    )


def report_csv(report: ValidationReport) -> bytes:
    rows = [
        (fmt(r.d_over_h), fmt(r.measured), fmt(r.model), fmt(r.residual), "included")
        for r in report.residuals
    ]
    rows += [
        (fmt(e.point.d_over_h), fmt(e.point.v_norm), "", "", e.reason)
        for e in report.excluded_points
    ]
    rows.sort(key=lambda row: float(row[0]))
    return _csv(("d_over_H", "measured", "model", "residual", "status"), rows)


def report_json(report: ValidationReport) -> str:
    return json.dumps(report.as_dict(), indent=2)


def impacts_csv(series: ImpactSeries) -> bytes:
    return _csv(
        ("index", "time_s", "omega_pre", "omega_post"),
        (
            (i, repr(t), repr(a), repr(b))
            for i, (t, a, b) in enumerate(
                zip(series.impact_times, series.pre_impact_omegas, series.post_impact_omegas), 1
            )
        ),
    )


def read_impact_times(text: str) -> list[float]:
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames or "time_s" not in reader.fieldnames:
        raise ValueError("impact CSV needs a time_s column")
    return [float(row["time_s"]) for row in reader]


_MARKERS = {
    Orientation.VERTICAL: "plus",
    Orientation.HORIZONTAL: "cross",
    Orientation.EXTERNAL: "square",
}


def svg_plot(
    curve: Sequence[CurvePoint] = (),
    datasets: Sequence[Dataset] = (),
    width: int = 640,
    height: int = 420,
) -> str:
    """Speed-versus-spacing plot: model curve as a line, measurements as markers.

    Marker shape encodes orientation; unreliable points are drawn hollow and grey.
    """
    pad = 50
    xs = [c.d_over_h for c in curve if c.ok] + [p.d_over_h for d in datasets for p in d.points]
    ys = [c.normalized_speed for c in curve if c.ok] + [p.v_norm for d in datasets for p in d.points]
    x_max = max([1.0] + xs)
    y_max = max([2.0] + ys) * 1.05

    def px(x):
        return pad + x / x_max * (width - 2 * pad)

    def py(y):
        return height - pad - y / y_max * (height - 2 * pad)

    svg = ET.Element(
        "svg", xmlns="http://www.w3.org/2000/svg", width=str(width), height=str(height),
        viewBox=f"0 0 {width} {height}",
    )
    axes = ET.SubElement(svg, "g", stroke="black", fill="none")
    ET.SubElement(axes, "line", x1=fmt(px(0)), y1=fmt(py(0)), x2=fmt(px(x_max)), y2=fmt(py(0)))
    ET.SubElement(axes, "line", x1=fmt(px(0)), y1=fmt(py(0)), x2=fmt(px(0)), y2=fmt(py(y_max)))
    labels = ET.SubElement(svg, "g", {"font-family": "sans-serif", "font-size": "12"})
    ET.SubElement(labels, "text", {"text-anchor": "middle"}, x=fmt(width / 2), y=fmt(height - 12)).text = "d/H"
    ET.SubElement(labels, "text", x="12", y=fmt(height / 2)).text = "v/sqrt(gH)"
    for k in range(int(y_max) + 1):
        ET.SubElement(labels, "text", x=fmt(pad - 20), y=fmt(py(k) + 4)).text = str(k)

    line = [c for c in curve if c.ok]
    if line:
        ET.SubElement(
            svg, "polyline", fill="none", stroke="steelblue", points=" ".join(
                f"{fmt(px(c.d_over_h))},{fmt(py(c.normalized_speed))}" for c in line
            ), **{"stroke-width": "2", "class": "model"},
        )
    for d in datasets:
        group = ET.SubElement(svg, "g", {"class": f"dataset {d.name}"})
        for p in d.points:
            x, y, s = px(p.d_over_h), py(p.v_norm), 4.0
            colour = "black" if p.reliable else "grey"
            shape = _MARKERS[p.orientation]
            attrs = {"stroke": colour, "fill": "none", "class": "reliable" if p.reliable else "unreliable"}
            if shape == "plus":
                path = f"M{fmt(x - s)},{fmt(y)}H{fmt(x + s)}M{fmt(x)},{fmt(y - s)}V{fmt(y + s)}"
            elif shape == "cross":
                path = (f"M{fmt(x - s)},{fmt(y - s)}L{fmt(x + s)},{fmt(y + s)}"
                        f"M{fmt(x - s)},{fmt(y + s)}L{fmt(x + s)},{fmt(y - s)}")
            else:
                path = f"M{fmt(x - s)},{fmt(y - s)}h{fmt(2 * s)}v{fmt(2 * s)}h{fmt(-2 * s)}z"
            if p.reliable and shape == "square":
                attrs["fill"] = colour
            ET.SubElement(group, "path", d=path, **attrs)
    return ET.tostring(svg, encoding="unicode")
