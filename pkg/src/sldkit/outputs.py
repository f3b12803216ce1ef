"""Result document assembly and file emission (JSON, CSV, SVG).

Everything here is deterministic: no timestamps, stable key order, floats
serialized by shortest round-trip repr, so identical runs produce
byte-identical artifacts.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import ParseError
from .jobs import RunResult
from .units import m_to_mm

REGION_COLORS = {"stable": "#2e7d32", "conditional": "#ef6c00", "unstable": "#c62828"}
VERDICT_COLOR = {
    "unconditionally_stable": REGION_COLORS["stable"],
    "conditional": REGION_COLORS["conditional"],
    "unconditionally_unstable": REGION_COLORS["unstable"],
}


def _result_schema() -> dict:
    with resources.files("sldkit.schemas").joinpath("result.schema.json").open("r") as fh:
        return json.load(fh)


_RESULT_SCHEMA = _result_schema()


def build_result_document(run: RunResult) -> dict:
    """Flatten a pipeline run into the serializable result document."""
    sld, band = run.sld, run.band
    metadata = dict(run.metadata)
    metadata["version"] = __version__
    doc = {
        "metadata": metadata,
        "lobes": [
            {
                "k": lobe.lobe_index,
                "points": [
                    {
                        "omega_c_rad_s": float(w),
                        "n_rpm": float(n),
                        "a_lim_mm": m_to_mm(float(d)),
                    }
                    for w, n, d in zip(lobe.omega_c, lobe.spindle_speed, lobe.depth_limit)
                ],
            }
            for lobe in sld.lobes
        ],
        "envelope": {
            "n_rpm": [float(v) for v in sld.envelope_speed],
            "a_mm": [m_to_mm(float(v)) for v in sld.envelope_depth],
        },
        "band": {
            "n_rpm": [float(v) for v in band.speed_grid],
            "a_low_mm": [m_to_mm(float(v)) for v in band.a_low],
            "a_high_mm": [m_to_mm(float(v)) for v in band.a_high],
        },
        "zones": [
            {"n_lo": float(z.n_lo), "n_hi": float(z.n_hi), "label": z.zone}
            for z in sld.zone_labels
        ],
        "verdicts": [
            {
                "n_rpm": float(point.spindle_speed),
                "ap_mm": m_to_mm(float(point.axial_depth)),
                "class": verdict.class_,
                "p_stable": float(verdict.p_stable),
                "margin_mm": m_to_mm(float(verdict.margin)),
            }
            for point, verdict in run.verdicts
        ],
    }
    return doc


def validate_result_document(doc: dict) -> None:
    validator = jsonschema.Draft7Validator(_RESULT_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        raise ParseError(f"result schema violation at '{path}': {err.message}")


def result_json_bytes(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode()


def load_result_document(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"result file is not valid JSON: {exc}") from exc
    validate_result_document(doc)
    return doc


def band_csv_text(run: RunResult) -> str:
    """Envelope/band table, one row per band grid speed, mm units."""
    band = run.band
    lines = ["speed_rpm,a_nominal_mm,a_low_mm,a_high_mm"]
    for n, nom, lo, hi in zip(band.speed_grid, band.nominal, band.a_low, band.a_high):
        lines.append(
            f"{float(n)!r},{m_to_mm(float(nom))!r},{m_to_mm(float(lo))!r},{m_to_mm(float(hi))!r}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

_W, _H = 960, 600
_ML, _MR, _MT, _MB = 70, 20, 40, 55  # margins


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def sld_svg_text(doc: dict) -> str:
    """Standalone SVG of the three-region map, lobes, zones and probed points."""
    band = doc["band"]
    speeds = np.asarray(band["n_rpm"])
    a_low = np.asarray(band["a_low_mm"])
    a_high = np.asarray(band["a_high_mm"])
    x_lo, x_hi = float(speeds[0]), float(speeds[-1])
    y_hi = 1.15 * float(a_high.max())
    probe_depths = [v["ap_mm"] for v in doc["verdicts"]]
    if probe_depths:
        y_hi = max(y_hi, 1.1 * max(probe_depths))

    def sx(n):
        return _ML + (n - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(a):
        return _H - _MB - min(a, y_hi) / y_hi * (_H - _MT - _MB)

    def polyline_points(ns, depths):
        return " ".join(f"{_fmt(sx(n))},{_fmt(sy(a))}" for n, a in zip(ns, depths))

    def region_path(upper, lower):
        forward = " L ".join(f"{_fmt(sx(n))} {_fmt(sy(a))}" for n, a in zip(speeds, upper))
        backward = " L ".join(
            f"{_fmt(sx(n))} {_fmt(sy(a))}" for n, a in zip(speeds[::-1], lower[::-1])
        )
        return f"M {forward} L {backward} Z"

    floor = np.zeros_like(speeds)
    ceiling = np.full_like(speeds, y_hi)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}" '
        f'font-family="sans-serif" font-size="13">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        "<g id=\"regions\">",
        f'<g id="region-stable" fill="{REGION_COLORS["stable"]}" fill-opacity="0.45">'
        f'<path d="{region_path(a_low, floor)}"/></g>',
        f'<g id="region-conditional" fill="{REGION_COLORS["conditional"]}" fill-opacity="0.45">'
        f'<path d="{region_path(a_high, a_low)}"/></g>',
        f'<g id="region-unstable" fill="{REGION_COLORS["unstable"]}" fill-opacity="0.45">'
        f'<path d="{region_path(ceiling, a_high)}"/></g>',
        "</g>",
        "<g id=\"lobes\" fill=\"none\" stroke=\"#1a237e\" stroke-width=\"1.2\">",
    ]
    for lobe in doc["lobes"]:
        pts = [
            (p["n_rpm"], p["a_lim_mm"])
            for p in lobe["points"]
            if x_lo <= p["n_rpm"] <= x_hi and p["a_lim_mm"] <= y_hi
        ]
        if len(pts) < 2:
            continue
        parts.append(
            f'<polyline data-lobe="{lobe["k"]}" '
            f'points="{polyline_points(*zip(*pts))}"/>'
        )
    parts.append("</g>")

    parts.append('<g id="zones" fill="#333">')
    for zone in doc["zones"]:
        mid = 0.5 * (max(zone["n_lo"], x_lo) + min(zone["n_hi"], x_hi))
        if not x_lo <= mid <= x_hi:
            continue
        parts.append(
            f'<text x="{_fmt(sx(mid))}" y="{_MT - 12}" text-anchor="middle">{zone["label"]}</text>'
        )
        if x_lo < zone["n_lo"] < x_hi:
            parts.append(
                f'<line x1="{_fmt(sx(zone["n_lo"]))}" y1="{_MT - 8}" '
                f'x2="{_fmt(sx(zone["n_lo"]))}" y2="{_H - _MB}" '
                f'stroke="#999" stroke-dasharray="4 4"/>'
            )
    parts.append("</g>")

    parts.append('<g id="probes">')
    for verdict in doc["verdicts"]:
        color = VERDICT_COLOR[verdict["class"]]
        parts.append(
            f'<circle cx="{_fmt(sx(verdict["n_rpm"]))}" cy="{_fmt(sy(verdict["ap_mm"]))}" '
            f'r="5" fill="{color}" stroke="black">'
            f'<title>{verdict["class"]}, p_stable={verdict["p_stable"]:.2f}</title></circle>'
        )
    parts.append("</g>")

    axis_y = _H - _MB
    parts.extend(
        [
            f'<line x1="{_ML}" y1="{axis_y}" x2="{_W - _MR}" y2="{axis_y}" stroke="black"/>',
            f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{axis_y}" stroke="black"/>',
            f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 12}" text-anchor="middle">'
            "Spindle speed [rpm]</text>",
            f'<text x="18" y="{(_MT + axis_y) // 2}" text-anchor="middle" '
            f'transform="rotate(-90 18 {(_MT + axis_y) // 2})">Axial depth of cut [mm]</text>',
        ]
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        n = x_lo + frac * (x_hi - x_lo)
        a = frac * y_hi
        parts.append(
            f'<text x="{_fmt(sx(n))}" y="{axis_y + 18}" text-anchor="middle">{n:.0f}</text>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{_fmt(sy(a))}" text-anchor="end">{a:.2f}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_outputs(run: RunResult, doc: dict, selections: dict,
                 out_dir: str | Path | None = None) -> dict[str, Path]:
    """Write the selected artifacts; returns the paths actually written."""
    base = Path(out_dir) if out_dir is not None else Path.cwd()
    written: dict[str, Path] = {}
    try:
        if "json" in selections:
            path = base / selections["json"]
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(result_json_bytes(doc))
            written["json"] = path
        if "csv" in selections:
            path = base / selections["csv"]
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(band_csv_text(run))
            written["csv"] = path
        if "svg" in selections:
            path = base / selections["svg"]
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(sld_svg_text(doc))
            written["svg"] = path
    except OSError as exc:
        raise OSError(f"cannot write output: {exc}") from exc
    return written
