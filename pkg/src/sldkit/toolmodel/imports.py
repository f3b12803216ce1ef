"""Importers for measured modal data and raw FRF tables.

Modal file (JSON):  {"modes": [{"direction": "X", "f_hz": .., "zeta": ..,
"k_n_per_m": ..}, ...]} -- the tabulated outcome of a tap test at the tooltip.

FRF CSV: header ``freq_hz,re_gxx,im_gxx,re_gyy,im_gyy``, units Hz and m/N,
strictly increasing frequency.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import InvalidInputError, ParseError
from .fem import Mode, ModeSet
from .frf import FRF

FRF_CSV_HEADER = ("freq_hz", "re_gxx", "im_gxx", "re_gyy", "im_gyy")


def import_modal_table(document: str) -> ModeSet:
    """Parse measured modal parameters; every row becomes an EMA-sourced Mode."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"modal file is not valid JSON: {exc}") from exc
    rows = doc.get("modes") if isinstance(doc, dict) else None
    if rows is None:
        raise ParseError("modal file must contain a 'modes' array", field="modes")
    if not rows:
        raise InvalidInputError("no modes")

    modes: list[Mode] = []
    for i, row in enumerate(rows):
        for key in ("direction", "f_hz", "zeta", "k_n_per_m"):
            if key not in row:
                raise ParseError("missing modal field", row=i, field=key)
        direction = str(row["direction"])
        if direction not in ("X", "Y"):
            raise ParseError("direction must be X or Y", row=i, field="direction")
        f_hz = float(row["f_hz"])
        zeta = float(row["zeta"])
        k = float(row["k_n_per_m"])
        if f_hz <= 0.0:
            raise ParseError("natural frequency must be positive", row=i, field="f_hz")
        if not 0.0 < zeta < 1.0:
            raise ParseError("damping_ratio out of range", row=i, field="zeta")
        if k <= 0.0:
            raise ParseError("modal stiffness must be positive", row=i, field="k_n_per_m")
        modes.append(Mode(f_hz, zeta, k, direction, source="ema"))
    return tuple(modes)


def import_frf_table(document: str) -> FRF:
    """Parse a measured FRF CSV into a measured-provenance FRF."""
    lines = [line.strip() for line in document.splitlines() if line.strip()]
    if not lines:
        raise InvalidInputError("no samples")
    header = tuple(col.strip() for col in lines[0].split(","))
    if header != FRF_CSV_HEADER:
        raise ParseError(
            f"FRF CSV header must be '{','.join(FRF_CSV_HEADER)}', got '{lines[0]}'"
        )
    if len(lines) == 1:
        raise InvalidInputError("no samples")

    freq, gxx, gyy = [], [], []
    for i, line in enumerate(lines[1:]):
        cells = line.split(",")
        if len(cells) != 5:
            raise ParseError(f"expected 5 columns, got {len(cells)}", row=i)
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"non-numeric value: {exc}", row=i) from exc
        freq.append(values[0])
        gxx.append(complex(values[1], values[2]))
        gyy.append(complex(values[3], values[4]))

    f = np.array(freq)
    if np.any(np.diff(f) <= 0.0):
        raise ParseError("frequencies not strictly increasing", field="freq_hz")
    return FRF(
        frequencies=f,
        g_xx=np.array(gxx, dtype=complex),
        g_yy=np.array(gyy, dtype=complex),
        provenance="measured",
    )
