"""Deterministic SVG rendering of an SOS staff.

Six columns in part order, frame 0 at the bottom. Glyph geometry encodes the
direction (pointing shape), fill encodes the level (Low dark, Middle hatched,
Top light); the root column uses plain arrows. Output is byte-stable for
identical input and options.
"""

import numpy as np

from .parts import PART_INDEX, PARTS
from .quantize import DIRECTIONS, PLACE_HIGH_ID, PLACE_LOW_ID
from .sos import SOSScript

_LEVEL_FILL = {0: "#303030", 1: "url(#hatch)", 2: "#e8e8e8"}
_LEVEL_SCALE = {0: 0.30, 1: 0.38, 2: 0.46}

# page-space unit vectors per compass direction: forward points up the page
_DIR_VEC = {
    d: (np.sin(np.deg2rad(45 * i)), -np.cos(np.deg2rad(45 * i)))
    for i, d in enumerate(["Forward", "ForwardRight", "Right", "BackRight", "Back", "BackLeft", "Left", "ForwardLeft"])
}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _rot(v, deg):
    a = np.deg2rad(deg)
    return (v[0] * np.cos(a) - v[1] * np.sin(a), v[0] * np.sin(a) + v[1] * np.cos(a))


def _kite_path(direction: str, r: float) -> str:
    d = _DIR_VEC[direction]
    tip = (r * d[0], r * d[1])
    w1 = _rot(d, 150)
    w2 = _rot(d, -150)
    pts = [tip, (0.7 * r * w1[0], 0.7 * r * w1[1]), (-0.25 * r * d[0], -0.25 * r * d[1]), (0.7 * r * w2[0], 0.7 * r * w2[1])]
    return "M" + "L".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts) + "Z"


def _diamond_path(r: float) -> str:
    pts = [(0, -r), (r, 0), (0, r), (-r, 0)]
    return "M" + "L".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts) + "Z"


def _arrow_path(direction: str, r: float) -> str:
    d = _DIR_VEC[direction]
    tip = (r * d[0], r * d[1])
    tail = (-r * d[0], -r * d[1])
    h1 = _rot(d, 150)
    h2 = _rot(d, -150)
    parts = [
        f"M{_fmt(tail[0])},{_fmt(tail[1])}L{_fmt(tip[0])},{_fmt(tip[1])}",
        f"M{_fmt(tip[0])},{_fmt(tip[1])}L{_fmt(tip[0] + 0.5 * r * h1[0])},{_fmt(tip[1] + 0.5 * r * h1[1])}",
        f"M{_fmt(tip[0])},{_fmt(tip[1])}L{_fmt(tip[0] + 0.5 * r * h2[0])},{_fmt(tip[1] + 0.5 * r * h2[1])}",
    ]
    return "".join(parts)


def glyph_markup(part: str, symbol_id: int, column_width: float) -> str:
    """Glyph geometry at the origin; placed via a translate transform."""
    if part == "RT":
        path = _arrow_path(DIRECTIONS[symbol_id], 0.42 * column_width)
        return f'<path d="{path}" fill="none" stroke="#000" stroke-width="1.6"/>'
    if symbol_id == PLACE_HIGH_ID:
        return f'<path d="{_diamond_path(0.46 * column_width)}" fill="{_LEVEL_FILL[2]}" stroke="#000"/>'
    if symbol_id == PLACE_LOW_ID:
        return f'<path d="{_diamond_path(0.30 * column_width)}" fill="{_LEVEL_FILL[0]}" stroke="#000"/>'
    level, direction = divmod(symbol_id, 8)
    path = _kite_path(DIRECTIONS[direction], _LEVEL_SCALE[level] * column_width)
    return f'<path d="{path}" fill="{_LEVEL_FILL[level]}" stroke="#000"/>'


def render_staff_svg(script: SOSScript, pixels_per_frame: float = 6.0, column_width: float = 40.0) -> str:
    T = script.num_frames
    ml, mt, mb = 34.0, 26.0, 10.0
    width = ml + len(PARTS) * column_width + 10.0
    height = mt + T * pixels_per_frame + mb

    def cx(part):
        return ml + (PART_INDEX[part] + 0.5) * column_width

    def cy(frame):
        return mt + (T - 1 - frame + 0.5) * pixels_per_frame

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        "<defs>"
        '<pattern id="hatch" width="4" height="4" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">'
        '<rect width="4" height="4" fill="#fff"/><line x1="0" y1="0" x2="0" y2="4" stroke="#555" stroke-width="1.2"/>'
        "</pattern></defs>",
        f'<rect x="{_fmt(ml)}" y="{_fmt(mt)}" width="{_fmt(len(PARTS) * column_width)}" '
        f'height="{_fmt(T * pixels_per_frame)}" fill="#fff" stroke="#000"/>',
    ]
    for part in PARTS:
        x = cx(part)
        out.append(
            f'<line x1="{_fmt(ml + PART_INDEX[part] * column_width)}" y1="{_fmt(mt)}" '
            f'x2="{_fmt(ml + PART_INDEX[part] * column_width)}" y2="{_fmt(mt + T * pixels_per_frame)}" stroke="#999"/>'
        )
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(mt - 8)}" font-size="11" text-anchor="middle">{part}</text>')
    # frame tick labels every 10 frames
    for f in range(0, T, 10):
        out.append(
            f'<text x="{_fmt(ml - 6)}" y="{_fmt(cy(f) + 3)}" font-size="9" text-anchor="end">{f}</text>'
        )
    for e in script.entries:
        out.append(
            f'<g transform="translate({_fmt(cx(e.part))},{_fmt(cy(e.frame))})">'
            + glyph_markup(e.part, e.symbol_id, column_width)
            + "</g>"
        )
    out.append("</svg>")
    return "\n".join(out)
