"""SVG rendering in the disk model of the projective plane.

Every point is drawn through its upper-hemisphere representative, projected
orthographically to (x, y).  The boundary circle is the image of the
equator, which it covers twice, so a curve leaving through the boundary
re-enters at the antipodal boundary point.  Rendering reads only the report
dict, so a report re-read from disk yields the same bytes.
"""
from __future__ import annotations

import math

SIZE = 480
MARGIN = 24
R = (SIZE - 2 * MARGIN) / 2

KIND_COLORS = {
    "Crossing": "#d62728",
    "DoubleSupporting": "#1f77b4",
    "Inflection": "#2ca02c",
    "Cusp": "#9467bd",
    "AntipodalPair": "#ff7f0e",
    "NormalTangentPair": "#17becf",
}


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _xy(p):
    x, y, z = p
    n = math.sqrt(x * x + y * y + z * z) or 1.0
    if z < 0 or (z == 0 and (y < 0 or (y == 0 and x < 0))):
        x, y = -x, -y
    return MARGIN + R + R * x / n, MARGIN + R - R * y / n


def _paths(points):
    """Split the sampled curve where it crosses the equator."""
    if not points:
        return []
    paths, cur = [], []
    m = len(points)
    for k in range(m + 1):
        p = points[k % m]
        if k == m:
            # closing step: choose the lift nearest the previous sample
            q = points[k - 1]
            if sum(a * b for a, b in zip(p, q)) < 0:
                p = [-c for c in p]
        if cur:
            q = cur[-1]
            if sum(a * b for a, b in zip(p, q)) < 0:
                p = [-c for c in p]
            if (q[2] >= 0) != (p[2] >= 0):
                # interpolate the boundary point and re-enter from its antipode
                s = q[2] / (q[2] - p[2]) if q[2] != p[2] else 0.5
                b = [q[i] + s * (p[i] - q[i]) for i in range(3)]
                b[2] = 0.0
                cur.append(b)
                paths.append(cur)
                cur = [[-c for c in b]]
        cur.append(list(p))
    paths.append(cur)
    return paths


def _path_d(path):
    parts = []
    for i, p in enumerate(path):
        x, y = _xy_raw(p)
        parts.append(("M" if i == 0 else "L") + f"{_f(x)},{_f(y)}")
    return " ".join(parts)


def _xy_raw(p):
    """Projection without choosing a representative (the path already did)."""
    x, y, z = p
    n = math.sqrt(x * x + y * y + z * z) or 1.0
    if z < 0:
        x, y = -x, -y
    return MARGIN + R + R * x / n, MARGIN + R - R * y / n


def _marker(x, y, kind, label):
    color = KIND_COLORS.get(kind, "#333333")
    if label == 2:
        return (f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" fill="white" stroke="{color}" '
                f'stroke-width="1.5"/>')
    if label == 1:
        return f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" fill="{color}"/>'
    return (f'<rect x="{_f(x - 3)}" y="{_f(y - 3)}" width="6" height="6" fill="{color}" '
            f'fill-opacity="0.6"/>')


def render_svg(report: dict) -> str:
    """SVG text for a report dict (needs ``render.samples`` and ``events``)."""
    pts = report.get("render", {}).get("samples", [])
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           f'<circle cx="{_f(MARGIN + R)}" cy="{_f(MARGIN + R)}" r="{_f(R)}" fill="none" '
           f'stroke="#999999" stroke-dasharray="4 3"/>']
    for path in _paths(pts):
        if len(path) > 1:
            out.append(f'<path d="{_path_d(path)}" fill="none" stroke="black" stroke-width="1.2"/>')
    for ev in report.get("events", []):
        kind, label = ev.get("kind"), ev.get("type")
        locs = ev.get("location") or []
        xy = [_xy(p) for p in locs]
        if len(xy) == 2 and kind != "Crossing":
            (x1, y1), (x2, y2) = xy
            out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                       f'stroke="{KIND_COLORS.get(kind, "#333333")}" stroke-width="0.6" '
                       f'stroke-dasharray="2 2"/>')
        for x, y in xy:
            out.append(_marker(x, y, kind, label))
    y = 14
    for kind, color in KIND_COLORS.items():
        out.append(f'<text x="4" y="{y}" font-size="9" fill="{color}">{kind}</text>')
        y += 10
    out.append('<text x="4" y="{0}" font-size="9">filled: type 1, hollow: type 2</text>'.format(SIZE - 6))
    out.append("</svg>")
    return "\n".join(out) + "\n"
