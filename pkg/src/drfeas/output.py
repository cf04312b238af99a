"""Trace and report emitters: CSV, JSON summary, and a standalone SVG.

All numeric text is written with 17 significant digits so a parsed value
round-trips bit-identically to the double it came from.  The SVG emitter is
deliberately dependency-free: tests inspect its elements structurally.
"""
from __future__ import annotations

import io
import json
import math

import numpy as np

from .engine import ConvergenceReport, Trace
from .sets import (
    AffineSubspace,
    Ball,
    BallIntersection,
    Cone2D,
    DisjointUnion,
    Epigraph,
    FiniteSet,
    Halfspace,
    Hyperplane,
    Orthant,
    Polyhedron,
    Ray2D,
    distance,
)

_FMT = "%.17g"


def _num(v: float) -> str:
    return _FMT % v


def emit_trace_csv(trace: Trace) -> str:
    """One row per step: n, x, shadow, residual, and d_B(shadow)."""
    if not trace.steps:
        raise ValueError("emit_trace_csv needs a nonempty trace")
    d = trace.steps[0].x.size
    buf = io.StringIO()
    head = (
        ["n"]
        + [f"x_{i + 1}" for i in range(d)]
        + [f"shadow_{i + 1}" for i in range(d)]
        + ["residual", "shadow_dist_B"]
    )
    buf.write(",".join(head) + "\n")
    for s in trace.steps:
        row = (
            [str(s.n)]
            + [_num(v) for v in s.x]
            + [_num(v) for v in s.a]
            + [_num(s.residual), _num(distance(trace.B, s.a))]
        )
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _jsonable(v):
    if v is None:
        return None
    if isinstance(v, np.ndarray):
        return [float(t) for t in v]
    if isinstance(v, (tuple, list)):
        return [_jsonable(t) for t in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def emit_summary(report: ConvergenceReport) -> str:
    """Stable-keyed JSON rendering of a ConvergenceReport."""
    best = None
    if report.best_approx is not None:
        best = {
            "a": _jsonable(report.best_approx.a),
            "b": _jsonable(report.best_approx.b),
            "gap": report.best_approx.gap,
        }
    doc = {
        "status": report.status.value,
        "n_stop": report.n_stop,
        "limit": _jsonable(report.limit),
        "shadow_limit": _jsonable(report.shadow_limit),
        "rate": report.rate,
        "cycle_period": report.cycle_period,
        "cycle_points": _jsonable(report.cycle_points),
        "best_approx": best,
        "in_intersection": {
            "limit": report.in_intersection.get("limit"),
            "shadow": report.in_intersection.get("shadow"),
        },
    }
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# SVG


def emit_svg(trace: Trace, dims: tuple = (0, 1)) -> str:
    """Standalone SVG: iterate polyline, start/end markers, set outlines.

    ``dims`` picks the two coordinates to draw; higher-dimensional traces are
    projected onto them.  Outlines are drawn for the natively planar set
    variants (lines, halfplane boundaries, circles, rays, cone edges, finite
    points); everything else is left to the polyline.  The viewBox is fitted
    to the drawing with a 10% margin.  The vertical axis is flipped on write
    so the picture matches mathematical orientation.
    """
    if not trace.steps:
        raise ValueError("emit_svg needs a nonempty trace")
    d = trace.steps[0].x.size
    i, j = dims
    if not (0 <= i < d and 0 <= j < d) or i == j:
        raise ValueError(f"dims {dims} out of range for a {d}-dimensional trace")

    pts = [(float(x[i]), float(x[j])) for x in trace.xs]
    anchors = list(pts)
    for S in (trace.A, trace.B):
        anchors.extend(_anchor_points(S, d, (i, j)))
    xs = [p[0] for p in anchors]
    ys = [p[1] for p in anchors]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    span = max(x_hi - x_lo, y_hi - y_lo, 1e-6)
    pad = 0.1 * span
    x_lo, x_hi = x_lo - pad, x_hi + pad
    y_lo, y_hi = y_lo - pad, y_hi + pad
    box = (x_lo, x_hi, y_lo, y_hi)
    diag = math.hypot(x_hi - x_lo, y_hi - y_lo)

    def put(p):  # flip y for screen orientation
        return (p[0], -p[1])

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_c(x_lo)} {_c(-y_hi)} '
        f'{_c(x_hi - x_lo)} {_c(y_hi - y_lo)}">'
    ]
    for S, cls in ((trace.A, "set-a"), (trace.B, "set-b")):
        parts.extend(_outline(S, d, (i, j), box, diag, cls, put))
    poly = " ".join(f"{_c(px)},{_c(py)}" for px, py in (put(p) for p in pts))
    sw = _c(0.004 * diag)
    parts.append(
        f'<polyline class="iterates" points="{poly}" fill="none" '
        f'stroke="#1f3b99" stroke-width="{sw}"/>'
    )
    r = _c(0.012 * diag)
    sx, sy = put(pts[0])
    ex, ey = put(pts[-1])
    parts.append(f'<circle class="start" cx="{_c(sx)}" cy="{_c(sy)}" r="{r}" fill="#2a8f2a"/>')
    parts.append(f'<circle class="end" cx="{_c(ex)}" cy="{_c(ey)}" r="{r}" fill="#c23b3b"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def _c(v: float) -> str:
    return f"{v:.6g}"


def _is_planar(S, d: int, dims: tuple) -> bool:
    return d == 2 and dims == (0, 1)


def _anchor_points(S, d: int, dims: tuple) -> list:
    """Feature points that should stay inside the viewBox."""
    i, j = dims
    if isinstance(S, FiniteSet):
        return [(float(p[i]), float(p[j])) for p in S.points]
    if not _is_planar(S, d, dims):
        return []
    if isinstance(S, Ball):
        cx, cy = float(S.center[0]), float(S.center[1])
        r = S.radius
        return [(cx - r, cy - r), (cx + r, cy + r)]
    if isinstance(S, (Ray2D, Cone2D, Orthant)):
        return [(0.0, 0.0)]
    if isinstance(S, BallIntersection):
        return [q for b in S.balls for q in _anchor_points(b, d, dims)]
    if isinstance(S, DisjointUnion):
        return [q for c in S.components for q in _anchor_points(c, d, dims)]
    return []


def _line_through(p0, direction, diag, cls, put) -> str:
    dn = math.hypot(*direction)
    ux, uy = direction[0] / dn, direction[1] / dn
    a = (p0[0] - diag * ux, p0[1] - diag * uy)
    b = (p0[0] + diag * ux, p0[1] + diag * uy)
    (ax, ay), (bx, by) = put(a), put(b)
    return (
        f'<line class="{cls}" x1="{_c(ax)}" y1="{_c(ay)}" x2="{_c(bx)}" y2="{_c(by)}" '
        f'stroke="#888" stroke-width="{_c(0.003 * diag)}"/>'
    )


def _ray_from(origin, direction, diag, cls, put) -> str:
    a = put(origin)
    b = put((origin[0] + diag * direction[0], origin[1] + diag * direction[1]))
    return (
        f'<line class="{cls}" x1="{_c(a[0])}" y1="{_c(a[1])}" x2="{_c(b[0])}" y2="{_c(b[1])}" '
        f'stroke="#888" stroke-width="{_c(0.003 * diag)}"/>'
    )


def _outline(S, d: int, dims: tuple, box, diag, cls, put) -> list:
    out: list[str] = []
    if isinstance(S, FiniteSet):
        r = _c(0.008 * diag)
        for p in S.points:
            px, py = put((float(p[dims[0]]), float(p[dims[1]])))
            out.append(
                f'<circle class="{cls} set-point" cx="{_c(px)}" cy="{_c(py)}" r="{r}" fill="#555"/>'
            )
        return out
    if isinstance(S, DisjointUnion):
        for c in S.components:
            out.extend(_outline(c, d, dims, box, diag, cls, put))
        return out
    if not _is_planar(S, d, dims):
        return out
    cx_mid = 0.5 * (box[0] + box[1])
    cy_mid = 0.5 * (box[2] + box[3])
    if isinstance(S, (Hyperplane, Halfspace)):
        u = S.u
        nu2 = float(u @ u)
        foot = (
            cx_mid - (cx_mid * u[0] + cy_mid * u[1] - S.eta) * u[0] / nu2,
            cy_mid - (cx_mid * u[0] + cy_mid * u[1] - S.eta) * u[1] / nu2,
        )
        out.append(_line_through(foot, (-u[1], u[0]), diag, cls, put))
    elif isinstance(S, AffineSubspace) and S.L.shape == (1, 2):
        u = S.L[0]
        nu2 = float(u @ u)
        foot = (
            cx_mid - (cx_mid * u[0] + cy_mid * u[1] - S.v[0]) * u[0] / nu2,
            cy_mid - (cx_mid * u[0] + cy_mid * u[1] - S.v[0]) * u[1] / nu2,
        )
        out.append(_line_through(foot, (-u[1], u[0]), diag, cls, put))
    elif isinstance(S, Ball):
        px, py = put((float(S.center[0]), float(S.center[1])))
        out.append(
            f'<circle class="{cls}" cx="{_c(px)}" cy="{_c(py)}" r="{_c(S.radius)}" '
            f'fill="none" stroke="#888" stroke-width="{_c(0.003 * diag)}"/>'
        )
    elif isinstance(S, BallIntersection):
        for b in S.balls:
            out.extend(_outline(b, d, dims, box, diag, cls, put))
    elif isinstance(S, Ray2D):
        e = S.direction()
        out.append(_ray_from((0.0, 0.0), (float(e[0]), float(e[1])), diag, cls, put))
    elif isinstance(S, Cone2D):
        e1, e2 = S.edges()
        out.append(_ray_from((0.0, 0.0), (float(e1[0]), float(e1[1])), diag, cls, put))
        out.append(_ray_from((0.0, 0.0), (float(e2[0]), float(e2[1])), diag, cls, put))
    elif isinstance(S, Orthant):
        out.append(_ray_from((0.0, 0.0), (1.0, 0.0), diag, cls, put))
        out.append(_ray_from((0.0, 0.0), (0.0, 1.0), diag, cls, put))
    elif isinstance(S, Polyhedron):
        for h in S.halfspaces:
            out.extend(_outline(h, d, dims, box, diag, cls, put))
    elif isinstance(S, Epigraph):
        # boundary curve of a 1-D-domain epigraph, sampled over the box
        n_samp = 64
        xs = np.linspace(box[0], box[1], n_samp)
        try:
            vals = [float(S.f.value(np.array([t]))) for t in xs]
        except (ValueError, ArithmeticError):
            return out
        pairs = [(t, v) for t, v in zip(xs, vals) if math.isfinite(v)]
        if len(pairs) >= 2:
            pts = " ".join(f"{_c(px)},{_c(py)}" for px, py in (put(p) for p in pairs))
            out.append(
                f'<polyline class="{cls}" points="{pts}" fill="none" stroke="#888" '
                f'stroke-width="{_c(0.003 * diag)}"/>'
            )
    return out
