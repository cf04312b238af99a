"""Matplotlib rendering of a trace, used by the CLI's ``--fig`` option.

matplotlib is imported lazily so the rest of the package stays usable in
environments without it.
"""
from __future__ import annotations

import math

import numpy as np

from .engine import Trace
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
)


def render_figure(trace: Trace, path: str, dims: tuple = (0, 1)) -> None:
    """Draw iterates (and shadow sequence) over simple set outlines, save to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if not trace.steps:
        raise ValueError("render_figure needs a nonempty trace")
    d = trace.steps[0].x.size
    i, j = dims
    if not (0 <= i < d and 0 <= j < d) or i == j:
        raise ValueError(f"dims {dims} out of range for a {d}-dimensional trace")

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    xs = np.array([[x[i], x[j]] for x in trace.xs])
    sh = np.array([[a[i], a[j]] for a in trace.shadows])
    ax.plot(xs[:, 0], xs[:, 1], "-o", color="#1f3b99", ms=3, lw=1.0, label="iterates")
    ax.plot(sh[:, 0], sh[:, 1], "--", color="#b06f2a", lw=1.0, label="shadows")
    ax.plot(xs[0, 0], xs[0, 1], "o", color="#2a8f2a", ms=8, label="start")
    ax.plot(xs[-1, 0], xs[-1, 1], "s", color="#c23b3b", ms=7, label="end")

    span = max(float(np.ptp(xs[:, 0])), float(np.ptp(xs[:, 1])), 1e-3)
    for S, color in ((trace.A, "#777777"), (trace.B, "#aa77aa")):
        _draw_set(ax, S, d, (i, j), color, span)

    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_title(f"{len(trace.steps)} steps, stop: {trace.stop_reason}")
    fig.savefig(path, bbox_inches="tight", dpi=130)
    plt.close(fig)


def _draw_set(ax, S, d: int, dims: tuple, color: str, span: float) -> None:
    import matplotlib.pyplot as plt  # noqa: F401  (patches live under matplotlib)
    from matplotlib.patches import Circle

    if isinstance(S, FiniteSet):
        pts = np.array([[p[dims[0]], p[dims[1]]] for p in S.points])
        ax.scatter(pts[:, 0], pts[:, 1], color=color, marker="x", s=40, zorder=3)
        return
    if isinstance(S, DisjointUnion):
        for c in S.components:
            _draw_set(ax, c, d, dims, color, span)
        return
    if d != 2 or dims != (0, 1):
        return
    reach = 4.0 * span
    if isinstance(S, (Hyperplane, Halfspace)):
        u = S.u / np.linalg.norm(S.u)
        p0 = S.eta / float(S.u @ S.u) * S.u
        t = np.array([-u[1], u[0]])
        seg = np.array([p0 - reach * t, p0 + reach * t])
        ax.plot(seg[:, 0], seg[:, 1], "-", color=color, lw=1.2, alpha=0.8)
    elif isinstance(S, AffineSubspace) and S.L.shape == (1, 2):
        u = S.L[0] / np.linalg.norm(S.L[0])
        p0 = S.v[0] / float(S.L[0] @ S.L[0]) * S.L[0]
        t = np.array([-u[1], u[0]])
        seg = np.array([p0 - reach * t, p0 + reach * t])
        ax.plot(seg[:, 0], seg[:, 1], "-", color=color, lw=1.2, alpha=0.8)
    elif isinstance(S, Ball):
        ax.add_patch(
            Circle(tuple(S.center), S.radius, fill=False, color=color, lw=1.2, alpha=0.8)
        )
    elif isinstance(S, BallIntersection):
        for b in S.balls:
            _draw_set(ax, b, d, dims, color, span)
    elif isinstance(S, Ray2D):
        e = S.direction()
        ax.plot([0.0, reach * e[0]], [0.0, reach * e[1]], "-", color=color, lw=1.2, alpha=0.8)
    elif isinstance(S, Cone2D):
        for e in S.edges():
            ax.plot([0.0, reach * e[0]], [0.0, reach * e[1]], "-", color=color, lw=1.2, alpha=0.8)
    elif isinstance(S, Orthant):
        ax.plot([0.0, reach], [0.0, 0.0], "-", color=color, lw=1.2, alpha=0.8)
        ax.plot([0.0, 0.0], [0.0, reach], "-", color=color, lw=1.2, alpha=0.8)
    elif isinstance(S, Polyhedron):
        for h in S.halfspaces:
            _draw_set(ax, h, d, dims, color, span)
    elif isinstance(S, Epigraph):
        ts = np.linspace(-reach, reach, 128)
        vals = []
        for t in ts:
            try:
                v = float(S.f.value(np.array([t])))
            except (ValueError, ArithmeticError):
                v = math.inf
            vals.append(v)
        pts = np.array([(t, v) for t, v in zip(ts, vals) if math.isfinite(v)])
        if len(pts) >= 2:
            ax.plot(pts[:, 0], pts[:, 1], "-", color=color, lw=1.2, alpha=0.8)
