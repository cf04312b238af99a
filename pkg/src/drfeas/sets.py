"""Set catalog with exact projectors and reflectors.

Every descriptor is a closed subset of some R^n for which the nearest-point
map is available in closed form (possibly after a scalar root solve, for
epigraphs).  Projections are returned as a :class:`ProjectionResult`: the
full candidate set at minimal distance plus one deterministically selected
representative.  For convex sets the candidate set is always a singleton;
for finite sets and disjoint unions ties are resolved to the lowest stored
index, which is what makes the nonconvex example orbits reproducible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .functions import ConvexFunction, LinearFn
from .linalg import (
    NumericalError,
    Tolerance,
    as_matrix,
    as_vector,
    bracketed_root,
    pseudoinverse,
)

# Two candidate distances tie when they differ by <= TIE_TOL * (1 + min).
TIE_TOL = 1e-9
# Default membership threshold; membership() also accepts an explicit Tolerance.
MEMBERSHIP_TOL = Tolerance(abs_tol=1e-9)
# Feasibility slack accepted when filtering polyhedron face candidates.
_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class ProjectionResult:
    """Nearest-point set (``all``), chosen representative, and the distance."""

    selected: np.ndarray
    all: tuple
    distance: float


def _single(p: np.ndarray, x: np.ndarray) -> ProjectionResult:
    return ProjectionResult(p, (p,), float(np.linalg.norm(x - p)))


class SetDescriptor:
    """Base class; concrete sets implement ``_project`` on validated input."""

    @property
    def dim(self) -> int | None:
        """Ambient dimension, or None when the set adapts to its input."""
        raise NotImplementedError

    def _project(self, x: np.ndarray) -> ProjectionResult:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# convex catalog


@dataclass(frozen=True, eq=False)
class Hyperplane(SetDescriptor):
    """{x : <x, u> = eta} with u != 0."""

    u: np.ndarray
    eta: float

    def __post_init__(self) -> None:
        u = as_vector(self.u)
        if np.linalg.norm(u) == 0.0:
            raise ValueError("hyperplane normal must be nonzero")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def dim(self) -> int:
        return self.u.size

    def _project(self, x: np.ndarray) -> ProjectionResult:
        u = self.u
        p = x - ((x @ u - self.eta) / (u @ u)) * u
        return _single(p, x)


@dataclass(frozen=True, eq=False)
class Halfspace(SetDescriptor):
    """{x : <x, u> <= eta} with u != 0."""

    u: np.ndarray
    eta: float

    def __post_init__(self) -> None:
        u = as_vector(self.u)
        if np.linalg.norm(u) == 0.0:
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def dim(self) -> int:
        return self.u.size

    def _project(self, x: np.ndarray) -> ProjectionResult:
        u = self.u
        slack = x @ u - self.eta
        if slack <= 0.0:
            return _single(x.copy(), x)
        return _single(x - (slack / (u @ u)) * u, x)


@dataclass(frozen=True, eq=False)
class AffineSubspace(SetDescriptor):
    """{x : L x = v}; the pseudoinverse of L is computed once and cached."""

    L: np.ndarray
    v: np.ndarray
    pinv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        L = as_matrix(self.L)
        v = as_vector(self.v, L.shape[0])
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "pinv", pseudoinverse(L))

    @property
    def dim(self) -> int:
        return self.L.shape[1]

    def _project(self, x: np.ndarray) -> ProjectionResult:
        p = x - self.pinv @ (self.L @ x - self.v)
        return _single(p, x)


@dataclass(frozen=True, eq=False)
class Ball(SetDescriptor):
    """Closed ball of positive radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_vector(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0):
            raise ValueError(f"ball radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.size

    def _project(self, x: np.ndarray) -> ProjectionResult:
        d = x - self.center
        nd = float(np.linalg.norm(d))
        if nd <= self.radius:
            return _single(x.copy(), x)
        return _single(self.center + (self.radius / nd) * d, x)


@dataclass(frozen=True, eq=False)
class Orthant(SetDescriptor):
    """Nonnegative orthant of a fixed dimension; coordinatewise clamp."""

    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError(f"orthant dimension must be a positive integer, got {self.n}")

    @property
    def dim(self) -> int:
        return self.n

    def _project(self, x: np.ndarray) -> ProjectionResult:
        return _single(np.maximum(x, 0.0), x)


@dataclass(frozen=True, eq=False)
class Ray2D(SetDescriptor):
    """The rotated ray R_theta(R+ x {0}) = {t * e_theta : t >= 0} in the plane."""

    theta: float

    def __post_init__(self) -> None:
        t = float(self.theta)
        if not (-math.pi <= t <= math.pi):
            raise ValueError(f"ray angle must lie in [-pi, pi], got {t}")
        object.__setattr__(self, "theta", t)

    @property
    def dim(self) -> int:
        return 2

    def direction(self) -> np.ndarray:
        return np.array([math.cos(self.theta), math.sin(self.theta)])

    def _project(self, x: np.ndarray) -> ProjectionResult:
        e = self.direction()
        t = max(float(x @ e), 0.0)
        return _single(t * e, x)


@dataclass(frozen=True, eq=False)
class Cone2D(SetDescriptor):
    """Convex planar cone spanned by e_theta1 and e_theta2, width in (0, pi).

    Projection is the sector clamp: points already between the inward edge
    normals stay put; everything else projects onto the nearer edge ray
    (both edge projections collapse to the apex on the polar sector).
    """

    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        t1, t2 = float(self.theta1), float(self.theta2)
        if not (math.isfinite(t1) and math.isfinite(t2)):
            raise ValueError("cone angles must be finite")
        if not (0.0 < t2 - t1 < math.pi):
            raise ValueError(
                f"cone angular width must lie in (0, pi), got theta2-theta1={t2 - t1}"
            )
        object.__setattr__(self, "theta1", t1)
        object.__setattr__(self, "theta2", t2)

    @property
    def dim(self) -> int:
        return 2

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.array([math.cos(self.theta1), math.sin(self.theta1)]),
            np.array([math.cos(self.theta2), math.sin(self.theta2)]),
        )

    def _project(self, x: np.ndarray) -> ProjectionResult:
        n1 = np.array([-math.sin(self.theta1), math.cos(self.theta1)])
        n2 = np.array([math.sin(self.theta2), -math.cos(self.theta2)])
        if x @ n1 >= 0.0 and x @ n2 >= 0.0:
            return _single(x.copy(), x)
        e1, e2 = self.edges()
        p1 = max(float(x @ e1), 0.0) * e1
        p2 = max(float(x @ e2), 0.0) * e2
        if np.linalg.norm(x - p1) <= np.linalg.norm(x - p2):
            return _single(p1, x)
        return _single(p2, x)


@dataclass(frozen=True, eq=False)
class Polyhedron(SetDescriptor):
    """Intersection of finitely many halfspaces in dimension <= 3.

    Projection enumerates faces: for every subset of at most ``dim`` boundary
    hyperplanes, project onto its affine hull, keep the feasible candidates,
    and return the nearest.  Exact at desk scale without a QP solver; the
    optimality argument is the KKT identity x - p* in span of active normals.
    """

    halfspaces: tuple

    def __post_init__(self) -> None:
        hs = tuple(self.halfspaces)
        if not hs:
            raise ValueError("polyhedron needs at least one halfspace")
        for h in hs:
            if not isinstance(h, Halfspace):
                raise ValueError("polyhedron components must be Halfspace descriptors")
        d = hs[0].dim
        if any(h.dim != d for h in hs):
            raise ValueError("polyhedron halfspaces must share one dimension")
        if d > 3:
            raise ValueError(f"polyhedron projection only supports dim <= 3, got {d}")
        object.__setattr__(self, "halfspaces", hs)

    @property
    def dim(self) -> int:
        return self.halfspaces[0].dim

    def _feasible(self, p: np.ndarray, tol: float) -> bool:
        return all(float(p @ h.u) - h.eta <= tol for h in self.halfspaces)

    def _project(self, x: np.ndarray) -> ProjectionResult:
        if self._feasible(x, 0.0):
            return _single(x.copy(), x)
        scale = _FEAS_TOL * (1.0 + float(np.linalg.norm(x)))
        best: np.ndarray | None = None
        best_d = math.inf
        m = len(self.halfspaces)
        for r in range(1, self.dim + 1):
            for subset in itertools.combinations(range(m), r):
                U = np.array([self.halfspaces[k].u for k in subset])
                e = np.array([self.halfspaces[k].eta for k in subset])
                p = x - pseudoinverse(U) @ (U @ x - e)
                if not self._feasible(p, scale):
                    continue
                d = float(np.linalg.norm(x - p))
                if d < best_d:
                    best, best_d = p, d
        if best is None:
            raise NumericalError("no feasible face candidate; polyhedron appears empty")
        return ProjectionResult(best, (best,), best_d)


@dataclass(frozen=True, eq=False)
class Epigraph(SetDescriptor):
    """epi f = {(x, rho) : f(x) <= rho} in X x R; the last coordinate is rho."""

    f: ConvexFunction

    def __post_init__(self) -> None:
        if not isinstance(self.f, ConvexFunction):
            raise ValueError("epigraph needs a ConvexFunction")

    @property
    def dim(self) -> int | None:
        if isinstance(self.f, LinearFn):
            return self.f.dim + 1
        return None

    def _project(self, z: np.ndarray) -> ProjectionResult:
        if z.size < 2:
            raise ValueError("epigraph points live in X x R, need dim >= 2")
        return project_epigraph(self.f, z)


@dataclass(frozen=True, eq=False)
class BallIntersection(SetDescriptor):
    """Intersection of exactly two overlapping closed balls in the plane.

    Projection by active-set enumeration: a single-ball projection wins when
    it is feasible for the other ball; otherwise both constraints are active
    and the projection is the nearer of the two boundary-circle intersection
    points.
    """

    balls: tuple

    def __post_init__(self) -> None:
        bs = tuple(self.balls)
        if len(bs) != 2 or not all(isinstance(b, Ball) for b in bs):
            raise ValueError("BallIntersection takes exactly two Ball descriptors")
        b1, b2 = bs
        if b1.dim != 2 or b2.dim != 2:
            raise ValueError("BallIntersection is implemented for the plane only")
        gap = float(np.linalg.norm(b1.center - b2.center))
        if gap == 0.0:
            raise ValueError("ball centers must be distinct")
        if gap > b1.radius + b2.radius:
            raise ValueError("balls do not intersect; the set would be empty")
        object.__setattr__(self, "balls", bs)

    @property
    def dim(self) -> int:
        return 2

    def _contains(self, p: np.ndarray, tol: float) -> bool:
        b1, b2 = self.balls
        return (
            float(np.linalg.norm(p - b1.center)) <= b1.radius + tol
            and float(np.linalg.norm(p - b2.center)) <= b2.radius + tol
        )

    def _project(self, x: np.ndarray) -> ProjectionResult:
        b1, b2 = self.balls
        if self._contains(x, 0.0):
            return _single(x.copy(), x)
        p1 = b1._project(x).selected
        if float(np.linalg.norm(p1 - b2.center)) <= b2.radius + 1e-12:
            return _single(p1, x)
        p2 = b2._project(x).selected
        if float(np.linalg.norm(p2 - b1.center)) <= b1.radius + 1e-12:
            return _single(p2, x)
        # both constraints active: nearest point of the boundary-circle pair
        axis = b2.center - b1.center
        d = float(np.linalg.norm(axis))
        axis = axis / d
        along = (b1.radius**2 - b2.radius**2 + d * d) / (2.0 * d)
        h = math.sqrt(max(0.0, b1.radius**2 - along**2))
        perp = np.array([-axis[1], axis[0]])
        base = b1.center + along * axis
        q1 = base + h * perp
        q2 = base - h * perp
        if np.linalg.norm(x - q1) <= np.linalg.norm(x - q2):
            return _single(q1, x)
        return _single(q2, x)


# ---------------------------------------------------------------------------
# nonconvex catalog


@dataclass(frozen=True, eq=False)
class FiniteSet(SetDescriptor):
    """A nonempty ordered tuple of points; ties go to the lowest index."""

    points: tuple

    def __post_init__(self) -> None:
        pts = tuple(as_vector(p) for p in self.points)
        if not pts:
            raise ValueError("finite set needs at least one point")
        d = pts[0].size
        if any(p.size != d for p in pts):
            raise ValueError("finite-set points must share one dimension")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points[0].size

    def _project(self, x: np.ndarray) -> ProjectionResult:
        dists = [float(np.linalg.norm(x - p)) for p in self.points]
        dmin = min(dists)
        cut = dmin + TIE_TOL * (1.0 + dmin)
        tied = tuple(p.copy() for p, dd in zip(self.points, dists) if dd <= cut)
        return ProjectionResult(tied[0], tied, dmin)


@dataclass(frozen=True, eq=False)
class DisjointUnion(SetDescriptor):
    """Union of pairwise-disjoint convex components, kept in the given order.

    Disjointness is the caller's promise (it is what makes the union's
    projector well defined away from the median boundaries); a debug sampler
    is available as :func:`check_pairwise_disjoint` rather than enforced here.
    """

    components: tuple

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not comps:
            raise ValueError("disjoint union needs at least one component")
        for c in comps:
            if not isinstance(c, SetDescriptor):
                raise ValueError("union components must be SetDescriptors")
        dims = {c.dim for c in comps if c.dim is not None}
        if len(dims) > 1:
            raise ValueError(f"union components disagree on dimension: {sorted(dims)}")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int | None:
        for c in self.components:
            if c.dim is not None:
                return c.dim
        return None

    def _project(self, x: np.ndarray) -> ProjectionResult:
        results = [c._project(x) for c in self.components]
        dmin = min(r.distance for r in results)
        cut = dmin + TIE_TOL * (1.0 + dmin)
        tied = [r for r in results if r.distance <= cut]
        candidates = tuple(p for r in tied for p in r.all)
        return ProjectionResult(tied[0].selected, candidates, dmin)


def check_pairwise_disjoint(union: DisjointUnion, rng, samples: int = 64) -> bool:
    """Sample points of each component and check they avoid the others.

    Desk-scale debug helper only: draws ``samples`` random points, projects
    them into each component, and verifies the result is well separated from
    every other component.
    """
    comps = union.components
    dim = union.dim or 2
    for idx, c in enumerate(comps):
        for _ in range(samples):
            x = np.asarray(rng.uniform(-10.0, 10.0, size=dim))
            p = c._project(x).selected
            for jdx, other in enumerate(comps):
                if jdx != idx and distance(other, p) <= 1e-9:
                    return False
    return True


# ---------------------------------------------------------------------------
# operations


def project(S: SetDescriptor, x) -> ProjectionResult:
    """Nearest-point set of ``x`` in ``S`` with the selected representative."""
    v = as_vector(x, S.dim)
    return S._project(v)


def project_epigraph(f: ConvexFunction, z) -> ProjectionResult:
    """Project z = (x, rho) onto epi f.

    Inside the epigraph the point is returned unchanged.  Otherwise the
    projection is (p, f(p)) with p = prox_{t f}(x), where t > 0 solves
    f(prox_{t f}(x)) - rho - t = 0.  That scalar map is continuous and
    strictly decreasing, starting positive at t -> 0+ because f(x) > rho, so
    a sign change is found by doubling t (at most 60 times) and the root by
    bisection.
    """
    z = as_vector(z)
    if z.size < 2:
        raise ValueError("epigraph points live in X x R, need dim >= 2")
    x, rho = z[:-1], float(z[-1])
    if f.value(x) <= rho:
        p = z.copy()
        return ProjectionResult(p, (p,), 0.0)

    def g(t: float) -> float:
        p = f.prox(t, x)
        return f.value(p) - rho - t

    lo = 1e-18
    if g(lo) <= 0.0:
        t_star = lo
    else:
        hi = 1.0
        for _ in range(60):
            if g(hi) <= 0.0:
                break
            hi *= 2.0
        else:
            raise NumericalError(
                "epigraph projection: no bracket for the prox parameter within "
                f"60 doublings (rho={rho:.6g})"
            )
        t_star = bracketed_root(g, lo, hi, tol=1e-13)
    p = f.prox(t_star, x)
    sel = np.concatenate([p, [f.value(p)]])
    return ProjectionResult(sel, (sel,), float(np.linalg.norm(z - sel)))


def reflect(S: SetDescriptor, x) -> ProjectionResult:
    """Reflector R_S x = 2 P_S x - x applied to every projection candidate.

    The ``distance`` field keeps d_S(x), the distance of the *input* to S
    (a reflection preserves it up to the factor two along the normal; the
    untransformed value is the useful one downstream).
    """
    v = as_vector(x, S.dim)
    res = S._project(v)
    mapped = tuple(2.0 * p - v for p in res.all)
    return ProjectionResult(2.0 * res.selected - v, mapped, res.distance)


def membership(S: SetDescriptor, x, tol: Tolerance = MEMBERSHIP_TOL) -> bool:
    """True iff the distance to S is zero within ``tol``."""
    return tol.close(project(S, x).distance, 0.0)


def distance(S: SetDescriptor, x) -> float:
    return project(S, x).distance
