"""Polytope representations and the membership / boundary oracles.

Four representations: half-space intersections (H), vertex hulls (V),
zonotopes (Z) and intersections of two vertex hulls.  H-polytopes answer
oracle queries with ratio tests; V- and Z-polytopes answer them with one
or two small LPs each, as their facet structure is not available.
"""

from dataclasses import dataclass
from functools import singledispatch
from typing import Optional, Union

import numpy as np

from .errors import (
    DegenerateError,
    InfeasibleError,
    InputError,
    NumericalError,
    PreconditionError,
    UnboundedPolytopeError,
)
from .lp import LinearProgram, feasible_point, solve_lp
from .rng import make_rng

MEMBERSHIP_TOL = 1e-9
_PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class HPolytope:
    """{x : A x <= b}; one facet per row of A."""

    A: np.ndarray
    b: np.ndarray
    known_volume: Optional[float] = None

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if A.shape[0] != b.shape[0]:
            raise InputError("A and b row counts differ")
        if np.any(np.linalg.norm(A, axis=1) == 0):
            raise InputError("zero row in A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def n_facets(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of the rows of V."""

    V: np.ndarray
    known_volume: Optional[float] = None

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.V, dtype=float))
        if V.shape[0] < 1 or not np.all(np.isfinite(V)):
            raise InputError("V must hold at least one finite vertex")
        object.__setattr__(self, "V", V)

    @property
    def dim(self) -> int:
        return self.V.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.V.shape[0]


@dataclass(frozen=True)
class Zonotope:
    """Minkowski sum of segments: {G^T y : y in [-1, 1]^k}, rows of G are generators."""

    G: np.ndarray
    known_volume: Optional[float] = None

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        object.__setattr__(self, "G", G)

    @property
    def dim(self) -> int:
        return self.G.shape[1]

    @property
    def n_generators(self) -> int:
        return self.G.shape[0]

    @property
    def order(self) -> float:
        return self.G.shape[0] / self.G.shape[1]


@dataclass(frozen=True)
class VPolyIntersection:
    """Intersection of the convex hulls of the rows of V1 and of V2."""

    V1: np.ndarray
    V2: np.ndarray
    known_volume: Optional[float] = None

    def __post_init__(self):
        V1 = np.atleast_2d(np.asarray(self.V1, dtype=float))
        V2 = np.atleast_2d(np.asarray(self.V2, dtype=float))
        if V1.shape[1] != V2.shape[1]:
            raise InputError("V1 and V2 must share a column count")
        object.__setattr__(self, "V1", V1)
        object.__setattr__(self, "V2", V2)

    @property
    def dim(self) -> int:
        return self.V1.shape[1]


Polytope = Union[HPolytope, VPolytope, Zonotope, VPolyIntersection]


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not self.radius > 0:
            raise InputError("ball radius must be positive")


@dataclass(frozen=True)
class Ellipsoid:
    """{x : (x - center)^T shape (x - center) <= 1}."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        E = np.atleast_2d(np.asarray(self.shape, dtype=float))
        if np.abs(E - E.T).max() > 1e-10:
            raise InputError("ellipsoid shape matrix must be symmetric")
        if np.linalg.eigvalsh(E).min() <= 0:
            raise InputError("ellipsoid shape matrix must be positive definite")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", E)


def _check_dim(P, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (P.dim,):
        raise InputError(f"point has shape {x.shape}, polytope dimension is {P.dim}")
    return x


# ---------------------------------------------------------------------------
# membership

@singledispatch
def membership(P, x) -> bool:
    """Does x lie in P (within 1e-9 on constraint residuals)?"""
    raise InputError(f"unsupported polytope type {type(P).__name__}")


@membership.register
def _(P: HPolytope, x) -> bool:
    x = _check_dim(P, x)
    return bool(np.all(P.A @ x <= P.b + MEMBERSHIP_TOL))


@membership.register
def _(P: VPolytope, x) -> bool:
    x = _check_dim(P, x)
    n = P.n_vertices
    rows = np.vstack([P.V.T, np.ones(n)])
    rhs = np.concatenate([x, [1.0]])
    return feasible_point(eq_rows=rows, eq_rhs=rhs, lower_bounds=np.zeros(n)).optimal


@membership.register
def _(P: Zonotope, x) -> bool:
    x = _check_dim(P, x)
    k = P.n_generators
    return feasible_point(
        eq_rows=P.G.T, eq_rhs=x, lower_bounds=-np.ones(k), upper_bounds=np.ones(k)
    ).optimal


@membership.register
def _(P: VPolyIntersection, x) -> bool:
    return membership(VPolytope(P.V1), x) and membership(VPolytope(P.V2), x)


# ---------------------------------------------------------------------------
# line intersection

@singledispatch
def line_intersect(P, p, v):
    """Chord of the line {p + t v} inside P: (t_neg, t_pos) with t_neg < 0 < t_pos."""
    raise InputError(f"unsupported polytope type {type(P).__name__}")


def _h_chord(A, b, p, v):
    den = A @ v
    num = b - A @ p
    if np.any(num < -MEMBERSHIP_TOL * (1.0 + np.abs(b))):
        raise PreconditionError("line_intersect requires an interior starting point")
    t_pos = np.inf
    t_neg = -np.inf
    pos = den > _PARALLEL_TOL
    neg = den < -_PARALLEL_TOL
    if np.any(pos):
        t_pos = np.min(num[pos] / den[pos])
    if np.any(neg):
        t_neg = np.max(num[neg] / den[neg])
    if not np.isfinite(t_pos) or not np.isfinite(t_neg):
        raise UnboundedPolytopeError("no blocking facet along the requested direction")
    return float(t_neg), float(t_pos)


@line_intersect.register
def _(P: HPolytope, p, v):
    p = _check_dim(P, p)
    v = _check_dim(P, v)
    if not np.any(v):
        raise InputError("direction must be nonzero")
    return _h_chord(P.A, P.b, p, v)


def _vz_extreme_t(eq_rows, rhs, k, lower, upper, maximize):
    # variables (y_1..y_k, t); rows already carry the -v column for t
    obj = np.zeros(k + 1)
    obj[k] = 1.0 if maximize else -1.0
    lo = np.concatenate([lower, [-np.inf]])
    up = np.concatenate([upper, [np.inf]])
    res = solve_lp(LinearProgram(objective=obj, eq_rows=eq_rows, eq_rhs=rhs,
                                 lower_bounds=lo, upper_bounds=up))
    if res.status == "unbounded":
        raise UnboundedPolytopeError("unbounded chord")
    if res.status == "infeasible":
        raise PreconditionError("line misses the polytope: starting point not interior")
    t = res.objective_value if maximize else -res.objective_value
    return float(t), res


def _vpoly_line_rows(P: VPolytope, p, v):
    n = P.n_vertices
    rows = np.zeros((P.dim + 1, n + 1))
    rows[: P.dim, :n] = P.V.T
    rows[: P.dim, n] = -v
    rows[P.dim, :n] = 1.0
    rhs = np.concatenate([p, [1.0]])
    return rows, rhs, n, np.zeros(n), np.full(n, np.inf)


def _zono_line_rows(P: Zonotope, p, v):
    k = P.n_generators
    rows = np.zeros((P.dim, k + 1))
    rows[:, :k] = P.G.T
    rows[:, k] = -v
    return rows, p, k, -np.ones(k), np.ones(k)


@line_intersect.register
def _(P: VPolytope, p, v):
    p = _check_dim(P, p)
    v = _check_dim(P, v)
    rows, rhs, k, lo, up = _vpoly_line_rows(P, p, v)
    t_pos, _ = _vz_extreme_t(rows, rhs, k, lo, up, maximize=True)
    t_neg, _ = _vz_extreme_t(rows, rhs, k, lo, up, maximize=False)
    return t_neg, t_pos


@line_intersect.register
def _(P: Zonotope, p, v):
    p = _check_dim(P, p)
    v = _check_dim(P, v)
    rows, rhs, k, lo, up = _zono_line_rows(P, p, v)
    t_pos, _ = _vz_extreme_t(rows, rhs, k, lo, up, maximize=True)
    t_neg, _ = _vz_extreme_t(rows, rhs, k, lo, up, maximize=False)
    return t_neg, t_pos


@line_intersect.register
def _(P: VPolyIntersection, p, v):
    n1, p1 = line_intersect(VPolytope(P.V1), p, v)
    n2, p2 = line_intersect(VPolytope(P.V2), p, v)
    return max(n1, n2), min(p1, p2)


def line_intersect_coordinate(P: HPolytope, p, axis: int, cache, validate: bool = False):
    """Axis-aligned chord in O(m) using cached residuals ``cache = A @ p``.

    After choosing a step t along the axis, advance the cache with
    ``advance_coordinate_cache``.  ``validate`` re-derives the cache and
    raises when it is stale (debug aid; costs O(m d)).
    """
    if not isinstance(P, HPolytope):
        raise InputError("coordinate oracle is only available for H-polytopes")
    if validate:
        fresh = P.A @ np.asarray(p, dtype=float)
        if np.abs(fresh - cache).max() > MEMBERSHIP_TOL * (1.0 + np.abs(fresh).max()):
            raise NumericalError("stale residual cache in coordinate oracle")
    den = P.A[:, axis]
    num = P.b - cache
    t_pos = np.inf
    t_neg = -np.inf
    pos = den > _PARALLEL_TOL
    neg = den < -_PARALLEL_TOL
    if np.any(pos):
        t_pos = np.min(num[pos] / den[pos])
    if np.any(neg):
        t_neg = np.max(num[neg] / den[neg])
    if not np.isfinite(t_pos) or not np.isfinite(t_neg):
        raise UnboundedPolytopeError("no blocking facet along the requested axis")
    return float(t_neg), float(t_pos)


def advance_coordinate_cache(P: HPolytope, cache, axis: int, t: float):
    """cache <- cache + t * A e_axis (in place); returns the cache."""
    cache += t * P.A[:, axis]
    return cache


# ---------------------------------------------------------------------------
# boundary hit with inner normal

@singledispatch
def boundary_hit_with_normal(P, p, v):
    """Forward boundary hit from interior p along unit v.

    Returns (point, inner_normal, t) with point = p + t v on the boundary
    and <inner_normal, v> < 0.
    """
    raise InputError(f"unsupported polytope type {type(P).__name__}")


@boundary_hit_with_normal.register
def _(P: HPolytope, p, v):
    p = _check_dim(P, p)
    v = _check_dim(P, v)
    den = P.A @ v
    num = P.b - P.A @ p
    if np.any(num < -MEMBERSHIP_TOL * (1.0 + np.abs(P.b))):
        raise PreconditionError("starting point is not interior")
    pos = den > _PARALLEL_TOL
    if not np.any(pos):
        raise UnboundedPolytopeError("no blocking facet along the requested direction")
    ratios = np.full(P.n_facets, np.inf)
    ratios[pos] = num[pos] / den[pos]
    t = float(ratios.min())
    # corner hits: all facets active within 1e-9 * t resolve to the lowest index
    active = np.flatnonzero(ratios <= t + 1e-9 * max(t, 1.0))
    facet = int(active.min())
    a = P.A[facet]
    normal = -a / np.linalg.norm(a)
    return p + t * v, normal, t


def _vz_boundary(P, p, v, rows_fn):
    rows, rhs, k, lo, up = rows_fn(P, p, v)
    t, res = _vz_extreme_t(rows, rhs, k, lo, up, maximize=True)
    mu = res.eq_dual_values[: P.dim]
    nrm = np.linalg.norm(mu)
    if nrm < 1e-12:
        # degenerate dual; fall back to reversing the walk direction
        normal = -np.asarray(v, dtype=float)
        normal = normal / np.linalg.norm(normal)
    else:
        normal = mu / nrm
        if normal @ v > 0:
            normal = -normal
    return np.asarray(p) + t * np.asarray(v), normal, t


@boundary_hit_with_normal.register
def _(P: VPolytope, p, v):
    p = _check_dim(P, p)
    v = _check_dim(P, v)
    return _vz_boundary(P, p, v, _vpoly_line_rows)


@boundary_hit_with_normal.register
def _(P: Zonotope, p, v):
    p = _check_dim(P, p)
    v = _check_dim(P, v)
    return _vz_boundary(P, p, v, _zono_line_rows)


@boundary_hit_with_normal.register
def _(P: VPolyIntersection, p, v):
    h1 = boundary_hit_with_normal(VPolytope(P.V1), p, v)
    h2 = boundary_hit_with_normal(VPolytope(P.V2), p, v)
    return h1 if h1[2] <= h2[2] else h2


# ---------------------------------------------------------------------------
# inscribed balls

def chebyshev_ball(P: HPolytope) -> Ball:
    """Largest inscribed ball of an H-polytope, by one LP."""
    norms = np.linalg.norm(P.A, axis=1)
    rows = np.hstack([P.A, norms[:, None]])
    obj = np.zeros(P.dim + 1)
    obj[P.dim] = 1.0
    lo = np.full(P.dim + 1, -np.inf)
    lo[P.dim] = 0.0
    res = solve_lp(LinearProgram(objective=obj, ineq_rows=rows, ineq_rhs=P.b,
                                 lower_bounds=lo))
    if res.status == "infeasible":
        raise InfeasibleError("empty polytope")
    if res.status == "unbounded":
        raise UnboundedPolytopeError("Chebyshev LP is unbounded")
    r = res.objective_value
    if r <= 0:
        raise DegenerateError("polytope is flat: inscribed radius is zero")
    return Ball(center=res.solution[: P.dim], radius=float(r))


def _axis_exit_distance(P, center, direction, hi, iters=40):
    # bisection on membership; hi must be an exit bound
    lo = 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if membership(P, center + mid * direction):
            lo = mid
        else:
            hi = mid
    return lo


@singledispatch
def inner_ball(P) -> Ball:
    """An inscribed ball of P.

    Exact (Chebyshev) for H-polytopes; for V and Z an axis-search ball per
    the scheme in the docs; for intersections the inscribed ball of a
    simplex spanned by harvested vertices.
    """
    raise InputError(f"unsupported polytope type {type(P).__name__}")


@inner_ball.register
def _(P: HPolytope) -> Ball:
    return chebyshev_ball(P)


@inner_ball.register
def _(P: Zonotope) -> Ball:
    # origin-symmetric: search along +e_i from the origin
    d = P.dim
    hi = np.linalg.norm(P.G, axis=1).sum() + 1.0
    r = np.inf
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        r = min(r, _axis_exit_distance(P, np.zeros(d), e, hi))
    if r <= 0:
        raise DegenerateError("zonotope is flat along a coordinate axis")
    return Ball(center=np.zeros(d), radius=r / np.sqrt(d))


@inner_ball.register
def _(P: VPolytope) -> Ball:
    # random V-polytopes need not contain the origin: search from the
    # vertex barycenter, both axis directions
    d = P.dim
    center = P.V.mean(axis=0)
    hi = np.linalg.norm(P.V - center, axis=1).max() + 1.0
    r = np.inf
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        r = min(r, _axis_exit_distance(P, center, e, hi))
        r = min(r, _axis_exit_distance(P, center, -e, hi))
    if r <= 0:
        raise DegenerateError("vertex hull is flat along a coordinate axis")
    return Ball(center=center, radius=r / np.sqrt(d))


@inner_ball.register
def _(P: VPolyIntersection) -> Ball:
    return intersection_inner_ball(P)


def _simplex_to_hrep(vertices):
    """H-representation of a full-dimensional simplex given d+1 vertices."""
    d = vertices.shape[1]
    rows = []
    rhs = []
    for i in range(d + 1):
        others = np.delete(vertices, i, axis=0)
        base = others[0]
        span = others[1:] - base  # (d-1) x d
        # normal orthogonal to the facet's affine span
        _, _, vt = np.linalg.svd(span, full_matrices=True)
        n = vt[-1]
        beta = n @ base
        if n @ vertices[i] > beta:
            n, beta = -n, -beta
        rows.append(n)
        rhs.append(beta)
    return HPolytope(np.array(rows), np.array(rhs))


def intersection_inner_ball(Q: VPolyIntersection, seed: int = 0) -> Ball:
    """Inscribed ball of an intersection of two vertex hulls.

    Harvests d+1 vertices of the intersection by optimising the combined
    convex-combination LP in a random direction, then in directions pulled
    from the orthogonal complement of the affine span so far; the returned
    ball is the largest inscribed ball of the spanned simplex (which lies
    inside Q by convexity).
    """
    d = Q.dim
    n1, n2 = Q.V1.shape[0], Q.V2.shape[0]
    rows = np.zeros((d + 2, n1 + n2))
    rows[:d, :n1] = Q.V1.T
    rows[:d, n1:] = -Q.V2.T
    rows[d, :n1] = 1.0
    rows[d + 1, n1:] = 1.0
    rhs = np.concatenate([np.zeros(d), [1.0, 1.0]])
    lo = np.zeros(n1 + n2)

    if not feasible_point(eq_rows=rows, eq_rhs=rhs, lower_bounds=lo).optimal:
        raise InfeasibleError("the two hulls do not intersect")

    rng = make_rng(seed, stream=0)

    def harvest(w):
        obj = np.concatenate([Q.V1 @ w, np.zeros(n2)])
        res = solve_lp(LinearProgram(objective=obj, eq_rows=rows, eq_rhs=rhs,
                                     lower_bounds=lo))
        if not res.optimal:
            raise NumericalError("vertex harvest LP failed")
        return Q.V1.T @ res.solution[:n1]

    for _ in range(10):
        verts = [harvest(_unit(rng.standard_normal(d)))]
        attempts = 0
        while len(verts) < d + 1 and attempts <= d + 1:
            attempts += 1
            basis = _affine_complement(np.array(verts))
            if basis.shape[1] == 0:
                w = _unit(rng.standard_normal(d))
            else:
                w = _unit(basis @ rng.standard_normal(basis.shape[1]))
            for cand_w in (w, -w):
                v = harvest(cand_w)
                if _affinely_independent(verts, v):
                    verts.append(v)
                    attempts = 0
                    break
        if len(verts) == d + 1:
            return chebyshev_ball(_simplex_to_hrep(np.array(verts)))
    raise DegenerateError("could not harvest affinely independent vertices")


def _unit(v):
    return v / np.linalg.norm(v)


def _affine_complement(verts):
    """Orthonormal basis of the complement of the affine span of the rows."""
    d = verts.shape[1]
    if verts.shape[0] <= 1:
        return np.eye(d)
    diffs = verts[1:] - verts[0]
    _, s, vt = np.linalg.svd(diffs, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if len(s) else 1.0)))
    return vt[rank:].T


def _affinely_independent(verts, candidate, tol=1e-7):
    arr = np.array(verts)
    diffs = candidate - arr[0] if len(arr) > 1 else None
    if len(arr) == 1:
        return np.linalg.norm(candidate - arr[0]) > tol
    span = arr[1:] - arr[0]
    resid = candidate - arr[0]
    sol, *_ = np.linalg.lstsq(span.T, resid, rcond=None)
    return np.linalg.norm(span.T @ sol - resid) > tol * (1.0 + np.linalg.norm(resid))


def is_interior(P, x, tol: float = 1e-10) -> bool:
    """Strict interiority: a point is interior iff every axis chord through
    it has positive extent on both sides (sufficient for convex bodies)."""
    x = _check_dim(P, x)
    if isinstance(P, HPolytope):
        slack = P.b - P.A @ x
        return bool(np.all(slack > tol * (1.0 + np.abs(P.b))))
    if not membership(P, x):
        return False
    d = P.dim
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        try:
            t_neg, t_pos = line_intersect(P, x, e)
        except (PreconditionError, UnboundedPolytopeError):
            return False
        if t_pos < tol or t_neg > -tol:
            return False
    return True
