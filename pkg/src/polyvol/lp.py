"""Dense linear programming: two-phase primal simplex with variable bounds.

Maximisation form: max c.x subject to equality rows, inequality rows
(row.x <= rhs) and optional per-variable bounds.  Bounds are handled
natively (no bound rows), which keeps basis matrices at the size of the
constraint count -- the boundary oracles of V- and Z-polytopes depend on
that.  Bland's rule everywhere, so results are deterministic and the
method cannot cycle.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, NumericalError

FEASIBILITY_TOL = 1e-9
PIVOT_TOL = 1e-10

_AT_LOWER = 0
_AT_UPPER = 1
_BASIC = 2
_FIXED = 3


@dataclass(frozen=True)
class LinearProgram:
    """max objective.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  lower <= x <= upper.

    Missing bounds mean the variable is free.  Infinities are permitted in
    the bound vectors.
    """

    objective: np.ndarray
    eq_rows: np.ndarray = field(default=None)
    eq_rhs: np.ndarray = field(default=None)
    ineq_rows: np.ndarray = field(default=None)
    ineq_rhs: np.ndarray = field(default=None)
    lower_bounds: Optional[np.ndarray] = None
    upper_bounds: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "objective", np.asarray(self.objective, dtype=float))
        d = len(self.objective)
        for rows_name, rhs_name in (("eq_rows", "eq_rhs"), ("ineq_rows", "ineq_rhs")):
            rows = getattr(self, rows_name)
            rhs = getattr(self, rhs_name)
            if rows is None:
                rows, rhs = np.zeros((0, d)), np.zeros(0)
            rows = np.asarray(rows, dtype=float)
            rows = rows.reshape(0, d) if rows.size == 0 else np.atleast_2d(rows)
            rhs = np.atleast_1d(np.asarray(rhs if rhs is not None else [], dtype=float))
            if rows.shape[1] != d:
                raise InputError(f"{rows_name} have {rows.shape[1]} columns, objective has {d}")
            if rows.shape[0] != rhs.shape[0]:
                raise InputError(f"{rows_name}/{rhs_name} length mismatch")
            object.__setattr__(self, rows_name, rows)
            object.__setattr__(self, rhs_name, rhs)
        lo = self.lower_bounds
        hi = self.upper_bounds
        lo = np.full(d, -np.inf) if lo is None else np.asarray(lo, dtype=float)
        hi = np.full(d, np.inf) if hi is None else np.asarray(hi, dtype=float)
        if lo.shape != (d,) or hi.shape != (d,):
            raise InputError("bound vectors must match the objective dimension")
        both = np.isfinite(lo) & np.isfinite(hi)
        if np.any(lo[both] > hi[both]):
            raise InputError("lower bound exceeds upper bound")
        object.__setattr__(self, "lower_bounds", lo)
        object.__setattr__(self, "upper_bounds", hi)

    @property
    def n_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    solution: Optional[np.ndarray] = None
    objective_value: float = np.nan
    dual_values: Optional[np.ndarray] = None      # one multiplier per inequality row, >= 0
    eq_dual_values: Optional[np.ndarray] = None   # one multiplier per equality row
    phase_one_objective: float = 0.0              # infeasibility certificate when infeasible

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _BoundedSimplex:
    """min c.z,  A z = b,  lo <= z <= up, revised simplex with Bland's rule."""

    def __init__(self, A, b, lo, up):
        self.A = A
        self.b = b
        self.lo = lo
        self.up = up
        self.m, self.n = A.shape
        self.z = np.where(np.isfinite(lo), lo, np.where(np.isfinite(up), up, 0.0))
        self.status = np.where(
            np.isfinite(lo), _AT_LOWER, np.where(np.isfinite(up), _AT_UPPER, _AT_LOWER)
        ).astype(np.int8)
        self.status[np.isfinite(lo) & np.isfinite(up) & (up - lo <= 0)] = _FIXED
        self.free = np.isinf(lo) & np.isinf(up)
        self.basis = np.zeros(self.m, dtype=np.int64)
        self.iterations = 0

    def run(self, c, max_iter):
        A, lo, up = self.A, self.lo, self.up
        while True:
            if self.iterations >= max_iter:
                raise NumericalError("simplex iteration cap exceeded")
            self.iterations += 1
            B = A[:, self.basis]
            try:
                y = np.linalg.solve(B.T, c[self.basis])
            except np.linalg.LinAlgError as exc:
                raise NumericalError("singular basis in simplex") from exc
            rc = c - A.T @ y
            st = self.status
            enter_up = ((st == _AT_LOWER) | ((st != _BASIC) & (st != _FIXED) & self.free)) & (rc < -PIVOT_TOL)
            enter_dn = ((st == _AT_UPPER) | ((st != _BASIC) & (st != _FIXED) & self.free)) & (rc > PIVOT_TOL)
            eligible = enter_up | enter_dn
            if not np.any(eligible):
                return "optimal"
            j = int(np.argmax(eligible))  # lowest eligible index (Bland)
            direction = 1.0 if enter_up[j] else -1.0

            w = np.linalg.solve(B, A[:, j])
            step = w * direction  # basic values move by -step * t
            xb = self.z[self.basis]
            lo_b = lo[self.basis]
            up_b = up[self.basis]
            limits = np.full(self.m, np.inf)
            dec = step > PIVOT_TOL
            inc = step < -PIVOT_TOL
            with np.errstate(invalid="ignore"):
                limits[dec] = (xb[dec] - lo_b[dec]) / step[dec]
                limits[inc] = (xb[inc] - up_b[inc]) / step[inc]
            np.maximum(limits, 0.0, out=limits)
            own = up[j] - lo[j] if (np.isfinite(up[j]) and np.isfinite(lo[j])) else np.inf
            t_basic = limits.min() if self.m else np.inf
            t_min = min(t_basic, own)
            if not np.isfinite(t_min):
                return "unbounded"
            tol = PIVOT_TOL * (1.0 + t_min)
            blockers = np.flatnonzero(limits <= t_min + tol)
            flip = own <= t_min + tol and (
                blockers.size == 0 or j < self.basis[blockers].min()
            )
            if flip:
                self.z[self.basis] = xb - step * own
                self.z[j] = up[j] if direction > 0 else lo[j]
                self.status[j] = _AT_UPPER if direction > 0 else _AT_LOWER
                continue
            leave_pos = blockers[np.argmin(self.basis[blockers])]
            t = limits[leave_pos]
            self.z[self.basis] = xb - step * t
            self.z[j] += direction * t
            left = self.basis[leave_pos]
            hit_upper = step[leave_pos] < 0
            self.z[left] = up[left] if hit_upper else lo[left]
            if up[left] - lo[left] <= 0:
                self.status[left] = _FIXED
            else:
                self.status[left] = _AT_UPPER if hit_upper else _AT_LOWER
            self.status[j] = _BASIC
            self.basis[leave_pos] = j

    def row_multipliers(self, c):
        B = self.A[:, self.basis]
        return np.linalg.solve(B.T, c[self.basis])


def _solve_standard(A, b, lo, up, c_max, max_iter, slack_of_row):
    """Two phases on the bounded standard form.

    slack_of_row[i] is the column index of row i's slack, or -1 for an
    equality row.  Rows whose slack can absorb the initial residual skip
    the artificial variable entirely.
    """
    m, n = A.shape
    sx = _BoundedSimplex(A, b, lo, up)
    residual = b - A @ sx.z

    art_rows = []
    for i in range(m):
        s = slack_of_row[i]
        if s >= 0 and residual[i] >= 0:
            sx.z[s] = residual[i]
            sx.status[s] = _BASIC
            sx.basis[i] = s
        else:
            art_rows.append(i)

    n_art = len(art_rows)
    if n_art:
        A1 = np.hstack([A, np.zeros((m, n_art))])
        lo1 = np.concatenate([lo, np.zeros(n_art)])
        up1 = np.concatenate([up, np.full(n_art, np.inf)])
        sx1 = _BoundedSimplex(A1, b, lo1, up1)
        sx1.z[:n] = sx.z
        sx1.status[:n] = sx.status
        sx1.basis[:] = sx.basis
        for k, i in enumerate(art_rows):
            col = n + k
            A1[i, col] = 1.0 if residual[i] >= 0 else -1.0
            sx1.z[col] = abs(residual[i])
            sx1.status[col] = _BASIC
            sx1.basis[i] = col
        c1 = np.zeros(n + n_art)
        c1[n:] = 1.0
        if sx1.run(c1, max_iter) != "optimal":
            raise NumericalError("phase-one simplex did not terminate")
        phase1 = float(c1 @ sx1.z)
        if phase1 > FEASIBILITY_TOL:
            return "infeasible", None, None, phase1
        # artificials are frozen at zero for phase two
        sx1.lo[n:] = 0.0
        sx1.up[n:] = 0.0
        nonbasic_art = (np.arange(n + n_art) >= n) & (sx1.status != _BASIC)
        sx1.status[nonbasic_art] = _FIXED
        _pivot_out_artificials(sx1, n)
        sx = sx1
        n_total = n + n_art
    else:
        phase1 = 0.0
        n_total = n

    c2 = np.zeros(n_total)
    c2[:n] = -c_max  # maximise -> minimise
    status = sx.run(c2, max_iter)
    if status == "unbounded":
        return "unbounded", None, None, phase1
    y = sx.row_multipliers(c2)
    return "optimal", sx.z[:n], y, phase1


def _pivot_out_artificials(sx, n):
    for pos in range(sx.m):
        var = sx.basis[pos]
        if var < n:
            continue
        B = sx.A[:, sx.basis]
        e = np.zeros(sx.m)
        e[pos] = 1.0
        tableau_row = np.linalg.solve(B.T, e) @ sx.A[:, :n]
        ok = (np.abs(tableau_row) > PIVOT_TOL) & (sx.status[:n] != _BASIC) & (sx.status[:n] != _FIXED)
        candidates = np.flatnonzero(ok)
        if candidates.size:
            j = int(candidates[0])
            sx.status[var] = _FIXED
            sx.z[var] = 0.0
            sx.basis[pos] = j
            sx.status[j] = _BASIC
            # the incoming variable keeps its current value; the row stays
            # satisfied because the artificial sat at zero


def solve_lp(lp: LinearProgram) -> LPResult:
    """Solve a bounded dense LP; deterministic for identical inputs."""
    d = lp.n_vars
    n_eq = lp.eq_rows.shape[0]
    n_ub = lp.ineq_rows.shape[0]
    m = n_eq + n_ub
    if m == 0:
        raise InputError("LP has no constraints")
    A = np.zeros((m, d + n_ub))
    A[:n_eq, :d] = lp.eq_rows
    A[n_eq:, :d] = lp.ineq_rows
    A[n_eq:, d:] = np.eye(n_ub)
    b = np.concatenate([lp.eq_rhs, lp.ineq_rhs])
    lo = np.concatenate([lp.lower_bounds, np.zeros(n_ub)])
    up = np.concatenate([lp.upper_bounds, np.full(n_ub, np.inf)])
    c = np.concatenate([lp.objective, np.zeros(n_ub)])
    slack_of_row = np.concatenate([np.full(n_eq, -1, dtype=np.int64), d + np.arange(n_ub)])

    max_iter = 50 * (d + n_ub + m)
    status, z, y, phase1 = _solve_standard(A, b, lo, up, c, max_iter, slack_of_row)
    if status != "optimal":
        return LPResult(status=status, phase_one_objective=phase1)
    x = z[:d]
    _check_feasible(lp, x)
    return LPResult(
        status="optimal",
        solution=x,
        objective_value=float(lp.objective @ x),
        dual_values=-y[n_eq:] if n_ub else np.zeros(0),
        eq_dual_values=-y[:n_eq] if n_eq else np.zeros(0),
        phase_one_objective=phase1,
    )


def _check_feasible(lp: LinearProgram, x: np.ndarray) -> None:
    scale = 1.0 + max(
        np.abs(lp.eq_rhs).max(initial=0.0), np.abs(lp.ineq_rhs).max(initial=0.0)
    )
    if lp.eq_rows.shape[0]:
        res = np.abs(lp.eq_rows @ x - lp.eq_rhs).max()
        if res > 10 * FEASIBILITY_TOL * scale:
            raise NumericalError(f"equality residual {res:.2e} above tolerance")
    if lp.ineq_rows.shape[0]:
        res = (lp.ineq_rows @ x - lp.ineq_rhs).max()
        if res > 10 * FEASIBILITY_TOL * scale:
            raise NumericalError(f"inequality residual {res:.2e} above tolerance")


def feasible_point(eq_rows=None, eq_rhs=None, ineq_rows=None, ineq_rhs=None,
                   lower_bounds=None, upper_bounds=None, dim=None) -> LPResult:
    """Find any point satisfying the given constraints (phase one only).

    Returns an optimal LPResult holding a feasible vertex, or an infeasible
    one whose ``phase_one_objective`` is the infeasibility certificate.
    """
    if dim is None:
        for arr in (eq_rows, ineq_rows):
            if arr is not None and np.asarray(arr).size:
                dim = np.atleast_2d(np.asarray(arr)).shape[1]
                break
        else:
            raise InputError("cannot infer dimension: no constraints given")
    lp = LinearProgram(
        objective=np.zeros(dim),
        eq_rows=eq_rows, eq_rhs=eq_rhs,
        ineq_rows=ineq_rows, ineq_rhs=ineq_rhs,
        lower_bounds=lower_bounds, upper_bounds=upper_bounds,
    )
    return solve_lp(lp)
