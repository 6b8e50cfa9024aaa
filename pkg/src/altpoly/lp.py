"""Exact rational linear programming with verified certificates.

A two-phase revised simplex over exact rationals with Bland's rule.  Every
outcome carries a certificate (primal+dual pair, Farkas vector, or
improving ray) and `solve` re-verifies the certificate before returning;
an outcome that fails its own verification is a solver bug and raises.

Conventions for certificates on the user-level program (variables x >= 0):

* Optimal(value, primal, dual): primal feasible; dual prices y per
  constraint satisfy the sign conditions (sense max: y_i >= 0 on <= rows,
  y_i <= 0 on >= rows, free on = rows; sense min: mirrored), the dual
  constraints (max: sum_i y_i A_ij >= c_j; min: <=), and y.b equals c.x.
* Infeasible(farkas): y with y_i <= 0 on <= rows, y_i >= 0 on >= rows,
  free on = rows, sum_i y_i A_ij <= 0 for every variable j, and y.b > 0;
  such a y contradicts feasibility of any x >= 0.
* Unbounded(ray, primal): primal feasible; ray r >= 0 with A_<= r <= 0,
  A_>= r >= 0, A_= r = 0 and improving objective (c.r > 0 for max).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .rationals import Q6, format_rat, rat

LESS, EQUAL, GREATER = "<=", "=", ">="


def _num(value):
    """Exact scalar for LP data: rational, or Q6 passed through unchanged."""
    return value if isinstance(value, Q6) else rat(value)


def _fmt(value) -> str:
    return value.format() if isinstance(value, Q6) else format_rat(value)
_RELATIONS = (LESS, EQUAL, GREATER)


class LpError(Exception):
    pass


class LpInternalError(LpError):
    """Certificate verification failed or the pivot guard tripped."""


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple  # ((var, coeff), ...) sparse, var indices ascending
    relation: str
    rhs: object

    @staticmethod
    def make(coeffs: dict, relation: str, rhs) -> "Constraint":
        if relation not in _RELATIONS:
            raise ValueError(f"bad relation {relation!r}")
        items = tuple(sorted((int(v), _num(c)) for v, c in coeffs.items() if c != 0))
        return Constraint(items, relation, _num(rhs))

    def dot(self, x: Sequence):
        return sum((c * x[v] for v, c in self.coeffs), rat(0))


@dataclass(frozen=True)
class LinearProgram:
    num_vars: int
    constraints: tuple
    objective: tuple  # sparse ((var, coeff), ...)
    sense: str  # "max" | "min"

    @staticmethod
    def make(num_vars: int, constraints, objective: dict, sense: str) -> "LinearProgram":
        if num_vars < 1:
            raise ValueError("need at least one variable")
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        rows = []
        for con in constraints:
            if not isinstance(con, Constraint):
                con = Constraint.make(*con)
            for v, _ in con.coeffs:
                if v < 0 or v >= num_vars:
                    raise ValueError(f"constraint references undeclared variable {v}")
            rows.append(con)
        obj = tuple(sorted((int(v), _num(c)) for v, c in objective.items() if c != 0))
        for v, _ in obj:
            if v < 0 or v >= num_vars:
                raise ValueError(f"objective references undeclared variable {v}")
        return LinearProgram(num_vars, tuple(rows), obj, sense)

    def objective_value(self, x: Sequence):
        return sum((c * x[v] for v, c in self.objective), rat(0))

    def dump(self) -> str:
        """Plain-text dump: one row per line, exact rationals only."""
        lines = [f"vars {self.num_vars} sense {self.sense}"]
        lines.append("obj " + " ".join(f"{v}:{_fmt(c)}" for v, c in self.objective))
        for con in self.constraints:
            body = " ".join(f"{v}:{_fmt(c)}" for v, c in con.coeffs)
            lines.append(f"{body} {con.relation} {_fmt(con.rhs)}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Optimal:
    value: object
    primal: tuple
    dual: tuple


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple


@dataclass(frozen=True)
class Unbounded:
    ray: tuple
    primal: tuple


LpOutcome = object


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve exactly; the returned outcome's certificate has been re-verified."""
    outcome = _solve_impl(lp)
    if not verify_certificate(lp, outcome):
        raise LpInternalError("solver produced a certificate that fails verification")
    return outcome


# -- verification ---------------------------------------------------------------


def _split_rows(lp: LinearProgram):
    return lp.constraints


def _primal_feasible(lp: LinearProgram, x: Sequence) -> bool:
    if len(x) != lp.num_vars or any(v < 0 for v in x):
        return False
    for con in lp.constraints:
        lhs = con.dot(x)
        if con.relation == LESS and lhs > con.rhs:
            return False
        if con.relation == GREATER and lhs < con.rhs:
            return False
        if con.relation == EQUAL and lhs != con.rhs:
            return False
    return True


def _dual_column_sums(lp: LinearProgram, y: Sequence) -> list:
    sums = [rat(0)] * lp.num_vars
    for yi, con in zip(y, lp.constraints):
        if yi == 0:
            continue
        for v, c in con.coeffs:
            sums[v] += yi * c
    return sums


def verify_certificate(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Exact re-check of an outcome's certificate against the program."""
    rows = lp.constraints
    if isinstance(outcome, Optimal):
        if not _primal_feasible(lp, outcome.primal):
            return False
        y = outcome.dual
        if len(y) != len(rows):
            return False
        for yi, con in zip(y, rows):
            if lp.sense == "max":
                if con.relation == LESS and yi < 0:
                    return False
                if con.relation == GREATER and yi > 0:
                    return False
            else:
                if con.relation == LESS and yi > 0:
                    return False
                if con.relation == GREATER and yi < 0:
                    return False
        sums = _dual_column_sums(lp, y)
        cost = dict(lp.objective)
        for j in range(lp.num_vars):
            cj = cost.get(j, 0)
            if lp.sense == "max" and sums[j] < cj:
                return False
            if lp.sense == "min" and sums[j] > cj:
                return False
        ydotb = sum((yi * con.rhs for yi, con in zip(y, rows)), rat(0))
        value = lp.objective_value(outcome.primal)
        return value == outcome.value and ydotb == value

    if isinstance(outcome, Infeasible):
        y = outcome.farkas
        if len(y) != len(rows):
            return False
        for yi, con in zip(y, rows):
            if con.relation == LESS and yi > 0:
                return False
            if con.relation == GREATER and yi < 0:
                return False
        sums = _dual_column_sums(lp, y)
        if any(s > 0 for s in sums):
            return False
        ydotb = sum((yi * con.rhs for yi, con in zip(y, rows)), rat(0))
        return ydotb > 0

    if isinstance(outcome, Unbounded):
        if not _primal_feasible(lp, outcome.primal):
            return False
        r = outcome.ray
        if len(r) != lp.num_vars or any(v < 0 for v in r):
            return False
        for con in rows:
            lhs = con.dot(r)
            if con.relation == LESS and lhs > 0:
                return False
            if con.relation == GREATER and lhs < 0:
                return False
            if con.relation == EQUAL and lhs != 0:
                return False
        improvement = lp.objective_value(r)
        return improvement > 0 if lp.sense == "max" else improvement < 0

    return False


# -- the solver -----------------------------------------------------------------


class _Simplex:
    """Revised simplex on min c.x, A x = b, x >= 0 with explicit B^{-1}."""

    def __init__(self, columns, costs, b):
        self.cols = columns  # list of ((row, coeff), ...)
        self.costs = costs
        self.b = b
        self.m = len(b)
        self.n = len(columns)

    def run(self, basis, binv, xb, banned, pivot_guard):
        m, n = self.m, self.n
        zero = rat(0)
        in_basis = [False] * n
        for j in basis:
            in_basis[j] = True
        pivots = 0
        while True:
            pivots += 1
            if pivots > pivot_guard:
                raise LpInternalError("pivot guard exceeded; anti-cycling bug?")
            cb = [self.costs[basis[i]] for i in range(m)]
            y = [zero] * m
            for i in range(m):
                ci = cb[i]
                if ci == 0:
                    continue
                row = binv[i]
                for k in range(m):
                    if row[k]:
                        y[k] += ci * row[k]
            entering = -1
            for j in range(n):
                if in_basis[j] or banned[j]:
                    continue
                rc = self.costs[j]
                for r, a in self.cols[j]:
                    if y[r]:
                        rc -= y[r] * a
                if rc < 0:
                    entering = j
                    break
            if entering < 0:
                return "optimal", basis, binv, xb, y
            d = [zero] * m
            for r, a in self.cols[entering]:
                for i in range(m):
                    if binv[i][r]:
                        d[i] += binv[i][r] * a
            ratio = None
            pivot_row = -1
            for i in range(m):
                if d[i] > 0:
                    cand = xb[i] / d[i]
                    if ratio is None or cand < ratio or (
                            cand == ratio and basis[i] < basis[pivot_row]):
                        ratio = cand
                        pivot_row = i
            if pivot_row < 0:
                return "unbounded", entering, d, basis, xb
            p = pivot_row
            dp = d[p]
            brow = binv[p]
            if dp != 1:
                inv = 1 / dp
                binv[p] = brow = [v * inv for v in brow]
            for i in range(m):
                if i != p and d[i]:
                    di = d[i]
                    tgt = binv[i]
                    for k in range(m):
                        if brow[k]:
                            tgt[k] -= di * brow[k]
            for i in range(m):
                if i != p and d[i]:
                    xb[i] -= d[i] * ratio
            xb[p] = ratio
            in_basis[basis[p]] = False
            in_basis[entering] = True
            basis[p] = entering


def _solve_impl(lp: LinearProgram) -> LpOutcome:
    m = len(lp.constraints)
    n0 = lp.num_vars
    minimize = lp.sense == "min"
    zero = rat(0)
    one = rat(1)

    # standard form: originals, then one slack/surplus per inequality row
    cols = [[] for _ in range(n0)]
    costs = []
    obj = dict(lp.objective)
    for j in range(n0):
        cj = rat(obj.get(j, 0))
        costs.append(cj if minimize else -cj)
    sigma = []
    b = []
    slack_of_row = [-1] * m
    for i, con in enumerate(lp.constraints):
        s = one if con.rhs >= 0 else -one
        sigma.append(s)
        b.append(con.rhs * s)
        for v, c in con.coeffs:
            cols[v].append((i, c * s))
        if con.relation != EQUAL:
            coeff = one if con.relation == LESS else -one
            slack_of_row[i] = len(cols)
            cols.append([(i, coeff * s)])
            costs.append(zero)
    n_real = len(cols)

    # phase 1 basis: slack columns with +1 where available, artificials elsewhere
    basis = [-1] * m
    art_of_row = [-1] * m
    for i in range(m):
        j = slack_of_row[i]
        if j >= 0 and cols[j][0][1] == 1:
            basis[i] = j
    phase1_costs = [zero] * n_real
    for i in range(m):
        if basis[i] < 0:
            art_of_row[i] = len(cols)
            basis[i] = len(cols)
            cols.append([(i, one)])
            phase1_costs.append(one)
    n_all = len(cols)
    guard = 2000 + min(10**7, math.comb(n_all, min(m, n_all)) if m <= n_all else 10**7)

    binv = [[one if i == k else zero for k in range(m)] for i in range(m)]
    xb = list(b)
    banned = [False] * n_all

    simplex = _Simplex(cols, phase1_costs, b)
    status, *state = simplex.run(basis, binv, xb, banned, guard)
    if status != "optimal":
        raise LpInternalError("phase 1 cannot be unbounded")
    basis, binv, xb, y1 = state
    phase1_value = sum((phase1_costs[basis[i]] * xb[i] for i in range(m)), zero)
    if phase1_value > 0:
        # z_i = sigma_i * y_i: z.A_j <= 0 on every column and z.b > 0
        farkas = tuple(sigma[i] * y1[i] for i in range(m))
        return Infeasible(farkas)

    # drive leftover artificials out of the basis where possible
    for i in range(m):
        j = basis[i]
        if art_of_row[i] == j:
            replaced = False
            for cand in range(n_real):
                if cand in basis:
                    continue
                piv = zero
                for r, a in cols[cand]:
                    if binv[i][r]:
                        piv += binv[i][r] * a
                if piv != 0:
                    d = [zero] * m
                    for r, a in cols[cand]:
                        for k in range(m):
                            if binv[k][r]:
                                d[k] += binv[k][r] * a
                    inv = 1 / d[i]
                    binv[i] = [v * inv for v in binv[i]]
                    for k in range(m):
                        if k != i and d[k]:
                            dk = d[k]
                            for t in range(m):
                                if binv[i][t]:
                                    binv[k][t] -= dk * binv[i][t]
                            xb[k] -= dk * xb[i]
                    basis[i] = cand
                    replaced = True
                    break
            if not replaced:
                pass  # redundant row: artificial stays basic at value zero
    # artificials must never re-enter in phase 2
    for j in range(n_real, n_all):
        banned[j] = True

    phase2_costs = list(costs) + [zero] * (n_all - n_real)
    simplex2 = _Simplex(cols, phase2_costs, b)
    status, *state = simplex2.run(basis, binv, xb, banned, guard)

    if status == "unbounded":
        # x(t) = x + t*dir with dir = 1 on the entering column and -d on the
        # basis; the ratio test failed, so every d[i] <= 0 and dir >= 0
        entering, d, basis, xb = state
        direction = [zero] * n0
        if entering < n0:
            direction[entering] = one
        for i in range(m):
            if basis[i] < n0 and d[i] != 0:
                direction[basis[i]] = -d[i]
        primal = [zero] * n0
        for i in range(m):
            if basis[i] < n0:
                primal[basis[i]] = xb[i]
        return Unbounded(tuple(direction), tuple(primal))

    basis, binv, xb, y2 = state
    primal = [zero] * n0
    for i in range(m):
        if basis[i] < n0:
            primal[basis[i]] = xb[i]
    value = lp.objective_value(primal)
    y = []
    for i in range(m):
        yi = sigma[i] * y2[i]
        y.append(yi if minimize else -yi)
    return Optimal(value, tuple(primal), tuple(y))
