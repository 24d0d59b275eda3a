"""Exact rational two-phase simplex for ``max c.x  s.t.  A x = b, x >= 0``.

Dense tableau, Bland's rule, ``Fraction`` arithmetic. Every returned
status carries a certificate that is re-checked before returning:
optimal primal/dual pairs, a Farkas vector for infeasibility, or an
improving ray for unboundedness.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import SolverInconsistency
from .dist import format_rational

ZERO = Fraction(0)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class StandardFormLP:
    c: Sequence[Fraction]
    A: Sequence[Sequence[Fraction]]
    b: Sequence[Fraction]
    var_names: Sequence[str] | None = None
    con_names: Sequence[str] | None = None

    def __post_init__(self):
        self.c = [Fraction(v) for v in self.c]
        self.A = [[Fraction(v) for v in row] for row in self.A]
        self.b = [Fraction(v) for v in self.b]
        m, r = len(self.c), len(self.b)
        if m < 1 or r < 1:
            raise ValueError("LP needs at least one variable and one constraint")
        if len(self.A) != r or any(len(row) != m for row in self.A):
            raise ValueError(f"A must be {r} x {m}")
        if self.var_names is None:
            self.var_names = [f"x{j}" for j in range(m)]
        if self.con_names is None:
            self.con_names = [f"r{i}" for i in range(r)]
        if len(self.var_names) != m or len(self.con_names) != r:
            raise ValueError("name lists do not match LP dimensions")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_constraints(self) -> int:
        return len(self.b)


@dataclass
class LPSolution:
    status: Status
    primal: list[Fraction] = field(default_factory=list)
    dual: list[Fraction] = field(default_factory=list)
    objective: Fraction | None = None
    farkas: list[Fraction] | None = None
    ray: list[Fraction] | None = None
    pivots: int = 0


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def reduced_costs(self, cost):
        d = list(cost)
        for row, bv in zip(self.rows, self.basis):
            cb = cost[bv]
            if cb:
                for j, v in enumerate(row):
                    if v:
                        d[j] -= cb * v
        return d

    def pivot(self, r, e, d):
        row = self.rows[r]
        piv = row[e]
        if piv != 1:
            row[:] = [v / piv for v in row]
            self.rhs[r] /= piv
        nz = [(j, v) for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            f = other[e]
            if i == r or not f:
                continue
            for j, v in nz:
                other[j] -= f * v
            self.rhs[i] -= f * self.rhs[r]
        f = d[e]
        if f:
            for j, v in nz:
                d[j] -= f * v
        self.basis[r] = e
        self.pivots += 1

    def run(self, cost, allowed):
        """Bland's-rule simplex for max cost.x. Returns None or the unbounded column."""
        d = self.reduced_costs(cost)
        while True:
            e = next((j for j in allowed if d[j] > 0), None)
            if e is None:
                return None
            best = None
            for i, row in enumerate(self.rows):
                a = row[e]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return e
            self.pivot(best[1], e, d)


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), ZERO)


def _column(A, j):
    return [row[j] for row in A]


def solve(lp: StandardFormLP) -> LPSolution:
    m, r = lp.num_vars, lp.num_constraints
    signs = [1 if bi >= 0 else -1 for bi in lp.b]
    rows = []
    for i in range(r):
        row = [signs[i] * v for v in lp.A[i]] + [ZERO] * r
        row[m + i] = Fraction(1)
        rows.append(row)
    tab = _Tableau(rows, [signs[i] * lp.b[i] for i in range(r)], [m + i for i in range(r)])

    # phase I: maximize -(sum of artificials)
    cost1 = [ZERO] * m + [Fraction(-1)] * r
    tab.run(cost1, range(m + r))
    phase1 = -sum((tab.rhs[i] for i, bv in enumerate(tab.basis) if bv >= m), ZERO)
    if phase1 < 0:
        u = _multipliers(tab, cost1, m, r, signs)
        sol = LPSolution(Status.INFEASIBLE, farkas=u, pivots=tab.pivots)
        if not verify_infeasibility(lp, u):
            raise SolverInconsistency("Farkas certificate failed verification")
        return sol

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= m:
            e = next((j for j in range(m) if tab.rows[i][j]), None)
            if e is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, e, [ZERO] * (m + r))
        i += 1

    cost2 = list(lp.c) + [ZERO] * r
    e = tab.run(cost2, range(m))
    x = [ZERO] * m
    for bv, val in zip(tab.basis, tab.rhs):
        x[bv] = val
    if e is not None:
        ray = [ZERO] * m
        ray[e] = Fraction(1)
        for row, bv in zip(tab.rows, tab.basis):
            ray[bv] = -row[e]
        if not verify_ray(lp, ray):
            raise SolverInconsistency("unbounded ray failed verification")
        return LPSolution(Status.UNBOUNDED, primal=x, ray=ray, pivots=tab.pivots)

    y = _multipliers(tab, cost2, m, r, signs)
    sol = LPSolution(Status.OPTIMAL, primal=x, dual=y, objective=_dot(lp.c, x), pivots=tab.pivots)
    if not verify_certificate(lp, sol):
        raise SolverInconsistency("optimality certificate failed verification")
    return sol


def _multipliers(tab, cost, m, r, signs):
    """Basis multipliers y = c_B B^-1 read off the artificial block of the tableau."""
    y = []
    for k in range(r):
        s = sum((cost[bv] * row[m + k] for row, bv in zip(tab.rows, tab.basis)), ZERO)
        y.append(signs[k] * s)
    return y


def verify_certificate(lp: StandardFormLP, sol: LPSolution) -> bool:
    """Exact check of primal feasibility, dual feasibility, complementary slackness
    and equal objectives."""
    if sol.status is not Status.OPTIMAL:
        return False
    x, y = sol.primal, sol.dual
    if len(x) != lp.num_vars or len(y) != lp.num_constraints:
        return False
    if any(v < 0 for v in x):
        return False
    if any(_dot(row, x) != bi for row, bi in zip(lp.A, lp.b)):
        return False
    for j in range(lp.num_vars):
        slack = _dot(_column(lp.A, j), y) - lp.c[j]
        if slack < 0 or (slack and x[j]):
            return False
    obj = _dot(lp.c, x)
    if sol.objective is not None and sol.objective != obj:
        return False
    return obj == _dot(lp.b, y)


def verify_infeasibility(lp: StandardFormLP, y: Sequence[Fraction]) -> bool:
    """y^T A >= 0 with y^T b < 0 proves {A x = b, x >= 0} empty."""
    return all(_dot(_column(lp.A, j), y) >= 0 for j in range(lp.num_vars)) and _dot(lp.b, y) < 0


def verify_ray(lp: StandardFormLP, ray: Sequence[Fraction]) -> bool:
    return (
        all(v >= 0 for v in ray)
        and all(_dot(row, ray) == 0 for row in lp.A)
        and _dot(lp.c, ray) > 0
    )


def dump_lp(lp: StandardFormLP) -> str:
    """Plain-text listing with exact ``a/b`` coefficients, one constraint per line."""

    def terms(coeffs):
        parts = [f"{format_rational(v)} {name}" for v, name in zip(coeffs, lp.var_names) if v]
        return " + ".join(parts) if parts else "0"

    lines = [f"maximize: {terms(lp.c)}"]
    for name, row, bi in zip(lp.con_names, lp.A, lp.b):
        lines.append(f"{name}: {terms(row)} = {format_rational(bi)}")
    lines.append("bounds: all variables >= 0")
    return "\n".join(lines) + "\n"
