"""Exact linear programming.

Two-phase primal simplex with Bland's anti-cycling rule on an
integer-preserving tableau: every entry is an integer and the true tableau is
the integer one divided by a single common denominator (the determinant of the
current basis).  Pivots use Bareiss-style exact division, so no rational
normalisation happens inside the loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

Number = int | Fraction
Sense = Literal["<=", ">=", "=="]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    sense: Sense
    rhs: Fraction

    def __init__(self, coeffs: Sequence[Number], sense: Sense, rhs: Number) -> None:
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown constraint sense {sense!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "rhs", Fraction(rhs))


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _integer_row(values: Sequence[Fraction]) -> list[int]:
    scale = 1
    for v in values:
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    return [int(v * scale) for v in values]


def _pivot(rows: list[list[int]], obj: list[int], r: int, c: int, denom: int) -> int:
    prow = rows[r]
    p = prow[c]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            rows[i] = [(a * p - f * b) // denom for a, b in zip(row, prow)]
        elif p != denom:
            rows[i] = [a * p // denom for a in row]
    f = obj[c]
    obj[:] = [(a * p - f * b) // denom for a, b in zip(obj, prow)]
    return p


def _normalise_sign(rows: list[list[int]], obj: list[int], denom: int) -> int:
    if denom > 0:
        return denom
    for i, row in enumerate(rows):
        rows[i] = [-a for a in row]
    obj[:] = [-a for a in obj]
    return -denom


def _simplex(
    rows: list[list[int]],
    obj: list[int],
    basis: list[int],
    denom: int,
    allowed: int,
) -> tuple[str, int]:
    """Minimise with reduced-cost row ``obj``; columns ``>= allowed`` never enter."""
    m = len(rows)
    while True:
        entering = -1
        for j in range(allowed):
            if obj[j] < 0:
                entering = j
                break
        if entering < 0:
            return OPTIMAL, denom
        best = -1
        for i in range(m):
            a = rows[i][entering]
            if a <= 0:
                continue
            if best < 0:
                best = i
                continue
            # compare rhs_i / a  vs  rhs_best / a_best
            lhs = rows[i][-1] * rows[best][entering]
            rhs = rows[best][-1] * a
            if lhs < rhs or (lhs == rhs and basis[i] < basis[best]):
                best = i
        if best < 0:
            return UNBOUNDED, denom
        denom = _pivot(rows, obj, best, entering, denom)
        basis[best] = entering


def solve_standard(
    A: Sequence[Sequence[int]],
    b: Sequence[int],
    c: Sequence[Number],
) -> LPResult:
    """Minimise ``c.x`` subject to ``A x == b``, ``x >= 0`` with integer ``A, b``."""
    m = len(A)
    nvar = len(c)
    for row in A:
        if len(row) != nvar:
            raise DimensionMismatchError("constraint row length differs from objective")
    if len(b) != m:
        raise DimensionMismatchError("right-hand side length differs from row count")
    rows: list[list[int]] = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            row = [-a for a in row]
            rhs = -rhs
        art = [0] * m
        art[i] = 1
        rows.append(row + art + [rhs])
    basis = [nvar + i for i in range(m)]
    width = nvar + m + 1

    # phase 1: minimise the sum of artificials
    obj = [0] * width
    for row in rows:
        for j in range(nvar):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    denom = 1
    status, denom = _simplex(rows, obj, basis, denom, nvar + m)
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if basis[i] < nvar:
            continue
        for j in range(nvar):
            if rows[i][j] != 0:
                denom = _pivot(rows, obj, i, j, denom)
                basis[i] = j
                denom = _normalise_sign(rows, obj, denom)
                break

    # phase 2
    cint = _integer_row([Fraction(x) for x in c])
    obj = [denom * cj for cj in cint] + [0] * (m + 1)
    for i in range(m):
        cb = cint[basis[i]] if basis[i] < nvar else 0
        if cb:
            row = rows[i]
            obj = [o - cb * a for o, a in zip(obj, row)]
    status, denom = _simplex(rows, obj, basis, denom, nvar)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * nvar
    for i in range(m):
        if basis[i] < nvar:
            x[basis[i]] = Fraction(rows[i][-1], denom)
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(x))


def lp_solve(
    objective: Sequence[Number],
    constraints: Sequence[Constraint],
    *,
    maximize: bool = True,
    nonneg: bool = False,
) -> LPResult:
    """Optimise ``objective . x`` over the given linear constraints.

    Variables are free unless ``nonneg`` is set.  The reported point is an
    optimal vertex of the feasible region (in the split variables when the
    variables are free, recombined before returning).
    """
    nvar = len(objective)
    for con in constraints:
        if len(con.coeffs) != nvar:
            raise DimensionMismatchError(
                f"constraint has {len(con.coeffs)} coefficients, objective has {nvar}"
            )
    c = [Fraction(x) for x in objective]
    if maximize:
        c = [-x for x in c]
    cols = nvar if nonneg else 2 * nvar
    nslack = sum(1 for con in constraints if con.sense != "==")
    A: list[list[int]] = []
    b: list[int] = []
    k = 0
    for con in constraints:
        coeffs = list(con.coeffs)
        if not nonneg:
            coeffs = coeffs + [-a for a in coeffs]
        slack = [Fraction(0)] * nslack
        if con.sense != "==":
            slack[k] = Fraction(1 if con.sense == "<=" else -1)
            k += 1
        row = _integer_row(coeffs + slack + [con.rhs])
        A.append(row[:-1])
        b.append(row[-1])
    cost = (c if nonneg else c + [-x for x in c]) + [Fraction(0)] * nslack
    res = solve_standard(A, b, cost)
    if res.status != OPTIMAL:
        return res
    assert res.point is not None
    raw = res.point[:cols]
    point = raw if nonneg else tuple(raw[i] - raw[nvar + i] for i in range(nvar))
    value = sum((Fraction(o) * x for o, x in zip(objective, point)), Fraction(0))
    return LPResult(OPTIMAL, value, tuple(point))
