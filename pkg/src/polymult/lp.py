"""Exact rational linear programming.

Two-phase dense tableau simplex over :class:`fractions.Fraction` with
Bland's rule, so degenerate problems cannot cycle and every reported zero
is an exact zero.  Problem sizes here are tiny (a handful of variables and
constraints), which is what makes a dense exact tableau practical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _as_fractions(rows):
    return [[Fraction(v) for v in row] for row in rows]


class _Tableau:
    """Rows ``A w = b`` with ``w >= 0``, ``b >= 0`` and a tracked basis."""

    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, r, j):
        A, b = self.A, self.b
        row = A[r]
        piv = row[j]
        if piv != 1:
            A[r] = row = [v / piv for v in row]
            b[r] = b[r] / piv
        for i in range(len(A)):
            if i == r:
                continue
            f = A[i][j]
            if f:
                Ai = A[i]
                A[i] = [a - f * p for a, p in zip(Ai, row)]
                b[i] = b[i] - f * b[r]
        self.basis[r] = j

    def reduced_costs(self, c):
        """Reduced costs ``c_j - c_B^T A_j`` and current objective value."""
        ncols = len(c)
        red = list(c)
        value = Fraction(0)
        for r, bj in enumerate(self.basis):
            cb = c[bj]
            if cb:
                row = self.A[r]
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
                value += cb * self.b[r]
        return red, value

    def maximize(self, c, allowed):
        """Bland's-rule primal simplex; returns False if unbounded."""
        while True:
            red, _ = self.reduced_costs(c)
            entering = next((j for j in allowed if red[j] > 0), None)
            if entering is None:
                return True
            best = None
            for r, row in enumerate(self.A):
                a = row[entering]
                if a > 0:
                    ratio = self.b[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], entering)


def linprog_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximize ``c.z`` subject to ``A_ub z <= b_ub``, ``A_eq z = b_eq``.

    All variables ``z`` are free.  Inputs may be ints or Fractions; the
    result is exact.
    """
    nz = len(c)
    c = [Fraction(v) for v in c]
    A_ub, A_eq = _as_fractions(A_ub), _as_fractions(A_eq)
    b_ub, b_eq = [Fraction(v) for v in b_ub], [Fraction(v) for v in b_eq]
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq

    # columns: z+ (nz), z- (nz), slacks (m_ub), artificials (m)
    n_struct = 2 * nz + m_ub
    ncols = n_struct + m
    A, b = [], []
    for i in range(m):
        if i < m_ub:
            coeffs, rhs = A_ub[i], b_ub[i]
        else:
            coeffs, rhs = A_eq[i - m_ub], b_eq[i - m_ub]
        row = [Fraction(0)] * ncols
        for j in range(nz):
            row[j] = coeffs[j]
            row[nz + j] = -coeffs[j]
        if i < m_ub:
            row[2 * nz + i] = Fraction(1)
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        row[n_struct + i] = Fraction(1)
        A.append(row)
        b.append(rhs)

    tab = _Tableau(A, b, [n_struct + i for i in range(m)])

    # phase 1: maximize -(sum of artificials)
    phase1 = [Fraction(0)] * n_struct + [Fraction(-1)] * m
    tab.maximize(phase1, range(ncols))
    _, infeas = tab.reduced_costs(phase1)
    if infeas != 0:
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis; drop rows that are redundant
    r = 0
    while r < len(tab.A):
        if tab.basis[r] >= n_struct:
            j = next((j for j in range(n_struct) if tab.A[r][j] != 0), None)
            if j is None:
                del tab.A[r], tab.b[r], tab.basis[r]
                continue
            tab.pivot(r, j)
        r += 1

    phase2 = c + [-v for v in c] + [Fraction(0)] * (ncols - 2 * nz)
    if not tab.maximize(phase2, range(n_struct)):
        return LPResult(UNBOUNDED)

    w = [Fraction(0)] * ncols
    for r, bj in enumerate(tab.basis):
        w[bj] = tab.b[r]
    z = tuple(w[j] - w[nz + j] for j in range(nz))
    value = sum((ci * zi for ci, zi in zip(c, z)), Fraction(0))
    return LPResult(OPTIMAL, value, z)


def solve_lp(system, objective, sense: str = "max") -> LPResult:
    """Optimize ``<objective, x>`` over ``P = {x : <v_i, x> + a_i >= 0}``.

    ``sense`` is ``"max"`` or ``"min"``.  Unbounded and infeasible problems
    are reported through :attr:`LPResult.status`, never raised.
    """
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    sign = 1 if sense == "max" else -1
    c = [sign * Fraction(v) for v in objective]
    # <v_i, x> + a_i >= 0  <=>  -<v_i, x> <= a_i
    A_ub = [[-v for v in row] for row in system.vectors]
    res = linprog_exact(c, A_ub, system.offsets)
    if res.optimal and sign < 0:
        return LPResult(OPTIMAL, -res.value, res.point)
    return res
