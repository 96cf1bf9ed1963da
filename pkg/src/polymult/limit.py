"""Limiting Gaussian on ``L`` and finite-k checks of the ratio asymptotics.

The limit has density ``exp(-Q(x)/2) / Z`` with respect to Lebesgue measure
on ``L`` in lattice-basis coordinates, where
``Q_jl = sum_{i in I_a} <v_i, b_j><v_i, b_l> / (<v_i, m> + a_i)`` is the
Hessian of ``ln phi`` at the minimizer.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._io import fmt_float
from .errors import DomainError, NearSingularError, NotConvergedError
from .potential import MinimizerResult, PotentialContext, hess_L, log_phi

MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class LimitGaussian:
    Q: np.ndarray
    Sigma: np.ndarray
    logZ: float
    basis: np.ndarray = field(repr=False)
    m: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    @property
    def degenerate(self) -> bool:
        """``d = 0``: the limit is the point mass at the origin."""
        return self.dim == 0

    def to_json(self) -> dict:
        return {
            "d": self.dim,
            "degenerate": self.degenerate,
            "m": self.m.tolist(),
            "basis": self.basis.T.tolist(),
            "Q": self.Q.tolist(),
            "Sigma": self.Sigma.tolist(),
            "logZ": self.logZ,
        }


def limit_gaussian(ctx: PotentialContext, m: MinimizerResult) -> LimitGaussian:
    if not m.converged:
        raise NotConvergedError("minimizer did not converge; the limit would be centered at the wrong point")
    d = ctx.dim
    if d == 0:
        empty = np.zeros((0, 0))
        return LimitGaussian(empty, empty, 0.0, ctx.basis, m.m)
    Q = hess_L(ctx, m.m)
    Q = 0.5 * (Q + Q.T)
    cond = np.linalg.cond(Q)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise NearSingularError(f"condition number of Q is {cond:.3g} (> {MAX_CONDITION:.0e})")
    Sigma = np.linalg.inv(Q)
    Sigma = 0.5 * (Sigma + Sigma.T)
    _, logdet = np.linalg.slogdet(Q)
    logZ = 0.5 * d * math.log(2 * math.pi) - 0.5 * logdet
    return LimitGaussian(Q, Sigma, logZ, ctx.basis, m.m)


def log_density_batch(g: LimitGaussian, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if g.degenerate:
        return np.zeros(len(X))
    return -0.5 * _kernels.quad_forms(X, g.Q) - g.logZ


def density(g: LimitGaussian, x) -> float:
    """Density at L-coordinates ``x``; for ``d = 0`` the point mass (1.0)."""
    return float(np.exp(log_density_batch(g, x)[0]))


@dataclass(frozen=True)
class RatioCheck:
    k: int
    x: tuple
    exact_log_ratio: float
    corrected_log_ratio: float
    predicted: float
    abs_error: float


def ratio_check(ctx: PotentialContext, m: MinimizerResult, k: int, x) -> RatioCheck:
    """Compare ``ln phi_{ka}(km) - ln phi_{ka}(km + sqrt(k) x)`` with ``-Q(x)/2``.

    The corrected value adds half the log of
    ``prod_i c_i(km) / c_i(km + sqrt(k) x)``, the square-root factor that
    makes the error ``O(k^{3c - 1/2})`` rather than ``O(1)``.
    """
    x = np.asarray(x, dtype=float).reshape(ctx.dim)
    center = k * np.asarray(m.m, dtype=float)
    moved = center + math.sqrt(k) * ctx.to_ambient(x)
    c0 = ctx.slacks(center, k)
    c1 = ctx.slacks(moved, k)
    if np.any(c1 <= 0) or np.any(c0 <= 0):
        raise DomainError(f"k m + sqrt(k) x leaves the interior of kP at k={k}")
    exact = log_phi(ctx, k, center) - log_phi(ctx, k, moved)
    corrected = exact + 0.5 * float(np.sum(np.log(c0) - np.log(c1)))
    Q = hess_L(ctx, m.m) if ctx.dim else np.zeros((0, 0))
    predicted = -0.5 * float(x @ Q @ x) + 0.0  # no negative zero
    return RatioCheck(int(k), tuple(float(t) for t in x), exact, corrected, predicted, abs(corrected - predicted))


def ratio_sweep(ctx: PotentialContext, m: MinimizerResult, ks, x, c: float = 0.1):
    """Ratio checks over ``ks``, skipping levels where ``|x| >= k^c``."""
    x = np.asarray(x, dtype=float).reshape(ctx.dim)
    radius = float(np.linalg.norm(ctx.to_ambient(x))) if ctx.dim else 0.0
    return [ratio_check(ctx, m, k, x) for k in ks if radius < k**c or radius == 0.0]


def ratio_rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "x_coords", "exact_log_ratio", "corrected_log_ratio", "predicted", "abs_error"])
    for row in rows:
        writer.writerow(
            [
                row.k,
                ";".join(fmt_float(t) for t in row.x),
                fmt_float(row.exact_log_ratio),
                fmt_float(row.corrected_log_ratio),
                fmt_float(row.predicted),
                fmt_float(row.abs_error),
            ]
        )
    return buf.getvalue()
