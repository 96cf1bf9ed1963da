"""The log-potential ``sum_i c_i ln c_i`` and its minimizer on ``rel.int.(P)``.

Here ``c_i(x) = <v_i, x> + s a_i`` for ``i in I_a`` and a scale ``s``
(``s = k`` evaluates the potential of ``k a`` at points of ``kP``).
Calculus is done in L-coordinates: ``x = x0 + B u`` with ``B`` the integer
lattice basis of ``L``.  Because ``sum_{i in I_a} <v_i, b_j> = 0`` the
gradient is ``sum_i <v_i, b_j> ln c_i`` and the Hessian is
``sum_i <v_i, b_j><v_i, b_l> / c_i``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DomainError, NoConvergenceError
from .geometry import HalfSpaceSystem, PolytopeGeometry, compute_geometry

logger = logging.getLogger(__name__)

DOMAIN_EPS = 1e-12
FRACTION_TO_BOUNDARY = 0.95
ARMIJO = 1e-4


@dataclass(frozen=True, eq=False)
class PotentialContext:
    system: HalfSpaceSystem
    geometry: PolytopeGeometry
    basis: np.ndarray = field(repr=False)  # (n, d) int64
    pairings: np.ndarray = field(repr=False)  # (r, d) int64, <v_i, b_j>

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def active(self) -> np.ndarray:
        return np.array(self.geometry.active_indices, dtype=np.int64)

    def slacks(self, x, scale: float = 1.0) -> np.ndarray:
        """``c_i = <v_i, x> + scale a_i`` for ``i in I_a``."""
        act = self.active
        V = self.system.V()[act].astype(float)
        a = self.system.a()[act].astype(float)
        return V @ np.asarray(x, dtype=float) + scale * a

    def to_ambient(self, u) -> np.ndarray:
        """Direction in ``L`` with basis coordinates ``u``."""
        return self.basis.astype(float) @ np.asarray(u, dtype=float).reshape(self.dim)


@lru_cache(maxsize=256)
def make_context(system: HalfSpaceSystem) -> PotentialContext:
    geom = compute_geometry(system)
    B = geom.basis_matrix()
    pairings = system.V() @ B
    return PotentialContext(system, geom, B, pairings)


def log_phi(ctx: PotentialContext, scale: float, x) -> float:
    """``ln phi`` at ``x`` (0 ln 0 = 0); slacks in ``[-eps, 0]`` clamp to 0."""
    c = ctx.slacks(x, scale)
    if np.any(c < -DOMAIN_EPS):
        raise DomainError(f"point lies outside the polytope (min slack {c.min():.3g})")
    c = np.maximum(c, 0.0)
    pos = c > 0
    return float(np.sum(c[pos] * np.log(c[pos])))


def _interior_slacks(ctx, x, scale):
    c = ctx.slacks(x, scale)
    if np.any(c <= 0):
        raise DomainError("gradient/Hessian need a strictly interior point")
    return c


def grad_L(ctx: PotentialContext, x, scale: float = 1.0) -> np.ndarray:
    c = _interior_slacks(ctx, x, scale)
    return ctx.pairings[ctx.active].T.astype(float) @ np.log(c)


def hess_L(ctx: PotentialContext, x, scale: float = 1.0) -> np.ndarray:
    c = _interior_slacks(ctx, x, scale)
    Pa = ctx.pairings[ctx.active].astype(float)
    return Pa.T @ (Pa / c[:, None])


@dataclass(frozen=True, eq=False)
class MinimizerResult:
    m: np.ndarray
    L_coords: np.ndarray
    residual: float
    iterations: int
    converged: bool
    min_slack: float
    history: tuple = field(default=(), repr=False)  # log phi per accepted iterate
    context: Optional[PotentialContext] = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "m": [float(t) for t in self.m],
            "residual": float(self.residual),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "min_slack": float(self.min_slack),
        }


def minimize(
    ctx: PotentialContext,
    tol: float = 1e-11,
    max_iter: int = 100,
    start=None,
    raise_on_failure: bool = False,
) -> MinimizerResult:
    """Damped Newton for ``ln phi`` in L-coordinates anchored at the interior point.

    ``start`` optionally gives L-coordinates of a strictly interior starting
    point (default: the interior point itself).  Steps are cut to keep
    every slack above ``(1 - 0.95)`` of its current value and then
    backtracked until Armijo decrease holds.
    """
    x0 = ctx.geometry.interior_array()
    d = ctx.dim
    if d == 0:
        return MinimizerResult(x0, np.zeros(0), 0.0, 0, True, _min_slack(ctx, x0), (log_phi(ctx, 1.0, x0),), ctx)

    B = ctx.basis.astype(float)
    Pa = ctx.pairings[ctx.active].astype(float)
    u = np.zeros(d) if start is None else np.asarray(start, dtype=float).copy()
    x = x0 + B @ u
    f = log_phi(ctx, 1.0, x)
    if np.any(ctx.slacks(x) <= 0):
        raise DomainError("starting point is not strictly interior")
    history = [f]
    g = grad_L(ctx, x)
    it = 0
    converged = bool(np.max(np.abs(g)) <= tol)
    while not converged and it < max_iter:
        it += 1
        H = hess_L(ctx, x)
        step = -np.linalg.solve(H, g)
        c = ctx.slacks(x)
        dc = Pa @ step
        shrinking = dc < 0
        alpha = 1.0
        if np.any(shrinking):
            alpha = min(1.0, FRACTION_TO_BOUNDARY * float(np.min(c[shrinking] / -dc[shrinking])))
        slope = float(g @ step)
        gnorm = float(np.max(np.abs(g)))
        while True:
            u_new = u + alpha * step
            x_new = x0 + B @ u_new
            f_new = log_phi(ctx, 1.0, x_new)
            if f_new <= f + ARMIJO * alpha * slope:
                break
            # at round-off level f cannot resolve the decrease; fall back on the gradient
            if f_new <= f + 8 * np.finfo(float).eps * max(1.0, abs(f)):
                g_try = grad_L(ctx, x_new)
                if np.max(np.abs(g_try)) < gnorm:
                    break
            alpha *= 0.5
            if alpha < 1e-14:
                logger.warning("line search stalled at iteration %d (|g| = %.3g)", it, gnorm)
                return _result(ctx, x, u, g, it, False, history)
        u, x, f = u_new, x_new, f_new
        history.append(f)
        g = grad_L(ctx, x)
        converged = bool(np.max(np.abs(g)) <= tol)
    if not converged:
        if raise_on_failure:
            raise NoConvergenceError(f"Newton did not reach |g| <= {tol} in {max_iter} iterations")
        logger.warning("Newton stopped after %d iterations with |g| = %.3g", it, np.max(np.abs(g)))
    return _result(ctx, x, u, g, it, converged, history)


def _result(ctx, x, u, g, it, converged, history):
    return MinimizerResult(
        x, u, float(np.max(np.abs(g))), it, converged, _min_slack(ctx, x), tuple(history), ctx
    )


def _min_slack(ctx, x):
    c = ctx.slacks(x)
    return float(c.min()) if c.size else math.inf


def grid_search_minimizer(ctx: PotentialContext, step: float = 1e-3):
    """Brute-force minimizer of ``ln phi`` on a square grid over a 2-D polytope.

    Only for full-dimensional polytopes in the plane.  Returns
    ``(point, value)``.
    """
    if ctx.system.n != 2 or ctx.dim != 2:
        raise ValueError("grid search needs a full-dimensional polytope in R^2")
    bounds = ctx.geometry.coord_bounds
    lo = np.array([float(b[0]) for b in bounds])
    hi = np.array([float(b[1]) for b in bounds])
    counts = np.floor((hi - lo) / step).astype(np.int64) + 1
    V = ctx.system.V().astype(float)
    offs = ctx.system.a().astype(float)
    best, (i, j) = _kernels.grid_argmin(V, offs, lo, step, counts)
    if i < 0:
        raise ValueError("grid has no strictly interior point; use a smaller step")
    return lo + step * np.array([i, j], dtype=float), best
