"""Rescaled lattice measures and their distance to the limiting Gaussian.

``nu_prime`` recenters the level-k distribution at ``k m`` and ``nu`` at
its exact mean; both scale by ``1/sqrt(k)`` and express atoms in
lattice-basis coordinates of ``L``.  Every lattice point ``y`` of ``kP``
differs from the first one, ``y0``, by an integer combination ``t_y`` of
the basis, so atom coordinates are ``(t_y + s) / sqrt(k)`` with a single
exact rational offset ``s``.  Moment metrics are evaluated exactly from
``t_y`` and the integer weights.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ._io import fmt_float
from .distribution import DEFAULT_POINT_CAP, ExactPMF, MomentSummary, build_pmf, moments
from .errors import BasisMismatchError, MismatchedSystemError, NotConvergedError
from .lattice import bareiss_det, fraction_inverse
from .limit import LimitGaussian, limit_gaussian, log_density_batch
from .potential import MinimizerResult, make_context, minimize

MINIMIZER = "minimizer"
MEAN = "mean"
LOG_ERROR_FLOOR = 1e-9
AFFINE_HULL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    coords: np.ndarray  # (N, d) L-coordinates of the atoms
    probs: np.ndarray  # (N,)
    k: int
    recentering: str
    cell_volume: float
    basis: np.ndarray = field(repr=False)
    lattice_coords: np.ndarray = field(repr=False)  # (N, d) int, t_y
    weights: tuple = field(repr=False)
    normalizer: int = field(repr=False)
    offset: tuple = field(repr=False)  # s, Fractions

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def exact_mean(self) -> list:
        """Measure mean in L-coordinates, times ``sqrt(k)`` (exact)."""
        b = self.normalizer
        T = self.lattice_coords.tolist()
        sums = [0] * self.dim
        for t, w in zip(T, self.weights):
            for j in range(self.dim):
                sums[j] += w * t[j]
        return [Fraction(s, b) + off for s, off in zip(sums, self.offset)]

    def exact_covariance(self) -> list:
        """Measure covariance in L-coordinates, times ``k`` (exact)."""
        b, d = self.normalizer, self.dim
        T = self.lattice_coords.tolist()
        s1 = [0] * d
        s2 = [[0] * d for _ in range(d)]
        for t, w in zip(T, self.weights):
            for j in range(d):
                wt = w * t[j]
                s1[j] += wt
                for l in range(d):
                    s2[j][l] += wt * t[l]
        mean = [Fraction(s, b) for s in s1]
        return [[Fraction(s2[j][l], b) - mean[j] * mean[l] for l in range(d)] for j in range(d)]


@dataclass(frozen=True)
class ConvergenceMetrics:
    k: int
    recentering: str
    tv_distance: float
    max_log_density_error: float
    mean_drift: float
    cov_error: float


def _lattice_frame(B):
    """``(detG, adjG)`` with ``adjG / detG = (B^T B)^{-1}`` for an integer basis ``B``."""
    cols = B.T.tolist()
    G = [[sum(a * c for a, c in zip(u, w)) for w in cols] for u in cols]
    det = bareiss_det(G)
    inv = fraction_inverse(G) if G else []
    adj = [[int(q * det) for q in row] for row in inv]
    return det, adj


def _build_measure(pmf: ExactPMF, ctx, center, recentering: str) -> DiscreteMeasure:
    B = ctx.basis
    n, d = B.shape
    k = pmf.k
    pts = pmf.points
    y0 = pts[0].tolist()
    det, adj = _lattice_frame(B)

    if d:
        # t_y = G^{-1} B^T (y - y0), integral because y - y0 lies in L ∩ Z^n
        proj = np.array(adj, dtype=object) @ B.T.astype(object)
        num = (pts - pts[0]).astype(object) @ proj.T
        if np.any(num % det != 0):
            raise MismatchedSystemError("lattice points do not differ by lattice vectors")
        T = (num // det).astype(np.int64)
    else:
        T = np.zeros((len(pts), 0), dtype=np.int64)

    diff = [Fraction(a) - c for a, c in zip(y0, center)]
    Bt = B.T.tolist()
    offset = [
        sum((Fraction(adj[j][l]) * sum(Bt[l][i] * diff[i] for i in range(n)) for l in range(d)), Fraction(0)) / det
        for j in range(d)
    ]
    # y0 - center must lie in L up to the float error carried by the center
    resid = [diff[i] - sum(B[i, j] * offset[j] for j in range(d)) for i in range(n)]
    if max((abs(float(q)) for q in resid), default=0.0) > AFFINE_HULL_TOL * max(1, k):
        raise MismatchedSystemError("recentering point is not in the affine hull of kP")

    root = math.sqrt(k)
    coords = np.empty((len(pts), d))
    for j in range(d):
        num, den = offset[j].numerator, offset[j].denominator
        coords[:, j] = [(t * den + num) / den for t in T[:, j].tolist()]
    coords /= root
    probs = pmf.probabilities()
    cell = ctx.geometry.covolume / k ** (d / 2)
    return DiscreteMeasure(coords, probs, k, recentering, cell, B, T, pmf.weights, pmf.normalizer, tuple(offset))


def nu_prime(pmf: ExactPMF, m: MinimizerResult) -> DiscreteMeasure:
    """Level-k measure recentered at ``k m`` and scaled by ``1/sqrt(k)``."""
    ctx = m.context
    if ctx is None or ctx.system != pmf.system:
        raise MismatchedSystemError("minimizer and pmf come from different systems")
    if not m.converged:
        raise NotConvergedError("minimizer did not converge")
    center = [pmf.k * Fraction(float(t)) for t in m.m]
    return _build_measure(pmf, ctx, center, MINIMIZER)


def nu(pmf: ExactPMF, mom: MomentSummary) -> DiscreteMeasure:
    """Level-k measure recentered at its exact mean and scaled by ``1/sqrt(k)``."""
    if mom.k != pmf.k or len(mom.mean) != pmf.points.shape[1]:
        raise MismatchedSystemError("moment summary does not belong to this pmf")
    return _build_measure(pmf, make_context(pmf.system), list(mom.mean), MEAN)


def compare(measure: DiscreteMeasure, g: LimitGaussian) -> ConvergenceMetrics:
    if measure.basis.shape != g.basis.shape or not np.array_equal(measure.basis, g.basis):
        raise BasisMismatchError("measure and limit use different L-coordinates")
    k = measure.k
    p = measure.probs
    # the density is per unit volume in basis coordinates, where one lattice
    # cell has volume cell_volume / covolume = k^{-d/2}
    log_q = log_density_batch(g, measure.coords) - 0.5 * measure.dim * math.log(k)
    q = np.exp(log_q)
    tv = 0.5 * math.fsum(np.abs(p - q)) + 0.5 * max(0.0, 1.0 - math.fsum(q))
    keep = p > LOG_ERROR_FLOOR
    log_err = float(np.max(np.abs(np.log(p[keep]) - log_q[keep]))) if np.any(keep) else 0.0

    mean = measure.exact_mean()
    drift = math.sqrt(float(sum(t * t for t in mean)) / k) if mean else 0.0
    cov = measure.exact_covariance()
    cov_err = 0.0
    for j, row in enumerate(cov):
        for l, val in enumerate(row):
            cov_err = max(cov_err, abs(float(val / k) - float(g.Sigma[j, l])))
    return ConvergenceMetrics(k, measure.recentering, tv, log_err, drift, cov_err)


def sweep(system, ks, point_cap: int = DEFAULT_POINT_CAP) -> list:
    """Full pipeline per level, both recenterings, ordered by ``k``."""
    ctx = make_context(system)
    m = minimize(ctx, raise_on_failure=True)
    g = limit_gaussian(ctx, m)
    out = []
    for k in sorted(ks):
        pmf = build_pmf(system, k, point_cap=point_cap)
        out.append(compare(nu_prime(pmf, m), g))
        out.append(compare(nu(pmf, moments(pmf)), g))
    return out


SWEEP_FIELDS = ["k", "recentering", "tv_distance", "max_log_density_error", "mean_drift", "cov_error"]


def metrics_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for row in rows:
        writer.writerow(
            [row.k, row.recentering] + [fmt_float(getattr(row, f)) for f in SWEEP_FIELDS[2:]]
        )
    return buf.getvalue()


def metrics_to_records(rows) -> list:
    return [asdict(row) for row in rows]
