"""The exact polyhedral multinomial distribution on ``kP ∩ Z^n``.

Weights are multinomial coefficients
``(k|a|)! / prod_i (<v_i, x> + k a_i)!`` kept as Python ints; the
normalizer is their exact sum.  Floats appear only when probabilities are
requested.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

import numpy as np

from ._io import fmt_float
from .errors import ResourceLimitError
from .geometry import HalfSpaceSystem, enumerate_points, require_admissible

DEFAULT_POINT_CAP = 10**6


def _multinomial(counts) -> int:
    # iterated binomials keep intermediates no larger than the answer
    result, running = 1, 0
    for c in counts:
        running += c
        result *= math.comb(running, c)
    return result


def category_counts(system: HalfSpaceSystem, k: int, x) -> list:
    return [sum(v * xi for v, xi in zip(row, x)) + k * a for row, a in zip(system.vectors, system.offsets)]


def weight(system: HalfSpaceSystem, k: int, x) -> int:
    """Multinomial weight of the integer point ``x`` at level ``k``; 0 outside ``kP``."""
    counts = category_counts(system, k, [int(t) for t in x])
    if any(c < 0 for c in counts):
        return 0
    return _multinomial(counts)


@dataclass(frozen=True, eq=False)
class ExactPMF:
    system: HalfSpaceSystem
    k: int
    points: np.ndarray = field(repr=False)  # (N, n) int64, lexicographic
    weights: tuple = field(repr=False)  # Python ints
    normalizer: int = field(repr=False)

    def __len__(self):
        return len(self.weights)

    def probabilities(self) -> np.ndarray:
        b = self.normalizer
        # int / int is correctly rounded even for huge operands
        return np.array([w / b for w in self.weights])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        n = self.points.shape[1]
        writer.writerow([f"x_{j + 1}" for j in range(n)] + ["weight", "prob"])
        for x, w, p in zip(self.points.tolist(), self.weights, self.probabilities()):
            writer.writerow([*x, str(w), fmt_float(p)])
        return buf.getvalue()


def build_pmf(system: HalfSpaceSystem, k: int, point_cap: int = DEFAULT_POINT_CAP) -> ExactPMF:
    require_admissible(system)
    points = enumerate_points(system, k)
    if len(points) > point_cap:
        raise ResourceLimitError(f"{len(points)} lattice points in {k}P exceed the cap of {point_cap}")
    offs = np.array([k * a for a in system.offsets], dtype=np.int64)
    counts = points @ system.V().T + offs
    weights = tuple(_multinomial(row) for row in counts.tolist())
    return ExactPMF(system, k, points, weights, sum(weights))


@dataclass(frozen=True)
class MomentSummary:
    mean: tuple  # Fractions
    covariance: tuple  # n x n nested tuples of Fractions
    k: int

    def mean_array(self) -> np.ndarray:
        return np.array([float(q) for q in self.mean])

    def covariance_array(self) -> np.ndarray:
        return np.array([[float(q) for q in row] for row in self.covariance])


def moments(pmf: ExactPMF) -> MomentSummary:
    b = pmf.normalizer
    pts = pmf.points.tolist()
    n = pmf.points.shape[1]
    s1 = [0] * n
    s2 = [[0] * n for _ in range(n)]
    for x, w in zip(pts, pmf.weights):
        for j in range(n):
            wx = w * x[j]
            s1[j] += wx
            row = s2[j]
            for l in range(j, n):
                row[l] += wx * x[l]
    mean = tuple(Fraction(s, b) for s in s1)
    cov = [[None] * n for _ in range(n)]
    for j in range(n):
        for l in range(j, n):
            cov[j][l] = cov[l][j] = Fraction(s2[j][l], b) - mean[j] * mean[l]
    return MomentSummary(mean, tuple(map(tuple, cov)), pmf.k)


def sample(pmf: ExactPMF, seed: int, count: int) -> np.ndarray:
    """``count`` i.i.d. draws by inverse CDF on the exact cumulative weights.

    A uniform integer in ``[0, b_k)`` is located among the cumulative
    weights, so the draw probabilities are exactly ``w / b_k``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    cumulative = list(accumulate(pmf.weights))
    b = pmf.normalizer
    idx = [bisect.bisect_right(cumulative, rng.randrange(b)) for _ in range(count)]
    return pmf.points[np.array(idx, dtype=np.int64)]
