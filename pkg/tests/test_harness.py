import math
from dataclasses import replace

import numpy as np
import pytest

from polymult.distribution import build_pmf, moments
from polymult.errors import BasisMismatchError, MismatchedSystemError, NotConvergedError
from polymult.harness import MEAN, MINIMIZER, compare, metrics_to_csv, nu, nu_prime, sweep
from polymult.limit import limit_gaussian
from polymult.potential import make_context, minimize

from conftest import DIAGONAL, INTERVAL, INTERVAL2, POINT, SKEW, TRIANGLE

FLOOR = 1e-12


def shrinking(values):
    """Strictly decreasing, except that values already at round-off level may stay there."""
    return all(b < a or (a <= FLOOR and b <= FLOOR) for a, b in zip(values, values[1:]))


def setup(system):
    ctx = make_context(system)
    m = minimize(ctx)
    return ctx, m, limit_gaussian(ctx, m)


class TestMeasures:
    def test_nu_prime_level1(self):
        _, m, _ = setup(INTERVAL2)
        mu = nu_prime(build_pmf(INTERVAL2, 1), m)
        np.testing.assert_allclose(mu.coords.ravel(), [-1, 0, 1])
        np.testing.assert_allclose(mu.probs, [0.25, 0.5, 0.25])
        assert mu.recentering == MINIMIZER

    def test_nu_prime_spacing(self):
        _, m, _ = setup(INTERVAL2)
        mu = nu_prime(build_pmf(INTERVAL2, 4), m)
        np.testing.assert_allclose(np.diff(mu.coords.ravel()), 0.5)
        np.testing.assert_allclose(mu.coords.ravel(), -mu.coords.ravel()[::-1])
        assert mu.cell_volume == pytest.approx(0.5)

    def test_nu_is_centered(self):
        for system in (SKEW, TRIANGLE, DIAGONAL):
            mu = nu(*(lambda p: (p, moments(p)))(build_pmf(system, 3)))
            assert mu.recentering == MEAN
            assert all(q == 0 for q in mu.exact_mean())
            np.testing.assert_allclose(mu.probs @ mu.coords, 0, atol=1e-12)

    def test_triangle_level2(self):
        _, m, _ = setup(TRIANGLE)
        mu = nu_prime(build_pmf(TRIANGLE, 2), m)
        assert len(mu.probs) == 28
        pts = build_pmf(TRIANGLE, 2).points
        np.testing.assert_allclose(mu.coords, (pts - 2.0) / math.sqrt(2), atol=1e-12)

    @pytest.mark.parametrize("system", [INTERVAL, TRIANGLE, SKEW, DIAGONAL, POINT])
    def test_probabilities_sum(self, system):
        _, m, _ = setup(system)
        pmf = build_pmf(system, 5)
        assert abs(nu_prime(pmf, m).probs.sum() - 1) < 1e-12
        assert abs(nu(pmf, moments(pmf)).probs.sum() - 1) < 1e-12

    @pytest.mark.parametrize("system", [SKEW, TRIANGLE, DIAGONAL])
    def test_recenterings_differ_by_translation(self, system):
        _, m, _ = setup(system)
        pmf = build_pmf(system, 6)
        a = nu_prime(pmf, m)
        b = nu(pmf, moments(pmf))
        shift = a.coords - b.coords
        np.testing.assert_allclose(shift, np.broadcast_to(shift[0], shift.shape), atol=1e-12)
        np.testing.assert_array_equal(a.probs, b.probs)

    def test_diagonal_uses_lattice_coordinates(self):
        _, m, _ = setup(DIAGONAL)
        mu = nu_prime(build_pmf(DIAGONAL, 4), m)
        # points (j, j) for j = 0..8 sit at (j - 4) / 2 in basis coordinates
        np.testing.assert_allclose(mu.coords.ravel(), (np.arange(9) - 4) / 2)
        assert mu.cell_volume == pytest.approx(math.sqrt(2) / 2)

    def test_mismatched_system(self):
        _, m, _ = setup(INTERVAL)
        with pytest.raises(MismatchedSystemError):
            nu_prime(build_pmf(INTERVAL2, 2), m)

    def test_unconverged(self):
        ctx = make_context(SKEW)
        m = minimize(ctx, start=[0.3], max_iter=0)
        with pytest.raises(NotConvergedError):
            nu_prime(build_pmf(SKEW, 2), m)

    def test_basis_mismatch(self):
        _, m, _ = setup(INTERVAL)
        _, _, g = setup(TRIANGLE)
        with pytest.raises(BasisMismatchError):
            compare(nu_prime(build_pmf(INTERVAL, 2), m), g)


class TestMetrics:
    def test_interval_tv_decreases(self):
        rows = [r for r in sweep(INTERVAL2, [4, 16, 64]) if r.recentering == MINIMIZER]
        tv = [r.tv_distance for r in rows]
        assert shrinking(tv) and tv[-1] < 0.01

    def test_interval_cov_error(self):
        _, m, g = setup(INTERVAL)
        pmf = build_pmf(INTERVAL, 256)
        assert compare(nu_prime(pmf, m), g).cov_error < 0.05

    def test_symmetric_moments_exact(self):
        # binomial and trinomial moments match the limit for every k
        for system in (INTERVAL2, TRIANGLE):
            for row in sweep(system, [2, 5]):
                assert row.mean_drift == 0
                assert row.cov_error < 1e-15

    def test_skew_strict_decrease(self):
        rows = [r for r in sweep(SKEW, [4, 16, 64, 256]) if r.recentering == MINIMIZER]
        for field in ("tv_distance", "mean_drift", "cov_error"):
            values = [getattr(r, field) for r in rows]
            assert all(b < a for a, b in zip(values, values[1:])), (field, values)
        assert rows[-1].mean_drift < rows[0].mean_drift / 2

    def test_nu_has_zero_drift(self):
        for r in sweep(SKEW, [3, 9]):
            if r.recentering == MEAN:
                assert r.mean_drift == 0

    def test_point_all_zero(self):
        for r in sweep(POINT, [1, 4, 16]):
            assert (r.tv_distance, r.max_log_density_error, r.mean_drift, r.cov_error) == (0, 0, 0, 0)

    def test_sweep_order_and_csv(self):
        rows = sweep(INTERVAL2, [16, 4])
        assert [(r.k, r.recentering) for r in rows] == [(4, MINIMIZER), (4, MEAN), (16, MINIMIZER), (16, MEAN)]
        lines = metrics_to_csv(rows).splitlines()
        assert lines[0] == "k,recentering,tv_distance,max_log_density_error,mean_drift,cov_error"
        assert len(lines) == 5

    def test_tv_counts_missing_mass(self):
        # dropping atoms leaves the Gaussian mass they carried uncovered
        _, m, g = setup(INTERVAL2)
        mu = nu_prime(build_pmf(INTERVAL2, 16), m)
        full = compare(mu, g).tv_distance
        keep = np.abs(mu.coords[:, 0]) < 1.0
        probs = np.where(keep, mu.probs, 0.0)
        cut = compare(replace(mu, probs=probs / probs.sum()), g).tv_distance
        assert cut > full
