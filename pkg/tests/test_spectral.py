# SPDX-License-Identifier: Apache-2.0 OR MIT

import numpy as np
import pytest
import scipy.integrate
import scipy.stats
from numpy.testing import assert_allclose

from pyshiftbaker.linalg import DenseOperator, NotUnitaryError, eigenphases
from pyshiftbaker.operators import PerturbationSpec, build_parity, build_perturbed
from pyshiftbaker.spectral import (ParityError, Sector, SpacingSample,
                                   circular_spacings, desymmetrize, goe_cdf,
                                   goe_pdf, histogram, poisson_cdf, sample_goe_spacings,
                                   sample_poisson_spacings, sector_leakage,
                                   spacing_sample)


def circular_mismatch(phases, expected):
    remaining = list(phases)
    worst = 0.0
    for p in expected:
        dist = [abs(np.angle(np.exp(1j * (p - q)))) for q in remaining]
        i = int(np.argmin(dist))
        worst = max(worst, dist[i])
        remaining.pop(i)
    return worst


def even_sector_sample(N, theta):
    u = build_perturbed(N, PerturbationSpec(theta, 0.5, 'x'))
    return spacing_sample(desymmetrize(u, build_parity(N), Sector.even), subspace=Sector.even)


@pytest.fixture(scope='module')
def strong_sample():
    return even_sector_sample(510, 0.3)


class TestDesymmetrize:
    def test_identity(self):
        out = desymmetrize(DenseOperator.unitary_checked(np.eye(10)), build_parity(10), 'even')
        assert_allclose(out.matrix, np.eye(5), atol=1e-15)

    @pytest.mark.parametrize('sector, sign', [(Sector.even, 1), (Sector.odd, -1)])
    def test_parity_eigenvalues(self, sector, sign):
        r = build_parity(12)
        assert_allclose(desymmetrize(r, r, sector).matrix, sign * np.eye(6), atol=1e-15)

    def test_full_passthrough(self):
        r = build_parity(6)
        assert desymmetrize(r, r, Sector.full) is r

    def test_leakage(self):
        u = build_perturbed(100, PerturbationSpec(0.1, 0.5, 'x'))
        assert sector_leakage(u, build_parity(100)) <= 1e-10

    def test_broken_parity_refused(self):
        u = build_perturbed(20, PerturbationSpec(0.3, 0.5, 'y'))
        with pytest.raises(ParityError):
            desymmetrize(u, build_parity(20), Sector.even)

    def test_sector_unitary(self):
        u = build_perturbed(64, PerturbationSpec(0.3, 0.5, 'x'))
        for sector in (Sector.even, Sector.odd):
            sub = desymmetrize(u, build_parity(64), sector)
            assert sub.dim == 32 and sub.unitary_deviation() <= 1e-9

    def test_parity_with_fixed_points_refused(self):
        with pytest.raises(ParityError):
            desymmetrize(DenseOperator.unitary_checked(np.eye(3)),
                         DenseOperator.unitary_checked(np.eye(3)), Sector.even)

    def test_sectors_complete(self):
        N = 40
        u = build_perturbed(N, PerturbationSpec(0.3, 0.5, 'x'))
        r = build_parity(N)
        halves = np.concatenate([eigenphases(desymmetrize(u, r, s)).phases
                                 for s in (Sector.even, Sector.odd)])
        assert circular_mismatch(halves, eigenphases(u).phases) <= 1e-7


class TestSpacings:
    def test_picket_fence(self):
        d = 16
        u = DenseOperator.unitary_checked(np.diag(np.exp(2j * np.pi * (np.arange(d) + 0.25) / d)))
        sample = spacing_sample(u)
        assert_allclose(sample.spacings, np.ones(d), atol=1e-12)
        assert sample.ks_poisson > 0.3

    def test_wraparound_gap(self):
        s = circular_spacings([0.1, 3.0, 6.0])
        assert len(s) == 3
        assert s[-1] == pytest.approx((0.1 + 2 * np.pi - 6.0) * 3 / (2 * np.pi))

    def test_unperturbed_degeneracy(self):
        sample = even_sector_sample(254, 0.0)
        assert len(sample) == 127
        assert sample.zero_count() == 17

    def test_level_repulsion(self, strong_sample):
        assert len(strong_sample) == 255
        assert abs(np.mean(strong_sample.spacings) - 1.0) <= 1e-6
        assert strong_sample.ks_goe < strong_sample.ks_poisson
        assert strong_sample.fraction_below(0.1) < 0.05

    def test_weak_perturbation_less_chaotic(self, strong_sample):
        weak = even_sector_sample(510, 0.02)
        assert strong_sample.ks_goe < weak.ks_goe

    def test_odd_sector_count(self):
        u = build_perturbed(60, PerturbationSpec(0.3, 0.5, 'x'))
        sample = spacing_sample(desymmetrize(u, build_parity(60), 'odd'), subspace=Sector.odd)
        assert len(sample) == 30

    def test_non_unitary_refused(self):
        with pytest.raises(NotUnitaryError):
            spacing_sample(DenseOperator(np.diag([1.0, 2.0])))

    def test_summary(self, strong_sample):
        summary = strong_sample.summary()
        assert summary['count'] == 255 and summary['subspace'] == 'even'


class TestReferences:
    def test_goe_normalized(self):
        area, _ = scipy.integrate.quad(goe_pdf, 0, np.inf)
        mean, _ = scipy.integrate.quad(lambda s: s * goe_pdf(s), 0, np.inf)
        assert area == pytest.approx(1.0, abs=1e-8)
        assert mean == pytest.approx(1.0, abs=1e-8)
        assert float(goe_cdf(np.inf)) == 1.0

    def test_goe_sampler(self, rng):
        sample = SpacingSample.from_spacings(sample_goe_spacings(10_000, rng))
        assert sample.ks_goe < 0.02
        assert sample.ks_poisson > sample.ks_goe

    def test_poisson_sampler(self, rng):
        sample = SpacingSample.from_spacings(sample_poisson_spacings(10_000, rng))
        assert sample.ks_poisson < 0.02

    def test_poisson_reference_matches_exponential(self, rng):
        spacings = sample_goe_spacings(500, rng)
        expected = scipy.stats.kstest(spacings, 'expon').statistic
        assert SpacingSample.from_spacings(spacings).ks_poisson == pytest.approx(expected, abs=1e-12)
        assert_allclose(poisson_cdf([0.0, 1.0, np.inf]), [0.0, 1 - np.exp(-1.0), 1.0])


class TestHistogram:
    def test_unit_spacings_single_bin(self):
        hist = histogram(SpacingSample.from_spacings(np.ones(50)), bins=8, s_max=4.0)
        assert np.count_nonzero(hist.density) == 1

    def test_normalized(self, rng):
        hist = histogram(SpacingSample.from_spacings(sample_goe_spacings(2000, rng)), bins=40, s_max=6.0)
        widths = np.diff(hist.edges)
        assert float(np.sum(hist.density * widths)) == pytest.approx(1.0)
        assert_allclose(hist.goe, goe_pdf(hist.centers))
        assert_allclose(hist.poisson, np.exp(-hist.centers))

    def test_too_few_bins(self):
        with pytest.raises(ValueError):
            histogram(SpacingSample.from_spacings(np.ones(5)), bins=3)

    def test_empty(self):
        with pytest.raises(ValueError):
            histogram(np.array([]))

    def test_empty_sample_refused(self):
        with pytest.raises(ValueError):
            SpacingSample.from_spacings([])
