# SPDX-License-Identifier: Apache-2.0 OR MIT

import math

import numpy as np
import pytest
import scipy.linalg
from numpy.testing import assert_allclose

from pyshiftbaker.linalg import DimensionError, PhasedFourier, kron2_lsb
from pyshiftbaker.numtheory import multiplicative_order
from pyshiftbaker.operators import (SIGMA_X, SIGMA_Z, BakerKind, Pauli,
                                    PerturbationSpec, baker_decoration,
                                    branch_jacobian, build_baker,
                                    build_half_order_op, build_parity,
                                    build_perturbed, build_shift,
                                    build_shift_factored, classical_baker_orbit,
                                    classical_baker_step, lyapunov_exponent,
                                    model_perturbation, pauli_fourier_conjugate,
                                    perturbation_operator, saraceno_baker)


def max_dev(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def fourier(N, alpha):
    return PhasedFourier(N, alpha, alpha).materialize()


class TestShift:
    def test_small_permutation(self):
        t = build_shift(8).targets
        assert (t[1], t[2], t[3], t[4], t[7]) == (2, 4, 6, 1, 7)
        assert t[0] == 0

    def test_is_permutation_matrix(self):
        m = build_shift(10).as_dense().matrix
        assert np.array_equal(m.sum(axis=0), np.ones(10))
        assert np.array_equal(m.sum(axis=1), np.ones(10))

    @pytest.mark.parametrize('N', [3, 7, 2])
    def test_bad_dimension(self, N):
        with pytest.raises(DimensionError):
            build_shift(N)

    @pytest.mark.parametrize('N, length', [(256, 8), (254, 110)])
    def test_orbit_of_one(self, N, length):
        t = build_shift(N).targets
        n, steps = t[1], 1
        while n != 1:
            n, steps = t[n], steps + 1
        assert steps == length

    @pytest.mark.parametrize('N', [8, 250, 252, 254, 256])
    def test_periodicity(self, N):
        s = build_shift(N)
        k0 = multiplicative_order(N - 1).order
        assert np.array_equal(s.power(k0).targets, np.arange(N))
        assert max(s.cycle_lengths()) == k0
        assert sum(s.cycle_lengths()) == N

    def test_dense_power(self):
        s = build_shift(8).as_dense()
        assert np.array_equal(s.power(3).matrix, np.eye(8))


class TestBaker:
    @pytest.mark.parametrize('alpha', [0.0, 0.25, 0.5])
    def test_decomposition(self, alpha):
        worst = 0.0
        for N in range(4, 513, 2):
            s = build_shift(N).as_dense().matrix
            b = build_baker(BakerKind.standard, N // 2, alpha).matrix
            bp = build_baker(BakerKind.reverse, N // 2, alpha).matrix
            worst = max(worst, max_dev(s, (b + bp) / np.sqrt(2)))
        assert worst <= 1e-12

    @pytest.mark.parametrize('kind', list(BakerKind))
    def test_unitary(self, kind):
        assert build_baker(kind, 64, 0.5).unitary_deviation() <= 1e-12

    @pytest.mark.parametrize('alpha', [0.0, 0.5, 0.3])
    def test_block_structure(self, alpha):
        L = 16
        f = fourier(2 * L, alpha)
        fb = f @ build_baker('standard', L, alpha).matrix
        fbp = f @ build_baker('reverse', L, alpha).matrix
        assert np.max(np.abs(fb[:L, L:])) <= 1e-12
        assert np.max(np.abs(fb[L:, :L])) <= 1e-12
        assert np.max(np.abs(fbp[:L, :L])) <= 1e-12
        assert np.max(np.abs(fbp[L:, L:])) <= 1e-12

    @pytest.mark.parametrize('L', [2, 3, 8, 64])
    def test_saraceno_relation(self, L):
        # B(1/2) differs from the Saraceno baker by a diagonal phase in momentum
        g = fourier(2 * L, 0.5)
        delta = np.diag(baker_decoration(L))
        b = build_baker(BakerKind.standard, L, 0.5).matrix
        rebuilt = g.conj().T @ delta @ g @ saraceno_baker(L).matrix
        assert max_dev(b, rebuilt) <= 1e-12

    def test_saraceno_is_not_a_block_phase(self):
        d = baker_decoration(8)
        assert np.ptp(np.angle(d[:8])) > 0.1

    def test_saraceno_unitary(self):
        assert saraceno_baker(32).unitary_deviation() <= 1e-12


class TestFactoredShift:
    @pytest.mark.parametrize('N', [6, 8, 10, 250])
    @pytest.mark.parametrize('alpha', [0.0, 0.3, 0.5])
    def test_matches_permutation(self, N, alpha):
        m = build_shift_factored(N, alpha).materialize()
        assert max_dev(m, build_shift(N).as_dense().matrix) <= 1e-10

    def test_alpha_independence(self):
        a = build_shift_factored(30, 0.0).materialize()
        b = build_shift_factored(30, 0.77).materialize()
        assert max_dev(a, b) <= 1e-10

    def test_odd_refused(self):
        with pytest.raises(DimensionError):
            build_shift_factored(9, 0.0)


class TestPerturbed:
    @pytest.mark.parametrize('pauli', list(Pauli))
    @pytest.mark.parametrize('alpha', [0.0, 0.3, 0.5])
    def test_theta_zero_is_shift(self, pauli, alpha):
        u = build_perturbed(12, PerturbationSpec(0.0, alpha, pauli))
        assert max_dev(u.matrix, build_shift(12).as_dense().matrix) <= 1e-12

    @pytest.mark.parametrize('L', [2, 5, 32])
    def test_quarter_turn_bakers(self, L):
        N = 2 * L
        f = fourier(N, 0.5)
        minus = build_perturbed(N, PerturbationSpec(-math.pi / 4, 0.5, 'x')).matrix
        plus = build_perturbed(N, PerturbationSpec(math.pi / 4, 0.5, 'x')).matrix

        fm = f @ minus
        assert np.max(np.abs(fm[:L, L:])) <= 1e-12
        assert np.max(np.abs(fm[L:, :L])) <= 1e-12
        fp = f @ plus
        assert np.max(np.abs(fp[:L, :L])) <= 1e-12
        assert np.max(np.abs(fp[L:, L:])) <= 1e-12

        # phase relation frozen at exactly 1
        assert max_dev(minus, build_baker('standard', L, 0.5).matrix) <= 1e-12
        assert max_dev(plus, build_baker('reverse', L, 0.5).matrix) <= 1e-12

    def test_sigma_x_periodic_is_diagonal_phase(self):
        N, theta = 20, 0.3
        v = perturbation_operator(N, PerturbationSpec(theta, 0.0, 'x')).matrix
        expected = kron2_lsb(scipy.linalg.expm(-1j * theta * SIGMA_Z), N // 2)
        assert max_dev(v, expected) <= 1e-12
        u = build_perturbed(N, PerturbationSpec(theta, 0.0, 'x')).matrix
        assert max_dev(u, expected @ build_shift(N).as_dense().matrix) <= 1e-12

    def test_model_perturbation(self):
        q = scipy.linalg.expm(-0.2j * SIGMA_X)
        assert max_dev(model_perturbation(16, 0.2).materialize(), kron2_lsb(q, 8)) <= 1e-15


class TestParity:
    def test_small(self):
        r = build_parity(4).matrix
        assert r[3, 0] == 1 and r[2, 1] == 1 and r[1, 2] == 1 and r[0, 3] == 1

    @pytest.mark.parametrize('N', [4, 8, 30, 252])
    def test_shift_commutes_exactly(self, N):
        r = build_parity(N).matrix
        s = build_shift(N).as_dense().matrix
        assert np.array_equal(s @ r, r @ s)

    @pytest.mark.parametrize('N', [8, 100])
    def test_involutions(self, N):
        for op in (build_parity(N), build_half_order_op(N)):
            assert np.array_equal(op.matrix @ op.matrix, np.eye(N))

    def test_half_order_fixes_ends(self):
        rp = build_half_order_op(8).matrix
        assert rp[0, 0] == 1 and rp[7, 7] == 1 and rp[6, 1] == 1

    def test_half_order_power(self):
        s25 = build_shift(252).power(25)
        assert np.array_equal(s25.as_dense().matrix, build_half_order_op(252).matrix)

    @pytest.mark.parametrize('N', [10, 64, 100])
    def test_sigma_x_family_preserves_parity(self, N):
        r = build_parity(N).matrix
        u = build_perturbed(N, PerturbationSpec(0.3, 0.5, 'x')).matrix
        assert max_dev(u @ r, r @ u) <= 1e-10

    def test_sigma_y_family_breaks_parity(self):
        r = build_parity(20).matrix
        u = build_perturbed(20, PerturbationSpec(0.3, 0.5, 'y')).matrix
        assert max_dev(u @ r, r @ u) > 1e-3


class TestPauliConjugate:
    def test_sigma_x_exact(self):
        worst = max(pauli_fourier_conjugate(Pauli.x, L, 0.0)[1] for L in range(1, 129))
        assert worst <= 1e-12

    def test_hadamard_case(self):
        c, dev = pauli_fourier_conjugate('x', 1, 0.0)
        assert_allclose(c.matrix, SIGMA_Z, atol=1e-15)
        assert dev <= 1e-15

    def test_sigma_x_needs_periodic_phase(self):
        assert pauli_fourier_conjugate('x', 8, 0.5)[1] > 1e-3

    @pytest.mark.parametrize('pauli', ['y', 'z'])
    def test_approximate_cases(self, pauli):
        for L in (2, 4, 8, 16, 32, 64, 128):
            c, dev = pauli_fourier_conjugate(pauli, L, 0.0)
            assert dev > 1e-3
            assert max_dev(c.matrix @ c.matrix, np.eye(2 * L)) <= 1e-12
            assert np.max(np.abs(np.diag(c.matrix))) <= 1e-12


class TestClassicalBaker:
    def test_standard_step(self):
        assert classical_baker_step(0.25, 0.5) == (0.5, 0.25)

    def test_reverse_step(self):
        q, p = classical_baker_step(0.75, 0.2, BakerKind.reverse)
        assert q == 0.5 and abs(p - 0.1) <= 1e-15

    def test_reverse_boundary_first_branch(self):
        assert classical_baker_step(0.5, 0.5, 'reverse') == (1.0, 0.75)

    def test_binary_shift(self):
        # q = 0.1011b, p = 0.011b
        assert classical_baker_step(11 / 16, 3 / 8) == (3 / 8, 11 / 16)
        # q = 0.0110b, p = 0.1b
        assert classical_baker_step(6 / 16, 1 / 2) == (12 / 16, 1 / 4)

    @pytest.mark.parametrize('q, p', [(1.0, 0.2), (-0.1, 0.2), (0.3, 1.0)])
    def test_outside_square(self, q, p):
        with pytest.raises(ValueError):
            classical_baker_step(q, p)

    @pytest.mark.parametrize('kind', list(BakerKind))
    @pytest.mark.parametrize('q, p', [(0.1, 0.3), (0.4, 0.9), (0.7, 0.2), (0.95, 0.6)])
    def test_area_preserving(self, kind, q, p):
        assert abs(np.linalg.det(branch_jacobian(q, p, kind)) - 1.0) <= 1e-8

    def test_orbit(self):
        orbit = classical_baker_orbit(0.3, 0.6, steps=5)
        assert len(orbit) == 6 and orbit[1] == classical_baker_step(0.3, 0.6)

    def test_reverse_orbit_dyadic_start(self):
        orbit = classical_baker_orbit(0.25, 0.5, BakerKind.reverse, steps=3)
        assert orbit == [(0.25, 0.5), (0.5, 0.75), (0.0, 0.875), (0.0, 0.9375)]

    @pytest.mark.parametrize('kind', list(BakerKind))
    def test_lyapunov(self, kind):
        assert abs(lyapunov_exponent(kind, rng=np.random.default_rng(3)) - math.log(2)) <= 1e-6


class TestPerturbationSpec:
    def test_pauli_from_name(self):
        assert PerturbationSpec(0.1, 0.0, 'z').pauli is Pauli.z

    @pytest.mark.parametrize('theta, alpha', [(4.0, 0.0), (0.1, 1.0), (0.1, -0.1), (float('nan'), 0.0)])
    def test_invalid(self, theta, alpha):
        with pytest.raises(ValueError):
            PerturbationSpec(theta, alpha)
