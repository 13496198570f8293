# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

"""The shift operator S|n> = |2n mod (N-1)>, its two-baker decomposition and
the perturbation family S(theta; alpha, P) = V(theta) S.

With N = 2L, F = F_N(alpha, alpha), A = F_L(alpha, alpha/2),
B = F_L(alpha, (1+alpha)/2) and e = exp(-i pi alpha):

    S = F^-1 (H_alpha (x) I_L) blockdiag(A, B),  H_alpha = [[1, 1], [e, -e]]/sqrt(2)

for every real alpha.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from pyshiftbaker.linalg import (BlockDiagonal, DenseOperator, DimensionError,
                                 FactoredOperator, Permutation, PhasedFourier,
                                 QubitMixer, block2x2, kron2, kron2_lsb)
from pyshiftbaker.numtheory import mod_pow, multiplicative_order

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class Pauli(Enum):
    x = 1
    y = 2
    z = 3

    def __str__(self):
        return self.name

    @property
    def matrix(self):
        return {Pauli.x: SIGMA_X, Pauli.y: SIGMA_Y, Pauli.z: SIGMA_Z}[self]


class BakerKind(Enum):
    standard = 0
    reverse = 1

    def __str__(self):
        return self.name


# target of F^-1 (sigma (x) I_L) F on the least significant qubit
_CONJUGATE_TARGET = {Pauli.x: SIGMA_Z, Pauli.y: SIGMA_X, Pauli.z: SIGMA_Y}


@dataclass(frozen=True)
class PerturbationSpec:
    theta: float
    alpha: float = 0.0
    pauli: Pauli = Pauli.x

    def __post_init__(self):
        if isinstance(self.pauli, str):
            object.__setattr__(self, 'pauli', Pauli[self.pauli])
        if not math.isfinite(self.theta) or abs(self.theta) > math.pi:
            raise ValueError(f'theta = {self.theta} outside [-pi, pi]')
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f'alpha = {self.alpha} outside [0, 1)')

    def to_dict(self):
        return {'theta': self.theta, 'alpha': self.alpha, 'pauli': str(self.pauli)}


def _half_dim(N):
    if N < 4 or N % 2:
        raise DimensionError(f'N = {N} must be an even integer >= 4')
    return N // 2


def shift_targets(N, k=1):
    """Targets of S**k: n -> 2**k n mod (N-1), N-1 fixed."""
    _half_dim(N)
    n = np.arange(N)
    mult = mod_pow(2, k, N - 1)
    targets = (mult * n) % (N - 1)
    targets[N - 1] = N - 1
    return targets


@dataclass(frozen=True, eq=False)
class ShiftOperator:
    N: int
    targets: np.ndarray

    @property
    def dim(self):
        return self.N

    @property
    def order(self):
        return multiplicative_order(self.N - 1).order

    def power(self, k):
        k %= self.order
        return ShiftOperator(self.N, shift_targets(self.N, k))

    def as_permutation(self):
        return Permutation(self.targets)

    def as_dense(self):
        return DenseOperator(self.as_permutation().materialize(), unitary=True)

    def apply(self, arr):
        return self.as_permutation().apply(arr)

    def cycle_lengths(self):
        seen = np.zeros(self.N, dtype=bool)
        lengths = []
        for start in range(self.N):
            if seen[start]:
                continue
            n, length = start, 0
            while not seen[n]:
                seen[n] = True
                n = self.targets[n]
                length += 1
            lengths.append(length)
        return lengths


def build_shift(N):
    return ShiftOperator(N, shift_targets(N))


def _baker_blocks(L, alpha):
    A = PhasedFourier(L, alpha, alpha / 2)
    B = PhasedFourier(L, alpha, (1 + alpha) / 2)
    return A, B


def _hadamard_alpha(alpha):
    e = np.exp(-1j * np.pi * alpha)
    return np.array([[1, 1], [e, -e]], dtype=complex) / np.sqrt(2)


def build_baker(kind, L, alpha):
    """B_{2L} = F^-1 blockdiag(A, -eB);  B'_{2L} = F^-1 [[0, B], [eA, 0]]."""
    if L < 1:
        raise DimensionError(f'L = {L} must be positive')
    kind = BakerKind[kind] if isinstance(kind, str) else kind

    A, B = (p.materialize() for p in _baker_blocks(L, alpha))
    e = np.exp(-1j * np.pi * alpha)
    zero = np.zeros((L, L), dtype=complex)
    if kind is BakerKind.standard:
        inner = block2x2(A, zero, zero, -e * B)
    else:
        inner = block2x2(zero, B, e * A, zero)

    f_inv = PhasedFourier(2 * L, alpha, alpha, inverse=True).materialize()
    return DenseOperator.unitary_checked(f_inv @ inner)


def saraceno_baker(L):
    """G^-1_{2L} blockdiag(G_L, G_L) with G = F(1/2, 1/2)."""
    if L < 1:
        raise DimensionError(f'L = {L} must be positive')
    g = PhasedFourier(L, 0.5, 0.5)
    op = FactoredOperator([BlockDiagonal([g, g]),
                           PhasedFourier(2 * L, 0.5, 0.5, inverse=True)])
    return op.to_dense()


def baker_decoration(L):
    """Diagonal Delta with B_{2L}(1/2) = G^-1 Delta G B_saraceno.

    Delta = blockdiag(D, i D*), D = diag(exp(i pi (n + 1/2) / 2L)).
    """
    d = np.exp(1j * np.pi * (np.arange(L) + 0.5) / (2 * L))
    return np.concatenate([d, 1j * d.conj()])


def build_shift_factored(N, alpha):
    L = _half_dim(N)
    A, B = _baker_blocks(L, alpha)
    return FactoredOperator([
        BlockDiagonal([A, B]),
        QubitMixer(_hadamard_alpha(alpha), L),
        PhasedFourier(N, alpha, alpha, inverse=True),
    ])


def qubit_exponential(spec):
    """exp(-i theta sigma_P)"""
    return scipy.linalg.expm(-1j * spec.theta * spec.pauli.matrix)


def perturbation_operator(N, spec):
    """V = F^-1 (exp(-i theta P) (x) I_L) F."""
    L = _half_dim(N)
    f = PhasedFourier(N, spec.alpha, spec.alpha)
    op = FactoredOperator([f, QubitMixer(qubit_exponential(spec), L), f.adjoint()])
    return op.to_dense()


def build_perturbed(N, spec):
    v = perturbation_operator(N, spec)
    s = build_shift(N)
    # (V S)[:, n] = V[:, targets[n]]
    return DenseOperator.unitary_checked(v.matrix[:, s.targets])


def build_perturbed_factored(N, spec):
    L = _half_dim(N)
    A, B = _baker_blocks(L, spec.alpha)
    mixer = qubit_exponential(spec) @ _hadamard_alpha(spec.alpha)
    return FactoredOperator([
        BlockDiagonal([A, B]),
        QubitMixer(mixer, L),
        PhasedFourier(N, spec.alpha, spec.alpha, inverse=True),
    ])


def model_perturbation(N, theta):
    """I_L (x) exp(-i theta sigma_x): rotation of the least significant bit."""
    L = _half_dim(N)
    q = scipy.linalg.expm(-1j * theta * SIGMA_X)
    return QubitMixer(q, L, lsb=True)


def parity_targets(N):
    _half_dim(N)
    return np.arange(N)[::-1].copy()


def half_order_targets(N):
    """R' = diag(1, R_{N-2}, 1): reflects 1..N-2, fixes 0 and N-1."""
    targets = parity_targets(N)
    targets[0] = 0
    targets[N - 1] = N - 1
    return targets


def build_parity(N):
    return DenseOperator(Permutation(parity_targets(N)).materialize(), unitary=True)


def build_half_order_op(N):
    return DenseOperator(Permutation(half_order_targets(N)).materialize(), unitary=True)


def pauli_fourier_conjugate(pauli, L, alpha):
    """C = F^-1 (sigma_P (x) I_L) F and its max-norm distance to I_L (x) target."""
    if L < 1:
        raise DimensionError(f'L = {L} must be positive')
    pauli = Pauli[pauli] if isinstance(pauli, str) else pauli

    N = 2 * L
    f = PhasedFourier(N, alpha, alpha).materialize()
    c = f.conj().T @ kron2(pauli.matrix, L) @ f
    deviation = float(np.max(np.abs(c - kron2_lsb(_CONJUGATE_TARGET[pauli], L))))
    logging.debug(f'conjugate sigma_{pauli}, L={L}, alpha={alpha}: deviation {deviation:.3e}')
    return DenseOperator.unitary_checked(c), deviation


def _check_unit_square(q, p):
    if not (0.0 <= q < 1.0 and 0.0 <= p < 1.0):
        raise ValueError(f'Point ({q}, {p}) outside the unit square [0,1)x[0,1)')


def classical_baker_step(q, p, kind=BakerKind.standard):
    _check_unit_square(q, p)
    kind = BakerKind[kind] if isinstance(kind, str) else kind

    if kind is BakerKind.standard:
        if q < 0.5:
            return 2 * q, p / 2
        return 2 * q - 1, (p + 1) / 2

    # the reverse map takes q = 1/2 into its first branch
    if q <= 0.5:
        return 2 * q, (p + 1) / 2
    return 2 * q - 1, p / 2


def classical_baker_orbit(q, p, kind=BakerKind.standard, steps=10):
    orbit = [(q, p)]
    for _ in range(steps):
        q, p = classical_baker_step(q, p, kind)
        # the reverse map lands q = 1/2 on q = 1, which is q = 0 on the torus
        if q >= 1.0:
            q -= 1.0
        orbit.append((q, p))
    return orbit


def branch_jacobian(q, p, kind=BakerKind.standard, h=1e-7):
    """Central finite-difference Jacobian of one baker step."""
    jac = np.empty((2, 2))
    for col, (dq, dp) in enumerate(((h, 0.0), (0.0, h))):
        plus = classical_baker_step(q + dq, p + dp, kind)
        minus = classical_baker_step(q - dq, p - dp, kind)
        jac[:, col] = (np.array(plus) - np.array(minus)) / (2 * h)
    return jac


def lyapunov_exponent(kind=BakerKind.standard, steps=30, rng=None, h=1e-7):
    """Mean log stretching rate along a random orbit; log 2 for both kinds."""
    rng = rng if rng is not None else np.random.default_rng(0)
    q, p = rng.uniform(0.1, 0.9, size=2)
    total = 0.0
    count = 0
    for _ in range(steps):
        # finite differences need both points on the same branch
        if min(abs(q - 0.5), q, 1 - q) > 2 * h and min(p, 1 - p) > 2 * h:
            jac = branch_jacobian(q, p, kind, h)
            total += np.log(scipy.linalg.svdvals(jac)[0])
            count += 1
        q, p = classical_baker_step(q, p, kind)
        if q >= 1.0:
            q -= 1.0
    if count == 0:
        raise RuntimeError('Orbit never left the neighbourhood of the branch cut')
    return total / count
