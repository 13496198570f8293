# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

"""Dense and structured complex linear algebra.

Dense operators are plain numpy matrices wrapped with a unitarity flag.
Structured operators are chains of cheap primitives (permutations, diagonal
phases, phased Fourier transforms, qubit mixers) that are applied to a state
in O(N log N) and can be materialized for comparison with the dense path.

Basis ordering for the qubit factor of H_2 (x) H_L is n = L*i + k, i.e. the
qubit is the most significant index, unless stated otherwise.
"""

import logging
import typing
from dataclasses import dataclass

import numpy as np
import scipy.linalg

UNITARY_TOL = 1e-10
NORM_TOL = 1e-12
EIG_RESIDUAL_TOL = 1e-8
DEFAULT_SOLVER_CAP = 2048

TWO_PI = 2.0 * np.pi


class DimensionError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class SolverCapError(RuntimeError):
    pass


def unitary_deviation(matrix):
    """Max-norm of U^dagger U - I."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix
                               - np.eye(matrix.shape[0]))))


def _readonly(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise DimensionError(
                f'State needs a 1-D amplitude list of size >= 2, got shape {amps.shape}')
        object.__setattr__(self, 'amplitudes', amps)

        if self.normalized:
            norm2 = float(np.vdot(amps, amps).real)
            if abs(norm2 - 1.0) > NORM_TOL:
                raise ValueError(f'State flagged normalized has |a|^2 = {norm2!r}')

    @property
    def dim(self):
        return self.amplitudes.size

    @classmethod
    def basis(cls, dim, n):
        if not 0 <= n < dim:
            raise DimensionError(f'Basis label {n} outside 0..{dim - 1}')
        amps = np.zeros(dim, dtype=complex)
        amps[n] = 1.0
        return cls(amps, normalized=True)

    @classmethod
    def random(cls, dim, rng):
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return cls(amps / np.linalg.norm(amps), normalized=True)

    def overlap(self, other):
        """<self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Square complex matrix; row = output label, column = input label.

    The ``unitary`` flag is only set by :meth:`unitary_checked`, which
    verifies ||U^dagger U - I||_max before trusting it.
    """
    matrix: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionError(f'Operator matrix must be square, got {m.shape}')
        object.__setattr__(self, 'matrix', m)

    @classmethod
    def unitary_checked(cls, matrix, tol=UNITARY_TOL):
        dev = unitary_deviation(matrix)
        if dev > tol:
            raise NotUnitaryError(f'Operator deviates from unitarity by {dev:.3e} > {tol:.0e}')
        return cls(matrix, unitary=True)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def unitary_deviation(self):
        return unitary_deviation(self.matrix)

    def adjoint(self):
        return DenseOperator(self.matrix.conj().T, unitary=self.unitary)

    def power(self, k):
        if k < 0:
            if not self.unitary:
                raise NotUnitaryError('Negative powers need a unitary operator')
            return self.adjoint().power(-k)
        return DenseOperator(np.linalg.matrix_power(self.matrix, k),
                             unitary=self.unitary)

    def apply(self, arr):
        return self.matrix @ arr

    def materialize(self):
        return np.array(self.matrix)


class Primitive:
    """One factor of a FactoredOperator.

    ``apply`` acts along axis 0, so both a state (shape (dim,)) and a stack
    of column states (shape (dim, k)) are accepted.
    """

    def __init__(self, dim):
        self.dim = dim

    def apply(self, arr):
        raise NotImplementedError

    def adjoint(self):
        raise NotImplementedError

    def materialize(self):
        return self.apply(np.eye(self.dim, dtype=complex))


class Permutation(Primitive):
    """|n> -> |targets[n]>"""

    def __init__(self, targets):
        targets = np.asarray(targets, dtype=np.intp)
        super().__init__(targets.size)
        if not np.array_equal(np.sort(targets), np.arange(self.dim)):
            raise ValueError('Targets do not form a permutation')
        self.targets = targets
        self.targets.setflags(write=False)

    def apply(self, arr):
        out = np.empty_like(arr)
        out[self.targets] = arr
        return out

    def adjoint(self):
        inverse = np.empty_like(self.targets)
        inverse[self.targets] = np.arange(self.dim)
        return Permutation(inverse)

    def materialize(self):
        m = np.zeros((self.dim, self.dim), dtype=complex)
        m[self.targets, np.arange(self.dim)] = 1.0
        return m


class DiagonalPhase(Primitive):
    def __init__(self, phases):
        phases = np.asarray(phases, dtype=complex)
        super().__init__(phases.size)
        self.phases = phases

    def apply(self, arr):
        if arr.ndim == 1:
            return self.phases * arr
        return self.phases[:, None] * arr

    def adjoint(self):
        return DiagonalPhase(self.phases.conj())

    def materialize(self):
        return np.diag(self.phases)


class PhasedFourier(Primitive):
    """F_N(alpha, beta)_{nm} = exp(-2 pi i (n+alpha)(m+beta)/N) / sqrt(N).

    Applied as e^{-2 pi i alpha beta/N} . diag(e^{-2 pi i beta n/N}) . DFT .
    diag(e^{-2 pi i alpha m/N}) with an orthonormal FFT.
    """

    def __init__(self, dim, alpha=0.0, beta=0.0, inverse=False):
        if dim < 1:
            raise DimensionError(f'Fourier dimension {dim} must be positive')
        super().__init__(dim)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.inverse = inverse

        idx = np.arange(dim)
        self._pre = np.exp(-1j * TWO_PI * self.alpha * idx / dim)
        self._post = np.exp(-1j * TWO_PI * self.beta * idx / dim)
        self._global = np.exp(-1j * TWO_PI * self.alpha * self.beta / dim)

    def _scale(self, vec, arr):
        return vec * arr if arr.ndim == 1 else vec[:, None] * arr

    def apply(self, arr):
        if self.inverse:
            tmp = self._scale(self._post.conj(), arr)
            tmp = np.fft.ifft(tmp, axis=0, norm='ortho')
            return np.conj(self._global) * self._scale(self._pre.conj(), tmp)

        tmp = self._scale(self._pre, arr)
        tmp = np.fft.fft(tmp, axis=0, norm='ortho')
        return self._global * self._scale(self._post, tmp)

    def adjoint(self):
        return PhasedFourier(self.dim, self.alpha, self.beta, not self.inverse)

    def materialize(self):
        n = np.arange(self.dim)[:, None]
        m = np.arange(self.dim)[None, :]
        # integer part reduced first to keep the phase small
        phase = ((n * m) % self.dim + n * self.beta + self.alpha * m
                 + self.alpha * self.beta) / self.dim
        mat = np.exp(-1j * TWO_PI * phase) / np.sqrt(self.dim)
        return mat.conj().T if self.inverse else mat


class BlockDiagonal(Primitive):
    """blockdiag(P_0, P_1, ...) of equally sized primitives."""

    def __init__(self, blocks):
        blocks = tuple(blocks)
        sizes = {b.dim for b in blocks}
        if len(sizes) != 1:
            raise DimensionError(f'Blocks have unequal sizes {sorted(sizes)}')
        self.blocks = blocks
        self.block_dim = blocks[0].dim
        super().__init__(self.block_dim * len(blocks))

    def apply(self, arr):
        out = np.empty(arr.shape, dtype=complex)
        for i, block in enumerate(self.blocks):
            sl = slice(i * self.block_dim, (i + 1) * self.block_dim)
            out[sl] = block.apply(arr[sl])
        return out

    def adjoint(self):
        return BlockDiagonal(b.adjoint() for b in self.blocks)

    def materialize(self):
        return scipy.linalg.block_diag(*(b.materialize() for b in self.blocks))


class QubitMixer(Primitive):
    """q (x) I_L, or I_L (x) q when ``lsb`` is set."""

    def __init__(self, q, L, lsb=False):
        q = np.asarray(q, dtype=complex)
        if q.shape != (2, 2):
            raise DimensionError(f'Qubit mixer must be 2x2, got {q.shape}')
        if L < 1:
            raise DimensionError(f'L = {L} must be positive')
        super().__init__(2 * L)
        self.q = q
        self.L = L
        self.lsb = lsb

    def apply(self, arr):
        rest = arr.shape[1:]
        if self.lsb:
            a = arr.reshape((self.L, 2) + rest)
            out = np.einsum('ij,kj...->ki...', self.q, a)
        else:
            a = arr.reshape((2, self.L) + rest)
            out = np.einsum('ij,jk...->ik...', self.q, a)
        return out.reshape(arr.shape)

    def adjoint(self):
        return QubitMixer(self.q.conj().T, self.L, self.lsb)

    def materialize(self):
        return kron2_lsb(self.q, self.L) if self.lsb else kron2(self.q, self.L)


class FactoredOperator:
    """Product of primitives; ``factors`` are listed in application order."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError('FactoredOperator needs at least one factor')
        dims = {f.dim for f in self.factors}
        if len(dims) != 1:
            raise DimensionError(f'Factors have mismatched dimensions {sorted(dims)}')
        self.dim = self.factors[0].dim

    def apply(self, arr):
        for factor in self.factors:
            arr = factor.apply(arr)
        return arr

    def adjoint(self):
        return FactoredOperator(f.adjoint() for f in reversed(self.factors))

    def materialize(self):
        return self.apply(np.eye(self.dim, dtype=complex))

    def to_dense(self):
        return DenseOperator.unitary_checked(self.materialize())


Operator = typing.Union[DenseOperator, FactoredOperator, Primitive]


def build_phased_fourier(N, alpha, beta):
    if N < 2:
        raise DimensionError(f'Fourier dimension N = {N} must be at least 2')
    return DenseOperator.unitary_checked(PhasedFourier(N, alpha, beta).materialize())


def apply(op, v):
    """op . v for any operator kind; accepts a StateVector or a raw array."""
    if isinstance(v, StateVector):
        if v.dim != op.dim:
            raise DimensionError(f'Operator dim {op.dim} does not match state dim {v.dim}')
        out = op.apply(v.amplitudes)
        keep_norm = v.normalized and not (isinstance(op, DenseOperator) and not op.unitary)
        if keep_norm:
            # renormalize round-off only; a real norm change means a non-unitary op
            norm = np.linalg.norm(out)
            if abs(norm - 1.0) <= 1e-10:
                out = out / norm
            else:
                keep_norm = False
        return StateVector(out, normalized=keep_norm)

    arr = np.asarray(v, dtype=complex)
    if arr.shape[0] != op.dim:
        raise DimensionError(f'Operator dim {op.dim} does not match input dim {arr.shape[0]}')
    return op.apply(arr)


def compose(a, b):
    """a . b (b acts first)."""
    if a.dim != b.dim:
        raise DimensionError(f'Cannot compose dims {a.dim} and {b.dim}')

    if isinstance(a, FactoredOperator) and isinstance(b, FactoredOperator):
        return FactoredOperator(b.factors + a.factors)

    if isinstance(a, DenseOperator) and isinstance(b, DenseOperator):
        unitary = a.unitary and b.unitary
    else:
        unitary = False
    return DenseOperator(a.materialize() @ b.materialize(), unitary=unitary)


def adjoint(a):
    return a.adjoint()


def kron2(q, L):
    """q (x) I_L: row/col n = L*i + k with i the qubit label."""
    q = np.asarray(q, dtype=complex)
    if q.shape != (2, 2):
        raise DimensionError(f'kron2 needs a 2x2 matrix, got {q.shape}')
    return np.kron(q, np.eye(L))


def kron2_lsb(q, L):
    """I_L (x) q: qubit pairs (2k, 2k+1)."""
    q = np.asarray(q, dtype=complex)
    if q.shape != (2, 2):
        raise DimensionError(f'kron2_lsb needs a 2x2 matrix, got {q.shape}')
    return np.kron(np.eye(L), q)


def block2x2(A, B, C, D):
    blocks = [np.asarray(x, dtype=complex) for x in (A, B, C, D)]
    shape = blocks[0].shape
    if len(shape) != 2 or shape[0] != shape[1] or any(b.shape != shape for b in blocks):
        raise DimensionError(f'block2x2 needs four equal square blocks, got {[b.shape for b in blocks]}')
    return np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]])


@dataclass(frozen=True, eq=False)
class EigenphaseResult:
    phases: np.ndarray
    residuals: np.ndarray
    vectors: np.ndarray

    def __len__(self):
        return self.phases.size

    @property
    def eigenvalues(self):
        return np.exp(1j * self.phases)

    def pairs(self):
        return list(zip(self.phases.tolist(), self.residuals.tolist()))


def eigenphases(u, cap=DEFAULT_SOLVER_CAP):
    """Eigenphases in [0, 2 pi) of a unitary, sorted ascending.

    Uses the complex Schur form, which is diagonal for a normal matrix, so
    degenerate eigenvalues still get an orthonormal eigenbasis.
    """
    if not u.unitary:
        raise NotUnitaryError('Eigenphases need a unitary-flagged operator')
    if u.dim > cap:
        raise SolverCapError(f'Dimension {u.dim} exceeds eigen-solver cap {cap}')

    T, Z = scipy.linalg.schur(u.matrix, output='complex')
    lam = np.diag(T)
    phases = np.mod(np.angle(lam), TWO_PI)
    phases[phases >= TWO_PI] = 0.0

    order = np.argsort(phases, kind='stable')
    phases = phases[order]
    Z = Z[:, order]
    residuals = np.linalg.norm(u.matrix @ Z - Z * np.exp(1j * phases), axis=0)

    worst = float(residuals.max())
    logging.debug(f'eigenphases: dim {u.dim}, max residual {worst:.2e}')
    if worst > EIG_RESIDUAL_TOL:
        logging.warning(f'Eigenpair residual {worst:.2e} above {EIG_RESIDUAL_TOL:.0e}')

    return EigenphaseResult(phases, residuals, Z)
