# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

import logging
import typing
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.stats

from pyshiftbaker.linalg import (DEFAULT_SOLVER_CAP, TWO_PI, DenseOperator,
                                 DimensionError, eigenphases)

PARITY_TOL = 1e-10
SECTOR_UNITARY_TOL = 1e-9
ZERO_SPACING = 1e-6


class ParityError(ValueError):
    pass


class Sector(Enum):
    even = 1
    odd = -1
    full = 0

    def __str__(self):
        return self.name


def goe_pdf(s):
    """Wigner surmise for the GOE: (pi s / 2) exp(-pi s^2 / 4)."""
    s = np.asarray(s, dtype=float)
    return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s ** 2)


def goe_cdf(s):
    s = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-0.25 * np.pi * s ** 2)


def poisson_pdf(s):
    s = np.asarray(s, dtype=float)
    return np.exp(-s)


def poisson_cdf(s):
    s = np.asarray(s, dtype=float)
    return 1.0 - np.exp(-s)


def sample_goe_spacings(n, rng):
    u = rng.random(n)
    return np.sqrt(-4.0 * np.log1p(-u) / np.pi)


def sample_poisson_spacings(n, rng):
    return -np.log1p(-rng.random(n))


def _parity_pairs(parity):
    """Representatives n < p(n) of a fixed-point-free involutive permutation."""
    m = parity.matrix
    if not np.all((np.abs(m) < 1e-12) | (np.abs(m - 1) < 1e-12)):
        raise ParityError('Parity operator is not a permutation matrix')
    p = np.argmax(np.abs(m), axis=0)
    if not np.array_equal(np.sort(p), np.arange(m.shape[0])):
        raise ParityError('Parity operator is not a permutation matrix')
    idx = np.arange(p.size)
    if not np.array_equal(p[p], idx) or np.any(p == idx):
        raise ParityError('Parity must be an involution without fixed points')
    reps = idx[idx < p]
    return reps, p[reps]


def _sector_basis(parity, sign):
    reps, partners = _parity_pairs(parity)
    q = np.zeros((parity.dim, reps.size), dtype=complex)
    cols = np.arange(reps.size)
    q[reps, cols] = 1 / np.sqrt(2)
    q[partners, cols] = sign / np.sqrt(2)
    return q


def sector_leakage(u, parity):
    """Max-norm of the block of u coupling the even and odd sectors."""
    even = _sector_basis(parity, 1)
    odd = _sector_basis(parity, -1)
    um = u.matrix
    return float(max(np.max(np.abs(odd.conj().T @ um @ even)),
                     np.max(np.abs(even.conj().T @ um @ odd))))


def desymmetrize(u, parity, sector, tol=PARITY_TOL):
    """Restriction of u to the +1 or -1 eigenspace of the parity."""
    sector = Sector[sector] if isinstance(sector, str) else sector
    if u.dim != parity.dim:
        raise DimensionError(f'Operator dim {u.dim} does not match parity dim {parity.dim}')

    comm = float(np.max(np.abs(u.matrix @ parity.matrix - parity.matrix @ u.matrix)))
    if comm > tol:
        raise ParityError(f'[u, R] = {comm:.3e} exceeds {tol:.0e}; use the full spectrum')
    if comm > tol / 100:
        logging.warning(f'Parity commutator {comm:.3e} close to tolerance')

    if sector is Sector.full:
        return u

    q = _sector_basis(parity, sector.value)
    return DenseOperator.unitary_checked(q.conj().T @ u.matrix @ q, tol=SECTOR_UNITARY_TOL)


@dataclass(frozen=True, eq=False)
class SpacingSample:
    spacings: np.ndarray
    ks_goe: float
    ks_poisson: float
    subspace: Sector = Sector.full
    source: typing.Optional[dict] = None

    @classmethod
    def from_spacings(cls, spacings, subspace=Sector.full, source=None):
        spacings = np.asarray(spacings, dtype=float)
        if spacings.size == 0:
            raise ValueError('Empty spacing sample')
        ks_goe = scipy.stats.kstest(spacings, goe_cdf).statistic
        ks_poisson = scipy.stats.kstest(spacings, poisson_cdf).statistic
        return cls(spacings, float(ks_goe), float(ks_poisson), subspace, source)

    def __len__(self):
        return self.spacings.size

    def fraction_below(self, s):
        return float(np.mean(self.spacings < s))

    def zero_count(self, eps=ZERO_SPACING):
        return int(np.count_nonzero(self.spacings < eps))

    def summary(self):
        out = {
            'subspace': str(self.subspace),
            'count': len(self),
            'mean': float(np.mean(self.spacings)),
            'ks_goe': self.ks_goe,
            'ks_poisson': self.ks_poisson,
            'fraction_below_0.1': self.fraction_below(0.1),
            'zero_spacings': self.zero_count(),
        }
        if self.source:
            out['source'] = self.source
        return out


def circular_spacings(phases):
    """Unfolded nearest-neighbour spacings on the circle, wrap gap included."""
    phases = np.sort(np.asarray(phases, dtype=float))
    d = phases.size
    gaps = np.append(np.diff(phases), phases[0] + TWO_PI - phases[-1])
    return gaps * d / TWO_PI


def spacing_sample(u_sub, cap=DEFAULT_SOLVER_CAP, subspace=Sector.full, source=None):
    eig = eigenphases(u_sub, cap)
    spacings = circular_spacings(eig.phases)
    sample = SpacingSample.from_spacings(spacings, subspace, source)
    logging.info(f'spacings d={len(sample)} ks_goe={sample.ks_goe:.4f} '
                 f'ks_poisson={sample.ks_poisson:.4f}')
    return sample


@dataclass(frozen=True, eq=False)
class SpacingHistogram:
    edges: np.ndarray
    centers: np.ndarray
    density: np.ndarray
    goe: np.ndarray
    poisson: np.ndarray

    def rows(self):
        return zip(self.centers, self.density, self.goe, self.poisson)


def histogram(sample, bins=40, s_max=4.0):
    if bins < 4:
        raise ValueError(f'bins = {bins} must be at least 4')
    spacings = sample.spacings if isinstance(sample, SpacingSample) else np.asarray(sample)
    if spacings.size == 0:
        raise ValueError('Empty spacing sample')
    if not np.any((spacings >= 0) & (spacings <= s_max)):
        raise ValueError(f'No spacing falls inside [0, {s_max}]')

    density, edges = np.histogram(spacings, bins=bins, range=(0.0, s_max), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return SpacingHistogram(edges, centers, density, goe_pdf(centers), poisson_pdf(centers))
