# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

"""Exact-identity suite run by ``shiftbaker.py verify``."""

import logging

import numpy as np

from pyshiftbaker.operators import (BakerKind, PerturbationSpec, build_baker,
                                    build_parity, build_perturbed, build_shift,
                                    build_shift_factored, pauli_fourier_conjugate)

VERIFY_TOL = 1e-10
DEFAULT_GRID = tuple(range(4, 257, 2))


def _max_dev(a, b):
    return float(np.max(np.abs(a - b)))


class VerifyReport:
    """Worst deviation per check across the N grid."""

    def __init__(self, tol=VERIFY_TOL, inject_fault=False):
        self.tol = tol
        self.inject_fault = inject_fault
        self._checks = {}

    def record(self, check, N, deviation):
        worst = self._checks.setdefault(check, {'max_deviation': 0.0, 'worst_N': None})
        if deviation >= worst['max_deviation']:
            worst['max_deviation'] = deviation
            worst['worst_N'] = N
        if deviation > self.tol:
            logging.error(f'{check}: N={N} deviation {deviation:.3e} > {self.tol:.0e}')

    @property
    def passed(self):
        return all(c['max_deviation'] <= self.tol for c in self._checks.values())

    def to_dict(self):
        checks = {name: dict(c, passed=c['max_deviation'] <= self.tol)
                  for name, c in self._checks.items()}
        return {'tolerance': self.tol, 'passed': self.passed, 'checks': checks}


class CheckStepBase:
    def __init__(self, report, grid, alpha):
        self._report = report
        self._grid = grid
        self._alpha = alpha
        self._title = 'check'

    def header(self):
        logging.info(f'---- start {self._title} ----')

    def footer(self):
        logging.info(f'---- done {self._title} ----')

    def do(self):
        raise NotImplementedError


class CheckDecomposition(CheckStepBase):
    """S = (B + B') / sqrt(2)"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._title = 'decomposition'

    def do(self):
        for N in self._grid:
            L = N // 2
            s = build_shift(N).as_dense().matrix
            if self._report.inject_fault and N == self._grid[0]:
                logging.warning('Injecting fault into S')
                s = s.copy()
                s[0, 0] = 1.0 - s[0, 0]
            for alpha in sorted({0.0, 0.5, self._alpha}):
                b = build_baker(BakerKind.standard, L, alpha).matrix
                bp = build_baker(BakerKind.reverse, L, alpha).matrix
                self._report.record(self._title, N, _max_dev(s, (b + bp) / np.sqrt(2)))


class CheckAlphaIndependence(CheckStepBase):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._title = 'alpha_independence'

    def do(self):
        for N in self._grid:
            s = build_shift(N).as_dense().matrix
            for alpha in sorted({0.0, 0.5, self._alpha}):
                m = build_shift_factored(N, alpha).materialize()
                self._report.record(self._title, N, _max_dev(s, m))


class CheckSigmaXConjugation(CheckStepBase):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._title = 'sigma_x_conjugation'

    def do(self):
        # exact only for periodic boundary phases
        for N in self._grid:
            _, deviation = pauli_fourier_conjugate('x', N // 2, 0.0)
            self._report.record(self._title, N, deviation)


class CheckParity(CheckStepBase):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._title = 'parity_commutation'

    def do(self):
        spec = PerturbationSpec(0.3, 0.5, 'x')
        for N in self._grid:
            r = build_parity(N).matrix
            s = build_shift(N).as_dense().matrix
            self._report.record(self._title, N, _max_dev(s @ r, r @ s))
            u = build_perturbed(N, spec).matrix
            self._report.record(self._title, N, _max_dev(u @ r, r @ u))


def get_check_steps(report, grid, alpha):
    return [step(report, grid, alpha) for step in
            (CheckDecomposition, CheckAlphaIndependence,
             CheckSigmaXConjugation, CheckParity)]


def do_verify(grid=DEFAULT_GRID, alpha=0.5, inject_fault=False, tol=VERIFY_TOL):
    grid = tuple(grid)
    report = VerifyReport(tol, inject_fault)
    for step in get_check_steps(report, grid, alpha):
        step.header()
        step.do()
        step.footer()
    return report
