# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

"""Fidelity decay f(t) = |<1| S^-t S(theta; alpha, P)^t |1>|^2.

The perturbed state is evolved forward one factored step at a time and read
out at the label 2**t mod (N-1), so no dense power of S is ever formed.
"""

import logging
import typing
from dataclasses import dataclass

import numpy as np
import scipy.signal

from pyshiftbaker.linalg import DimensionError, FactoredOperator, Permutation
from pyshiftbaker.numtheory import multiplicative_order, shift_orbit_label
from pyshiftbaker.operators import (PerturbationSpec, build_perturbed_factored,
                                    build_shift, half_order_targets,
                                    model_perturbation, perturbation_operator,
                                    shift_targets)
from pyshiftbaker.output import csv_text

INTERACTION_MAX_N = 512
SLOPE_FLOOR = 1e-8
_LOG_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class FidelityTrace:
    N: int
    spec: PerturbationSpec
    times: np.ndarray
    f: np.ndarray
    f_model: np.ndarray
    k0: int
    predicted_shoulder: int
    shoulders: typing.Tuple[int, ...] = ()

    @property
    def T(self):
        return int(self.times[-1])

    def flags(self):
        """Per-row markers for the order, half order and detected shoulders."""
        out = []
        for t in self.times:
            marks = []
            if t > 0 and t % self.k0 == 0:
                marks.append('k0')
            if self.k0 % 2 == 0 and t % self.k0 == self.k0 // 2:
                marks.append('half')
            if t in self.shoulders:
                marks.append('shoulder')
            out.append('|'.join(marks))
        return out


def model_bits(N):
    """Qubit count used by the analytic model."""
    return (N - 1).bit_length()


def model_fidelity(theta, M_bits, t):
    """|cos^2(r theta)|^((r+1)M - t) |cos^2((r+1) theta)|^(t - rM), r = t // M."""
    if M_bits < 1:
        raise ValueError(f'M_bits = {M_bits} must be positive')
    if t < 0:
        raise ValueError(f't = {t} must be non-negative')

    r = t // M_bits
    low = abs(np.cos(r * theta) ** 2)
    high = abs(np.cos((r + 1) * theta) ** 2)
    return float(low ** ((r + 1) * M_bits - t) * high ** (t - r * M_bits))


def _evolve_fidelity(N, op, T):
    """f(t) of |1> under ``op``, read out at 2**t mod (N-1)."""
    psi = np.zeros(N, dtype=complex)
    psi[1] = 1.0
    f = np.empty(T + 1)
    f[0] = 1.0
    for t in range(1, T + 1):
        psi = op.apply(psi)
        f[t] = abs(psi[shift_orbit_label(N, t)]) ** 2
    return f


def fidelity_trace(N, spec, T):
    if T < 1:
        raise ValueError(f'Trace length T = {T} must be at least 1')

    op = build_perturbed_factored(N, spec)
    info = multiplicative_order(N - 1)
    logging.info(f'fidelity N={N} theta={spec.theta} alpha={spec.alpha} '
                 f'P=sigma_{spec.pauli} T={T} (k0={info.order})')

    f = _evolve_fidelity(N, op, T)
    bits = model_bits(N)
    f_model = np.array([model_fidelity(spec.theta, bits, t) for t in range(T + 1)])

    return FidelityTrace(N, spec, np.arange(T + 1), f, f_model,
                         info.order, info.predicted_shoulder)


def model_trace(N, spec, T):
    """Fidelity of the single-bit rotation model I_L (x) exp(-i theta sigma_x) under S."""
    if T < 1:
        raise ValueError(f'Trace length T = {T} must be at least 1')
    op = FactoredOperator([Permutation(shift_targets(N)),
                           model_perturbation(N, spec.theta)])
    return _evolve_fidelity(N, op, T)


@dataclass(frozen=True)
class InteractionCheck:
    times: typing.Tuple[int, ...]
    fidelities: typing.Tuple[float, ...]
    deviations: typing.Tuple[float, ...]
    order_deviation: float
    half_order_deviation: typing.Optional[float]


def _interaction_factor(v, N, l):
    """V_l = S^-l V S^l for the permutation S."""
    perm = shift_targets(N, l)
    return v[np.ix_(perm, perm)]


def interaction_picture_check(N, spec, t_list, psi0=None):
    """Compare |<psi0|V_t ... V_1|psi0>|^2 with forward evolution."""
    if N > INTERACTION_MAX_N:
        raise DimensionError(f'N = {N} above the dense interaction-picture limit {INTERACTION_MAX_N}')

    t_list = sorted(int(t) for t in t_list)
    if t_list and t_list[0] < 0:
        raise ValueError('Times must be non-negative')

    v = perturbation_operator(N, spec).matrix
    shift = build_shift(N)
    op = build_perturbed_factored(N, spec)

    if psi0 is None:
        psi0 = np.zeros(N, dtype=complex)
        psi0[1] = 1.0
    psi0 = np.asarray(psi0, dtype=complex)

    product = psi0.copy()
    forward = psi0.copy()
    fids, devs = [], []
    step = 0
    for t in t_list:
        while step < t:
            step += 1
            product = _interaction_factor(v, N, step) @ product
            forward = op.apply(forward)
        # S^-t forward: component b is forward[targets_t[b]]
        echo = forward[shift_targets(N, t)]
        f_product = abs(np.vdot(psi0, product)) ** 2
        f_forward = abs(np.vdot(psi0, echo)) ** 2
        fids.append(float(f_product))
        devs.append(float(abs(f_product - f_forward)))

    info = multiplicative_order(N - 1)
    order_dev = float(np.max(np.abs(_interaction_factor(v, N, shift.order) - v)))
    half_dev = None
    if info.half_order_is_minus_one:
        r = half_order_targets(N)
        half_dev = float(np.max(np.abs(_interaction_factor(v, N, info.order // 2)
                                       - v[np.ix_(r, r)])))

    return InteractionCheck(tuple(t_list), tuple(fids), tuple(devs), order_dev, half_dev)


@dataclass(frozen=True)
class LogFit:
    slope: float
    intercept: float
    max_residual: float


def fit_log_slope(trace, start, stop):
    """Least-squares line through log f(t) for start <= t <= stop."""
    if not 0 <= start < stop <= trace.T:
        raise ValueError(f'Fit window [{start}, {stop}] invalid for T = {trace.T}')
    t = trace.times[start:stop + 1].astype(float)
    y = np.log(np.maximum(trace.f[start:stop + 1], _LOG_FLOOR))
    slope, intercept = np.polyfit(t, y, 1)
    residual = float(np.max(np.abs(y - (slope * t + intercept))))
    return LogFit(float(slope), float(intercept), residual)


@dataclass(frozen=True)
class ShoulderResult:
    times: typing.Tuple[int, ...]
    too_short: bool = False


def _window_slope(t, y):
    return np.polyfit(t, y, 1)[0]


def detect_shoulders(trace, window=5, factor=1.5):
    """Times where the local decay rate of log f changes abruptly.

    A point t is a candidate when the slope over [t - window, t] is
    negative and the slope over [t, t + window] differs from it by at least
    (factor - 1) times its magnitude. Each run of consecutive candidates
    reports its strongest point.
    """
    if window < 1 or factor <= 1.0:
        raise ValueError(f'window={window} must be >= 1 and factor={factor} > 1')

    T = trace.T
    if T < 2 * window:
        logging.warning(f'Trace of length {T} too short for shoulder window {window}')
        return ShoulderResult((), too_short=True)
    if trace.predicted_shoulder and T < 3 * trace.predicted_shoulder:
        logging.info(f'Trace length {T} below 3x predicted shoulder {trace.predicted_shoulder}')

    y = np.log(np.maximum(trace.f, _LOG_FLOOR))
    tt = trace.times.astype(float)

    candidates = []
    for t in range(window, T - window + 1):
        left = _window_slope(tt[t - window:t + 1], y[t - window:t + 1])
        right = _window_slope(tt[t:t + window + 1], y[t:t + window + 1])
        if left > -SLOPE_FLOOR:
            continue
        change = abs(right - left) / abs(left)
        if change >= factor - 1.0:
            candidates.append((t, change))

    shoulders = []
    group = []
    for t, change in candidates:
        if group and t != group[-1][0] + 1:
            shoulders.append(max(group, key=lambda c: c[1])[0])
            group = []
        group.append((t, change))
    if group:
        shoulders.append(max(group, key=lambda c: c[1])[0])

    logging.debug(f'shoulders N={trace.N}: {shoulders}')
    return ShoulderResult(tuple(shoulders))


@dataclass(frozen=True)
class OscillationLags:
    trough: int
    peak: int


def oscillation_lags(trace, start, stop=None):
    """First trough and following peak of the autocorrelation of detrended log f."""
    stop = trace.T if stop is None else stop
    y = np.log(np.maximum(trace.f[start:stop + 1], _LOG_FLOOR))
    if y.size < 8:
        raise ValueError(f'Oscillation window [{start}, {stop}] too short')

    y = scipy.signal.detrend(y, type='linear')
    ac = np.correlate(y, y, mode='full')[y.size - 1:]
    if ac[0] <= 0.0:
        raise ValueError('Detrended trace has no oscillating component')
    ac = ac / ac[0]

    max_lag = y.size // 2
    trough = int(np.argmin(ac[1:max_lag + 1])) + 1
    if trough >= max_lag:
        return OscillationLags(trough, trough)
    peak = int(np.argmax(ac[trough + 1:max_lag + 1])) + trough + 1
    return OscillationLags(trough, peak)


def trace_csv(trace, config=None):
    """CSV text: a '#' config comment, a header and one row per t."""
    meta = {'N': trace.N, 'k0': trace.k0, 'predicted_shoulder': trace.predicted_shoulder}
    meta.update(trace.spec.to_dict())
    if config:
        meta.update(config)
    rows = ((int(t), float(f), float(fm), flag)
            for t, f, fm, flag in zip(trace.times, trace.f, trace.f_model, trace.flags()))
    return csv_text(['t', 'f', 'f_model', 'flags'], rows, meta)
