# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

import argparse
import dataclasses
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from pyshiftbaker import __version__
from pyshiftbaker.config import ConfigError, ExperimentConfig, load_config, parse_n_list
from pyshiftbaker.fidelity import detect_shoulders, fidelity_trace, trace_csv
from pyshiftbaker.linalg import SolverCapError
from pyshiftbaker.numtheory import multiplicative_order
from pyshiftbaker.operators import Pauli, build_parity, build_perturbed
from pyshiftbaker.output import atomic_write_json, atomic_write_text, csv_text, json_text
from pyshiftbaker.spectral import (Sector, SpacingSample, desymmetrize, histogram,
                                   sample_goe_spacings, spacing_sample)
from pyshiftbaker.verify import DEFAULT_GRID, do_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

SPECTRUM_DEFAULTS = {'N': [510], 'theta': 0.3, 'alpha': 0.5, 'pauli': Pauli.x}

# argparse dest -> ExperimentConfig field
_CONFIG_FLAGS = ('N', 'theta', 'alpha', 'pauli', 'T', 'sector', 'bins', 's_max',
                 'seed', 'cap', 'window', 'factor', 'out')


def _make_config(args, defaults=None):
    cfg = ExperimentConfig()
    if defaults:
        cfg.update(defaults)
    if args.config:
        cfg.update(load_config(args.config))
    cfg.update({k: getattr(args, k, None) for k in _CONFIG_FLAGS})
    return cfg.validate()


def _fidelity_one(N, cfg):
    trace = fidelity_trace(N, cfg.spec(), cfg.T)
    result = detect_shoulders(trace, cfg.window, cfg.factor)
    trace = dataclasses.replace(trace, shoulders=result.times)
    info = multiplicative_order(N - 1)

    config = cfg.to_dict()
    config['N'] = N
    atomic_write_text(os.path.join(cfg.out, f'fidelity_N{N}.csv'), trace_csv(trace, config))

    sidecar = {
        'N': N,
        'k0': info.order,
        'half_order_is_minus_one': info.half_order_is_minus_one,
        'predicted_shoulder': info.predicted_shoulder,
        'detected_shoulders': list(result.times),
        'too_short': result.too_short,
        'config': config,
    }
    atomic_write_json(os.path.join(cfg.out, f'fidelity_N{N}.json'), sidecar)
    return sidecar


def cmd_fidelity(cfg, jobs=1):
    os.makedirs(cfg.out, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        sidecars = list(pool.map(lambda n: _fidelity_one(n, cfg), cfg.N))
    print(json_text(sidecars), end='')
    return EXIT_OK


def _spectrum_one(N, cfg):
    if N > cfg.cap:
        raise SolverCapError(f'N = {N} exceeds eigen-solver cap {cfg.cap}')

    spec = cfg.spec()
    u = build_perturbed(N, spec)
    u_sub = desymmetrize(u, build_parity(N), cfg.sector)

    source = dict(spec.to_dict(), N=N)
    sample = spacing_sample(u_sub, cfg.cap, cfg.sector, source)
    hist = histogram(sample, cfg.bins, cfg.s_max)

    rng = np.random.default_rng(cfg.seed)
    synthetic = SpacingSample.from_spacings(sample_goe_spacings(len(sample), rng))

    config = cfg.to_dict()
    config['N'] = N
    stem = os.path.join(cfg.out, f'spectrum_N{N}_{cfg.sector}')
    atomic_write_text(stem + '_hist.csv',
                      csv_text(['s', 'density', 'goe', 'poisson'], hist.rows(), config))
    atomic_write_text(stem + '_spacings.csv',
                      csv_text(['i', 's'], enumerate(sample.spacings.tolist()), config))

    summary = sample.summary()
    summary['synthetic_goe_ks'] = synthetic.ks_goe
    summary['config'] = config
    atomic_write_json(stem + '_ks.json', summary)
    return summary


def cmd_spectrum(cfg):
    os.makedirs(cfg.out, exist_ok=True)
    summaries = [_spectrum_one(N, cfg) for N in cfg.N]
    print(json_text(summaries), end='')
    return EXIT_OK


def cmd_order(modulus):
    info = multiplicative_order(modulus)
    print(json_text(info.to_dict()), end='')
    return EXIT_OK


def cmd_verify(grid=DEFAULT_GRID, alpha=0.5, inject_fault=False, out=None):
    report = do_verify(grid, alpha, inject_fault).to_dict()
    print(json_text(report), end='')
    if out:
        atomic_write_json(out, report)
    return EXIT_OK if report['passed'] else EXIT_FAILED


def _enum_arg(enum):
    def parse(name):
        try:
            return enum[name]
        except KeyError:
            raise argparse.ArgumentTypeError(f'invalid choice {name!r}') from None
    return parse


def _add_experiment_args(parser, fidelity):
    parser.add_argument('--config', help='key: value experiment file; flags override it')
    parser.add_argument('--N', type=parse_n_list, help='comma-separated even dimensions')
    parser.add_argument('--theta', type=float, help='perturbation angle (radians)')
    parser.add_argument('--alpha', type=float, help='Fourier boundary phase in [0, 1)')
    parser.add_argument('--pauli', type=_enum_arg(Pauli), choices=list(Pauli),
                        help='qubit perturbation axis')
    parser.add_argument('--cap', type=int, help='eigen-solver dimension cap')
    parser.add_argument('--out', help='output directory')
    if fidelity:
        parser.add_argument('--T', type=int, help='trace length')
        parser.add_argument('--window', type=int, help='shoulder detector half-window')
        parser.add_argument('--factor', type=float, help='shoulder slope change factor')
        parser.add_argument('--jobs', type=int, default=1, help='parallel traces')
    else:
        parser.add_argument('--sector', type=_enum_arg(Sector), choices=list(Sector),
                            help='parity sector')
        parser.add_argument('--bins', type=int, help='histogram bins')
        parser.add_argument('--smax', dest='s_max', type=float, help='histogram range')
        parser.add_argument('--seed', type=int, help='seed for the synthetic reference sample')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='shiftbaker',
        description='Shift operator as a sum of two quantum baker maps')
    parser.add_argument('--verbose', action='store_true', default=False,
                        help='Debug logging')
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', help='run the exact-identity suite')
    verify.add_argument('--N', type=parse_n_list, default=list(DEFAULT_GRID),
                        help='comma-separated even dimensions')
    verify.add_argument('--alpha', type=float, default=0.5,
                        help='extra boundary phase to check')
    verify.add_argument('--self-test-fault', action='store_true', default=False,
                        help='corrupt one matrix entry; the run must fail')
    verify.add_argument('--out', help='also write the JSON report here')

    _add_experiment_args(sub.add_parser('fidelity', help='fidelity decay traces'), True)
    _add_experiment_args(sub.add_parser('spectrum', help='level spacing statistics'), False)

    order = sub.add_parser('order', help='multiplicative order of 2')
    order.add_argument('modulus', type=int, help='odd modulus N-1')
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='[%(asctime)s] [%(levelname)-8s]: %(message)s',
                        datefmt='%Y-%m-%d %H:%M:%S')

    try:
        if args.command == 'verify':
            for n in args.N:
                if n < 4 or n % 2:
                    raise ConfigError(f'N = {n} must be an even integer >= 4')
            return cmd_verify(args.N, args.alpha, args.self_test_fault, args.out)
        if args.command == 'order':
            return cmd_order(args.modulus)
        if args.command == 'fidelity':
            return cmd_fidelity(_make_config(args), args.jobs)
        return cmd_spectrum(_make_config(args, SPECTRUM_DEFAULTS))
    except (ValueError, SolverCapError) as err:
        logging.error(str(err))
        return EXIT_INVALID
    except OSError as err:
        logging.error(f'I/O failure: {err}')
        return EXIT_FAILED
