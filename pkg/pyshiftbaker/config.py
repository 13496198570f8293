# SPDX-License-Identifier: Apache-2.0 OR MIT
# -*- coding: utf-8 -*-

import logging
import math
import typing
from dataclasses import asdict, dataclass, field

from pyshiftbaker.linalg import DEFAULT_SOLVER_CAP
from pyshiftbaker.operators import Pauli, PerturbationSpec
from pyshiftbaker.spectral import Sector


class ConfigError(ValueError):
    pass


def parse_n_list(text):
    try:
        return [int(x) for x in str(text).split(',') if x.strip()]
    except ValueError:
        raise ConfigError(f'Invalid N list {text!r}') from None


@dataclass
class ExperimentConfig:
    N: typing.List[int] = field(default_factory=lambda: [256])
    theta: float = 0.05
    alpha: float = 0.0
    pauli: Pauli = Pauli.y
    T: int = 300
    sector: Sector = Sector.even
    bins: int = 40
    s_max: float = 4.0
    seed: int = 0
    cap: int = DEFAULT_SOLVER_CAP
    window: int = 5
    factor: float = 1.5
    out: str = '.'

    def validate(self):
        if not self.N:
            raise ConfigError('At least one N is required')
        for n in self.N:
            if n < 4 or n % 2:
                raise ConfigError(f'N = {n} must be an even integer >= 4')
        if not math.isfinite(self.theta) or abs(self.theta) > math.pi:
            raise ConfigError(f'theta = {self.theta} outside [-pi, pi]')
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigError(f'alpha = {self.alpha} outside [0, 1)')
        if self.T < 1:
            raise ConfigError(f'T = {self.T} must be at least 1')
        if self.bins < 4:
            raise ConfigError(f'bins = {self.bins} must be at least 4')
        if self.s_max <= 0:
            raise ConfigError(f's_max = {self.s_max} must be positive')
        if self.cap < 2:
            raise ConfigError(f'cap = {self.cap} must be at least 2')
        if self.window < 1:
            raise ConfigError(f'window = {self.window} must be at least 1')
        if self.factor <= 1.0:
            raise ConfigError(f'factor = {self.factor} must exceed 1')
        return self

    def spec(self):
        return PerturbationSpec(self.theta, self.alpha, self.pauli)

    def update(self, values):
        for key, val in values.items():
            if val is not None:
                setattr(self, key, val)
        return self

    def to_dict(self):
        out = asdict(self)
        out['pauli'] = str(self.pauli)
        out['sector'] = str(self.sector)
        return out


class ConfigFile:
    """``key: value`` experiment description; '#' starts a comment."""

    @dataclass
    class Parser:
        pattern: str
        fn: typing.Any

    def _parse_n(self, key, item):
        self.values['N'] = parse_n_list(item[len(key):])

    def _parse_int(self, key, item):
        self.values[key[:-1]] = int(item[len(key):], 0)

    def _parse_float(self, key, item):
        self.values[key[:-1]] = float(item[len(key):])

    def _parse_enum(self, key, item, enum):
        name = item[len(key):].strip()
        try:
            self.values[key[:-1]] = enum[name]
        except KeyError:
            raise ConfigError(f'{key[:-1]} must be one of {[str(e) for e in enum]}, got {name!r}') from None

    def _parse_str(self, key, item):
        self.values[key[:-1]] = item[len(key):].strip()

    def __init__(self, data):
        self.values = {}
        parsers = [
            ConfigFile.Parser('N:',      self._parse_n),
            ConfigFile.Parser('theta:',  self._parse_float),
            ConfigFile.Parser('alpha:',  self._parse_float),
            ConfigFile.Parser('pauli:',  lambda k, i: self._parse_enum(k, i, Pauli)),
            ConfigFile.Parser('T:',      self._parse_int),
            ConfigFile.Parser('sector:', lambda k, i: self._parse_enum(k, i, Sector)),
            ConfigFile.Parser('bins:',   self._parse_int),
            ConfigFile.Parser('s_max:',  self._parse_float),
            ConfigFile.Parser('seed:',   self._parse_int),
            ConfigFile.Parser('cap:',    self._parse_int),
            ConfigFile.Parser('window:', self._parse_int),
            ConfigFile.Parser('factor:', self._parse_float),
            ConfigFile.Parser('out:',    self._parse_str),
        ]

        for cfg_item in data.split('\n'):
            cfg_item = cfg_item.split('#', 1)[0].strip()
            if not cfg_item:
                continue

            parser_flt = filter(lambda x: cfg_item.startswith(x.pattern), parsers)
            parser = next(parser_flt, None)
            if parser:
                try:
                    parser.fn(parser.pattern, cfg_item)
                except ValueError as err:
                    raise ConfigError(f'Bad config line {cfg_item!r}: {err}') from err
                parsers.remove(parser)
            else:
                logging.warning(f'Config value {cfg_item} not supported')


def load_config(path):
    with open(path, encoding='utf-8') as fd:
        return ConfigFile(fd.read()).values
