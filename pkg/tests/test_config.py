# SPDX-License-Identifier: Apache-2.0 OR MIT

import logging

import pytest

from pyshiftbaker.config import (ConfigError, ConfigFile, ExperimentConfig,
                                 load_config, parse_n_list)
from pyshiftbaker.operators import Pauli
from pyshiftbaker.spectral import Sector

SAMPLE = """
# fidelity sweep
N: 250,252, 254
theta: 0.05
pauli: z
T: 200
sector: odd
"""


class TestConfigFile:
    def test_parse(self):
        values = ConfigFile(SAMPLE).values
        assert values == {'N': [250, 252, 254], 'theta': 0.05, 'pauli': Pauli.z,
                          'T': 200, 'sector': Sector.odd}

    def test_unknown_key_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            values = ConfigFile('colour: blue\nseed: 7').values
        assert values == {'seed': 7}
        assert 'colour: blue' in caplog.text
        assert caplog.records[-1].name == 'root'

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            ConfigFile('T: many')

    def test_bad_enum(self):
        with pytest.raises(ConfigError):
            ConfigFile('pauli: w')

    def test_load(self, tmp_path):
        path = tmp_path / 'exp.cfg'
        path.write_text('alpha: 0.5  # anti-periodic\nout: results\n')
        assert load_config(path) == {'alpha': 0.5, 'out': 'results'}


class TestExperimentConfig:
    def test_defaults_valid(self):
        cfg = ExperimentConfig().validate()
        assert cfg.spec().pauli is Pauli.y

    @pytest.mark.parametrize('override', [
        {'N': [255]}, {'N': []}, {'theta': 4.0}, {'alpha': 1.0}, {'T': 0},
        {'bins': 3}, {'cap': 1}, {'window': 0}, {'factor': 1.0}, {'s_max': 0.0},
    ])
    def test_invalid(self, override):
        with pytest.raises(ConfigError):
            ExperimentConfig().update(override).validate()

    def test_update_skips_none(self):
        cfg = ExperimentConfig().update({'theta': None, 'T': 12})
        assert cfg.theta == 0.05 and cfg.T == 12

    def test_to_dict(self):
        d = ExperimentConfig().to_dict()
        assert d['pauli'] == 'y' and d['sector'] == 'even' and d['N'] == [256]

    def test_n_list(self):
        assert parse_n_list('4, 6,8') == [4, 6, 8]
        with pytest.raises(ConfigError):
            parse_n_list('4,x')
