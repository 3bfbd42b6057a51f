import tempfile
from pathlib import Path
from unittest import TestCase

from giftmania.config import PROVENANCE, CliConfig, apply_overrides, config_from_document, config_to_document, \
    dump_config, load_config
from giftmania.errors import ConfigError, ConstraintError


class TestConfigFromDocument(TestCase):
    def test_defaults(self):
        config = config_from_document(None)
        assert config == CliConfig()
        assert config.learner.train_config().learning_rate == 5e-4
        assert config.dynamics.flow_config().threshold == 0.999

    def test_unknown(self):
        with self.assertRaises(ConfigError):
            config_from_document({'trainer': {}})
        with self.assertRaises(ConfigError) as cm:
            config_from_document({'study': {'seed': 3}})
        assert cm.exception.key == 'study.seed'

    def test_types(self):
        with self.assertRaises(ConfigError):
            config_from_document({'study': {'seeds': 'many'}})
        with self.assertRaises(ConfigError):
            config_from_document({'dynamics': {'gammas': 3}})
        with self.assertRaises(ConfigError):
            config_from_document({'learner': {'discount': 2.0}})
        with self.assertRaises(ConfigError):
            config_from_document({'dynamics': {'integrator': 'leapfrog'}})

    def test_gifts(self):
        config = config_from_document({'study': {'gifts': ['off', 0, 10]}})
        assert config.study.gifts == (None, 0.0, 10.0)
        assert config_to_document(config)['study']['gifts'] == ['off', 0.0, 10.0]
        spec = config.study.study_spec(config.learner.train_config())
        assert spec.gifts == (None, 0.0, 10.0)

    def test_train_gift(self):
        assert config_from_document(None).game.train_gift is None
        assert config_from_document({'game': {'train_gift': 3}}).game.train_gift == 3.0
        assert config_from_document({'game': {'train_gift': 'off'}}).game.train_gift is None
        with self.assertRaises(ConfigError):
            config_from_document({'game': {'train_gift': -1}})
        with self.assertRaises(ConfigError):
            config_from_document({'game': {'train_gift': 'ten'}})

    def test_game(self):
        assert config_from_document({'game': {'kind': 'bos'}}).game.base_game().action_counts == (2, 2)
        with self.assertRaises(ConstraintError):
            config_from_document({'game': {'r': 3}}).game.base_game()
        with self.assertRaises(ConfigError):
            config_from_document({'game': {'environment': 'chicken'}})


class TestRoundTrip(TestCase):
    def test_dump_and_load(self):
        config = apply_overrides(CliConfig(), {'game.gift': 5, 'game.train_gift': 2, 'dynamics.r_values': [-4, -2],
                                               'study.gifts': ['off', 2.5], 'study.workers': 2})
        with tempfile.TemporaryDirectory() as d:
            path = dump_config(config, Path(d) / 'resolved-config.yaml')
            assert load_config(path) == config

    def test_load_errors(self):
        with self.assertRaises(ConfigError):
            load_config('/nonexistent/giftmania.yaml')
        with tempfile.TemporaryDirectory() as d:
            path = Path(d) / 'bad.yaml'
            path.write_text('game: [unclosed')
            with self.assertRaises(ConfigError):
                load_config(path)

    def test_override_unknown_section(self):
        with self.assertRaises(ConfigError):
            apply_overrides(CliConfig(), {'plot.width': 3})


class TestProvenance(TestCase):
    def test_every_key_has_provenance(self):
        keys = {f'{section}.{key}' for section, values in config_to_document(CliConfig()).items() for key in values}
        assert keys == set(PROVENANCE)
