from unittest import TestCase

import numpy

from giftmania.daskmania.environments import ENVIRONMENTS, make_environment
from giftmania.errors import GameInputError
from giftmania.gamemania.gifting import NEIGHBOR_SPLIT


class TestEnvironments(TestCase):
    def test_all_environments(self):
        for name in ENVIRONMENTS:
            plain = make_environment(name)
            gifted = make_environment(name, gift=10.0)
            assert gifted.stage.base_game == plain.stage
            assert all(n == 2 * m for n, m in zip(gifted.stage.action_counts, plain.stage.action_counts))
            assert gifted.horizon == plain.horizon

    def test_risk_override(self):
        env = make_environment('stag-hunt-medium', r=-2.0)
        assert env.stage.payoffs[0, 0, 1] == -2.0
        assert make_environment('stag-hunt-low').stage.payoffs[0, 0, 1] == -2.0

    def test_graph_split(self):
        env = make_environment('fc4-stag-hunt', gift=10.0, split=NEIGHBOR_SPLIT)
        base_totals = env.stage.base_game.payoffs.sum(axis=0)
        numpy.testing.assert_allclose(env.stage.payoffs.sum(axis=0), numpy.tile(base_totals, (2, 2, 2, 2)),
                                      atol=1e-9)

    def test_unknown(self):
        with self.assertRaises(GameInputError):
            make_environment('chicken')
