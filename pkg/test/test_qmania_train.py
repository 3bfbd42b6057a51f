from unittest import TestCase

import numpy
import pandas

from giftmania.errors import ConfigError
from giftmania.gamemania.coordination import stag_hunt
from giftmania.gamemania.equilibrium import FAILED, OUTCOME_KINDS, PROSOCIAL, RISK_DOMINANT, UNCONVERGED
from giftmania.gamemania.game import NormalFormGame
from giftmania.gamemania.gifting import GiftSet, extend_with_gifting
from giftmania.gamemania.repeated import RepeatedGame
from giftmania.qmania.agent import QLearner
from giftmania.qmania.schedule import EpsilonSchedule
from giftmania.qmania.train import TrainConfig, extract_outcome, train_run

SMALL = TrainConfig(episodes=300, warmup=32, backend='tabular', target_period=50)


def learners_with_tables(env, tables):
    learners = []
    for i, table in enumerate(tables):
        learner = QLearner(i, env, numpy.random.default_rng(i), 'tabular')
        learner.q.params['table'][...] = table
        learners.append(learner)
    return learners


class TestTrainConfig(TestCase):
    def test_invalid(self):
        with self.assertRaises(ConfigError):
            TrainConfig(episodes=0)
        with self.assertRaises(ConfigError):
            TrainConfig(discount=1.5)
        with self.assertRaises(ConfigError):
            TrainConfig(backend='linear')


class TestTrainRun(TestCase):
    def test_traces(self):
        env = RepeatedGame(extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10)))
        result = train_run(env, SMALL, seed=0)
        traces = result.traces
        assert len(traces) == 300
        assert list(traces.columns) == ['episode', 'epsilon', 'action_0', 'action_1', 'reward_0', 'reward_1',
                                        'batch_gift_fraction', 'acting_gift_fraction']
        assert traces['batch_gift_fraction'].iloc[:31].isna().all()
        assert traces['batch_gift_fraction'].iloc[32:].notna().all()
        assert result.outcome.kind in OUTCOME_KINDS

    def test_deterministic(self):
        env = RepeatedGame(stag_hunt(-6), horizon=3)
        a = train_run(env, SMALL, seed=numpy.random.SeedSequence(11))
        b = train_run(env, SMALL, seed=numpy.random.SeedSequence(11))
        pandas.testing.assert_frame_equal(a.traces, b.traces)
        assert a.outcome == b.outcome
        c = train_run(env, SMALL, seed=numpy.random.SeedSequence(12))
        assert not a.traces.equals(c.traces)

    def test_mlp_backend(self):
        result = train_run(RepeatedGame(stag_hunt(-6)), TrainConfig(episodes=100, warmup=32), seed=1)
        assert result.outcome.kind in OUTCOME_KINDS
        assert result.learners[0].q.params['W1'].shape == (3, 64)

    def test_uniform_exploration_learns_expected_payoffs(self):
        config = TrainConfig(episodes=100_000, warmup=32, backend='tabular', epsilon=EpsilonSchedule(1.0, 1.0))
        result = train_run(RepeatedGame(stag_hunt(-6)), config, seed=3)
        for learner in result.learners:
            hunt, forage = learner.q.values(numpy.array([0]))[0]
            assert abs(hunt - (2 - 6) / 2) < 0.05
            assert abs(forage - 1.0) < 0.05
        assert result.outcome.kind == RISK_DOMINANT
        assert result.traces['epsilon'].eq(1.0).all()

    def test_numerical_failure(self):
        env = RepeatedGame(NormalFormGame(numpy.full((2, 2, 2), 1e200)))
        result = train_run(env, SMALL, seed=0)
        assert result.outcome.kind == FAILED
        assert result.outcome.diagnostics['episode'] == 31
        assert 'message' in result.outcome.diagnostics


class TestExtractOutcome(TestCase):
    def test_one_shot(self):
        env = RepeatedGame(extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10)))
        hunt = [[1.0, 0.0, 0.0, 0.0]]
        gift_hunt = [[0.0, 0.0, 1.0, 0.0]]
        outcome = extract_outcome(env, learners_with_tables(env, [hunt, hunt]))
        assert outcome.kind == PROSOCIAL
        assert outcome.gift_free
        assert outcome.joint_actions == ((0, 0),)
        outcome = extract_outcome(env, learners_with_tables(env, [gift_hunt, gift_hunt]))
        assert outcome.kind == UNCONVERGED
        assert not outcome.gift_free

    def test_repeated(self):
        env = RepeatedGame(extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10)), horizon=4)
        forage = numpy.tile([0.0, 1.0, 0.0, 0.0], (5, 1))
        outcome = extract_outcome(env, learners_with_tables(env, [forage, forage]))
        assert outcome.kind == RISK_DOMINANT
        assert len(outcome.joint_actions) == 4

        # hunt at the start only
        switching = forage.copy()
        switching[0] = [1.0, 0.0, 0.0, 0.0]
        outcome = extract_outcome(env, learners_with_tables(env, [switching, switching]))
        assert outcome.kind == UNCONVERGED
        assert outcome.joint_actions[:2] == ((0, 0), (1, 1))

    def test_repeated_with_gifts_classified_on_base(self):
        env = RepeatedGame(extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10)), horizon=2)
        gift_hunt = numpy.tile([0.0, 0.0, 1.0, 0.0], (5, 1))
        outcome = extract_outcome(env, learners_with_tables(env, [gift_hunt, gift_hunt]))
        assert outcome.kind == PROSOCIAL
        assert not outcome.gift_free
