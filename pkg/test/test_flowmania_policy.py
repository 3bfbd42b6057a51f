from unittest import TestCase

import numpy
from numpy.testing import assert_allclose

from giftmania.errors import GameInputError
from giftmania.flowmania.policy import exact_gradient, expected_payoff, flow_field, softmax_policy, split_state
from giftmania.gamemania.coordination import stag_hunt
from giftmania.gamemania.game import NormalFormGame
from giftmania.gamemania.gifting import GiftSet, extend_with_gifting
from giftmania.gamemania.graph import make_graph_stag_hunt


def finite_difference(game, policies, player, h=1e-5):
    gradient = numpy.zeros_like(policies[player])
    for k in range(len(gradient)):
        up = [p.copy() for p in policies]
        down = [p.copy() for p in policies]
        up[player][k] += h
        down[player][k] -= h
        gradient[k] = (expected_payoff(game, up)[player] - expected_payoff(game, down)[player]) / (2 * h)
    return gradient


class TestSoftmaxPolicy(TestCase):
    def test_shift_invariance(self):
        x = numpy.array([0.3, -1.2, 2.0])
        assert_allclose(softmax_policy(x), softmax_policy(x + 100.0), rtol=1e-12)

    def test_batch(self):
        p = softmax_policy(numpy.zeros((3, 4)))
        assert p.shape == (3, 4)
        assert_allclose(p.sum(axis=1), 1.0)

    def test_non_finite(self):
        with self.assertRaises(GameInputError):
            softmax_policy([numpy.inf, 0])


class TestExactGradient(TestCase):
    def test_finite_differences(self):
        rng = numpy.random.default_rng(5)
        games = []
        for _ in range(5):
            game = NormalFormGame(rng.uniform(-10, 10, size=(2, 2, 2)))
            games.append(game)
            games.append(extend_with_gifting(game, GiftSet.binary(2, float(rng.uniform(1, 10)))))
        for game in games:
            for _ in range(100):
                policies = [rng.uniform(-3, 3, size=n) for n in game.action_counts]
                gradients = exact_gradient(game, policies)
                for i in range(2):
                    assert_allclose(gradients[i], finite_difference(game, policies, i), rtol=1e-6, atol=1e-8)

    def test_gradient_sums_to_zero(self):
        game = make_graph_stag_hunt(3)
        gradients = exact_gradient(game, [[0.5, -0.5], [1.0, 0.0], [0.0, 2.0]])
        assert len(gradients) == 3
        for g in gradients:
            assert abs(g.sum()) <= 1e-12

    def test_batched_matches_single(self):
        game = extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10))
        rng = numpy.random.default_rng(6)
        x = rng.normal(size=(7, 4))
        y = rng.normal(size=(7, 4))
        batched = expected_payoff(game, [x, y])
        assert batched.shape == (7, 2)
        for b in range(7):
            assert_allclose(batched[b], expected_payoff(game, [x[b], y[b]]))

    def test_wrong_shapes(self):
        with self.assertRaises(GameInputError):
            expected_payoff(stag_hunt(), [[0, 0]])
        with self.assertRaises(GameInputError):
            exact_gradient(stag_hunt(), [[0, 0, 0], [0, 0]])
        with self.assertRaises(GameInputError):
            split_state(stag_hunt(), [0, 0, 0])


class TestFlowField(TestCase):
    def test_pure_coordination_origin_is_stationary(self):
        game = NormalFormGame([[[1, 0], [0, 1]], [[1, 0], [0, 1]]])
        assert_allclose(flow_field(game, numpy.zeros(4)), 0.0, atol=0)

    def test_stacked(self):
        game = stag_hunt(-6)
        dz = flow_field(game, [[0, 0, 0, 0], [3, 0, 3, 0]])
        assert_allclose(dz[0], [-0.75, 0.75, -0.75, 0.75])
        assert dz[1][0] > 0 and dz[1][2] > 0
