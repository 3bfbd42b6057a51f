from unittest import TestCase

import numpy
from numpy.testing import assert_allclose, assert_array_equal

from giftmania.errors import ConfigError
from giftmania.qmania.adam import Adam
from giftmania.qmania.qfunction import INIT_SCALE, MLPQ, TabularQ, make_qfunction


class TestMLPQ(TestCase):
    def setUp(self) -> None:
        self.mask = numpy.array([False, False, True, True])
        self.q = MLPQ(numpy.eye(5), 4, numpy.random.default_rng(0), hidden_units=8, gift_mask=self.mask,
                      gift_bias=1.0)

    def test_initial_values_are_output_biases(self):
        values = self.q.values(numpy.arange(5))
        assert_allclose(values, numpy.tile(self.q.params['b2'], (5, 1)))
        assert (numpy.abs(values[:, :2]) <= INIT_SCALE).all()
        assert (numpy.abs(values[:, 2:] - 1.0) <= INIT_SCALE).all()

    def test_gradients_match_finite_differences(self):
        rng = numpy.random.default_rng(1)
        for k in self.q.params:
            self.q.params[k][...] = rng.normal(size=self.q.params[k].shape)
        observations = numpy.array([0, 3, 3, 1])
        actions = numpy.array([2, 0, 1, 3])
        targets = numpy.array([0.5, -1.0, 2.0, 0.0])
        _, grads = self.q.gradients(observations, actions, targets)
        h = 1e-6
        for k, param in self.q.params.items():
            for index in list(numpy.ndindex(param.shape))[:6]:
                original = param[index]
                param[index] = original + h
                up, _ = self.q.gradients(observations, actions, targets)
                param[index] = original - h
                down, _ = self.q.gradients(observations, actions, targets)
                param[index] = original
                assert abs((up - down) / (2 * h) - grads[k][index]) < 1e-5

    def test_snapshot_is_independent(self):
        target = self.q.snapshot()
        self.q.params['b2'] += 1.0
        assert not numpy.allclose(target.params['b2'], self.q.params['b2'])
        target.load(self.q)
        assert_array_equal(target.params['b2'], self.q.params['b2'])


class TestTabularQ(TestCase):
    def test_adam_reaches_target(self):
        q = TabularQ(1, 2, numpy.random.default_rng(0))
        optimizer = Adam(lr=5e-4)
        observations, actions, targets = numpy.array([0]), numpy.array([0]), numpy.array([2.0])
        for _ in range(10_000):
            _, grads = q.gradients(observations, actions, targets)
            optimizer.step(q.params, grads)
        assert abs(q.values(observations)[0, 0] - 2.0) < 0.01
        assert abs(q.values(observations)[0, 1]) <= INIT_SCALE

    def test_gift_bias(self):
        q = TabularQ(3, 4, numpy.random.default_rng(0), numpy.array([False, False, True, True]), 0.5)
        assert (q.params['table'][:, 2:] > 0.48).all()


class TestMakeQFunction(TestCase):
    def test_unknown_backend(self):
        with self.assertRaises(ConfigError):
            make_qfunction('linear', numpy.eye(2), 2, numpy.random.default_rng(0))

    def test_backends(self):
        rng = numpy.random.default_rng(0)
        assert isinstance(make_qfunction('tabular', numpy.eye(3), 2, rng), TabularQ)
        mlp = make_qfunction('mlp', numpy.eye(3), 2, rng, hidden_units=64)
        assert mlp.params['W1'].shape == (3, 64)
        assert not mlp.params['W2'].any()
