import copy
from typing import Dict, Optional, Tuple

import numpy

from giftmania.errors import ConfigError

TABULAR = 'tabular'
MLP = 'mlp'
BACKENDS = (TABULAR, MLP)

# initial Q-values are drawn from [-INIT_SCALE, INIT_SCALE]
INIT_SCALE = 0.01


class QFunction:
    """
    Map from observation indices to one value per action, with parameters kept in `params` so that `Adam`
    can update them in place.
    """
    params: Dict[str, numpy.ndarray]
    num_actions: int

    def values(self, observations: numpy.ndarray) -> numpy.ndarray:
        raise NotImplementedError

    def gradients(self, observations: numpy.ndarray, actions: numpy.ndarray, targets: numpy.ndarray) \
            -> Tuple[float, Dict[str, numpy.ndarray]]:
        """Mean squared error between Q(observation, action) and the targets, and its parameter gradients."""
        raise NotImplementedError

    def snapshot(self) -> 'QFunction':
        return copy.deepcopy(self)

    def load(self, other: 'QFunction'):
        for k, v in other.params.items():
            self.params[k][...] = v


class TabularQ(QFunction):
    def __init__(self, num_observations: int, num_actions: int, rng: numpy.random.Generator,
                 gift_mask: Optional[numpy.ndarray] = None, gift_bias: float = 0.0):
        self.num_actions = num_actions
        table = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(num_observations, num_actions))
        if gift_mask is not None:
            table[:, gift_mask] += gift_bias
        self.params = {'table': table}

    def values(self, observations):
        return self.params['table'][observations]

    def gradients(self, observations, actions, targets):
        q = self.params['table'][observations, actions]
        error = q - targets
        grad = numpy.zeros_like(self.params['table'])
        numpy.add.at(grad, (observations, actions), 2.0 * error / len(error))
        return float(numpy.mean(error ** 2)), {'table': grad}


class MLPQ(QFunction):
    """
    One hidden layer of rectified units over a fixed encoding of every observation index. The output layer
    starts at zero weights, so the initial Q-values are the output biases.
    """

    def __init__(self, encoding: numpy.ndarray, num_actions: int, rng: numpy.random.Generator,
                 hidden_units: int = 64, gift_mask: Optional[numpy.ndarray] = None, gift_bias: float = 0.0):
        self.num_actions = num_actions
        self.encoding = numpy.asarray(encoding, dtype=float)
        inputs = self.encoding.shape[1]
        bound = 1.0 / numpy.sqrt(inputs)
        b2 = rng.uniform(-INIT_SCALE, INIT_SCALE, size=num_actions)
        if gift_mask is not None:
            b2[gift_mask] += gift_bias
        self.params = {
            'W1': rng.uniform(-bound, bound, size=(inputs, hidden_units)),
            'b1': numpy.zeros(hidden_units),
            'W2': numpy.zeros((hidden_units, num_actions)),
            'b2': b2,
        }

    def _forward(self, observations):
        x = self.encoding[observations]
        pre = x @ self.params['W1'] + self.params['b1']
        hidden = numpy.maximum(pre, 0.0)
        return x, pre, hidden, hidden @ self.params['W2'] + self.params['b2']

    def values(self, observations):
        return self._forward(observations)[3]

    def gradients(self, observations, actions, targets):
        x, pre, hidden, q = self._forward(observations)
        rows = numpy.arange(len(actions))
        error = q[rows, actions] - targets
        dq = numpy.zeros_like(q)
        dq[rows, actions] = 2.0 * error / len(error)
        dhidden = (dq @ self.params['W2'].T) * (pre > 0)
        grads = {
            'W1': x.T @ dhidden,
            'b1': dhidden.sum(axis=0),
            'W2': hidden.T @ dq,
            'b2': dq.sum(axis=0),
        }
        return float(numpy.mean(error ** 2)), grads


def make_qfunction(backend: str, encoding: numpy.ndarray, num_actions: int, rng: numpy.random.Generator,
                   hidden_units: int = 64, gift_mask: Optional[numpy.ndarray] = None,
                   gift_bias: float = 0.0) -> QFunction:
    """
    API to build a Q-function backend.

    Args:
        backend: `tabular` or `mlp`
        encoding: input vector per observation index (one row per observation)
        num_actions: action count
        rng: generator for the initial values
        hidden_units: hidden layer width of the `mlp` backend
        gift_mask: gift actions, raised by `gift_bias` at initialisation
    Examples:
        >>> rng = numpy.random.default_rng(0)
        >>> q = make_qfunction('tabular', numpy.eye(3), 4, rng, gift_mask=numpy.array([0, 0, 1, 1], bool),
        ...                    gift_bias=1.0)
        >>> values = q.values(numpy.array([0]))[0]
        >>> bool((abs(values[:2]) <= 0.01).all()), bool((values[2:] > 0.98).all())
        (True, True)
    """
    if backend == TABULAR:
        return TabularQ(len(encoding), num_actions, rng, gift_mask, gift_bias)
    if backend == MLP:
        return MLPQ(encoding, num_actions, rng, hidden_units, gift_mask, gift_bias)
    raise ConfigError('learner.backend', f'unknown backend {backend!r}, expected one of {BACKENDS}')
