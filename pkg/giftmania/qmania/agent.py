from typing import Tuple

import numpy

from giftmania.errors import NumericalError
from giftmania.gamemania.repeated import Observation, RepeatedGame
from giftmania.qmania.adam import Adam
from giftmania.qmania.qfunction import QFunction, make_qfunction
from giftmania.qmania.replay import Batch, ReplayBuffer


def select_action(q: QFunction, observation: int, epsilon: float, rng: numpy.random.Generator) -> int:
    """
    API to pick an epsilon-greedy action; greedy ties go to the lowest action index.

    Examples:
        >>> from giftmania.qmania.qfunction import TabularQ
        >>> rng = numpy.random.default_rng(0)
        >>> q = TabularQ(1, 4, rng)
        >>> q.params['table'][0] = [1.0, 2.0, 0.5, 0.3]
        >>> select_action(q, 0, 0.0, rng)
        1
        >>> q.params['table'][0] = [2.0, 2.0, 0.0, 0.0]
        >>> select_action(q, 0, 0.0, rng)
        0
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f'epsilon {epsilon} is outside [0, 1]')
    if rng.random() < epsilon:
        return int(rng.integers(q.num_actions))
    return int(numpy.argmax(q.values(numpy.array([observation]))[0]))


def q_update(q: QFunction, target: QFunction, batch: Batch, optimizer: Adam, discount: float) -> float:
    """
    API to take one Adam step on the squared temporal-difference error of a batch. Terminal transitions
    regress on the reward alone, the others on reward + discount * max of the frozen target values.

    Returns:
        batch loss before the step
    Raises:
        NumericalError: the loss or a gradient is not finite
    """
    next_values = target.values(batch.next_observations).max(axis=1)
    targets = batch.rewards + discount * numpy.where(batch.dones, 0.0, next_values)
    loss, grads = q.gradients(batch.observations, batch.actions, targets)
    if not numpy.isfinite(loss) or not all(numpy.isfinite(g).all() for g in grads.values()):
        raise NumericalError('non-finite Q loss', diagnostics={
            'loss': loss,
            'observations': batch.observations.tolist(),
            'actions': batch.actions.tolist(),
            'rewards': batch.rewards.tolist(),
            'targets': targets.tolist(),
        })
    optimizer.step(q.params, grads)
    return loss


def observation_encoding(env: RepeatedGame, agent: int) -> numpy.ndarray:
    """One-hot encoding of every observation index of an agent, one row per index."""
    radix = env.observation_radix(agent)
    rows = []
    for index in range(env.observation_count(agent)):
        observation = tuple(int(s) for s in numpy.unravel_index(index, radix))
        rows.append(env.one_hot(agent, observation))
    return numpy.stack(rows)


class QLearner:
    """
    Independent learner for one agent. It owns its Q-function, target copy, optimizer, replay buffer and
    random generator and never reads another agent's state.
    """

    def __init__(self, agent: int, env: RepeatedGame, rng: numpy.random.Generator, backend: str,
                 hidden_units: int = 64, learning_rate: float = 5e-4, buffer_capacity: int = 100_000,
                 gift_bias: float = 0.0):
        self.agent = agent
        self.env = env
        self.rng = rng
        self.gift_mask = env.stage.gift_mask(agent)
        self.q = make_qfunction(backend, observation_encoding(env, agent), env.stage.action_counts[agent], rng,
                                hidden_units, self.gift_mask, gift_bias)
        self.target = self.q.snapshot()
        self.optimizer = Adam(lr=learning_rate)
        self.buffer = ReplayBuffer(buffer_capacity)

    def index(self, observation: Observation) -> int:
        return self.env.observation_index(self.agent, observation)

    def select_action(self, observation: Observation, epsilon: float) -> int:
        return select_action(self.q, self.index(observation), epsilon, self.rng)

    def greedy_action(self, observation: Observation) -> int:
        return int(numpy.argmax(self.q.values(numpy.array([self.index(observation)]))[0]))

    def remember(self, observation: Observation, action: int, reward: float, next_observation: Observation,
                 done: bool):
        self.buffer.add(self.index(observation), action, reward, self.index(next_observation), done)

    def learn(self, batch_size: int, discount: float) -> Tuple[float, float]:
        """
        One update from a sampled batch.

        Returns:
            loss and the fraction of gift actions in the batch
        """
        batch = self.buffer.sample(batch_size, self.rng)
        loss = q_update(self.q, self.target, batch, self.optimizer, discount)
        return loss, float(self.gift_mask[batch.actions].mean())

    def sync_target(self):
        self.target.load(self.q)
