from typing import NamedTuple

import numpy


class Batch(NamedTuple):
    observations: numpy.ndarray
    actions: numpy.ndarray
    rewards: numpy.ndarray
    next_observations: numpy.ndarray
    dones: numpy.ndarray


class ReplayBuffer:
    """
    First-in-first-out ring buffer of transitions. Observations are stored as observation indices.

    Examples:
        >>> buffer = ReplayBuffer(capacity=2)
        >>> for a in range(3):
        ...     buffer.add(0, a, float(a), 0, True)
        >>> len(buffer), sorted(buffer.actions[:len(buffer)].tolist())
        (2, [1, 2])
    """

    def __init__(self, capacity: int = 100_000):
        if capacity < 1:
            raise ValueError('capacity must be positive')
        self.capacity = int(capacity)
        self.observations = numpy.zeros(self.capacity, dtype=numpy.int64)
        self.actions = numpy.zeros(self.capacity, dtype=numpy.int64)
        self.rewards = numpy.zeros(self.capacity)
        self.next_observations = numpy.zeros(self.capacity, dtype=numpy.int64)
        self.dones = numpy.zeros(self.capacity, dtype=bool)
        self._next = 0
        self._size = 0

    def add(self, observation: int, action: int, reward: float, next_observation: int, done: bool):
        i = self._next
        self.observations[i] = observation
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_observations[i] = next_observation
        self.dones[i] = done
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int, rng: numpy.random.Generator) -> Batch:
        if self._size == 0:
            raise ValueError('cannot sample from an empty buffer')
        idx = rng.integers(0, self._size, size=batch_size)
        return Batch(self.observations[idx], self.actions[idx], self.rewards[idx],
                     self.next_observations[idx], self.dones[idx])

    def __len__(self) -> int:
        return self._size
