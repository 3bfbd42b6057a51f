from typing import List, Sequence, Tuple

import numpy

from giftmania.errors import GameInputError, HorizonError
from giftmania.gamemania.game import NormalFormGame, validate_joint

START = 0

Observation = Tuple[int, ...]


class RepeatedGame:
    """
    A stage game played for `horizon` steps.

    An agent's observation holds one symbol per opponent (in player order): `START` before the first step,
    afterwards `1 + a_j` for the opponent's most recent (extended) action a_j. With horizon 1 the
    environment is the one-shot game and every agent always sees the start observation.
    """

    def __init__(self, stage: NormalFormGame, horizon: int = 1):
        if horizon < 1:
            raise GameInputError('horizon must be a positive integer')
        self.stage = stage
        self.horizon = int(horizon)
        self.num_agents = stage.num_players

    @property
    def one_shot(self) -> bool:
        return self.horizon == 1

    def opponents(self, agent: int) -> List[int]:
        return [j for j in range(self.num_agents) if j != agent]

    def observation_radix(self, agent: int) -> Tuple[int, ...]:
        return tuple(self.stage.action_counts[j] + 1 for j in self.opponents(agent))

    def observation_count(self, agent: int) -> int:
        return int(numpy.prod(self.observation_radix(agent)))

    def observation_index(self, agent: int, observation: Observation) -> int:
        return int(numpy.ravel_multi_index(observation, self.observation_radix(agent)))

    def one_hot_size(self, agent: int) -> int:
        return int(sum(self.observation_radix(agent)))

    def one_hot(self, agent: int, observation: Observation) -> numpy.ndarray:
        vector = numpy.zeros(self.one_hot_size(agent))
        offset = 0
        for symbol, radix in zip(observation, self.observation_radix(agent)):
            vector[offset + symbol] = 1.0
            offset += radix
        return vector

    def reset(self) -> List[Observation]:
        return [tuple(START for _ in self.opponents(i)) for i in range(self.num_agents)]

    def __repr__(self):
        return f'RepeatedGame(stage={self.stage!r}, horizon={self.horizon})'


def repeated_step(env: RepeatedGame, t: int, joint: Sequence[int]) \
        -> Tuple[numpy.ndarray, List[Observation], bool]:
    """
    API to play step t of a repeated game.

    Args:
        env: repeated game
        t: step index, 0 <= t < horizon
        joint: one (extended) action per agent
    Returns:
        stage rewards, next observation of every agent, and whether the episode ended
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> env = RepeatedGame(stag_hunt(-6), horizon=10)
        >>> env.reset()
        [(0,), (0,)]
        >>> rewards, observations, done = repeated_step(env, 0, (0, 0))
        >>> rewards.tolist(), observations, done
        ([2.0, 2.0], [(1,), (1,)], False)
        >>> repeated_step(env, 9, (0, 1))[2]
        True
        >>> repeated_step(env, 10, (0, 1))
        Traceback (most recent call last):
            ...
        giftmania.errors.HorizonError: step 10 is beyond the horizon 10
    """
    if not 0 <= t < env.horizon:
        raise HorizonError(f'step {t} is beyond the horizon {env.horizon}')
    joint = validate_joint(env.stage, joint)
    rewards = numpy.array(env.stage.payoffs[(slice(None),) + joint])
    observations = [tuple(1 + joint[j] for j in env.opponents(i)) for i in range(env.num_agents)]
    return rewards, observations, t == env.horizon - 1
