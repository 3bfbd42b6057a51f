import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy
import pandas

from giftmania.errors import ConfigError, NumericalError
from giftmania.gamemania.equilibrium import FAILED, OTHER_PNE, PROSOCIAL, RISK_DOMINANT, UNCONVERGED, \
    classify_equilibria, outcome_kind
from giftmania.gamemania.game import JointAction
from giftmania.gamemania.repeated import RepeatedGame, repeated_step
from giftmania.qmania.agent import QLearner
from giftmania.qmania.qfunction import BACKENDS, MLP
from giftmania.qmania.schedule import EpsilonSchedule, epsilon_at

logger = logging.getLogger(__name__)

SeedLike = Union[int, numpy.random.SeedSequence]


@dataclass(frozen=True)
class TrainConfig:
    episodes: int = 30_000
    batch_size: int = 32
    target_period: int = 250
    discount: float = 0.99
    warmup: int = 500
    buffer_capacity: int = 100_000
    learning_rate: float = 5e-4
    hidden_units: int = 64
    backend: str = MLP
    gift_bias: float = 0.0
    epsilon: EpsilonSchedule = field(default_factory=EpsilonSchedule)

    def __post_init__(self):
        for key in ('episodes', 'batch_size', 'target_period', 'buffer_capacity', 'hidden_units'):
            if getattr(self, key) < 1:
                raise ConfigError(f'learner.{key}', 'must be a positive integer')
        if self.warmup < 0:
            raise ConfigError('learner.warmup', 'must be nonnegative')
        if not 0 <= self.discount <= 1:
            raise ConfigError('learner.discount', 'must lie in [0, 1]')
        if not self.learning_rate > 0:
            raise ConfigError('learner.learning_rate', 'must be positive')
        if self.backend not in BACKENDS:
            raise ConfigError('learner.backend', f'unknown backend {self.backend!r}, expected one of {BACKENDS}')


@dataclass
class RunOutcome:
    """
    Where one training run ended. `joint_actions` holds the greedy joint action of every rollout step
    (a single step for one-shot and graph games).
    """
    kind: str
    joint_actions: Tuple[JointAction, ...] = ()
    gift_free: bool = True
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def reached_pne(self) -> bool:
        return self.kind in (PROSOCIAL, RISK_DOMINANT, OTHER_PNE)


@dataclass
class TrainResult:
    learners: List[QLearner]
    outcome: RunOutcome
    traces: pandas.DataFrame


def _greedy_rollout(env: RepeatedGame, learners: Sequence[QLearner]) -> List[JointAction]:
    observations = env.reset()
    joints = []
    for t in range(env.horizon):
        joint = tuple(learner.greedy_action(o) for learner, o in zip(learners, observations))
        _, observations, _ = repeated_step(env, t, joint)
        joints.append(joint)
    return joints


def extract_outcome(env: RepeatedGame, learners: Sequence[QLearner]) -> RunOutcome:
    """
    API to classify the greedy policies at the end of training.

    The greedy policies are rolled out for the horizon. A one-shot game is classified by its single joint action.
    In repeated games every step's base joint action must be the same stage equilibrium; gift components are
    ignored for the classification and reported through `gift_free`.
    """
    stage = env.stage
    joints = _greedy_rollout(env, learners)
    gift_free = all(stage.gift_of(i, a) == 0 for joint in joints for i, a in enumerate(joint))

    if env.one_shot:
        return RunOutcome(outcome_kind(classify_equilibria(stage), joints[0]), tuple(joints), gift_free)

    base = stage.base_game
    base_joints = {tuple(stage.base_action(i, a) for i, a in enumerate(joint)) for joint in joints}
    if len(base_joints) != 1:
        return RunOutcome(UNCONVERGED, tuple(joints), gift_free)
    return RunOutcome(outcome_kind(classify_equilibria(base), base_joints.pop()), tuple(joints), gift_free)


def _seed_sequence(seed: SeedLike) -> numpy.random.SeedSequence:
    if isinstance(seed, numpy.random.SeedSequence):
        return seed
    return numpy.random.SeedSequence(seed)


def train_run(env: RepeatedGame, config: Optional[TrainConfig] = None, seed: SeedLike = 0) -> TrainResult:
    """
    API to train one independent learner per agent and classify where they ended.

    Each episode the agents act epsilon-greedily in the shared environment, store their own transitions and,
    once `warmup` transitions are stored, take one update per environment step. Target copies are synced
    every `target_period` episodes. A numerical failure ends the run with a `failed` outcome carrying the
    diagnostics.

    Args:
        env: one-shot (horizon 1) or repeated game, gifted or not
        config: training settings
        seed: integer or SeedSequence; every agent gets its own spawned stream
    Returns:
        learners, outcome and one trace row per episode
    """
    config = config or TrainConfig()
    streams = _seed_sequence(seed).spawn(env.num_agents)
    learners = [QLearner(i, env, numpy.random.default_rng(s), config.backend, config.hidden_units,
                         config.learning_rate, config.buffer_capacity, config.gift_bias)
                for i, s in enumerate(streams)]
    gift_masks = [learner.gift_mask for learner in learners]
    start_size = max(config.warmup, config.batch_size)

    records = []
    steps = 0
    batch_gift = numpy.full(env.num_agents, numpy.nan)
    try:
        for episode in range(config.episodes):
            observations = env.reset()
            returns = numpy.zeros(env.num_agents)
            gift_actions = 0
            for t in range(env.horizon):
                epsilon = epsilon_at(config.epsilon, steps)
                joint = tuple(learner.select_action(o, epsilon) for learner, o in zip(learners, observations))
                rewards, next_observations, done = repeated_step(env, t, joint)
                for i, learner in enumerate(learners):
                    learner.remember(observations[i], joint[i], rewards[i], next_observations[i], done)
                steps += 1
                for i, learner in enumerate(learners):
                    if len(learner.buffer) >= start_size:
                        _, batch_gift[i] = learner.learn(config.batch_size, config.discount)
                returns += rewards
                gift_actions += sum(bool(mask[a]) for mask, a in zip(gift_masks, joint))
                observations = next_observations

            if (episode + 1) % config.target_period == 0:
                for learner in learners:
                    learner.sync_target()

            record = {'episode': episode, 'epsilon': epsilon}
            record.update({f'action_{i}': a for i, a in enumerate(joint)})
            record.update({f'reward_{i}': float(r) for i, r in enumerate(returns)})
            record['batch_gift_fraction'] = float(numpy.mean(batch_gift)) \
                if not numpy.isnan(batch_gift).any() else numpy.nan
            record['acting_gift_fraction'] = gift_actions / (env.horizon * env.num_agents)
            records.append(record)
    except NumericalError as e:
        logger.warning('training run failed at episode %d: %s', len(records), e)
        outcome = RunOutcome(FAILED, diagnostics=dict(e.diagnostics, episode=len(records), message=str(e)))
        return TrainResult(learners, outcome, pandas.DataFrame(records))

    outcome = extract_outcome(env, learners)
    logger.debug('training run finished: %s %s', outcome.kind, outcome.joint_actions)
    return TrainResult(learners, outcome, pandas.DataFrame(records))
