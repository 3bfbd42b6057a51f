from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy

from giftmania.errors import ConfigError, GameInputError, NumericalError
from giftmania.gamemania.equilibrium import pne_mask
from giftmania.gamemania.game import JointAction, NormalFormGame
from giftmania.flowmania.policy import flow_field, softmax_policy, split_state, state_size

EULER = 'euler'
RK4 = 'rk4'

# rows whose flow is this small are stationary points and stop integrating
STATIONARY_NORM = 1e-15


@dataclass(frozen=True)
class FlowConfig:
    step_size: float = 0.1
    max_steps: int = 200_000
    threshold: float = 0.999
    integrator: str = EULER

    def __post_init__(self):
        if not self.step_size > 0:
            raise ConfigError('dynamics.step_size', 'must be positive')
        if self.max_steps < 1:
            raise ConfigError('dynamics.max_steps', 'must be a positive integer')
        if not 0.5 < self.threshold < 1:
            raise ConfigError('dynamics.threshold', 'must lie in (0.5, 1)')
        if self.integrator not in (EULER, RK4):
            raise ConfigError('dynamics.integrator', f'unknown integrator {self.integrator!r}')


@dataclass
class FlowBatch:
    """
    Terminal states of a batch integration. `profiles` holds -1 for rows that never committed to an
    equilibrium.
    """
    states: numpy.ndarray
    steps: numpy.ndarray
    profiles: numpy.ndarray
    stationary: numpy.ndarray

    @property
    def converged(self) -> numpy.ndarray:
        return (self.profiles >= 0).all(axis=1)

    def profile(self, row: int) -> Optional[JointAction]:
        if not self.converged[row]:
            return None
        return tuple(int(k) for k in self.profiles[row])


@dataclass
class FlowResult:
    """
    Terminal state of one integration together with the policies it started from and ended on.
    `steps` counts the steps taken; for a committed run it is the step at which the profile was reached.
    """
    state: numpy.ndarray
    steps: int
    profile: Optional[JointAction]
    stationary: bool
    initial_policies: List[numpy.ndarray] = field(default_factory=list)
    final_policies: List[numpy.ndarray] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.profile is not None

    @property
    def commit_step(self) -> Optional[int]:
        return self.steps if self.converged else None


def _committed(probabilities: List[numpy.ndarray], threshold: float, mask: numpy.ndarray):
    best = numpy.stack([p.argmax(axis=-1) for p in probabilities], axis=-1)
    confident = numpy.stack([p.max(axis=-1) >= threshold for p in probabilities], axis=-1).all(axis=-1)
    in_pne = mask[tuple(best.T)]
    return confident & in_pne, best


def classify_terminal(game: NormalFormGame, policies: Sequence, threshold: float = 0.999) \
        -> Optional[JointAction]:
    """
    API to decide which pure equilibrium a set of mixed strategies has committed to.

    Args:
        game: target game
        policies: one probability vector per player
        threshold: probability p* every player must place on its component of the profile
    Returns:
        the committed profile, or None when some player is below p* or the profile is not an equilibrium
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> from giftmania.gamemania.gifting import GiftSet, extend_with_gifting
        >>> classify_terminal(stag_hunt(-6), [[0.9995, 0.0005], [0.9995, 0.0005]])
        (0, 0)
        >>> classify_terminal(stag_hunt(-6), [[0.9995, 0.0005], [0.2, 0.8]]) is None
        True
        >>> gifted = extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10))
        >>> classify_terminal(gifted, [[0, 0, 0.9995, 0.0005], [0, 0, 0.9995, 0.0005]]) is None
        True
    """
    probabilities = [numpy.atleast_2d(numpy.asarray(p, dtype=float)) for p in policies]
    committed, best = _committed(probabilities, threshold, pne_mask(game))
    if not committed[0]:
        return None
    return tuple(int(k) for k in best[0])


def _increment(game: NormalFormGame, z: numpy.ndarray, h: float, integrator: str) -> numpy.ndarray:
    k1 = flow_field(game, z)
    if integrator == EULER:
        return h * k1
    k2 = flow_field(game, z + 0.5 * h * k1)
    k3 = flow_field(game, z + 0.5 * h * k2)
    k4 = flow_field(game, z + h * k3)
    return h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_batch(game: NormalFormGame, states, config: Optional[FlowConfig] = None) -> FlowBatch:
    """
    API to integrate the learning dynamics from many initial states at once.

    Every row advances until its policies commit to a pure equilibrium, it reaches a stationary point, or
    `max_steps` run out. Classified rows are frozen while the others continue.

    Args:
        game: target game
        states: initial system states of shape (B, Σ|S_i|)
        config: integrator settings
    Returns:
        terminal states, step counts and committed profiles
    Raises:
        NumericalError: a state became non-finite
    """
    config = config or FlowConfig()
    z = numpy.array(states, dtype=float, ndmin=2)
    if z.shape[1] != state_size(game):
        raise GameInputError(f'states have {z.shape[1]} entries, the game needs {state_size(game)}')
    rows = z.shape[0]
    mask = pne_mask(game)

    steps = numpy.zeros(rows, dtype=int)
    profiles = numpy.full((rows, game.num_players), -1)
    stationary = numpy.zeros(rows, dtype=bool)
    active = numpy.arange(rows)

    for step in range(config.max_steps + 1):
        if not numpy.isfinite(z[active]).all():
            raise NumericalError('flow state became non-finite', step=step,
                                 diagnostics={'rows': active[~numpy.isfinite(z[active]).all(axis=1)].tolist()})
        probabilities = [softmax_policy(x) for x in split_state(game, z[active])]
        committed, best = _committed(probabilities, config.threshold, mask)
        profiles[active[committed]] = best[committed]
        steps[active] = step
        active = active[~committed]
        if active.size == 0 or step == config.max_steps:
            break

        dz = _increment(game, z[active], config.step_size, config.integrator)
        still = numpy.linalg.norm(dz, axis=1) <= STATIONARY_NORM * config.step_size
        stationary[active[still]] = True
        active = active[~still]
        if active.size == 0:
            break
        z[active] += dz[~still]

    return FlowBatch(states=z, steps=steps, profiles=profiles, stationary=stationary)


def integrate(game: NormalFormGame, z0, config: Optional[FlowConfig] = None) -> FlowResult:
    """
    API to integrate the learning dynamics from one initial state.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> integrate(stag_hunt(-6), [3, 0, 3, 0]).profile
        (0, 0)
        >>> integrate(stag_hunt(-6), [-3, 0, -3, 0]).profile
        (1, 1)
        >>> result = integrate(stag_hunt(-6), [0, 0, 0, 0])
        >>> [p.tolist() for p in result.initial_policies]
        [[0.5, 0.5], [0.5, 0.5]]
        >>> int(result.final_policies[0].argmax()), result.commit_step == result.steps > 0
        (1, True)
    """
    z0 = numpy.asarray(z0, dtype=float)
    batch = integrate_batch(game, z0[None, :], config)
    return FlowResult(state=batch.states[0], steps=int(batch.steps[0]), profile=batch.profile(0),
                      stationary=bool(batch.stationary[0]),
                      initial_policies=[softmax_policy(x) for x in split_state(game, z0)],
                      final_policies=[softmax_policy(x) for x in split_state(game, batch.states[0])])
