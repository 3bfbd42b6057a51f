from dataclasses import dataclass

from giftmania.errors import ConfigError


@dataclass(frozen=True)
class EpsilonSchedule:
    """Exploration rate decaying geometrically from `start` to `end` over `decay_steps` environment steps."""
    start: float = 0.3
    end: float = 0.01
    decay_steps: int = 20_000

    def __post_init__(self):
        if not 0 < self.end <= self.start <= 1:
            raise ConfigError('learner.epsilon', 'needs 0 < end <= start <= 1')
        if self.decay_steps < 1:
            raise ConfigError('learner.epsilon_decay_steps', 'must be a positive integer')


def epsilon_at(schedule: EpsilonSchedule, t: int) -> float:
    """
    API to read the exploration rate after t environment steps.

    Examples:
        >>> epsilon_at(EpsilonSchedule(), 0)
        0.3
        >>> round(epsilon_at(EpsilonSchedule(), 10_000), 4)
        0.0548
        >>> epsilon_at(EpsilonSchedule(), 20_000), epsilon_at(EpsilonSchedule(), 10 ** 6)
        (0.01, 0.01)
    """
    if t < 0:
        raise ValueError('step count must be nonnegative')
    if t >= schedule.decay_steps:
        return schedule.end
    return max(schedule.end, schedule.start * (schedule.end / schedule.start) ** (t / schedule.decay_steps))
