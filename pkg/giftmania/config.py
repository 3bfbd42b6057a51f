from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

from giftmania.daskmania.environments import ENVIRONMENTS
from giftmania.daskmania.study import OFF, RISK_GIFTS, RISK_VALUES, StudySpec, TRANSIENT_CONFIG
from giftmania.errors import ConfigError, GameInputError
from giftmania.flowmania.flow import EULER, FlowConfig
from giftmania.gamemania.coordination import COORDINATION_KINDS, MEDIUM_RISK, STAG_HUNT, make_coordination_game, \
    stag_hunt
from giftmania.gamemania.document import load_game_document
from giftmania.gamemania.game import NormalFormGame
from giftmania.gamemania.gifting import GLOBAL_SPLIT, NEIGHBOR_SPLIT, GiftSet
from giftmania.qmania.qfunction import MLP
from giftmania.qmania.schedule import EpsilonSchedule
from giftmania.qmania.train import TrainConfig

RESOLVED_CONFIG_FILE = 'resolved-config.yaml'

PUBLISHED = 'published'
CHOSEN = 'chosen'


@dataclass(frozen=True)
class GameConfig:
    kind: str = STAG_HUNT
    r: float = MEDIUM_RISK
    gift: float = 10.0
    split: str = GLOBAL_SPLIT
    document: Optional[str] = None
    environment: str = 'stag-hunt-medium'
    # gift size of the `train` arm, None trains without gifting
    train_gift: Optional[float] = None

    def __post_init__(self):
        if self.kind not in COORDINATION_KINDS:
            raise ConfigError('game.kind', f'unknown kind {self.kind!r}, expected one of {COORDINATION_KINDS}')
        if self.split not in (GLOBAL_SPLIT, NEIGHBOR_SPLIT):
            raise ConfigError('game.split', f'unknown split {self.split!r}')
        if self.environment not in ENVIRONMENTS:
            raise ConfigError('game.environment', f'unknown environment {self.environment!r}')
        if not self.gift >= 0:
            raise ConfigError('game.gift', 'must be nonnegative')
        if self.train_gift is not None and not self.train_gift >= 0:
            raise ConfigError('game.train_gift', 'must be nonnegative or off')

    def base_game(self) -> NormalFormGame:
        if self.document is not None:
            game = load_game_document(self.document)
            if not isinstance(game, NormalFormGame):
                raise GameInputError(f'{self.document} holds a repeated game, expected a normal-form game')
            return game
        if self.kind == STAG_HUNT:
            return stag_hunt(self.r)
        return make_coordination_game(self.kind)

    def gift_set(self, num_players: int) -> GiftSet:
        return GiftSet.binary(num_players, self.gift)


@dataclass(frozen=True)
class FlowSettings:
    step_size: float = 0.1
    max_steps: int = 200_000
    threshold: float = 0.999
    integrator: str = EULER
    resolution: int = 21
    gift_samples: int = 5
    freq_resolution: int = 11
    freq_gift_samples: int = 3
    r_values: Tuple[float, ...] = (-10.0, -6.0, -2.0)
    gammas: Tuple[float, ...] = tuple(float(g) for g in range(1, 21))
    portrait_resolution: int = 15
    portrait_offsets: Tuple[Tuple[float, ...], ...] = ((0.0, 0.0, 0.0, 0.0), (3.0, -3.0, 3.0, -3.0),
                                                       (-3.0, 3.0, -3.0, 3.0))

    def flow_config(self) -> FlowConfig:
        return FlowConfig(self.step_size, self.max_steps, self.threshold, self.integrator)


@dataclass(frozen=True)
class LearnerSettings:
    backend: str = MLP
    hidden_units: int = 64
    learning_rate: float = 5e-4
    buffer_capacity: int = 100_000
    batch_size: int = 32
    target_period: int = 250
    discount: float = 0.99
    warmup: int = 500
    episodes: int = 30_000
    gift_bias: float = 0.0
    epsilon_start: float = 0.3
    epsilon_end: float = 0.01
    epsilon_decay_steps: int = 20_000

    def train_config(self, **overrides) -> TrainConfig:
        values = {f.name: getattr(self, f.name) for f in fields(self) if not f.name.startswith('epsilon')}
        values['epsilon'] = EpsilonSchedule(self.epsilon_start, self.epsilon_end, self.epsilon_decay_steps)
        values.update(overrides)
        return TrainConfig(**values)


@dataclass(frozen=True)
class StudySettings:
    seeds: int = 256
    study_seed: int = 0
    environments: Tuple[str, ...] = ENVIRONMENTS
    gifts: Tuple[Optional[float], ...] = (None, 10.0)
    risk_r_values: Tuple[float, ...] = RISK_VALUES
    risk_gammas: Tuple[float, ...] = RISK_GIFTS
    risk_seeds: int = 128
    transient_seeds: int = 64
    transient_episodes: int = TRANSIENT_CONFIG.episodes
    transient_gift_bias: float = TRANSIENT_CONFIG.gift_bias
    transient_every: int = 100
    workers: Optional[int] = None

    def __post_init__(self):
        for key in ('seeds', 'risk_seeds', 'transient_seeds', 'transient_every'):
            if getattr(self, key) < 1:
                raise ConfigError(f'study.{key}', 'must be a positive integer')
        unknown = [e for e in self.environments if e not in ENVIRONMENTS]
        if unknown:
            raise ConfigError('study.environments', f'unknown environments {unknown}')

    def study_spec(self, train: TrainConfig, split: str = GLOBAL_SPLIT) -> StudySpec:
        return StudySpec(self.environments, self.gifts, self.seeds, train, self.study_seed, split)


@dataclass(frozen=True)
class OutputSettings:
    directory: str = 'giftmania-output'


@dataclass(frozen=True)
class CliConfig:
    game: GameConfig = field(default_factory=GameConfig)
    dynamics: FlowSettings = field(default_factory=FlowSettings)
    learner: LearnerSettings = field(default_factory=LearnerSettings)
    study: StudySettings = field(default_factory=StudySettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    @property
    def output_dir(self) -> Path:
        return Path(self.output.directory)


# where every default comes from: the source study or our own choice
PROVENANCE = {
    'game.kind': CHOSEN,
    'game.r': PUBLISHED,
    'game.gift': PUBLISHED,
    'game.split': CHOSEN,
    'game.document': CHOSEN,
    'game.environment': CHOSEN,
    'game.train_gift': CHOSEN,
    'dynamics.step_size': PUBLISHED,
    'dynamics.max_steps': PUBLISHED,
    'dynamics.threshold': PUBLISHED,
    'dynamics.integrator': PUBLISHED,
    'dynamics.resolution': CHOSEN,
    'dynamics.gift_samples': CHOSEN,
    'dynamics.freq_resolution': CHOSEN,
    'dynamics.freq_gift_samples': CHOSEN,
    'dynamics.r_values': PUBLISHED,
    'dynamics.gammas': PUBLISHED,
    'dynamics.portrait_resolution': CHOSEN,
    'dynamics.portrait_offsets': CHOSEN,
    'learner.backend': CHOSEN,
    'learner.hidden_units': CHOSEN,
    'learner.learning_rate': PUBLISHED,
    'learner.buffer_capacity': PUBLISHED,
    'learner.batch_size': CHOSEN,
    'learner.target_period': PUBLISHED,
    'learner.discount': CHOSEN,
    'learner.warmup': CHOSEN,
    'learner.episodes': CHOSEN,
    'learner.gift_bias': CHOSEN,
    'learner.epsilon_start': PUBLISHED,
    'learner.epsilon_end': PUBLISHED,
    'learner.epsilon_decay_steps': PUBLISHED,
    'study.seeds': CHOSEN,
    'study.study_seed': CHOSEN,
    'study.environments': PUBLISHED,
    'study.gifts': PUBLISHED,
    'study.risk_r_values': PUBLISHED,
    'study.risk_gammas': CHOSEN,
    'study.risk_seeds': CHOSEN,
    'study.transient_seeds': CHOSEN,
    'study.transient_episodes': CHOSEN,
    'study.transient_gift_bias': CHOSEN,
    'study.transient_every': CHOSEN,
    'study.workers': CHOSEN,
    'output.directory': CHOSEN,
}

_SECTIONS = {f.name: f.default_factory for f in fields(CliConfig)}


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _element(default, value):
    if isinstance(default, tuple):
        return tuple(float(v) for v in value)
    if isinstance(default, float):
        return float(value)
    return value


def _coerce(section: str, key: str, default, value):
    if key == 'gifts':
        return tuple(None if v in (None, OFF) else float(v) for v in value)
    if key == 'train_gift':
        if value in (None, OFF):
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f'{section}.{key}', f'{value!r} is neither a number nor {OFF!r}')
        return float(value)
    if isinstance(default, tuple):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f'{section}.{key}', 'must be a list')
        return tuple(_element(default[0], v) for v in value) if default else tuple(value)
    if isinstance(default, bool) or isinstance(value, bool):
        if not isinstance(value, bool) or not isinstance(default, bool):
            raise ConfigError(f'{section}.{key}', f'{value!r} has the wrong type')
        return value
    if isinstance(default, float) and isinstance(value, int):
        return float(value)
    if default is not None and value is not None and not isinstance(value, type(default)):
        raise ConfigError(f'{section}.{key}', f'{value!r} is not a {type(default).__name__}')
    return value


def _build_section(section: str, values: Dict[str, Any]):
    cls = _SECTIONS[section]
    defaults = {f.name: getattr(cls(), f.name) for f in fields(cls)}
    for key in values:
        if key not in defaults:
            raise ConfigError(f'{section}.{key}', 'unknown key')
    return cls(**{k: _coerce(section, k, defaults[k], v) for k, v in values.items()})


def config_from_document(document: Optional[Dict[str, Any]]) -> CliConfig:
    """
    API to build the configuration from a nested document with the sections game, dynamics, learner, study
    and output. Missing keys keep their defaults.

    Examples:
        >>> config_from_document({'game': {'r': -10}}).game.r
        -10.0
        >>> config_from_document({'learner': {'learning_rte': 0.1}})
        Traceback (most recent call last):
            ...
        giftmania.errors.ConfigError: learner.learning_rte: unknown key
    """
    document = document or {}
    if not isinstance(document, dict):
        raise ConfigError('config', 'must be a mapping of sections')
    sections = {}
    for section, values in document.items():
        if section not in _SECTIONS:
            raise ConfigError(section, 'unknown section')
        if not isinstance(values, dict):
            raise ConfigError(section, 'must be a mapping')
        sections[section] = _build_section(section, values)
    config = CliConfig(**sections)
    validate_config(config)
    return config


def validate_config(config: CliConfig):
    """Builds the runtime settings once so that invalid values fail before any work starts."""
    config.dynamics.flow_config()
    config.learner.train_config()


def config_to_document(config: CliConfig) -> Dict[str, Dict[str, Any]]:
    document = {}
    for section, values in asdict(config).items():
        values = {k: _plain(v) for k, v in values.items()}
        if 'gifts' in values:
            values['gifts'] = [OFF if g is None else g for g in values['gifts']]
        document[section] = values
    return document


def load_config(path: Union[str, Path, None]) -> CliConfig:
    """API to read a YAML configuration file; None gives the defaults."""
    if path is None:
        return CliConfig()
    try:
        with open(path) as f:
            document = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError('config', f'{path} does not exist')
    except yaml.YAMLError as e:
        raise ConfigError('config', f'{path} is not valid YAML: {e}')
    return config_from_document(document)


def apply_overrides(config: CliConfig, overrides: Dict[str, Any]) -> CliConfig:
    """
    API to override single values addressed as `section.key`; None values are ignored.

    Examples:
        >>> config = apply_overrides(CliConfig(), {'game.gift': 5, 'study.seeds': None})
        >>> config.game.gift, config.study.seeds
        (5.0, 256)
    """
    document = config_to_document(config)
    for address, value in overrides.items():
        if value is None:
            continue
        section, _, key = address.partition('.')
        if section not in document:
            raise ConfigError(address, 'unknown section')
        document[section][key] = value
    return config_from_document(document)


def dump_config(config: CliConfig, path: Union[str, Path]) -> Path:
    """API to write the resolved configuration; feeding it back in reproduces the same run."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w') as f:
        yaml.safe_dump(config_to_document(config), f, sort_keys=False)
    return path


def describe_default(address: str) -> str:
    """
    Examples:
        >>> describe_default('learner.learning_rate')
        'default 0.0005, published'
    """
    section, _, key = address.partition('.')
    value = getattr(getattr(CliConfig(), section), key)
    return f'default {value}, {PROVENANCE[address]}'

