import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy
import pandas
import yaml

from giftmania import __version__
from giftmania.config import RESOLVED_CONFIG_FILE, CliConfig, apply_overrides, config_to_document, \
    describe_default, dump_config, load_config
from giftmania.daskmania.environments import ENVIRONMENTS, make_environment
from giftmania.daskmania.seeds import run_seed
from giftmania.daskmania.study import StudyResult, arm_label, convergence_table, risk_gift_sweep, \
    transient_trace
from giftmania.daskmania.util import enforce_failure_budget
from giftmania.errors import ConfigError, ConstraintError, GameInputError, StudyHealthError
from giftmania.flowmania.basin import basin_sweep, frequency_sweep, phase_portrait, portrait_gallery
from giftmania.gamemania.coordination import COORDINATION_KINDS, stag_hunt
from giftmania.gamemania.equilibrium import FAILED, classify_equilibria, pne_report, verify_gift_pne_mapping
from giftmania.gamemania.gifting import GLOBAL_SPLIT, NEIGHBOR_SPLIT, extend_with_gifting
from giftmania.intakemania.util import register_output
from giftmania.pandasmania.export import table_header, write_table
from giftmania.qmania.qfunction import BACKENDS
from giftmania.qmania.train import train_run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CONSTRAINT = 2
EXIT_STUDY_HEALTH = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError('usage', message)


def parse_values(text: str) -> List[float]:
    """
    API to read a list of numbers written as `a,b,c` or as an inclusive integer range `a..b`.

    Examples:
        >>> parse_values('-10,-6,-2')
        [-10.0, -6.0, -2.0]
        >>> parse_values('1..4')
        [1.0, 2.0, 3.0, 4.0]
    """
    try:
        if '..' in text:
            start, _, stop = text.partition('..')
            return [float(v) for v in range(int(start), int(stop) + 1)]
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a list of numbers')


def _help(text: str, address: str) -> str:
    return f'{text} ({describe_default(address)})'


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    common.add_argument('--config', help='YAML config with sections game, dynamics, learner, study, output')
    common.add_argument('--output', help=_help('output directory', 'output.directory'))
    common.add_argument('--workers', type=int, help='worker count (default $GIFTMANIA_WORKERS, else the CPU count)')
    common.add_argument('--seed', type=int, help=_help('study seed', 'study.study_seed'))

    game = _Parser(add_help=False)
    game.add_argument('--game', choices=COORDINATION_KINDS, help=_help('coordination game kind', 'game.kind'))
    game.add_argument('--game-document', help='YAML game document used instead of --game')
    game.add_argument('--r', type=float, help=_help('Stag Hunt reward for hunting alone', 'game.r'))
    game.add_argument('--gift', type=float, help=_help('gift size gamma', 'game.gift'))
    game.add_argument('--split', choices=[GLOBAL_SPLIT, NEIGHBOR_SPLIT], help=_help('gift split', 'game.split'))

    flow = _Parser(add_help=False)
    flow.add_argument('--integrator', choices=['euler', 'rk4'], help=_help('integrator', 'dynamics.integrator'))
    flow.add_argument('--step-size', type=float, help=_help('integration step', 'dynamics.step_size'))
    flow.add_argument('--max-steps', type=int, help=_help('integration steps', 'dynamics.max_steps'))

    learner = _Parser(add_help=False)
    learner.add_argument('--episodes', type=int, help=_help('training episodes', 'learner.episodes'))
    learner.add_argument('--backend', choices=BACKENDS, help=_help('Q-function backend', 'learner.backend'))
    learner.add_argument('--learning-rate', type=float, help=_help('Adam step size', 'learner.learning_rate'))
    learner.add_argument('--batch-size', type=int, help=_help('replay batch size', 'learner.batch_size'))

    parser = _Parser(prog='giftmania', description='zero-sum gifting in coordination games')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('equilibria', parents=[common, game], help='pure equilibria with and without gifting')

    dynamics = commands.add_parser('dynamics', help='learning dynamics of two-player games')
    views = dynamics.add_subparsers(dest='view', required=True)
    basin = views.add_parser('basin', parents=[common, game, flow], help='prosocial basin grids')
    basin.add_argument('--resolution', type=int, help=_help('cells per axis', 'dynamics.resolution'))
    basin.add_argument('--gift-samples', type=int, help=_help('samples per gift axis', 'dynamics.gift_samples'))
    freq = views.add_parser('freq', parents=[common, flow], help='prosocial frequency over risk and gift size')
    freq.add_argument('--r', dest='r_values', type=parse_values,
                      help=_help('risks, e.g. --r=-10,-6,-2', 'dynamics.r_values'))
    freq.add_argument('--gift', dest='gammas', type=parse_values,
                      help=_help('gift sizes, e.g. --gift 1..20', 'dynamics.gammas'))
    freq.add_argument('--resolution', type=int, help=_help('cells per axis', 'dynamics.freq_resolution'))
    freq.add_argument('--gift-samples', type=int,
                      help=_help('samples per gift axis', 'dynamics.freq_gift_samples'))
    portrait = views.add_parser('portrait', parents=[common, game], help='phase portrait vector fields')
    portrait.add_argument('--gift-offsets', type=parse_values, action='append',
                          help='gift logits relative to the reference action, repeatable '
                               f'({describe_default("dynamics.portrait_offsets")})')
    portrait.add_argument('--resolution', type=int, help=_help('points per axis', 'dynamics.portrait_resolution'))

    train = commands.add_parser('train', parents=[common, learner], help='one independent Q-learning run')
    train.add_argument('--env', choices=ENVIRONMENTS, help=_help('environment', 'game.environment'))
    train.add_argument('--gift', dest='train_gift', type=float,
                       help=_help('gift size gamma, omitted trains without gifting', 'game.train_gift'))
    train.add_argument('--split', choices=[GLOBAL_SPLIT, NEIGHBOR_SPLIT], help=_help('gift split', 'game.split'))

    study = commands.add_parser('study', help='multi-seed learning studies')
    studies = study.add_subparsers(dest='study', required=True)
    table2 = studies.add_parser('table2', parents=[common, learner], help='convergence table of every environment')
    table2.add_argument('--seeds', type=int, help=_help('runs per environment and arm', 'study.seeds'))
    risk = studies.add_parser('risk-gift', parents=[common, learner], help='prosocial rate over risk and gift size')
    risk.add_argument('--seeds', dest='risk_seeds', type=int, help=_help('runs per cell', 'study.risk_seeds'))
    transient = studies.add_parser('transient', parents=[common, learner], help='gift-fraction curves')
    transient.add_argument('--seeds', dest='transient_seeds', type=int,
                           help=_help('runs', 'study.transient_seeds'))
    transient.add_argument('--gift', type=float, help=_help('gift size gamma', 'game.gift'))
    return parser


_OVERRIDES = {
    'output': 'output.directory',
    'workers': 'study.workers',
    'seed': 'study.study_seed',
    'game': 'game.kind',
    'game_document': 'game.document',
    'r': 'game.r',
    'split': 'game.split',
    'integrator': 'dynamics.integrator',
    'step_size': 'dynamics.step_size',
    'max_steps': 'dynamics.max_steps',
    'r_values': 'dynamics.r_values',
    'gammas': 'dynamics.gammas',
    'gift_offsets': 'dynamics.portrait_offsets',
    'episodes': 'learner.episodes',
    'backend': 'learner.backend',
    'learning_rate': 'learner.learning_rate',
    'batch_size': 'learner.batch_size',
    'env': 'game.environment',
    'train_gift': 'game.train_gift',
    'seeds': 'study.seeds',
    'risk_seeds': 'study.risk_seeds',
    'transient_seeds': 'study.transient_seeds',
}


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """API to merge the config file, its defaults and the command-line flags."""
    overrides = {address: getattr(args, name, None) for name, address in _OVERRIDES.items()}
    overrides['game.gift'] = getattr(args, 'gift', None)
    view = getattr(args, 'view', None)
    if view == 'basin':
        overrides['dynamics.resolution'] = args.resolution
        overrides['dynamics.gift_samples'] = args.gift_samples
    elif view == 'freq':
        overrides['dynamics.freq_resolution'] = args.resolution
        overrides['dynamics.freq_gift_samples'] = args.gift_samples
    elif view == 'portrait':
        overrides['dynamics.portrait_resolution'] = args.resolution
    return apply_overrides(load_config(args.config), overrides)


class Output:
    """Single writer of one command's output directory."""

    def __init__(self, config: CliConfig):
        self.config = config
        self.directory = config.output_dir
        self.directory.mkdir(parents=True, exist_ok=True)
        self.params = config_to_document(config)
        dump_config(config, self.directory / RESOLVED_CONFIG_FILE)

    def table(self, pd: pandas.DataFrame, name: str, **extra) -> Path:
        header = table_header(pd, self.params, self.config.study.study_seed)
        header.update(extra)
        path = write_table(pd, self.directory / f'{name}.csv', header)
        register_output(path, name, header, self.directory)
        logger.info('wrote %s', path)
        return path

    def document(self, document: Dict[str, Any], name: str) -> Path:
        path = self.directory / f'{name}.yaml'
        document = dict({'version': __version__, 'params': self.params}, **document)
        with path.open('w') as f:
            yaml.safe_dump(document, f, sort_keys=False)
        logger.info('wrote %s', path)
        return path


def cmd_equilibria(config: CliConfig, output: Output) -> int:
    game = config.game.base_game()
    gifts = config.game.gift_set(game.num_players)
    gifted = extend_with_gifting(game, gifts, config.game.split)
    base_report = pne_report(classify_equilibria(game))
    gifted_report = pne_report(classify_equilibria(gifted))
    verdict = verify_gift_pne_mapping(game, gifts, config.game.split)

    for title, report in (('base game', base_report), (f'gifted game (gamma={config.game.gift:g})', gifted_report)):
        print(f'{title}: {len(report)} pure equilibria')
        print(report.to_string(index=False))
    print(f'gift mapping {"verified" if verdict.holds else "violated"}'
          + ('' if verdict.holds else f': {verdict.witness}'))

    output.table(base_report, 'equilibria-base')
    output.table(gifted_report, 'equilibria-gifted')
    output.document({'mapping_holds': verdict.holds, 'witness': None if verdict.witness is None else
                     str(verdict.witness)}, 'equilibria')
    return EXIT_OK


def _dynamics_basin(config: CliConfig, output: Output) -> int:
    game = config.game.base_game()
    settings = config.dynamics
    gifted, ungifted = basin_sweep(game, config.game.gift_set(2), settings.resolution, settings.gift_samples,
                                   settings.flow_config(), config.study.workers)
    output.table(gifted.cells, 'basin-gifted', aggregate_prosocial=gifted.aggregate_prosocial())
    output.table(ungifted.cells, 'basin-ungifted', aggregate_prosocial=ungifted.aggregate_prosocial())
    print(f'prosocial basin share: gifted {gifted.aggregate_prosocial():.4f}, '
          f'ungifted {ungifted.aggregate_prosocial():.4f}')
    cells = len(gifted.cells) + len(ungifted.cells)
    enforce_failure_budget(gifted.failed_cells() + ungifted.failed_cells(), cells, 'cells')
    return EXIT_OK


def _dynamics_freq(config: CliConfig, output: Output) -> int:
    settings = config.dynamics
    table = frequency_sweep(settings.r_values, settings.gammas, settings.freq_resolution,
                            settings.freq_gift_samples, settings.flow_config(), config.study.workers)
    output.table(table, 'frequency')
    print(table.pivot(index='gamma', columns='r', values='prosocial_frequency').to_string())
    enforce_failure_budget(int(table['failed_cells'].sum()), len(table) * settings.freq_resolution ** 2, 'cells')
    return EXIT_OK


def _dynamics_portrait(config: CliConfig, output: Output) -> int:
    game = config.game.base_game()
    settings = config.dynamics
    ungifted = phase_portrait(game, (), settings.portrait_resolution)
    ungifted.insert(0, 'offsets', '')
    ungifted.insert(0, 'gifted', False)
    gifted = portrait_gallery(extend_with_gifting(game, config.game.gift_set(2)), settings.portrait_offsets,
                              settings.portrait_resolution)
    gifted.insert(0, 'gifted', True)
    field = pandas.concat([ungifted, gifted], ignore_index=True)
    output.table(field, 'portrait')
    print(f'{len(field)} field points over {1 + len(settings.portrait_offsets)} panels')
    return EXIT_OK


def cmd_dynamics(config: CliConfig, output: Output, view: str) -> int:
    return {'basin': _dynamics_basin, 'freq': _dynamics_freq, 'portrait': _dynamics_portrait}[view](config, output)


def cmd_train(config: CliConfig, output: Output) -> int:
    name = config.game.environment
    gift = config.game.train_gift
    env = make_environment(name, gift, config.game.split)
    seed = run_seed(config.study.study_seed, ENVIRONMENTS.index(name), gift, 0)
    result = train_run(env, config.learner.train_config(), seed)
    outcome = result.outcome
    output.table(result.traces, 'trace')
    output.document({'environment': name, 'arm': arm_label(gift), 'outcome': outcome.kind,
                     'joint_actions': [list(joint) for joint in outcome.joint_actions],
                     'gift_free': outcome.gift_free,
                     'diagnostics': {k: v.item() if isinstance(v, numpy.generic) else v
                                     for k, v in outcome.diagnostics.items()}}, 'run')
    print(f'{name} ({arm_label(gift)}): {outcome.kind} {list(outcome.joint_actions)}')
    enforce_failure_budget(int(outcome.kind == FAILED), 1, 'runs')
    return EXIT_OK


def _emit_study(result: StudyResult, output: Output, name: str):
    output.table(result.runs, f'{name}-runs')
    output.table(result.table, name, elapsed_seconds=round(result.elapsed, 3))
    output.document(result.to_document(), name)


def cmd_study(config: CliConfig, output: Output, study: str) -> int:
    settings = config.study
    train = config.learner.train_config()
    if study == 'table2':
        result = convergence_table(settings.study_spec(train, config.game.split), settings.workers)
        _emit_study(result, output, 'table2')
        print(result.table[['environment', 'arm', 'seeds', 'prosocial_rate', 'ci_low', 'ci_high', 'pne_rate',
                            'failed']].to_string(index=False))
    elif study == 'risk-gift':
        result = risk_gift_sweep(settings.risk_r_values, settings.risk_gammas, settings.risk_seeds, train,
                                 settings.study_seed, settings.workers)
        _emit_study(result, output, 'risk-gift')
        output.table(result.matrix.reset_index(), 'risk-gift-matrix')
        print(result.matrix.to_string())
    else:
        train = config.learner.train_config(episodes=settings.transient_episodes,
                                            gift_bias=settings.transient_gift_bias)
        result = transient_trace(settings.transient_seeds, config.game.gift, train,
                                 settings.study_seed, settings.transient_every, workers=settings.workers)
        _emit_study(result, output, 'transient')
        output.table(result.curves, 'transient-curves')
        print(f'{int(result.table["transient"].sum())} of {len(result.table)} runs show transient gifting; '
              f'{int(result.table["ends_gift_free"].sum())} end without gifting or off equilibrium')
    result.check_health()
    return EXIT_OK


def check_inputs(config: CliConfig, args: argparse.Namespace):
    """Builds the games a command reads so that invalid games fail before the output directory exists."""
    view = getattr(args, 'view', None)
    study = getattr(args, 'study', None)
    if args.command == 'equilibria' or view in ('basin', 'portrait'):
        game = config.game.base_game()
        config.game.gift_set(game.num_players)
    elif args.command == 'train':
        make_environment(config.game.environment, config.game.train_gift, config.game.split)
    elif view == 'freq' or study == 'risk-gift':
        for r in (config.dynamics.r_values if view == 'freq' else config.study.risk_r_values):
            stag_hunt(r)


def run(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    check_inputs(config, args)
    output = Output(config)
    if args.command == 'equilibria':
        return cmd_equilibria(config, output)
    if args.command == 'dynamics':
        return cmd_dynamics(config, output, args.view)
    if args.command == 'train':
        return cmd_train(config, output)
    return cmd_study(config, output, args.study)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        print(f'giftmania: {e}', file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=args.log_level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        return run(args)
    except ConfigError as e:
        logger.error('configuration error: %s', e)
        return EXIT_CONFIG
    except (ConstraintError, GameInputError) as e:
        logger.error('invalid game: %s', e)
        return EXIT_CONSTRAINT
    except StudyHealthError as e:
        logger.error('study failed: %s', e)
        return EXIT_STUDY_HEALTH


if __name__ == '__main__':
    sys.exit(main())
