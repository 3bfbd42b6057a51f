import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy
import pandas
from pandas import DataFrame

from giftmania import __version__
from giftmania.daskmania.environments import ENVIRONMENTS, make_environment
from giftmania.daskmania.seeds import run_seed
from giftmania.daskmania.util import enforce_failure_budget, parallel_map
from giftmania.gamemania.coordination import HIGH_RISK, LOW_RISK, MEDIUM_RISK
from giftmania.gamemania.equilibrium import FAILED, OTHER_PNE, PROSOCIAL, RISK_DOMINANT
from giftmania.gamemania.gifting import GLOBAL_SPLIT
from giftmania.pandasmania.aggregate import gift_fraction_summary, outcome_counts, rate_matrix
from giftmania.qmania.train import TrainConfig, train_run

logger = logging.getLogger(__name__)

OFF = 'off'
DEFAULT_GIFT = 10.0
RISK_VALUES = (LOW_RISK, MEDIUM_RISK, HIGH_RISK)
RISK_GIFTS = (2.0, 5.0, 10.0, 20.0)
TRANSIENT_CONFIG = TrainConfig(episodes=150_000, gift_bias=1.0)
# thresholds of the transient-gifting shape, on the replay-batch gift fraction
TRANSIENT_START = 0.5
TRANSIENT_END = 0.01


def arm_label(gift: Optional[float]) -> str:
    """
    Examples:
        >>> arm_label(None), arm_label(10.0), arm_label(2.5)
        ('off', 'gift=10', 'gift=2.5')
    """
    return OFF if gift is None else f'gift={gift:g}'


@dataclass(frozen=True)
class StudySpec:
    environments: Tuple[str, ...] = ENVIRONMENTS
    gifts: Tuple[Optional[float], ...] = (None, DEFAULT_GIFT)
    seeds: int = 256
    train: TrainConfig = field(default_factory=TrainConfig)
    study_seed: int = 0
    split: str = GLOBAL_SPLIT


@dataclass
class StudyResult:
    """
    Outcome of a study: one row per run in `runs` and the aggregated `table`. `matrix` holds the rate matrix
    of a risk-gift sweep and `curves` the gift-fraction curves of a transient trace.
    """
    runs: DataFrame
    table: DataFrame
    params: Dict[str, Any]
    elapsed: float
    matrix: Optional[DataFrame] = None
    curves: Optional[DataFrame] = None

    @property
    def failed(self) -> int:
        return int((self.runs['outcome'] == FAILED).sum())

    def check_health(self):
        enforce_failure_budget(self.failed, len(self.runs), 'runs')

    def to_document(self) -> Dict[str, Any]:
        """Structured result document: version, parameters, timings and the aggregated rows."""
        return {
            'version': __version__,
            'params': self.params,
            'elapsed_seconds': round(self.elapsed, 3),
            'runs': len(self.runs),
            'failed': self.failed,
            'table': _plain_records(self.table),
        }


def _plain_records(pd: DataFrame) -> List[Dict[str, Any]]:
    records = []
    for record in pd.to_dict(orient='records'):
        plain = {}
        for k, v in record.items():
            if isinstance(v, numpy.generic):
                v = v.item()
            if isinstance(v, float) and numpy.isnan(v):
                v = None
            plain[str(k)] = v
        records.append(plain)
    return records


def _run_worker(task: Dict[str, Any]) -> Dict[str, Any]:
    seed = run_seed(task['study_seed'], task['env_index'], task['gift'], task['run'], task['r'])
    env = make_environment(task['environment'], task['gift'], task['split'], task['r'])
    result = train_run(env, task['config'], seed)
    outcome = result.outcome
    record = {
        'environment': task['environment'],
        'r': task['r'],
        'arm': arm_label(task['gift']),
        'gamma': 0.0 if task['gift'] is None else float(task['gift']),
        'run': task['run'],
        'outcome': outcome.kind,
        'gift_free': outcome.gift_free,
        'joint': ' '.join(','.join(str(a) for a in joint) for joint in outcome.joint_actions),
        'message': outcome.diagnostics.get('message', ''),
    }
    if not task.get('keep_trace'):
        return record

    curve = result.traces.reindex(columns=['episode', 'batch_gift_fraction', 'acting_gift_fraction'])
    curve.insert(0, 'run', task['run'])
    learning = curve['batch_gift_fraction'].notna()
    curve['optimization_step'] = learning.cumsum() * env.horizon
    curve = curve[learning]
    summary = gift_fraction_summary(curve, task['window'])
    if len(summary):
        record.update(summary.iloc[0][['start_fraction', 'end_fraction']].to_dict())
    else:
        record.update(start_fraction=numpy.nan, end_fraction=numpy.nan)
    record['curve'] = curve.iloc[::task['every']].reset_index(drop=True)
    return record


def _run_tasks(tasks: List[Dict[str, Any]], workers: Optional[int], scheduler: Optional[str]) -> List[Dict]:
    logger.info('starting %d training runs', len(tasks))
    records = parallel_map(_run_worker, tasks, workers, scheduler)
    failed = sum(record['outcome'] == FAILED for record in records)
    logger.info('finished %d training runs, %d failed', len(records), failed)
    return records


def convergence_table(spec: Optional[StudySpec] = None, workers: Optional[int] = None,
                      scheduler: Optional[str] = None) -> StudyResult:
    """
    API to train every (environment, arm, seed) combination of a study and count where the runs ended.

    Args:
        spec: study settings
        workers: worker count, see `giftmania.daskmania.util.resolve_workers`
        scheduler: dask scheduler name
    Returns:
        runs and one table row per environment and arm with outcome counts, rates and 95% Wilson intervals.
        Failed runs are counted in the `failed` column; call `check_health` to enforce the failure budget.
    """
    spec = spec or StudySpec()
    started = time.perf_counter()
    tasks = [dict(environment=name, env_index=ENVIRONMENTS.index(name), gift=gift, run=run, r=None,
                  study_seed=spec.study_seed, split=spec.split, config=spec.train)
             for name in spec.environments for gift in spec.gifts for run in range(spec.seeds)]
    runs = pandas.DataFrame(_run_tasks(tasks, workers, scheduler))

    table = outcome_counts(runs, ['environment', 'arm'])
    rows = {(name, arm_label(gift)): i for i, (name, gift) in
            enumerate((name, gift) for name in spec.environments for gift in spec.gifts)}
    order = table.apply(lambda row: rows[row['environment'], row['arm']], axis=1)
    table = table.iloc[numpy.argsort(order.to_numpy(), kind='stable')].reset_index(drop=True)
    return StudyResult(runs, table, _study_params(spec), time.perf_counter() - started)


def _study_params(spec: StudySpec) -> Dict[str, Any]:
    params = asdict(spec)
    params['environments'] = list(spec.environments)
    params['gifts'] = [OFF if g is None else g for g in spec.gifts]
    return params


def risk_gift_sweep(r_values: Sequence[float] = RISK_VALUES, gammas: Sequence[float] = RISK_GIFTS,
                    seeds: int = 128, config: Optional[TrainConfig] = None, study_seed: int = 0,
                    workers: Optional[int] = None, scheduler: Optional[str] = None) -> StudyResult:
    """
    API to measure the prosocial rate of the one-shot Stag Hunt over a grid of hunting-alone rewards and gift
    sizes, next to the baseline without gifting.

    Args:
        r_values: rewards for hunting alone
        gammas: gift sizes; 0 is allowed and reproduces the baseline run by run
        seeds: runs per cell; every r draws its own seed streams
    Returns:
        study result whose `matrix` has one row per r and the columns `off`, `gift=<gamma>`...
    """
    config = config or TrainConfig()
    started = time.perf_counter()
    gifts: List[Optional[float]] = [None] + [float(g) for g in gammas]
    env_index = ENVIRONMENTS.index('stag-hunt-medium')
    tasks = [dict(environment='stag-hunt-medium', env_index=env_index, gift=gift, run=run, r=float(r),
                  study_seed=study_seed, split=GLOBAL_SPLIT, config=config)
             for r in r_values for gift in gifts for run in range(seeds)]
    runs = pandas.DataFrame(_run_tasks(tasks, workers, scheduler))

    table = outcome_counts(runs, ['r', 'arm'])
    matrix = rate_matrix(table, 'r', 'arm')[[arm_label(g) for g in dict.fromkeys(gifts)]]
    params = {'r_values': [float(r) for r in r_values], 'gammas': [float(g) for g in gammas], 'seeds': seeds,
              'study_seed': study_seed, 'train': asdict(config)}
    return StudyResult(runs, table, params, time.perf_counter() - started, matrix=matrix)


def transient_trace(seeds: int = 64, gift: float = DEFAULT_GIFT, config: TrainConfig = TRANSIENT_CONFIG,
                    study_seed: int = 0, every: int = 100, window: int = 100, workers: Optional[int] = None,
                    scheduler: Optional[str] = None) -> StudyResult:
    """
    API to follow the share of gift actions in the replay batches of the medium-risk gifted Stag Hunt, with
    Q-values initialized in favour of gift actions.

    A run shows transient gifting when its first `window` optimization steps sample more than 50% gift
    actions, its last `window` steps fewer than 1%, and it ends prosocial.

    Args:
        seeds: number of runs
        gift: gift size
        config: training settings; the default initializes a gift bias of 1 and trains 150000 episodes
        every: keep every `every`-th optimization step of the curves
        window: optimization steps averaged at the start and end of each curve
    Returns:
        study result whose `table` has one row per run with the start and end fractions and the flags
        `transient` and `ends_gift_free`, and whose `curves` are the downsampled curves
    """
    started = time.perf_counter()
    env_index = ENVIRONMENTS.index('stag-hunt-medium')
    tasks = [dict(environment='stag-hunt-medium', env_index=env_index, gift=gift, run=run, r=None,
                  study_seed=study_seed, split=GLOBAL_SPLIT, config=config, keep_trace=True, every=every,
                  window=window)
             for run in range(seeds)]
    records = _run_tasks(tasks, workers, scheduler)
    curves = [record.pop('curve') for record in records]
    curves = pandas.concat(curves, ignore_index=True) if curves else pandas.DataFrame()
    runs = pandas.DataFrame(records)

    table = runs[['run', 'outcome', 'start_fraction', 'end_fraction']].copy()
    table['transient'] = (table['start_fraction'] > TRANSIENT_START) & \
                         (table['end_fraction'] < TRANSIENT_END) & (table['outcome'] == PROSOCIAL)
    reached = runs['outcome'].isin([PROSOCIAL, RISK_DOMINANT, OTHER_PNE])
    table['ends_gift_free'] = ~reached | (table['end_fraction'] < TRANSIENT_END)
    logger.info('%d of %d runs show transient gifting', int(table['transient'].sum()), len(table))
    params = {'seeds': seeds, 'gift': gift, 'study_seed': study_seed, 'every': every, 'window': window,
              'train': asdict(config)}
    return StudyResult(runs, table, params, time.perf_counter() - started, curves=curves)

