from typing import List, Sequence, Tuple

import numpy
import pandas
from pandas import DataFrame, MultiIndex
from scipy.stats import norm

from giftmania.gamemania.equilibrium import FAILED, OTHER_PNE, OUTCOME_KINDS, PROSOCIAL, RISK_DOMINANT


def flatten_aggregated_columns(pd: DataFrame, separator: str = '_') -> DataFrame:
    """
    API to join the levels of the columns a `groupby(...).agg({...: [...]})` leaves behind into flat names.
    Empty levels, such as those of grouping keys moved back by `reset_index`, are skipped.

    Examples:
        >>> pd = pandas.DataFrame({'run': [0, 0, 1, 1], 'fraction': [0.8, 0.0, 0.6, 0.2]})
        >>> flatten_aggregated_columns(pd.groupby('run').agg({'fraction': ['first', 'last']}))
        ... # doctest: +NORMALIZE_WHITESPACE
             fraction_first  fraction_last
        run
        0               0.8            0.0
        1               0.6            0.2
    """
    if not isinstance(pd.columns, MultiIndex):
        return pd
    return pd.set_axis([separator.join(str(level) for level in labels if level != '') for labels in pd.columns],
                       axis=1)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """
    API to compute the Wilson score interval of a binomial rate.

    Examples:
        >>> tuple(round(v, 4) for v in wilson_interval(0, 256))
        (0.0, 0.0148)
        >>> tuple(round(v, 4) for v in wilson_interval(128, 256))
        (0.4392, 0.5608)
    """
    if trials == 0:
        return numpy.nan, numpy.nan
    z = norm.ppf(1 - (1 - confidence) / 2)
    p = successes / trials
    denominator = 1 + z ** 2 / trials
    center = (p + z ** 2 / (2 * trials)) / denominator
    half = z * numpy.sqrt(p * (1 - p) / trials + z ** 2 / (4 * trials ** 2)) / denominator
    return float(max(0.0, center - half)), float(min(1.0, center + half))


COUNT_COLUMNS = list(OUTCOME_KINDS)


def outcome_counts(runs: DataFrame, keys: Sequence[str]) -> DataFrame:
    """
    API to count run outcomes per group and add prosocial and equilibrium rates with 95% Wilson intervals.
    Failed runs are counted but left out of the rate denominators.

    Args:
        runs: one row per run with an `outcome` column
        keys: grouping columns
    Returns:
        one row per group
    Examples:
        >>> runs = pandas.DataFrame({'arm': ['off'] * 3 + ['gift=10'] * 3,
        ...                          'outcome': ['prosocial', 'risk_dominant', 'failed',
        ...                                      'prosocial', 'prosocial', 'risk_dominant']})
        >>> table = outcome_counts(runs, ['arm'])
        >>> table[['arm', 'seeds', 'prosocial', 'failed', 'prosocial_rate']]
        ... # doctest: +NORMALIZE_WHITESPACE
               arm  seeds  prosocial  failed  prosocial_rate
        0  gift=10      3          2       0        0.666667
        1      off      3          1       1        0.500000
    """
    keys = list(keys)
    counts = runs.groupby(keys)['outcome'].value_counts().unstack(fill_value=0)
    counts = counts.reindex(columns=COUNT_COLUMNS, fill_value=0)
    counts.columns.name = None
    table = counts.reset_index()
    table['seeds'] = table[COUNT_COLUMNS].sum(axis=1)

    valid = table['seeds'] - table[FAILED]
    reached = table[PROSOCIAL] + table[RISK_DOMINANT] + table[OTHER_PNE]
    table['prosocial_rate'] = (table[PROSOCIAL] / valid.where(valid > 0)).astype(float)
    table['pne_rate'] = (reached / valid.where(valid > 0)).astype(float)
    intervals = [wilson_interval(k, n) for k, n in zip(table[PROSOCIAL], valid)]
    table['ci_low'] = [low for low, _ in intervals]
    table['ci_high'] = [high for _, high in intervals]
    return table[keys + ['seeds'] + COUNT_COLUMNS + ['prosocial_rate', 'pne_rate', 'ci_low', 'ci_high']]


def gift_fraction_summary(curves: DataFrame, window: int = 100) -> DataFrame:
    """
    API to summarise gift-fraction curves per run: the mean over the first and last `window` optimization
    steps.

    Args:
        curves: rows with `run`, `optimization_step` and `batch_gift_fraction`
    Returns:
        one row per run with `start_fraction`, `end_fraction` and the `last_step` of the curve
    """
    def start(fraction):
        return fraction.head(window).mean()

    def end(fraction):
        return fraction.tail(window).mean()

    curves = curves.dropna(subset=['batch_gift_fraction']).sort_values(['run', 'optimization_step'])
    summary = curves.groupby('run').agg({'batch_gift_fraction': [start, end], 'optimization_step': ['max']})
    summary = flatten_aggregated_columns(summary).rename(columns={
        'batch_gift_fraction_start': 'start_fraction',
        'batch_gift_fraction_end': 'end_fraction',
        'optimization_step_max': 'last_step',
    })
    return summary.reset_index()


def rate_matrix(table: DataFrame, row: str, column: str, value: str = 'prosocial_rate') -> DataFrame:
    """
    API to pivot a long rate table into a matrix, e.g. risk by gift size.

    Examples:
        >>> long = pandas.DataFrame({'r': [-2.0, -2.0, -10.0, -10.0], 'arm': ['off', 'gift=2'] * 2,
        ...                          'prosocial_rate': [0.25, 0.2, 0.0, 0.05]})
        >>> rate_matrix(long, 'r', 'arm')
        ... # doctest: +NORMALIZE_WHITESPACE
                off  gift=2
        r
        -10.0  0.00    0.05
        -2.0   0.25    0.20
    """
    columns: List[str] = list(dict.fromkeys(table[column]))
    matrix = table.pivot(index=row, columns=column, values=value)[columns]
    matrix.columns.name = None
    return matrix
