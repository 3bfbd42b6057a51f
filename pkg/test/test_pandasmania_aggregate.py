from unittest import TestCase

import numpy
import pandas

from giftmania.pandasmania.aggregate import flatten_aggregated_columns, gift_fraction_summary, outcome_counts, \
    rate_matrix, wilson_interval


class TestFlatten(TestCase):
    def test_flat_columns_are_kept(self):
        pd = pandas.DataFrame({'a': [1]})
        assert flatten_aggregated_columns(pd) is pd

    def test_three_levels(self):
        columns = pandas.MultiIndex.from_tuples([('x', 'sum', 'a'), ('y', '', '')])
        pd = pandas.DataFrame([[1, 2]], columns=columns)
        assert list(flatten_aggregated_columns(pd, '.').columns) == ['x.sum.a', 'y']

    def test_empty_second_level(self):
        pd = pandas.DataFrame({'run': [0, 0], 'x': [1, 2]}).groupby('run').agg({'x': ['sum']}).reset_index()
        assert list(flatten_aggregated_columns(pd).columns) == ['run', 'x_sum']


class TestWilson(TestCase):
    def test_interval(self):
        low, high = wilson_interval(22, 256)
        assert low < 22 / 256 < high
        assert 0.05 < low < 0.06 and 0.12 < high < 0.13
        low, high = wilson_interval(256, 256)
        assert 0.98 < low < high <= 1.0
        assert all(numpy.isnan(wilson_interval(0, 0)))


class TestOutcomeCounts(TestCase):
    def test_counts(self):
        runs = pandas.DataFrame({'environment': ['bos'] * 4 + ['assurance'] * 2,
                                 'outcome': ['prosocial', 'other_pne', 'unconverged', 'prosocial',
                                             'failed', 'failed']})
        table = outcome_counts(runs, ['environment']).set_index('environment')
        assert table.loc['bos', 'seeds'] == 4
        assert table.loc['bos', 'prosocial_rate'] == 0.5
        assert table.loc['bos', 'pne_rate'] == 0.75
        assert table.loc['bos', 'risk_dominant'] == 0
        assert table.loc['assurance', 'failed'] == 2
        assert numpy.isnan(table.loc['assurance', 'prosocial_rate'])
        assert numpy.isnan(table.loc['assurance', 'ci_low'])


class TestGiftFractionSummary(TestCase):
    def test_summary(self):
        curves = pandas.DataFrame({'run': [0] * 4 + [1] * 4,
                                   'optimization_step': [1, 2, 3, 4] * 2,
                                   'batch_gift_fraction': [1.0, 0.8, 0.2, 0.0, numpy.nan, 0.5, 0.5, 0.1]})
        summary = gift_fraction_summary(curves, window=2).set_index('run')
        assert summary.loc[0, 'start_fraction'] == 0.9
        assert summary.loc[0, 'end_fraction'] == 0.1
        assert summary.loc[1, 'start_fraction'] == 0.5
        assert abs(summary.loc[1, 'end_fraction'] - 0.3) < 1e-12
        assert list(summary.columns) == ['start_fraction', 'end_fraction', 'last_step']
        assert summary['last_step'].tolist() == [4, 4]


class TestRateMatrix(TestCase):
    def test_other_value(self):
        table = pandas.DataFrame({'r': [-2.0, -6.0], 'arm': ['off', 'off'], 'pne_rate': [1.0, 0.9]})
        matrix = rate_matrix(table, 'r', 'arm', 'pne_rate')
        assert matrix.loc[-6.0, 'off'] == 0.9
