"""
Full-scale studies. They take hours with the default settings and only run with GIFTMANIA_ACCEPTANCE=1.
"""
import os
from unittest import TestCase, skipUnless

from giftmania.daskmania.study import StudySpec, convergence_table, transient_trace
from giftmania.flowmania.basin import basin_sweep, frequency_sweep
from giftmania.gamemania.coordination import stag_hunt
from giftmania.gamemania.equilibrium import OTHER_PNE, PROSOCIAL, RISK_DOMINANT
from giftmania.gamemania.gifting import GiftSet

ACCEPTANCE = os.environ.get('GIFTMANIA_ACCEPTANCE') == '1'


@skipUnless(ACCEPTANCE, 'set GIFTMANIA_ACCEPTANCE=1 to run the full-scale studies')
class TestDynamicsAcceptance(TestCase):
    def test_basin(self):
        gifted, ungifted = basin_sweep(stag_hunt(-6), GiftSet.binary(2, 10), resolution=21, gift_samples=5)
        assert gifted.aggregate_prosocial() > ungifted.aggregate_prosocial()
        cells = ungifted.cells[ungifted.cells['prosocial_fraction'] == 1.0]
        for x, y in zip(cells['x_diff'], cells['y_diff']):
            assert gifted.fraction_at(x, y) >= 0.8

    def test_frequency(self):
        table = frequency_sweep([-10.0, -6.0, -2.0], range(1, 21), resolution=11, gift_samples=3)
        for r, group in table.groupby('r'):
            baseline = group.loc[~group['gifted'], 'prosocial_frequency'].iloc[0]
            gifted = group[group['gifted']].set_index('gamma')['prosocial_frequency']
            assert gifted[20.0] >= gifted[1.0]
            assert (gifted >= baseline).all()


@skipUnless(ACCEPTANCE, 'set GIFTMANIA_ACCEPTANCE=1 to run the full-scale studies')
class TestConvergenceAcceptance(TestCase):
    @classmethod
    def setUpClass(cls):
        result = convergence_table(StudySpec(seeds=256))
        result.check_health()
        cls.table = result.table.set_index(['environment', 'arm'])

    def rate(self, environment, arm, column='prosocial_rate'):
        return self.table.loc[(environment, arm), column]

    def test_coordination_games_reach_equilibria(self):
        for environment in ('bos', 'pure-coordination'):
            for arm in ('off', 'gift=10'):
                assert self.rate(environment, arm, 'pne_rate') >= 0.99

    def test_high_risk(self):
        assert self.rate('stag-hunt-high', 'off') <= 0.03
        assert self.rate('stag-hunt-high', 'gift=10') >= 0.08
        assert self.rate('stag-hunt-high', 'gift=10') - self.rate('stag-hunt-high', 'off') >= 0.05

    def test_medium_risk(self):
        assert 0.02 <= self.rate('stag-hunt-medium', 'off') <= 0.20
        assert self.rate('stag-hunt-medium', 'gift=10') - self.rate('stag-hunt-medium', 'off') >= 0.05

    def test_repeated(self):
        assert self.rate('repeated-stag-hunt', 'off') <= 0.03
        assert self.rate('repeated-stag-hunt', 'gift=10') >= 0.05

    def test_more_agents_coordinate_less(self):
        for arm in ('off', 'gift=10'):
            assert self.rate('fc4-stag-hunt', arm) <= self.rate('fc3-stag-hunt', arm, 'ci_high')


@skipUnless(ACCEPTANCE, 'set GIFTMANIA_ACCEPTANCE=1 to run the full-scale studies')
class TestTransientAcceptance(TestCase):
    def test_transient_gifting(self):
        result = transient_trace(seeds=64)
        result.check_health()
        table = result.table
        assert table['transient'].any()
        reached = table['outcome'].isin([PROSOCIAL, RISK_DOMINANT, OTHER_PNE])
        assert (table.loc[reached, 'end_fraction'] < 0.01).all()
