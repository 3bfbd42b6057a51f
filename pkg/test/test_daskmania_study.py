from unittest import TestCase
from unittest.mock import patch

import pandas

from giftmania.daskmania.study import StudyResult, StudySpec, arm_label, convergence_table, risk_gift_sweep, \
    transient_trace
from giftmania.errors import StudyHealthError
from giftmania.gamemania.equilibrium import OUTCOME_KINDS
from giftmania.qmania.train import TrainConfig, train_run

SMALL = TrainConfig(episodes=200, warmup=32, backend='tabular', target_period=50)


class TestConvergenceTable(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.spec = StudySpec(environments=('bos', 'stag-hunt-medium'), seeds=4, train=SMALL, study_seed=5)
        cls.result = convergence_table(cls.spec, workers=1, scheduler='sync')

    def test_table(self):
        table = self.result.table
        assert table[['environment', 'arm']].values.tolist() == [
            ['bos', 'off'], ['bos', 'gift=10'], ['stag-hunt-medium', 'off'], ['stag-hunt-medium', 'gift=10']]
        assert (table['seeds'] == 4).all()
        assert (table[list(OUTCOME_KINDS)].sum(axis=1) == 4).all()
        assert len(self.result.runs) == 16

    def test_reproducible(self):
        again = convergence_table(self.spec, workers=1, scheduler='sync')
        pandas.testing.assert_frame_equal(again.runs, self.result.runs)

    def test_independent_of_environment_order(self):
        spec = StudySpec(environments=('stag-hunt-medium', 'bos'), seeds=4, train=SMALL, study_seed=5)
        reversed_runs = convergence_table(spec, workers=1, scheduler='sync').runs
        keys = ['environment', 'arm', 'run']
        a = self.result.runs.sort_values(keys).reset_index(drop=True)
        b = reversed_runs.sort_values(keys).reset_index(drop=True)
        pandas.testing.assert_frame_equal(a, b)

    def test_document(self):
        document = self.result.to_document()
        assert document['runs'] == 16
        assert document['params']['gifts'] == ['off', 10.0]
        assert len(document['table']) == 4
        assert all(type(v) in (str, int, float, bool, type(None)) for row in document['table'] for v in row.values())
        self.result.check_health()


class TestHealth(TestCase):
    def test_failure_budget(self):
        runs = pandas.DataFrame({'outcome': ['failed'] * 2 + ['prosocial'] * 98})
        result = StudyResult(runs, pandas.DataFrame(), {}, 0.0)
        assert result.failed == 2
        with self.assertRaises(StudyHealthError):
            result.check_health()


class TestRiskGiftSweep(TestCase):
    def test_matrix(self):
        result = risk_gift_sweep([-2.0, -10.0], [5.0, 0.0], seeds=2, config=SMALL, workers=1, scheduler='sync')
        matrix = result.matrix
        assert list(matrix.columns) == ['off', 'gift=5', 'gift=0']
        assert sorted(matrix.index.tolist()) == [-10.0, -2.0]
        assert ((matrix >= 0) & (matrix <= 1)).all().all()
        assert len(result.runs) == 2 * 3 * 2

    def test_cells_draw_their_own_seeds(self):
        states = {}

        def recording_train_run(env, config, seed):
            states.setdefault(float(env.stage.payoffs[0, 0, 1]), []).append(tuple(seed.generate_state(4)))
            return train_run(env, config, seed)

        with patch('giftmania.daskmania.study.train_run', side_effect=recording_train_run):
            result = risk_gift_sweep([-2.0, -10.0], [0.0], seeds=3, config=SMALL, workers=1, scheduler='sync')
        assert sorted(states) == [-10.0, -2.0]
        assert not set(states[-2.0]) & set(states[-10.0])
        runs = result.runs
        columns = ['r', 'run', 'outcome', 'joint']
        off = runs[runs['arm'] == 'off'][columns].reset_index(drop=True)
        zero = runs[runs['arm'] == 'gift=0'][columns].reset_index(drop=True)
        pandas.testing.assert_frame_equal(off, zero)

class TestTransientTrace(TestCase):
    def test_small_trace(self):
        config = TrainConfig(episodes=300, warmup=32, backend='tabular', target_period=50, gift_bias=1.0)
        result = transient_trace(seeds=2, config=config, every=10, window=20, workers=1, scheduler='sync')
        table = result.table
        assert list(table.columns) == ['run', 'outcome', 'start_fraction', 'end_fraction', 'transient',
                                       'ends_gift_free']
        assert (table['start_fraction'] > 0.5).all()
        curves = result.curves
        assert sorted(curves['run'].unique().tolist()) == [0, 1]
        assert len(curves) == 2 * 27
        assert curves['optimization_step'].iloc[0] == 1
        assert curves['batch_gift_fraction'].notna().all()


class TestArmLabel(TestCase):
    def test_labels(self):
        assert arm_label(0.0) == 'gift=0'
        assert arm_label(20) == 'gift=20'


class TestZeroGiftArm(TestCase):
    def test_matches_baseline_run_by_run(self):
        spec = StudySpec(environments=('stag-hunt-medium', 'fc3-stag-hunt'), gifts=(None, 0.0), seeds=3,
                         train=SMALL)
        runs = convergence_table(spec, workers=1, scheduler='sync').runs
        columns = ['environment', 'run', 'outcome', 'gift_free', 'joint']
        off = runs[runs['arm'] == 'off'][columns].reset_index(drop=True)
        zero = runs[runs['arm'] == 'gift=0'][columns].reset_index(drop=True)
        pandas.testing.assert_frame_equal(off, zero)
