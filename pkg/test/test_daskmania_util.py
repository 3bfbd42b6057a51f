from unittest import TestCase, mock

from giftmania.daskmania.util import WORKERS_ENV, enforce_failure_budget, parallel_map, resolve_workers
from giftmania.errors import ConfigError, StudyHealthError


def square(x):
    return x * x


class TestResolveWorkers(TestCase):
    def test_environment_variable(self):
        with mock.patch.dict('os.environ', {WORKERS_ENV: '3'}):
            assert resolve_workers() == 3
            assert resolve_workers(5) == 5
        with mock.patch.dict('os.environ', {WORKERS_ENV: 'many'}):
            with self.assertRaises(ConfigError):
                resolve_workers()

    def test_cpu_count_fallback(self):
        with mock.patch.dict('os.environ', clear=True):
            assert resolve_workers() >= 1


class TestParallelMap(TestCase):
    def test_order_is_kept(self):
        items = list(range(37))
        assert parallel_map(square, items, workers=4, scheduler='threads') == [x * x for x in items]
        assert parallel_map(square, items, workers=1) == [x * x for x in items]

    def test_empty(self):
        assert parallel_map(square, [], workers=2) == []


class TestFailureBudget(TestCase):
    def test_budget(self):
        enforce_failure_budget(0, 0, 'runs')
        enforce_failure_budget(2, 200, 'cells')
        with self.assertRaises(StudyHealthError):
            enforce_failure_budget(3, 200, 'cells')
