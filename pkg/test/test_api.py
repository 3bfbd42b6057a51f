from unittest import TestCase


class TestGameAPI(TestCase):
    def test_import(self):
        import giftmania.gamemania.api as ggapi
        print(ggapi.extend_with_gifting, ggapi.classify_equilibria)


class TestFlowAPI(TestCase):
    def test_import(self):
        import giftmania.flowmania.api as gfapi
        print(gfapi.integrate, gfapi.basin_sweep)


class TestQAPI(TestCase):
    def test_import(self):
        import giftmania.qmania.api as gqapi
        print(gqapi.train_run, gqapi.epsilon_at)


class TestDaskAPI(TestCase):
    def test_import(self):
        import giftmania.daskmania.api as gdapi
        print(gdapi.convergence_table, gdapi.parallel_map)


class TestPandasAPI(TestCase):
    def test_import(self):
        import giftmania.pandasmania.api as gpapi
        print(gpapi.outcome_counts, gpapi.write_table)


class TestIntakeAPI(TestCase):
    def test_import(self):
        import giftmania.intakemania.api as giapi
        print(giapi.add_source_to_catalog, giapi.register_output)
