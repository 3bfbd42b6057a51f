import tempfile
from pathlib import Path
from unittest import TestCase

import intake
import pandas

from giftmania.intakemania.util import CATALOG_FILE, register_output
from giftmania.pandasmania.export import write_table


class TestRegisterOutput(TestCase):
    def test_register_and_read(self):
        with tempfile.TemporaryDirectory() as d:
            d = Path(d)
            table = pandas.DataFrame({'x_diff': [-3.0, 3.0], 'prosocial_fraction': [0.0, 1.0]})
            for name in ('basin-gifted', 'basin-ungifted'):
                path = write_table(table, d / f'{name}.csv', {'version': '0.3.0', 'rows': 2})
                register_output(path, name, {'rows': 2}, d)

            catalog = intake.open_catalog(str(d / CATALOG_FILE))
            assert sorted(catalog) == ['basin-gifted', 'basin-ungifted']
            source = catalog['basin-gifted']
            assert source.metadata['rows'] == 2
            pandas.testing.assert_frame_equal(source.read(), table)
