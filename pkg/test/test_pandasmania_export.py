import tempfile
from pathlib import Path
from unittest import TestCase

import pandas

from giftmania.pandasmania.export import read_table, table_header, write_table
from giftmania.pandasmania.util import md5hash


class TestExport(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directory = Path(self.tmp.name)
        self.table = pandas.DataFrame({'environment': ['bos', 'stag-hunt-medium'], 'arm': ['off', 'gift=10'],
                                       'prosocial_rate': [0.4, 0.21]})

    def tearDown(self):
        self.tmp.cleanup()

    def test_header(self):
        params = {'study': {'seeds': 256, 'gifts': ['off', 10.0]}}
        header = table_header(self.table, params, 0)
        path = write_table(self.table, self.directory / 'sub' / 'table2.csv', header)
        read_header, table = read_table(path)
        assert read_header == header
        pandas.testing.assert_frame_equal(table, self.table)
        assert read_header['digest'] == md5hash(table)

    def test_comment_lines_are_skippable(self):
        path = write_table(self.table, self.directory / 't.csv', {'version': '0.3.0'})
        pandas.testing.assert_frame_equal(pandas.read_csv(path, comment='#'), self.table)
