from pathlib import Path
from typing import Any, Dict, Tuple, Union

import pandas
import yaml
from pandas import DataFrame

from giftmania import __version__
from giftmania.pandasmania.util import md5hash

HEADER_PREFIX = '# '


def _header_value(value: Any) -> str:
    return yaml.safe_dump(value, default_flow_style=True, width=float('inf')).strip().removesuffix('...').strip()


def table_header(pd: DataFrame, params: Dict[str, Any], study_seed: Any = None) -> Dict[str, Any]:
    """
    API to build the self-describing header of a result table: tool version, resolved parameters, study seed
    and the digest of the table.
    """
    return {'tool': 'giftmania', 'version': __version__, 'study_seed': study_seed, 'params': params,
            'rows': len(pd), 'digest': md5hash(pd)}


def write_table(pd: DataFrame, path: Union[str, Path], header: Dict[str, Any]) -> Path:
    """
    API to write a table as CSV preceded by one `# key: value` line per header entry.

    Args:
        pd: table to write, index is dropped
        path: destination file; parent directories are created
        header: header entries, values are written as single-line YAML
    Returns:
        written path
    Examples:
        >>> import tempfile
        >>> pd = pandas.DataFrame({'r': [-6.0], 'prosocial_rate': [0.25]})
        >>> with tempfile.TemporaryDirectory() as d:
        ...     path = write_table(pd, Path(d) / 'table.csv', {'version': '0.3.0', 'params': {'seeds': 8}})
        ...     print(path.read_text())
        # version: 0.3.0
        # params: {seeds: 8}
        r,prosocial_rate
        -6.0,0.25
        <BLANKLINE>
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as f:
        for key, value in header.items():
            f.write(f'{HEADER_PREFIX}{key}: {_header_value(value)}\n')
        pd.to_csv(f, index=False)
    return path


def read_table(path: Union[str, Path]) -> Tuple[Dict[str, Any], DataFrame]:
    """
    API to read a table written by `write_table`.

    Returns:
        header entries and the table
    """
    path = Path(path)
    header = {}
    skip = 0
    with path.open() as f:
        for line in f:
            if not line.startswith(HEADER_PREFIX):
                break
            key, _, value = line[len(HEADER_PREFIX):].partition(': ')
            header[key] = yaml.safe_load(value)
            skip += 1
    return header, pandas.read_csv(path, skiprows=skip)
