import hashlib

import pandas
from pandas import DataFrame


def md5hash(pd: DataFrame) -> str:
    """
    API to make md5hash from pandas dataframe. The digest identifies a result table in output headers and
    the output catalog.

    Args:
        pd: pandas dataframe.
    Examples:
        >>> pd = pandas.DataFrame({'r': [-6.0, -6.0], 'prosocial_rate': [0.086, 0.214]})
        >>> md5hash(pd) == md5hash(pd.copy())
        True
        >>> md5hash(pd) == md5hash(pd.iloc[::-1])
        False
    """
    hashes = pandas.util.hash_pandas_object(pd)
    m = hashlib.md5()
    for hash in hashes:
        m.update(hash.to_bytes(8, 'big'))
    return m.hexdigest()
