from pathlib import Path
from typing import Any, Dict, Union

from intake import DataSource, open_catalog
from intake.catalog.local import YAMLFileCatalog
from intake.source.csv import CSVSource

CATALOG_FILE = 'catalog.yaml'


def add_source_to_catalog(source: DataSource, catalog_file: Union[Path, str]):
    """
    API to add new data source to catalog_file.

    Args:
        source: data source to add.
        catalog_file: file where data source to be added. if file doesn't exist, file will be created.
    Examples:
        >>> import tempfile
        >>> import yaml
        >>> with tempfile.TemporaryDirectory() as d:
        ...     source = CSVSource(f'{d}/basin-gifted.csv')
        ...     source.name = 'basin-gifted'
        ...     add_source_to_catalog(source, f'{d}/catalog.yaml')
        ...     print(list(yaml.safe_load(Path(f'{d}/catalog.yaml').read_text())['sources']))
        ['basin-gifted']
    """
    catalog_file = Path(catalog_file)
    try:
        catalog: YAMLFileCatalog = YAMLFileCatalog(path=str(catalog_file))
    except FileNotFoundError:
        _catalog = open_catalog()
        _catalog.save(url=str(catalog_file))
        catalog: YAMLFileCatalog = YAMLFileCatalog(path=str(catalog_file))
    catalog.add(source, name=source.name)


def register_output(path: Union[Path, str], name: str, metadata: Dict[str, Any], catalog_dir: Union[Path, str]):
    """
    API to register a CSV output written with `giftmania.pandasmania.export.write_table` in the intake catalog of
    its output directory, with the header entries as metadata.

    Args:
        path: CSV output
        name: data source name
        metadata: plain YAML-serializable provenance
        catalog_dir: directory holding `catalog.yaml`
    """
    source = CSVSource(str(Path(path).resolve()), csv_kwargs={'comment': '#'}, metadata=metadata)
    source.name = name
    add_source_to_catalog(source, Path(catalog_dir) / CATALOG_FILE)
