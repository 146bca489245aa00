"""
Spike Forecaster - Tick Source Registry

Factory that turns a data source config into a tick source.
"""

from app.exceptions import ValidationError
from app.schemas import DataSourceConfig
from sources.base import BaseTickSource


def get_source(config: DataSourceConfig) -> BaseTickSource:
    """
    Factory function to create the configured tick source.

    Args:
        config: Data source section of the run config.

    Returns:
        CSV or synthetic tick source.
    """
    if config.csv_dir is not None:
        from sources.csv_file import CsvTickSource
        return CsvTickSource(config.csv_dir)

    elif config.synthetic is not None:
        from sources.synthetic import SyntheticTickSource
        return SyntheticTickSource(config.synthetic)

    else:
        raise ValidationError("Data source needs csv_dir or synthetic")
