"""
Spike Forecaster - CSV Tick Source

Reads and writes tick files with the header `date,timestamp_us,price,volume`.
A source may point at one file or at a directory of `*.csv` files.
"""

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
import structlog

from app.exceptions import DataError, MalformedRowError, NotFoundError
from sources.base import BaseTickSource, DayTicks

logger = structlog.get_logger(__name__)


TICK_COLUMNS = ("date", "timestamp_us", "price", "volume")

# Data rows start on line 2 of the file (line 1 is the header)
FIRST_DATA_LINE = 2


def _row_problem(date, timestamp, price, volume) -> str:
    """Describe the first thing wrong with one parsed row."""
    if pd.isna(date):
        return "invalid date"
    if pd.isna(timestamp) or timestamp != np.floor(timestamp) or timestamp < 0:
        return "invalid timestamp_us"
    if pd.isna(price) or not price > 0:
        return "price must be a positive decimal"
    if pd.isna(volume) or volume != np.floor(volume):
        return "volume must be an integer"
    if volume <= 0:
        return "volume must be positive"
    return "invalid row"


def load_ticks(path: Union[str, Path]) -> list[DayTicks]:
    """
    Load one tick CSV file and split it into trading days.

    Args:
        path: CSV file with the tick header.

    Returns:
        Days sorted by date; rows of a day keep their file order.

    Raises:
        NotFoundError: the file does not exist.
        MalformedRowError: a row fails validation (carries the line number).
        DataError: the header is wrong or timestamps go backwards.
    """
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"Tick file not found: {path}", details={"path": str(path)})

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise DataError(f"Tick file is empty: {path}", details={"path": str(path)})
    except pd.errors.ParserError as e:
        raise DataError(f"Unparseable tick file {path}: {e}", details={"path": str(path)})

    missing = [c for c in TICK_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(
            f"Tick file {path} is missing columns: {', '.join(missing)}",
            details={"path": str(path), "missing": missing},
        )

    dates = pd.to_datetime(frame["date"], format="%Y-%m-%d", errors="coerce")
    timestamps = pd.to_numeric(frame["timestamp_us"], errors="coerce")
    prices = pd.to_numeric(frame["price"], errors="coerce")
    volumes = pd.to_numeric(frame["volume"], errors="coerce")

    bad = (
        dates.isna()
        | timestamps.isna()
        | (timestamps < 0)
        | (timestamps != np.floor(timestamps))
        | prices.isna()
        | ~(prices > 0)
        | volumes.isna()
        | (volumes != np.floor(volumes))
        | ~(volumes > 0)
    )
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        reason = _row_problem(dates.iloc[row], timestamps.iloc[row], prices.iloc[row], volumes.iloc[row])
        raise MalformedRowError(reason, line=row + FIRST_DATA_LINE, details={"path": str(path)})

    labels = dates.dt.strftime("%Y-%m-%d").to_numpy()
    ts = timestamps.to_numpy(dtype=np.int64)
    px = prices.to_numpy(dtype=np.float64)
    vol = volumes.to_numpy(dtype=np.int64)

    days: list[DayTicks] = []
    for date in sorted(set(labels)):
        rows = np.flatnonzero(labels == date)
        day_ts = ts[rows]
        backwards = np.flatnonzero(np.diff(day_ts) < 0)
        if backwards.size:
            row = int(rows[backwards[0] + 1])
            raise DataError(
                f"Non-monotone timestamps on {date} (line {row + FIRST_DATA_LINE})",
                details={"path": str(path), "line": row + FIRST_DATA_LINE, "date": date},
            )
        days.append(DayTicks(date=date, timestamps=day_ts, prices=px[rows], volumes=vol[rows]))

    logger.debug("Loaded tick file", path=str(path), days=len(days), rows=len(frame))
    return days


def write_ticks_csv(day: DayTicks, path: Union[str, Path]) -> Path:
    """Write one day in the tick CSV schema."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({
        "date": [day.date] * len(day),
        "timestamp_us": day.timestamps,
        "price": day.prices,
        "volume": day.volumes,
    })
    frame.to_csv(path, index=False)
    return path


class CsvTickSource(BaseTickSource):
    """Tick source backed by a CSV file or a directory of CSV files."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    @property
    def name(self) -> str:
        return "csv"

    def _files(self) -> list[Path]:
        if self.path.is_dir():
            files = sorted(self.path.glob("*.csv"))
            if not files:
                raise NotFoundError(
                    f"No tick CSV files in {self.path}",
                    details={"path": str(self.path)},
                )
            return files
        return [self.path]

    def load_days(self) -> list[DayTicks]:
        by_date: dict[str, DayTicks] = {}
        for file in self._files():
            for day in load_ticks(file):
                if day.date in by_date:
                    raise DataError(
                        f"Trading day {day.date} appears in more than one file",
                        details={"date": day.date, "path": str(file)},
                    )
                by_date[day.date] = day

        days = [by_date[d] for d in sorted(by_date)]
        logger.info("Loaded tick days", source=self.name, days=len(days))
        return days
