"""
Spike Forecaster - Artifact Storage

JSON and CSV readers/writers for everything a run leaves on disk. JSON is
written with sorted keys and fixed indentation so identical results give
byte-identical files.
"""

from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import orjson
import pandas as pd
from pydantic import BaseModel

from app.exceptions import DataError, NotFoundError

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY

PathLike = Union[str, Path]


def _default(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def dumps_json(document: Any) -> bytes:
    if isinstance(document, BaseModel):
        document = document.model_dump(mode="json")
    return orjson.dumps(document, default=_default, option=JSON_OPTIONS)


def write_json(document: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_json(document) + b"\n")
    return path


def read_json(path: PathLike) -> Any:
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"File not found: {path}", details={"path": str(path)})
    try:
        return orjson.loads(path.read_bytes())
    except orjson.JSONDecodeError as e:
        raise DataError(f"Invalid JSON in {path}: {e}", details={"path": str(path)})


def write_csv(
    rows: Union[pd.DataFrame, Iterable[Mapping[str, Any]], Iterable[BaseModel]],
    path: PathLike,
    columns: Optional[Sequence[str]] = None,
) -> Path:
    """Write rows (dicts, models or a DataFrame) as CSV without an index."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(rows, pd.DataFrame):
        frame = rows
    else:
        records = [r.model_dump(mode="json") if isinstance(r, BaseModel) else dict(r) for r in rows]
        frame = pd.DataFrame.from_records(records, columns=list(columns) if columns else None)
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    frame.to_csv(path, index=False)
    return path


def read_csv(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"File not found: {path}", details={"path": str(path)})
    return pd.read_csv(path)
