"""
Spike Forecaster - Trial Store

Optimisation studies are persisted as newline-delimited JSON, one trial
per line, appended as trials finish so an interrupted study can resume.
"""

from pathlib import Path
from typing import Union

import orjson
import structlog
from pydantic import ValidationError as PydanticValidationError

from app.exceptions import DataError
from app.schemas import TrialRecord

logger = structlog.get_logger(__name__)


class TrialStore:
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def exists(self) -> bool:
        return self.path.is_file()

    def reset(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_bytes(b"")

    def append(self, record: TrialRecord) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("ab") as handle:
            handle.write(orjson.dumps(record.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS) + b"\n")

    def load(self) -> list[TrialRecord]:
        """
        Read every stored trial.

        Raises:
            DataError: a line is not a valid trial record.
        """
        if not self.exists():
            return []
        records = []
        for line_no, line in enumerate(self.path.read_bytes().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                records.append(TrialRecord.model_validate(orjson.loads(line)))
            except (orjson.JSONDecodeError, PydanticValidationError) as e:
                raise DataError(
                    f"Invalid trial record in {self.path} (line {line_no})",
                    details={"line": line_no, "error": str(e)},
                )
        logger.debug("Loaded trials", path=str(self.path), count=len(records))
        return records
