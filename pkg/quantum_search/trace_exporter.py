import json
import logging
import os
from datetime import datetime
from typing import Optional

import pandas as pd

from .errors import DomainError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _native(value):
    return value.item() if hasattr(value, "item") else str(value)


def _records(df: pd.DataFrame) -> list:
    """Row dicts with NaN as None; floats keep their exact repr."""
    return df.astype(object).where(df.notna(), None).to_dict(orient="records")


class TraceExporter:
    """Writes trace and report frames; without an explicit path, into a timestamped run folder."""

    def __init__(self, output_root: str = "csv_outputs", output_dir: Optional[str] = None):
        self.output_root = output_root
        self._output_dir = output_dir

    @property
    def output_dir(self) -> str:
        if self._output_dir is None:
            self._output_dir = os.path.join(self.output_root, datetime.now().strftime("%Y%m%d_%H%M%S"))
        return self._output_dir

    def resolve(self, path: Optional[str], default_name: str, fmt: str) -> str:
        if path:
            return path
        return os.path.join(self.output_dir, f"{default_name}.{fmt}")

    def export(self, df: pd.DataFrame, path: str, fmt: str = "csv") -> str:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        if fmt == "csv":
            df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        elif fmt == "json":
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(_records(df), fh, indent=2, default=_native)
                fh.write("\n")
        else:
            raise DomainError(f"unknown output format {fmt!r}")
        logger.info("wrote %d rows to %s", len(df), path)
        return path
