from typing import Dict, Iterator, Optional, Sequence

import pandas as pd


class TraceCollector:
    """In-memory per-step records; missing fields are filled from DEFAULTS."""

    COLUMNS: Sequence[str] = ()
    DEFAULTS: Dict[str, object] = {}

    def __init__(self, columns: Optional[Sequence[str]] = None):
        self.columns = list(columns if columns is not None else self.COLUMNS)
        self.records = []

    def save_record(self, record_data: Dict[str, object]) -> Dict[str, object]:
        record = {**self.DEFAULTS, **record_data}
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[Dict[str, object]]:
        return iter(self.records)

    def column(self, name: str) -> list:
        return [rec[name] for rec in self.records]

    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame(self.records, columns=None if self.records else self.columns)
        existing = [c for c in self.columns if c in df.columns]
        remaining = [c for c in df.columns if c not in self.columns]
        return df[existing + remaining]
