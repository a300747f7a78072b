"""
Series ingest: load a univariate `t,value` CSV into an immutable TimeSeries.
"""
import logging
import math
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np
import pandas as pd

from .errors import GapError, InputError, NonFiniteError, OutOfRangeError, ParseError, TooShortError
from .utils import fingerprint, is_integer_valued

logger = logging.getLogger(__name__)

MIN_LENGTH = 3


@dataclass(frozen=True)
class Observation:
    t: int
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise NonFiniteError(f"Observation at t={self.t} is not finite: {self.value}")


@dataclass(frozen=True)
class TimeSeries:
    observations: Tuple[Observation, ...]

    def __post_init__(self):
        times = [o.t for o in self.observations]
        for prev, cur in zip(times, times[1:]):
            if cur != prev + 1:
                raise GapError(f"Time index jumps from {prev} to {cur}; series must be gap-free")
        if len(self.observations) < MIN_LENGTH:
            raise TooShortError(
                f"Series has {len(self.observations)} observations, at least {MIN_LENGTH} required"
            )

    @classmethod
    def from_pairs(cls, pairs):
        return cls(tuple(Observation(int(t), float(v)) for t, v in pairs))

    def __len__(self):
        return len(self.observations)

    def __iter__(self) -> Iterator[Observation]:
        return iter(self.observations)

    @property
    def start(self) -> int:
        return self.observations[0].t

    @property
    def end(self) -> int:
        return self.observations[-1].t

    @property
    def times(self):
        return [o.t for o in self.observations]

    @property
    def values(self) -> np.ndarray:
        return np.array([o.value for o in self.observations], dtype=float)

    @property
    def integer_valued(self) -> bool:
        return is_integer_valued(self.values)

    def value_at(self, t) -> float:
        return value_at(self, t)

    def fingerprint(self) -> str:
        return fingerprint([[o.t, o.value] for o in self.observations])


def value_at(series: TimeSeries, t) -> float:
    if not series.start <= t <= series.end:
        raise OutOfRangeError(f"t={t} outside series range [{series.start}, {series.end}]")
    if t != int(t):
        raise OutOfRangeError(f"t={t} is not an integer time index")
    return series.observations[int(t) - series.start].value


def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def _parse_time(text, row):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        as_float = float(text)
    except ValueError:
        raise ParseError(f"time index '{text}' is not an integer", row=row)
    if not math.isfinite(as_float) or not as_float.is_integer():
        raise ParseError(f"time index '{text}' is not an integer", row=row)
    return int(as_float)


def _parse_value(text, row):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"value '{text}' is not a number", row=row)
    if not math.isfinite(value):
        raise NonFiniteError(f"row {row}: value '{text}' is not finite")
    return value


def _cell(x) -> str:
    # short rows come back as NaN
    return "" if pd.isna(x) else str(x).strip()


def _malformed_row(path, error) -> Optional[int]:
    """Non-blank row number of the first row without exactly two fields."""
    with open(path, 'r', encoding='utf-8-sig', errors='replace', newline='') as f:
        rows = (line for line in f.read().splitlines() if line.strip())
        for row, line in enumerate(rows, start=1):
            if len(line.split(',')) != 2:
                return row
    match = re.search(r"line (\d+)", str(error))
    return int(match.group(1)) if match else None


def load_csv(path) -> TimeSeries:
    """
    Load a two-column `t,value` CSV (UTF-8, LF or CRLF, optional header).

    The header is recognised by a non-numeric first field on the first row.
    Row numbers in errors count non-blank rows from 1, header included.
    Rows are returned sorted by t.
    """
    try:
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            skipinitialspace=True,
            encoding='utf-8-sig',
        )
    except FileNotFoundError:
        raise InputError(f"Input file does not exist: {path}")
    except UnicodeDecodeError as e:
        raise ParseError(f"not valid UTF-8: {e}")
    except pd.errors.EmptyDataError:
        raise TooShortError(f"{path} contains no rows")
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}", row=_malformed_row(path, e))

    if frame.shape[1] != 2:
        raise ParseError(f"expected 2 columns (t,value), found {frame.shape[1]}", row=1)

    rows = [(_cell(t), _cell(v)) for t, v in frame.itertuples(index=False, name=None)]
    first_row = 1
    if rows and not _is_number(rows[0][0]):
        logger.debug(f"Skipping header row {rows[0]}")
        rows = rows[1:]
        first_row = 2

    observations = []
    for offset, (t_text, v_text) in enumerate(rows):
        row = first_row + offset
        if not t_text or not v_text:
            raise ParseError("expected 2 fields `t,value`", row=row)
        observations.append(Observation(_parse_time(t_text, row), _parse_value(v_text, row)))

    observations.sort(key=lambda o: o.t)
    for prev, cur in zip(observations, observations[1:]):
        if cur.t == prev.t:
            raise GapError(f"Duplicate time index {cur.t}")

    series = TimeSeries(tuple(observations))
    logger.info(f"Loaded {len(series)} observations ({series.start}-{series.end}) from {path}")
    return series
