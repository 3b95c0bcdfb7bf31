"""
Plain-text and CSV codecs.

Function tables: first line n, second line the n values separated by spaces.
Profiles: first line n, then one "i b_i" line per nonzero entry.
Hybrid sequences: one "H_j" header line per hybrid followed by its profile,
stanzas separated by a blank line.
CSV files are UTF-8 with LF line endings and a fixed header.
"""

import csv
import io
from pathlib import Path
from typing import Iterable, List, Sequence

from loguru import logger
from pydantic import ValidationError as PydanticValidationError

from ..core.collision_profiles import CollisionProfile
from ..core.function_model import FunctionTable
from ..core.hybrids_reductions import HybridSequence
from ..utils.exceptions import InputReadError, OutputWriteError, QuerySimError
from ..utils.helpers import format_float
from .records import SWEEP_HEADER, THRESHOLD_HEADER, SweepRow, ThresholdPoint


def read_text(path: str) -> str:
    """
    Raises:
        InputReadError: If the file is missing or unreadable
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise InputReadError(str(path), "file not found", original_exception=e)
    except (OSError, UnicodeDecodeError) as e:
        raise InputReadError(str(path), str(e), original_exception=e)


def write_text(path: str, text: str) -> None:
    """
    Write text with LF line endings.

    Raises:
        OutputWriteError: If the file cannot be written
    """
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise OutputWriteError(str(path), original_exception=e)
    logger.info(f"Wrote {path}")


def _content_lines(text: str) -> List[str]:
    return [line.strip() for line in text.splitlines() if line.strip()]


def _parse_int(token: str, source: str) -> int:
    try:
        return int(token)
    except ValueError as e:
        raise InputReadError(source, f"not an integer: {token!r}", original_exception=e)


def format_function(f: FunctionTable) -> str:
    return f"{f.n}\n{' '.join(str(v) for v in f.to_list())}\n"


def parse_function(text: str, source: str = "<input>") -> FunctionTable:
    """
    Raises:
        InputReadError: On malformed text or an invalid table
    """
    lines = _content_lines(text)
    if len(lines) != 2:
        raise InputReadError(source, f"expected 2 lines (n, values), got {len(lines)}")
    n = _parse_int(lines[0], source)
    values = [_parse_int(token, source) for token in lines[1].split()]
    if len(values) != n:
        raise InputReadError(source, f"header says n={n} but {len(values)} values follow")
    try:
        return FunctionTable(n=n, values=values)
    except QuerySimError as e:
        raise InputReadError(source, e.message, original_exception=e)


def format_profile(profile: CollisionProfile) -> str:
    lines = [str(profile.n)] + [f"{i} {b}" for i, b in profile.items()]
    return "\n".join(lines) + "\n"


def parse_profile(text: str, source: str = "<input>") -> CollisionProfile:
    """
    Raises:
        InputReadError: On malformed text or an invalid profile
    """
    lines = _content_lines(text)
    if not lines:
        raise InputReadError(source, "empty profile")
    n = _parse_int(lines[0], source)
    counts = {}
    for line in lines[1:]:
        tokens = line.split()
        if len(tokens) != 2:
            raise InputReadError(source, f"expected 'i b_i', got {line!r}")
        i, b = (_parse_int(token, source) for token in tokens)
        if i in counts:
            raise InputReadError(source, f"multiplicity {i} listed twice")
        counts[i] = b
    try:
        return CollisionProfile(n=n, counts=counts)
    except QuerySimError as e:
        raise InputReadError(source, e.message, original_exception=e)


def format_hybrids(hs: HybridSequence) -> str:
    stanzas = [f"H_{j}\n{format_profile(profile)}" for j, profile in enumerate(hs.profiles)]
    return "\n".join(stanzas)


def _write_rows(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    """CSV text with the fixed sweep header; floats use repr."""
    return _write_rows(SWEEP_HEADER, (
        (
            str(row.n),
            str(row.budget),
            format_float(row.p_function),
            format_float(row.p_permutation),
            format_float(row.bias),
            format_float(row.ci_halfwidth),
            str(row.trials),
            str(row.seed),
        )
        for row in rows
    ))


def threshold_csv(points: Iterable[ThresholdPoint]) -> str:
    return _write_rows(THRESHOLD_HEADER, ((str(p.n), str(p.threshold_budget)) for p in points))


def _read_records(path: str) -> tuple:
    reader = csv.DictReader(io.StringIO(read_text(path)))
    return tuple(reader.fieldnames or ()), list(reader)


def read_sweep_csv(path: str) -> List[SweepRow]:
    """
    Raises:
        InputReadError: On a wrong header or an invalid row
    """
    header, records = _read_records(path)
    if header != SWEEP_HEADER:
        raise InputReadError(str(path), f"unexpected header {list(header)}")
    try:
        return [SweepRow(**record) for record in records]
    except PydanticValidationError as e:
        raise InputReadError(str(path), "invalid sweep row", original_exception=e)


def read_threshold_csv(path: str) -> List[ThresholdPoint]:
    """
    Raises:
        InputReadError: On a wrong header or an invalid row
    """
    header, records = _read_records(path)
    if header != THRESHOLD_HEADER:
        raise InputReadError(str(path), f"unexpected header {list(header)}")
    try:
        return [ThresholdPoint(**record) for record in records]
    except PydanticValidationError as e:
        raise InputReadError(str(path), "invalid threshold row", original_exception=e)


def csv_header(path: str) -> tuple:
    """Header row of a CSV file."""
    return _read_records(path)[0]
