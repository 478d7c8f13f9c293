"""
Reading and writing trial recordings (CSV and JSON Lines)
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import IO, List, Optional, Tuple, Union

from ..core.exceptions import DomainError, TrialParseError, TrialValidationError
from .models import CHANNELS, NOMINAL_RATE, MotionSample, Trial

CSV_HEADER = ("t",) + CHANNELS
FORMATS = ("csv", "jsonl")

Source = Union[bytes, str, IO]


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode('utf-8')
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode('utf-8') if isinstance(data, bytes) else data


def _to_float(raw, column: str, line: int, source: Optional[str]) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise TrialParseError(f"column {column}: {raw!r} is not a number", line, source)
    if not math.isfinite(value):
        raise TrialParseError(f"column {column}: non-finite value {raw!r}", line, source)
    return value


def _format_float(value: float) -> str:
    # repr is the shortest string that round-trips exactly
    return repr(float(value))


def _parse_csv(text: str, source: Optional[str]) -> Trial:
    labels = {}
    samples: List[MotionSample] = []
    header_seen = False

    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        first = row[0].strip()
        if first.startswith('#'):
            comment = ','.join(row).lstrip('#').strip()
            key, sep, value = comment.partition('=')
            if sep and key.strip() in ('user', 'word', 'rate'):
                labels[key.strip()] = value.strip()
            continue
        if not header_seen:
            header = tuple(cell.strip() for cell in row)
            if header != CSV_HEADER:
                raise TrialParseError(
                    f"header must be exactly {','.join(CSV_HEADER)}, got {','.join(header)}", line_no, source
                )
            header_seen = True
            continue
        if len(row) != len(CSV_HEADER):
            raise TrialParseError(f"expected {len(CSV_HEADER)} fields, got {len(row)}", line_no, source)
        samples.append(MotionSample(*(
            _to_float(cell.strip(), name, line_no, source) for name, cell in zip(CSV_HEADER, row)
        )))

    if not header_seen:
        raise TrialParseError("missing header line", None, source)

    rate = _to_float(labels['rate'], 'rate', None, source) if 'rate' in labels else NOMINAL_RATE
    return Trial.from_samples(samples, labels.get('word'), labels.get('user'), rate)


def _parse_jsonl(text: str, source: Optional[str]) -> Trial:
    metadata = {}
    samples: List[MotionSample] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise TrialParseError(f"invalid JSON: {e.msg}", line_no, source)
        if not isinstance(obj, dict):
            raise TrialParseError("each line must hold a JSON object", line_no, source)
        if 't' not in obj:
            if samples or metadata:
                raise TrialParseError("metadata object must be the first line", line_no, source)
            metadata = obj
            continue
        missing = [key for key in CSV_HEADER if key not in obj]
        if missing:
            raise TrialParseError(f"missing keys: {', '.join(missing)}", line_no, source)
        samples.append(MotionSample(*(
            _to_float(obj[key], key, line_no, source) for key in CSV_HEADER
        )))

    word = metadata.get('word')
    user = metadata.get('user')
    rate = metadata.get('rate', NOMINAL_RATE)
    return Trial.from_samples(
        samples,
        None if word is None else str(word),
        None if user is None else str(user),
        _to_float(rate, 'rate', 1, source),
    )


def parse_trial(source: Source, format: str = "csv", name: Optional[str] = None) -> Trial:
    """
    Parse a trial from a byte stream

    Args:
        source: Raw bytes, text or an open file
        format: 'csv' or 'jsonl'
        name: Optional source name used in error messages

    Returns:
        Trial with samples in file order
    """
    if format not in FORMATS:
        raise DomainError(f"unsupported trial format: {format}")
    text = _read_text(source)
    if format == 'csv':
        return _parse_csv(text, name)
    return _parse_jsonl(text, name)


def write_trial(trial: Trial, format: str = "csv") -> bytes:
    """
    Serialize a trial

    Args:
        trial: Trial to write
        format: 'csv' or 'jsonl'

    Returns:
        UTF-8 encoded document
    """
    if format not in FORMATS:
        raise DomainError(f"unsupported trial format: {format}")

    buffer = io.StringIO()
    if format == 'csv':
        if trial.user_label is not None:
            buffer.write(f"# user={trial.user_label}\n")
        if trial.word_label is not None:
            buffer.write(f"# word={trial.word_label}\n")
        if trial.nominal_rate != NOMINAL_RATE:
            buffer.write(f"# rate={_format_float(trial.nominal_rate)}\n")
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for t, row in zip(trial.times, trial.values):
            writer.writerow([_format_float(t)] + [_format_float(v) for v in row])
    else:
        metadata = {}
        if trial.user_label is not None:
            metadata['user'] = trial.user_label
        if trial.word_label is not None:
            metadata['word'] = trial.word_label
        if trial.nominal_rate != NOMINAL_RATE:
            metadata['rate'] = trial.nominal_rate
        if metadata:
            buffer.write(json.dumps(metadata, sort_keys=True) + "\n")
        for t, row in zip(trial.times, trial.values):
            record = dict(zip(CSV_HEADER, [float(t)] + [float(v) for v in row]))
            buffer.write(json.dumps(record) + "\n")

    return buffer.getvalue().encode('utf-8')


def format_for(path: Union[str, Path]) -> str:
    """Trial format implied by a file suffix"""
    suffix = Path(path).suffix.lower()
    if suffix == '.csv':
        return 'csv'
    if suffix in ('.jsonl', '.ndjson'):
        return 'jsonl'
    raise DomainError(f"cannot infer trial format from {path}")


def load_trial(path: Union[str, Path]) -> Trial:
    """Read a trial file, choosing the format from its suffix"""
    path = Path(path)
    with open(path, 'rb') as f:
        try:
            return parse_trial(f, format_for(path), name=str(path))
        except TrialValidationError as e:
            raise type(e)(f"{path}: {e}") from e


def save_trial(trial: Trial, path: Union[str, Path]) -> Path:
    """Write a trial file, choosing the format from its suffix"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_trial(trial, format_for(path)))
    return path


def load_trials(paths) -> Tuple[Trial, ...]:
    """Read several trial files in order"""
    return tuple(load_trial(p) for p in paths)
