"""Plain-text pulse file format.

Line-oriented UTF-8 with ``#`` comments.  Records:

    line c=<float> v=<float> hbar=<float>     # optional, keys optional
    segment <start> <end> <amplitude>         # voltage body (repeatable)
    current segment <start> <end> <amplitude> # optional current block
    samples <path> <origin> <spacing>         # alternative sampled body

Only decimal floats are accepted (no inf/nan/hex).  Unknown records or keys
are rejected with the offending line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import PulseFileError
from .line import LineParams
from .waveform import PiecewiseConstantWaveform, SampledWaveform, Waveform

_FLOAT_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_LINE_KEYS = ("c", "v", "hbar")


def _parse_float(token: str, lineno: int, what: str) -> float:
    if not _FLOAT_RE.match(token):
        raise PulseFileError(lineno, f"{what} must be a decimal float, got {token!r}")
    return float(token)


@dataclass(frozen=True)
class PulseFile:
    """Parsed pulse file: line constants plus voltage and optional current."""

    line: LineParams
    voltage: Waveform
    current: Waveform | None
    had_line_record: bool


def parse_pulse_file(path: str | Path) -> PulseFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    line_kwargs: dict[str, float] = {}
    had_line_record = False
    v_segments: list[tuple[float, float, float]] = []
    i_segments: list[tuple[float, float, float]] = []
    sampled: SampledWaveform | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        kind = tokens[0]
        if kind == "line":
            if had_line_record:
                raise PulseFileError(lineno, "duplicate line record")
            had_line_record = True
            for tok in tokens[1:]:
                if "=" not in tok:
                    raise PulseFileError(lineno, f"expected key=value, got {tok!r}")
                key, _, value = tok.partition("=")
                if key not in _LINE_KEYS:
                    raise PulseFileError(lineno, f"unknown line parameter {key!r}")
                if key in line_kwargs:
                    raise PulseFileError(lineno, f"duplicate line parameter {key!r}")
                line_kwargs[key] = _parse_float(value, lineno, key)
        elif kind == "segment":
            if len(tokens) != 4:
                raise PulseFileError(lineno, "segment needs: start end amplitude")
            s, e, a = (_parse_float(t, lineno, n) for t, n in
                       zip(tokens[1:], ("start", "end", "amplitude")))
            v_segments.append((s, e, a))
        elif kind == "current":
            if len(tokens) != 5 or tokens[1] != "segment":
                raise PulseFileError(lineno, "current record needs: current segment start end amplitude")
            s, e, a = (_parse_float(t, lineno, n) for t, n in
                       zip(tokens[2:], ("start", "end", "amplitude")))
            i_segments.append((s, e, a))
        elif kind == "samples":
            if len(tokens) != 4:
                raise PulseFileError(lineno, "samples record needs: path origin spacing")
            if sampled is not None:
                raise PulseFileError(lineno, "duplicate samples record")
            sample_path = path.parent / tokens[1]
            origin = _parse_float(tokens[2], lineno, "origin")
            spacing = _parse_float(tokens[3], lineno, "spacing")
            try:
                values = np.loadtxt(sample_path, dtype=float, ndmin=1)
            except OSError as exc:
                raise PulseFileError(lineno, f"cannot read sample file: {exc}") from exc
            try:
                sampled = SampledWaveform(origin, spacing, values)
            except ValueError as exc:
                raise PulseFileError(lineno, str(exc)) from exc
        else:
            raise PulseFileError(lineno, f"unknown record type {kind!r}")

    if sampled is not None and v_segments:
        raise PulseFileError(1, "a pulse file may contain segments or samples, not both")
    if sampled is None and not v_segments:
        raise PulseFileError(1, "no voltage body: need segment or samples records")

    try:
        line = LineParams.from_velocity(
            c=line_kwargs.get("c", 1.0),
            v=line_kwargs.get("v", 1.0),
            hbar=line_kwargs.get("hbar", 1.0),
        )
    except ValueError as exc:
        raise PulseFileError(1, str(exc)) from exc

    try:
        voltage: Waveform = sampled if sampled is not None else \
            PiecewiseConstantWaveform(tuple(sorted(v_segments)))
        current = PiecewiseConstantWaveform(tuple(sorted(i_segments))) if i_segments else None
    except ValueError as exc:
        raise PulseFileError(1, f"invalid waveform: {exc}") from exc

    return PulseFile(line=line, voltage=voltage, current=current,
                     had_line_record=had_line_record)
