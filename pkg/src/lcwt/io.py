"""Signal ingest from CSV, WAV and built-in generators."""

from __future__ import annotations

import csv
import re
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .core import SampledSignal
from .errors import NonUniformGrid, ParseError, UnsupportedEncoding
from .signals import builtin_chirp

UNIFORM_RTOL = 1e-6
BUILTINS = {"chirp": builtin_chirp}
_BUILTIN_RE = re.compile(r"^builtin:(\w+)(?:\((.*)\))?$")


def read_csv(path) -> SampledSignal:
    """Two or three columns ``t, re[, im]``, uniform in ``t``.

    A single non-numeric first line is taken as a header.  Errors name the
    1-based line of the file.  ``dt`` is the
    mean step ``(t_last - t_first) / (n - 1)``; every row must sit within
    ``1e-6 * dt`` of its nominal time.
    """
    rows, lines = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            row = [c.strip() for c in row]
            if not row or all(c == "" for c in row):
                continue
            if len(row) not in (2, 3):
                raise ParseError(f"row {lineno}: expected 2 or 3 columns, got {len(row)}", lineno)
            try:
                rows.append([float(c) for c in row] + ([0.0] if len(row) == 2 else []))
                lines.append(lineno)
            except ValueError:
                if lineno == 1 and not rows:
                    continue
                raise ParseError(f"row {lineno}: non-numeric field in {row!r}", lineno) from None
    if len(rows) < 2:
        raise ParseError("need at least two samples")
    data = np.array(rows)
    t = data[:, 0]
    dt = (t[-1] - t[0]) / (t.size - 1)
    if not dt > 0:
        raise NonUniformGrid("times must increase")
    dev = np.abs(t - (t[0] + dt * np.arange(t.size)))
    bad = np.flatnonzero(dev > UNIFORM_RTOL * dt)
    if bad.size:
        raise NonUniformGrid(f"row {lines[bad[0]]}: t = {float(t[bad[0]])!r} is off the uniform grid (dt = {float(dt)!r})", lines[bad[0]])
    return SampledSignal(t[0], dt, data[:, 1] + 1j * data[:, 2])


def read_wav(path) -> SampledSignal:
    """Mono PCM (16, 24 or 32-bit integer, or 32-bit float); integers map
    to ``[-1, 1)``, ``dt = 1 / rate``."""
    try:
        rate, data = wavfile.read(path)
    except (ValueError, EOFError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    if data.ndim != 1:
        raise UnsupportedEncoding(f"{path}: {data.shape[1]} channels, only mono is supported")
    if data.dtype == np.int16:
        vals = data / 32768.0
    elif data.dtype == np.int32:
        vals = data / 2147483648.0  # 24-bit samples arrive left-justified
    elif data.dtype == np.float32:
        vals = data.astype(float)
    else:
        raise UnsupportedEncoding(f"{path}: sample type {data.dtype} is not supported")
    return SampledSignal(0.0, 1.0 / rate, vals)


def parse_builtin(spec: str) -> SampledSignal:
    """``builtin:name(key=value, ...)``, e.g. ``builtin:chirp(f0=2,f1=20,T=4)``."""
    m = _BUILTIN_RE.match(spec.replace(" ", ""))
    if not m or m.group(1) not in BUILTINS:
        raise ParseError(f"unknown builtin signal {spec!r}; available: {sorted(BUILTINS)}")
    kwargs = {}
    for item in filter(None, (m.group(2) or "").split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise ParseError(f"bad builtin argument {item!r}")
        kwargs[key] = int(val) if key == "n" else float(val)
    try:
        return BUILTINS[m.group(1)](**kwargs)
    except TypeError as exc:
        raise ParseError(f"{spec}: {exc}") from None


def ingest(path, fmt: str | None = None) -> SampledSignal:
    """Load a signal; ``fmt`` is ``"csv"``, ``"wav"`` or inferred from the
    suffix.  Strings starting with ``builtin:`` are synthesized."""
    if str(path).startswith("builtin:"):
        return parse_builtin(str(path))
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt == "csv":
        return read_csv(path)
    if fmt == "wav":
        return read_wav(path)
    raise ParseError(f"unknown input format {fmt!r}")
