"""``.lcsg`` scalogram files and atomic file output.

Layout: the magic line ``LCSG1``, UTF-8 ``key=value`` header lines, one
blank line, then the coefficients as little-endian float64 ``(re, im)``
pairs in row-major (scale, shift) order.  Floats are written with
``repr`` so that reading reproduces every header value bit for bit.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .core import CanonicalMatrix, ScaleShiftGrid
from .errors import ParseError
from .transform import Scalogram

MAGIC = b"LCSG1\n"
_FLOAT_KEYS = ("A", "B", "C", "D", "a_min", "ratio", "b0", "db", "source_norm")
_INT_KEYS = ("n_scales", "n_shifts")
_ORDER = ("A", "B", "C", "D", "wavelet_id", "a_min", "ratio", "n_scales", "b0", "db", "n_shifts", "source_norm")


def atomic_write(path, data: bytes) -> None:
    """Write to a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def encode(S: Scalogram) -> bytes:
    g, M = S.grid, S.matrix
    fields = {
        "A": M.A, "B": M.B, "C": M.C, "D": M.D,
        "wavelet_id": S.wavelet_id,
        "a_min": g.a_min, "ratio": g.ratio, "n_scales": g.n_scales,
        "b0": g.b0, "db": g.db, "n_shifts": g.n_shifts,
        "source_norm": S.source_norm,
    }
    if "\n" in S.wavelet_id or "=" in S.wavelet_id:
        raise ValueError("wavelet_id may not contain newlines or '='")
    head = "".join(f"{k}={fields[k]!r}\n" if k != "wavelet_id" else f"{k}={fields[k]}\n" for k in _ORDER)
    body = np.ascontiguousarray(S.coefficients, dtype="<c16").tobytes()
    return MAGIC + head.encode() + b"\n" + body


def decode(data: bytes) -> Scalogram:
    if not data.startswith(MAGIC):
        raise ParseError("byte 0: missing LCSG1 magic")
    end = data.find(b"\n\n", len(MAGIC) - 1)
    if end < 0:
        raise ParseError("header is not terminated by a blank line")
    fields = {}
    for line in data[len(MAGIC):end].decode().splitlines():
        key, sep, val = line.partition("=")
        if not sep:
            raise ParseError(f"bad header line {line!r}")
        fields[key] = val
    missing = set(_ORDER) - set(fields)
    if missing:
        raise ParseError(f"header lacks {sorted(missing)}")
    try:
        num = {k: float(fields[k]) for k in _FLOAT_KEYS}
        num.update({k: int(fields[k]) for k in _INT_KEYS})
    except ValueError as exc:
        raise ParseError(f"header value: {exc}") from None
    grid = ScaleShiftGrid(num["a_min"], num["ratio"], num["n_scales"], num["b0"], num["db"], num["n_shifts"])
    body = data[end + 2:]
    expected = 16 * num["n_scales"] * num["n_shifts"]
    if len(body) != expected:
        raise ParseError(f"byte {end + 2}: payload has {len(body)} bytes, expected {expected}")
    coeffs = np.frombuffer(body, dtype="<c16").reshape(grid.shape).astype(complex)
    M = CanonicalMatrix(num["A"], num["B"], num["C"], num["D"])
    return Scalogram(coeffs, grid, fields["wavelet_id"], M, num["source_norm"])


def write_lcsg(path, S: Scalogram) -> None:
    atomic_write(path, encode(S))


def read_lcsg(path) -> Scalogram:
    return decode(Path(path).read_bytes())
