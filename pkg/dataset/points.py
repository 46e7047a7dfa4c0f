"""
Point file codecs.

Text: one ``x y z`` triple per line (blank lines ignored).
Binary: magic ``XYZB``, uint32 count, then 3*count little-endian float32.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
import numpy.typing as npt

from errors import InvalidInputError, PointFileError
from pointcloud import PointCloud, as_points

BINARY_MAGIC = b"XYZB"
_COUNT = struct.Struct("<I")


def _parse_binary(data: bytes, path: str) -> np.ndarray:
    head = len(BINARY_MAGIC) + _COUNT.size
    if len(data) < head:
        raise PointFileError("binary point file is shorter than its header", path=path)
    (count,) = _COUNT.unpack_from(data, len(BINARY_MAGIC))
    body = len(data) - head
    if body != 12 * count:
        raise PointFileError(f"header declares {count} points but body holds {body} bytes", path=path)
    return np.frombuffer(data, dtype="<f4", count=3 * count, offset=head).astype(np.float64).reshape(count, 3)


def _parse_text(data: bytes, path: str, delimiter: str | None = None, allow_extra: bool = False) -> np.ndarray:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise PointFileError(f"not UTF-8 text: {e}", path=path) from e
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        tokens = line.split(delimiter)
        if len(tokens) < 3 or (not allow_extra and len(tokens) != 3):
            raise PointFileError(f"expected 3 values, got {len(tokens)}", path=path, line=lineno)
        try:
            row = [float(t) for t in tokens[:3]]
        except ValueError as e:
            raise PointFileError(f"malformed number: {e}", path=path, line=lineno) from e
        if not all(np.isfinite(row)):
            raise PointFileError("non-finite coordinate", path=path, line=lineno)
        rows.append(row)
    return np.array(rows, dtype=np.float64).reshape(-1, 3)


def read_point_bytes(
    data: bytes, path: str = "<bytes>", delimiter: str | None = None, allow_extra: bool = False
) -> PointCloud:
    if data.startswith(BINARY_MAGIC):
        pts = _parse_binary(data, path)
        if not np.all(np.isfinite(pts)):
            raise PointFileError("non-finite coordinate", path=path)
    else:
        pts = _parse_text(data, path, delimiter=delimiter, allow_extra=allow_extra)
    if pts.shape[0] == 0:
        raise InvalidInputError(f"{path}: point file holds no points")
    return pts


def load_points(path: str | Path) -> PointCloud:
    """Read a text or XYZB point file into a (N, 3) float64 cloud."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise PointFileError(f"cannot read: {e.strerror or e}", path=str(path)) from e
    return read_point_bytes(data, str(path))


def write_points(cloud: npt.ArrayLike, path: str | Path, binary: bool = False) -> Path:
    pts = as_points(cloud)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if binary:
        body = np.ascontiguousarray(pts, dtype="<f4").tobytes()
        path.write_bytes(BINARY_MAGIC + _COUNT.pack(pts.shape[0]) + body)
    else:
        # repr gives the shortest string that reads back to the same double
        lines = (" ".join(repr(float(v)) for v in row) for row in pts)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
