"""
Model file reader/writer.

Layout::

    GPH1
    format_version=1
    config.<key>=<json>          one line per PipelineConfig field
    class_names=<json list>
    regions=<json list of region labels>
    shape.<array>=<json list>    one line per payload array, in payload order
    checksum=sha256:<hex>        over every header byte above plus the payload
    END
    <payload>                    little-endian arrays back to back

Reals are float64, index arrays uint32. Loading checks, in order, the magic,
the version, the payload length and the checksum, each failing with its own
ModelFormatError subclass.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from classifier import LlsrModel
from descriptor import SaabTransform
from errors import (
    BadMagicError, ChecksumError, GreenHopError, ModelFormatError, TruncatedModelError, UnsupportedVersionError,
)
from logging_config import get_logger
from pipeline.config import build_config
from pipeline.engine import FORMAT_VERSION, PipelineModel
from selection import Standardizer

logger = get_logger(__name__)

MAGIC = b"GPH1"
END = b"END\n"

# payload order
_ARRAYS: tuple[tuple[str, str], ...] = (
    ("saab_matrix", "<f8"),
    ("saab_energies", "<f8"),
    ("std_mean", "<f8"),
    ("std_std", "<f8"),
    ("selected", "<u4"),
    ("class_labels", "<u4"),
    ("weights", "<f8"),
)


def _arrays(model: PipelineModel) -> dict[str, np.ndarray]:
    return {
        "saab_matrix": model.saab.matrix,
        "saab_energies": model.saab.energies,
        "std_mean": model.standardizer.mean,
        "std_std": model.standardizer.std,
        "selected": model.selected,
        "class_labels": model.classifier.class_labels,
        "weights": model.classifier.weights,
    }


def _header_lines(model: PipelineModel, arrays: dict[str, np.ndarray]) -> list[str]:
    lines = [f"format_version={model.format_version}"]
    for key, value in model.config.model_dump(mode="json").items():
        lines.append(f"config.{key}={json.dumps(value)}")
    lines.append(f"class_names={json.dumps(list(model.class_names))}")
    lines.append(f"regions={json.dumps([r.label for r in model.regions])}")
    for name, _ in _ARRAYS:
        lines.append(f"shape.{name}={json.dumps(list(arrays[name].shape))}")
    return lines


def dumps_model(model: PipelineModel) -> bytes:
    arrays = _arrays(model)
    for name in ("selected", "class_labels"):
        a = arrays[name]
        if a.size and (a.min() < 0 or a.max() > np.iinfo(np.uint32).max):
            raise ModelFormatError(f"{name} values do not fit in uint32")
    head = MAGIC + b"\n" + "".join(f"{line}\n" for line in _header_lines(model, arrays)).encode("utf-8")
    payload = b"".join(np.ascontiguousarray(arrays[name], dtype=dtype).tobytes() for name, dtype in _ARRAYS)
    digest = hashlib.sha256(head + payload).hexdigest()
    return head + f"checksum=sha256:{digest}\n".encode("utf-8") + END + payload


def save_model(model: PipelineModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = dumps_model(model)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)
    logger.info(f"💾 Model saved to {path} ({len(data)} bytes)")
    return path


def _split_header(data: bytes) -> tuple[bytes, list[tuple[str, str]], bytes]:
    """Return (checksummed header bytes, key/value pairs, payload)."""
    end = data.find(b"\n" + END)
    if end < 0:
        raise TruncatedModelError("Model header has no END marker")
    header = data[: end + 1]
    payload = data[end + 1 + len(END):]
    try:
        text = header.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ModelFormatError(f"Model header is not UTF-8: {e}") from e
    pairs = []
    for lineno, line in enumerate(text.splitlines()[1:], 2):
        key, sep, value = line.partition("=")
        if not sep:
            raise ModelFormatError(f"Model header line {lineno} is not key=value: {line!r}")
        pairs.append((key, value))
    return header, pairs, payload


def _json(key: str, raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"Model header value for {key} is not valid JSON") from e


def _shape(key: str, raw: str) -> tuple[int, ...]:
    shape = _json(key, raw)
    if not isinstance(shape, list) or not all(isinstance(d, int) and d >= 0 for d in shape):
        raise ModelFormatError(f"Bad array shape for {key}: {raw}")
    return tuple(shape)


def loads_model(data: bytes) -> PipelineModel:
    if not data.startswith(MAGIC + b"\n"):
        raise BadMagicError(f"Not a model file (expected magic {MAGIC.decode()})")
    header, pairs, payload = _split_header(data)
    fields = dict(pairs)
    if len(fields) != len(pairs):
        raise ModelFormatError("Model header repeats a key")

    raw_version = fields.get("format_version", "")
    if not (raw_version.isascii() and raw_version.isdigit()):
        raise ModelFormatError(f"Model header has no valid format_version: {raw_version!r}")
    version = int(raw_version)
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(version, FORMAT_VERSION)

    shapes = {}
    expected = 0
    for name, dtype in _ARRAYS:
        key = f"shape.{name}"
        if key not in fields:
            raise ModelFormatError(f"Model header is missing {key}")
        shapes[name] = _shape(key, fields[key])
        expected += int(np.prod(shapes[name], dtype=np.int64)) * np.dtype(dtype).itemsize
    if len(payload) < expected:
        raise TruncatedModelError(f"Model payload holds {len(payload)} bytes, header declares {expected}")
    if len(payload) > expected:
        raise ModelFormatError(f"Model payload has {len(payload) - expected} trailing bytes")

    checksum_line = f"checksum={fields.get('checksum', '')}\n".encode("utf-8")
    if not header.endswith(checksum_line) or not fields.get("checksum", "").startswith("sha256:"):
        raise ModelFormatError("Model header must end with a sha256 checksum line")
    signed = header[: len(header) - len(checksum_line)]
    if hashlib.sha256(signed + payload).hexdigest() != fields["checksum"][len("sha256:"):]:
        raise ChecksumError("Model checksum mismatch; the file is corrupted")

    arrays: dict[str, np.ndarray] = {}
    offset = 0
    for name, dtype in _ARRAYS:
        count = int(np.prod(shapes[name], dtype=np.int64))
        arrays[name] = np.frombuffer(payload, dtype=dtype, count=count, offset=offset).reshape(shapes[name])
        offset += count * np.dtype(dtype).itemsize

    try:
        config = build_config({k[len("config."):]: _json(k, v) for k, v in pairs if k.startswith("config.")})
        regions = config.region_set()
        if [r.label for r in regions] != _json("regions", fields.get("regions", "null")):
            raise ModelFormatError("Stored region list does not match the stored config")
        class_names = _json("class_names", fields.get("class_names", "null"))
        if not isinstance(class_names, list):
            raise ModelFormatError("class_names must be a JSON list")
        return PipelineModel(
            config=config,
            saab=SaabTransform(
                matrix=arrays["saab_matrix"].astype(np.float64),
                energies=arrays["saab_energies"].astype(np.float64),
            ),
            regions=regions,
            standardizer=Standardizer(
                mean=arrays["std_mean"].astype(np.float64), std=arrays["std_std"].astype(np.float64)
            ),
            selected=arrays["selected"].astype(np.int64),
            classifier=LlsrModel(
                weights=arrays["weights"].astype(np.float64),
                class_labels=arrays["class_labels"].astype(np.int64),
            ),
            class_names=tuple(str(c) for c in class_names),
            format_version=version,
        )
    except ModelFormatError:
        raise
    except GreenHopError as e:
        raise ModelFormatError(f"Model contents are inconsistent: {e}") from e


def load_model(path: str | Path) -> PipelineModel:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ModelFormatError(f"Cannot read model file {path}: {e}") from e
    model = loads_model(data)
    logger.info(f"📂 Loaded model from {path}: {model.classifier.n_classes} classes, {model.selected.size} features")
    return model
