"""
Converters from external dumps into the canonical manifest + text point files.

Both supported layouts are a folder per class holding one point file per sample:

    folders       files readable by load_points (text ``x y z`` or XYZB)
    csv-normals   ``x,y,z[,nx,ny,nz]`` rows; only the coordinates are kept
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Literal

from dataset.manifest import ManifestEntry, Split, write_manifest
from dataset.points import load_points, read_point_bytes, write_points
from errors import LayoutError, PointFileError
from logging_config import get_logger
from pointcloud import PointCloud

logger = get_logger(__name__)

SourceFormat = Literal["folders", "csv-normals"]
MANIFEST_NAME = "manifest.tsv"


def _read_csv_normals(path: Path) -> PointCloud:
    try:
        data = path.read_bytes()
    except OSError as e:
        raise PointFileError(f"cannot read: {e.strerror or e}", path=str(path)) from e
    return read_point_bytes(data, str(path), delimiter=",", allow_extra=True)


READERS: dict[str, Callable[[Path], PointCloud]] = {
    "folders": load_points,
    "csv-normals": _read_csv_normals,
}


def _class_folders(src: Path) -> list[Path]:
    if not src.is_dir():
        raise LayoutError("source is not a directory", path=str(src))
    folders = sorted(p for p in src.iterdir() if p.is_dir() and not p.name.startswith("."))
    if not folders:
        raise LayoutError("expected one sub-folder per class", path=str(src))
    return folders


def _sample_files(folder: Path) -> list[Path]:
    return sorted(p for p in folder.iterdir() if p.is_file() and not p.name.startswith("."))


def convert(src_format: str, src_path: str | Path, dst_dir: str | Path, split: Split = "train") -> Path:
    """Write ``dst_dir/<class>/<stem>.txt`` plus ``dst_dir/manifest.tsv``; returns the manifest path."""
    if src_format not in READERS:
        raise LayoutError(f"unknown source format '{src_format}'; choose from {sorted(READERS)}")
    reader = READERS[src_format]
    src, dst = Path(src_path), Path(dst_dir)

    class_names: list[str] = []
    entries: list[ManifestEntry] = []
    for folder in _class_folders(src):
        files = _sample_files(folder)
        if not files:
            logger.warning(f"Skipping empty class folder {folder}")
            continue
        class_names.append(folder.name)
        written: dict[str, Path] = {}
        for f in files:
            rel = f"{folder.name}/{f.stem}.txt"
            if rel in written:
                raise LayoutError(f"{f.name} and {written[rel].name} map to the same output file", path=str(folder))
            written[rel] = f
            write_points(reader(f), dst / rel)
            entries.append(ManifestEntry(rel, folder.name))
    if not entries:
        raise LayoutError("no sample files found under any class folder", path=str(src))

    manifest = write_manifest(dst / MANIFEST_NAME, entries, class_names, split)
    logger.info(f"✅ Converted {len(entries)} samples in {len(class_names)} classes from {src} to {manifest}")
    return manifest
