"""
Dataset manifests: UTF-8 lines of ``relative/path<TAB>class_name``.

Optional headers::

    #classes: airplane,bathtub,bed
    #split: test

Other ``#`` lines are comments. Paths resolve against the manifest's folder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Optional, Sequence

from errors import ManifestError
from logging_config import get_logger

logger = get_logger(__name__)

Split = Literal["train", "test"]


@dataclass(frozen=True)
class ManifestEntry:
    path: str
    class_name: str


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]
    class_names: tuple[str, ...]
    split: Split = "train"
    root: Path = field(default_factory=Path)

    def class_id(self, name: str) -> int:
        return self.class_names.index(name)

    @property
    def labels(self) -> list[int]:
        ids = {name: i for i, name in enumerate(self.class_names)}
        return [ids[e.class_name] for e in self.entries]

    def resolve(self, entry: ManifestEntry) -> Path:
        return self.root / entry.path

    def __len__(self) -> int:
        return len(self.entries)


def _header(line: str, key: str) -> Optional[str]:
    body = line[1:].strip()
    name, sep, value = body.partition(":")
    if sep and name.strip().lower() == key:
        return value.strip()
    return None


def parse_manifest(text: str, root: Path, source: str = "<manifest>", check_files: bool = True) -> DatasetManifest:
    declared: Optional[list[str]] = None
    split: Split = "train"
    entries: list[ManifestEntry] = []
    seen: dict[Path, int] = {}
    first_seen: list[str] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            classes = _header(line, "classes")
            if classes is not None:
                declared = [c.strip() for c in classes.split(",") if c.strip()]
                if not declared or len(set(declared)) != len(declared):
                    raise ManifestError("#classes header must list distinct names", path=source, line=lineno)
                continue
            value = _header(line, "split")
            if value is not None:
                if value not in ("train", "test"):
                    raise ManifestError(f"split must be train or test, got '{value}'", path=source, line=lineno)
                split = value  # type: ignore[assignment]
            continue

        rel, sep, class_name = line.partition("\t")
        rel, class_name = rel.strip(), class_name.strip()
        if not sep or not rel or not class_name or "\t" in class_name:
            raise ManifestError("expected 'path<TAB>class_name'", path=source, line=lineno)
        if declared is not None and class_name not in declared:
            raise ManifestError(f"class '{class_name}' is not in the #classes header", path=source, line=lineno)

        resolved = (root / rel).resolve()
        if resolved in seen:
            raise ManifestError(f"duplicate path '{rel}' (first on line {seen[resolved]})", path=source, line=lineno)
        seen[resolved] = lineno
        if check_files and not resolved.is_file():
            raise ManifestError(f"point file '{rel}' not found", path=source, line=lineno)
        if class_name not in first_seen:
            first_seen.append(class_name)
        entries.append(ManifestEntry(rel, class_name))

    class_names = tuple(declared) if declared is not None else tuple(first_seen)
    return DatasetManifest(entries=tuple(entries), class_names=class_names, split=split, root=root)


def load_manifest(path: str | Path, check_files: bool = True) -> DatasetManifest:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise ManifestError("manifest not found", path=str(path)) from e
    except (OSError, UnicodeDecodeError) as e:
        raise ManifestError(f"cannot read manifest: {e}", path=str(path)) from e
    manifest = parse_manifest(text, path.parent, source=str(path), check_files=check_files)
    logger.info(
        f"📋 Manifest {path}: {len(manifest)} entries, {len(manifest.class_names)} classes, split={manifest.split}"
    )
    return manifest


def format_manifest(
    entries: Iterable[ManifestEntry], class_names: Sequence[str], split: Split = "train"
) -> str:
    lines = [f"#classes: {','.join(class_names)}", f"#split: {split}"]
    lines += [f"{e.path}\t{e.class_name}" for e in entries]
    return "\n".join(lines) + "\n"


def write_manifest(
    path: str | Path, entries: Iterable[ManifestEntry], class_names: Sequence[str], split: Split = "train"
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_manifest(entries, class_names, split), encoding="utf-8")
    return path
