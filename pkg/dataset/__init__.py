from dataset.manifest import DatasetManifest, ManifestEntry, load_manifest, parse_manifest, write_manifest
from dataset.points import BINARY_MAGIC, load_points, read_point_bytes, write_points
from dataset.loader import LabeledDataset, load_dataset
from dataset.convert import MANIFEST_NAME, convert
from dataset.synthetic import SHAPES, make_sample, make_synthetic, write_synthetic

__all__ = [
    "DatasetManifest", "ManifestEntry", "load_manifest", "parse_manifest", "write_manifest",
    "BINARY_MAGIC", "load_points", "read_point_bytes", "write_points",
    "LabeledDataset", "load_dataset",
    "MANIFEST_NAME", "convert",
    "SHAPES", "make_sample", "make_synthetic", "write_synthetic",
]
