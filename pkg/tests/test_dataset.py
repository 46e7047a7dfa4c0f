# tests/test_dataset.py
import numpy as np
import pytest

from dataset import (
    convert, load_dataset, load_manifest, load_points, make_synthetic, write_points, write_synthetic,
)
from errors import InvalidInputError, LayoutError, ManifestError, PointFileError


def write_cloud_files(root, names, rng):
    for name in names:
        write_points(rng.normal(size=(16, 3)), root / name)


class TestManifest:
    def test_three_lines_two_classes(self, tmp_path, rng):
        write_cloud_files(tmp_path, ["a.txt", "b.txt", "c.txt"], rng)
        (tmp_path / "m.tsv").write_text("a.txt\tchair\nb.txt\ttable\nc.txt\tchair\n")
        m = load_manifest(tmp_path / "m.tsv")
        assert len(m) == 3
        assert m.class_names == ("chair", "table")
        assert m.labels == [0, 1, 0]
        assert m.split == "train"

    def test_headers(self, tmp_path, rng):
        write_cloud_files(tmp_path, ["a.txt", "b.txt"], rng)
        (tmp_path / "m.tsv").write_text("#classes: table,chair\n#split: test\n# note\na.txt\tchair\nb.txt\ttable\n")
        m = load_manifest(tmp_path / "m.tsv")
        assert m.class_names == ("table", "chair")
        assert m.labels == [1, 0]
        assert m.split == "test"

    def test_missing_label_names_line(self, tmp_path, rng):
        write_cloud_files(tmp_path, ["a.txt"], rng)
        (tmp_path / "m.tsv").write_text("a.txt\tchair\na.txt\n")
        with pytest.raises(ManifestError, match=":2:"):
            load_manifest(tmp_path / "m.tsv")

    def test_duplicate_path(self, tmp_path, rng):
        write_cloud_files(tmp_path, ["a.txt"], rng)
        (tmp_path / "m.tsv").write_text("a.txt\tchair\n./a.txt\tchair\n")
        with pytest.raises(ManifestError, match="duplicate"):
            load_manifest(tmp_path / "m.tsv")

    def test_unresolvable_path(self, tmp_path):
        (tmp_path / "m.tsv").write_text("ghost.txt\tchair\n")
        with pytest.raises(ManifestError, match="ghost.txt"):
            load_manifest(tmp_path / "m.tsv")

    def test_class_outside_header(self, tmp_path, rng):
        write_cloud_files(tmp_path, ["a.txt"], rng)
        (tmp_path / "m.tsv").write_text("#classes: table\na.txt\tchair\n")
        with pytest.raises(ManifestError):
            load_manifest(tmp_path / "m.tsv")

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ManifestError) as err:
            load_manifest(tmp_path / "absent.tsv")
        assert "absent.tsv" in str(err.value)
        assert err.value.exit_code == 3


class TestPoints:
    def test_text_file(self, tmp_path, rng):
        pts = rng.normal(size=(2048, 3))
        path = write_points(pts, tmp_path / "p.txt")
        loaded = load_points(path)
        assert loaded.shape == (2048, 3)
        np.testing.assert_array_equal(loaded, pts)

    def test_binary_matches_text_within_float32(self, tmp_path, rng):
        pts = rng.normal(size=(100, 3))
        text = load_points(write_points(pts, tmp_path / "p.txt"))
        binary = load_points(write_points(pts, tmp_path / "p.xyzb", binary=True))
        np.testing.assert_allclose(binary, text, rtol=1e-6, atol=1e-7)

    def test_empty_file(self, tmp_path):
        (tmp_path / "e.txt").write_text("")
        with pytest.raises(InvalidInputError):
            load_points(tmp_path / "e.txt")

    def test_malformed_token(self, tmp_path):
        (tmp_path / "bad.txt").write_text("0 0 0\n1 x 2\n")
        with pytest.raises(PointFileError, match=":2:"):
            load_points(tmp_path / "bad.txt")

    def test_wrong_column_count(self, tmp_path):
        (tmp_path / "bad.txt").write_text("0 0\n")
        with pytest.raises(PointFileError):
            load_points(tmp_path / "bad.txt")

    def test_non_finite(self, tmp_path):
        (tmp_path / "bad.txt").write_text("0 0 0\nnan 1 1\n")
        with pytest.raises(PointFileError):
            load_points(tmp_path / "bad.txt")

    def test_binary_count_mismatch(self, tmp_path, rng):
        path = write_points(rng.normal(size=(10, 3)), tmp_path / "p.xyzb", binary=True)
        path.write_bytes(path.read_bytes()[:-4])
        with pytest.raises(PointFileError, match="declares 10"):
            load_points(path)


class TestConvert:
    @pytest.fixture
    def tree(self, tmp_path, rng):
        src = tmp_path / "src"
        write_cloud_files(src / "chair", ["0001.txt", "0002.txt", "0003.txt"], rng)
        write_cloud_files(src / "table", ["0001.txt", "0002.txt"], rng)
        return src

    def test_five_entries(self, tree, tmp_path):
        manifest = load_manifest(convert("folders", tree, tmp_path / "out"))
        assert len(manifest) == 5
        assert manifest.class_names == ("chair", "table")

    def test_rerun_is_identical(self, tree, tmp_path):
        a = convert("folders", tree, tmp_path / "a")
        b = convert("folders", tree, tmp_path / "b")
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a/chair/0002.txt").read_bytes() == (tmp_path / "b/chair/0002.txt").read_bytes()

    def test_convert_then_load_equals_direct(self, tree, tmp_path):
        data = load_dataset(convert("folders", tree, tmp_path / "out"))
        direct = [load_points(tree / "chair" / f"000{i}.txt") for i in (1, 2, 3)]
        for got, want in zip(data.clouds[:3], direct):
            np.testing.assert_array_equal(got, want)
        assert data.labels.tolist() == [0, 0, 0, 1, 1]

    def test_csv_normals(self, tmp_path):
        src = tmp_path / "src" / "lamp"
        src.mkdir(parents=True)
        (src / "lamp_0001.txt").write_text("0.1,0.2,0.3,0,0,1\n-0.5,0.25,1,1,0,0\n")
        data = load_dataset(convert("csv-normals", tmp_path / "src", tmp_path / "out"))
        np.testing.assert_array_equal(data.clouds[0], [[0.1, 0.2, 0.3], [-0.5, 0.25, 1.0]])

    def test_unrecognized_layout(self, tmp_path, rng):
        write_cloud_files(tmp_path / "flat", ["a.txt"], rng)
        with pytest.raises(LayoutError):
            convert("folders", tmp_path / "flat", tmp_path / "out")
        with pytest.raises(LayoutError):
            convert("off-mesh", tmp_path / "flat", tmp_path / "out")


class TestSynthetic:
    def test_shapes_and_labels(self):
        data = make_synthetic(per_class=3, n_points=50, seed=1)
        assert data.class_names == ("sphere", "box", "cylinder", "two_lobe")
        assert data.labels.tolist() == [0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3]
        assert all(c.shape == (50, 3) for c in data.clouds)

    def test_seeded(self):
        a = make_synthetic(per_class=2, n_points=20, seed=4)
        b = make_synthetic(per_class=2, n_points=20, seed=4)
        for x, y in zip(a.clouds, b.clouds):
            np.testing.assert_array_equal(x, y)

    def test_write_synthetic(self, tmp_path):
        train, test = write_synthetic(tmp_path, shapes=("sphere", "box"), per_class_train=2, per_class_test=1,
                                      n_points=40)
        tr, te = load_dataset(train), load_dataset(test)
        assert (len(tr), len(te)) == (4, 2)
        assert te.split == "test"
        assert tr.class_names == te.class_names
        assert not np.array_equal(tr.clouds[0], te.clouds[0])
