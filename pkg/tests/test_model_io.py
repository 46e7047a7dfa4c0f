# tests/test_model_io.py
import numpy as np
import pytest

from errors import (
    BadMagicError, ChecksumError, ModelFormatError, TruncatedModelError, UnsupportedVersionError,
)
from pipeline import classify_batch, dumps_model, load_model, loads_model, save_model


class TestRoundTrip:
    def test_equal_after_load(self, model, tmp_path):
        path = save_model(model, tmp_path / "m.gph")
        loaded = load_model(path)
        assert loaded == model
        assert loaded.selected.dtype == np.int64
        assert loaded.config == model.config

    def test_bit_exact_reals(self, model):
        loaded = loads_model(dumps_model(model))
        assert loaded.saab.matrix.tobytes() == model.saab.matrix.tobytes()
        assert loaded.classifier.weights.tobytes() == model.classifier.weights.tobytes()
        assert loaded.standardizer.std.tobytes() == model.standardizer.std.tobytes()

    def test_loaded_model_predicts_identically(self, model, two_class_data):
        loaded = loads_model(dumps_model(model))
        a = classify_batch(model, two_class_data.clouds[:4])
        b = classify_batch(loaded, two_class_data.clouds[:4])
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_header_is_readable(self, model):
        data = dumps_model(model)
        header = data[: data.index(b"\nEND\n")].decode("utf-8")
        assert header.startswith("GPH1\nformat_version=1\n")
        assert "config.k_neighbors=8" in header
        assert "checksum=sha256:" in header


class TestCorruption:
    @pytest.fixture
    def data(self, model):
        return dumps_model(model)

    def test_bad_magic(self, data):
        with pytest.raises(BadMagicError):
            loads_model(b"XXXX" + data[4:])

    def test_older_version(self, data):
        with pytest.raises(UnsupportedVersionError) as err:
            loads_model(data.replace(b"format_version=1\n", b"format_version=0\n", 1))
        assert err.value.found == 0

    def test_truncated(self, data):
        with pytest.raises(TruncatedModelError):
            loads_model(data[:-8])

    def test_flipped_payload_byte(self, data):
        corrupted = bytearray(data)
        corrupted[-100] ^= 0x01
        with pytest.raises(ChecksumError):
            loads_model(bytes(corrupted))

    def test_random_corruption_is_typed(self, data):
        gen = np.random.default_rng(2024)
        for _ in range(100):
            corrupted = bytearray(data)
            pos = int(gen.integers(0, len(data)))
            corrupted[pos] = (corrupted[pos] + int(gen.integers(1, 256))) % 256
            with pytest.raises(ModelFormatError):
                loads_model(bytes(corrupted))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelFormatError):
            load_model(tmp_path / "nope.gph")

    def test_empty_file(self):
        with pytest.raises(BadMagicError):
            loads_model(b"")
