# tests/test_cli.py
import numpy as np
import pytest

from cli import commands, main
from dataset import write_points

SMALL = ["--override", "k_neighbors=8", "--override", "num_points=128",
         "--override", "dft_bins=16", "--override", "n_features=48", "--override", "seed=3"]


@pytest.fixture(scope="module")
def synth(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    code = main(["synth", "--dst", str(root), "--shapes", "sphere,box", "--per-class-train", "8",
                 "--per-class-test", "4", "--points", "160", "--seed", "5"])
    assert code == 0
    return root / "train.tsv", root / "test.tsv"


@pytest.fixture(scope="module")
def model_file(synth, tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "m.gph"
    assert main(["train", "--dataset", str(synth[0]), "--model", str(path)] + SMALL) == 0
    return path


class TestExitCodes:
    def test_missing_manifest_is_data_error(self, tmp_path):
        code = main(["train", "--dataset", str(tmp_path / "absent.tsv"), "--model", str(tmp_path / "m.gph")])
        assert code == 3
        assert not (tmp_path / "m.gph").exists()

    def test_bad_override_is_config_error(self, synth, tmp_path):
        code = main(["train", "--dataset", str(synth[0]), "--model", str(tmp_path / "m.gph"),
                     "--override", "k_neighbors=0"])
        assert code == 2

    def test_unknown_override_key(self, synth, tmp_path):
        code = main(["train", "--dataset", str(synth[0]), "--model", str(tmp_path / "m.gph"),
                     "--override", "kneighbours=8"])
        assert code == 2

    def test_corrupt_model_is_format_error(self, synth, tmp_path):
        bad = tmp_path / "bad.gph"
        bad.write_bytes(b"NOPE\n")
        assert main(["eval", "--model", str(bad), "--dataset", str(synth[1])]) == 3

    def test_untyped_failure_is_internal_error(self, monkeypatch):
        def broken(args):
            raise np.linalg.LinAlgError("singular matrix")

        monkeypatch.setattr(commands, "cmd_flops", broken)
        assert main(["flops", "--preset", "modelnet40"]) == 1


class TestTrainEval:
    def test_train_writes_model(self, model_file):
        assert model_file.read_bytes().startswith(b"GPH1\n")

    def test_eval_report(self, model_file, synth, tmp_path):
        out = tmp_path / "eval.tsv"
        assert main(["eval", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "class\tsamples\tcorrect\taccuracy"
        assert [line.split("\t")[0] for line in lines[1:]] == ["sphere", "box", "overall", "class_avg"]
        assert (tmp_path / "eval.txt").exists()

    def test_eval_rerun_is_byte_identical(self, model_file, synth, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        main(["eval", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(a)])
        main(["eval", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_train_rerun_is_byte_identical(self, synth, tmp_path):
        for name in ("a", "b"):
            main(["train", "--dataset", str(synth[0]), "--model", str(tmp_path / f"{name}.gph"),
                  "--output", str(tmp_path / f"{name}.tsv")] + SMALL)
        assert (tmp_path / "a.gph").read_bytes() == (tmp_path / "b.gph").read_bytes()
        assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()


class TestPredict:
    def test_empty_inputs_give_header_only(self, model_file, tmp_path):
        out = tmp_path / "pred.tsv"
        assert main(["predict", "--model", str(model_file), "--output", str(out)]) == 0
        assert out.read_text() == "path\tpredicted\tscore_sphere\tscore_box\n"

    def test_with_truth_columns(self, model_file, synth, tmp_path):
        out = tmp_path / "pred.tsv"
        assert main(["predict", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].endswith("\ttruth\tcorrect")
        assert len(lines) == 1 + 8

    def test_correct_count_matches_eval_diagonal(self, model_file, synth, tmp_path):
        main(["eval", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(tmp_path / "e.tsv")])
        main(["predict", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(tmp_path / "p.tsv")])
        overall = next(line.split("\t") for line in (tmp_path / "e.tsv").read_text().splitlines()
                       if line.startswith("overall\t"))
        rows = [line.split("\t") for line in (tmp_path / "p.tsv").read_text().splitlines()]
        correct = sum(int(r[rows[0].index("correct")]) for r in rows[1:])
        assert correct == int(overall[2])

    def test_reordered_class_header_gives_same_eval(self, model_file, synth, tmp_path):
        entries = [line for line in synth[1].read_text().splitlines() if line and not line.startswith("#")]
        reordered = synth[1].parent / "test_reordered.tsv"
        reordered.write_text("#classes: box,sphere\n#split: test\n" + "\n".join(entries) + "\n")
        main(["eval", "--model", str(model_file), "--dataset", str(synth[1]), "--output", str(tmp_path / "a.tsv")])
        main(["eval", "--model", str(model_file), "--dataset", str(reordered), "--output", str(tmp_path / "b.tsv")])
        assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()


class TestFlops:
    def test_preset_table(self, tmp_path):
        out = tmp_path / "flops.tsv"
        assert main(["flops", "--preset", "modelnet40", "--output", str(out)]) == 0
        rows = [line.split("\t") for line in out.read_text().splitlines()]
        assert rows[0] == ["stage", "flops", "in_headline"]
        headline = sum(int(r[1]) for r in rows[1:] if r[2] == "1")
        assert headline == 4_992_608

    def test_preset_and_config_conflict(self, tmp_path):
        cfg = tmp_path / "c.yaml"
        cfg.write_text("k_neighbors: 8\n")
        assert main(["flops", "--preset", "modelnet40", "--config", str(cfg)]) == 2


class TestAblate:
    def test_k_grid_rows(self, synth, tmp_path):
        grid = tmp_path / "grid.yaml"
        grid.write_text("k_neighbors: [4, 8, 12]\n")
        out = tmp_path / "ablate.tsv"
        code = main(["ablate", "--dataset", str(synth[0]), "--test-dataset", str(synth[1]), "--grid", str(grid),
                     "--grids", "k_neighbors", "--output", str(out)] + SMALL)
        assert code == 0
        rows = out.read_text().splitlines()[1:]
        assert [r.split("\t")[1] for r in rows] == ["K=4", "K=8", "K=12"]

    def test_region_and_aggregator_grids(self, synth, tmp_path):
        grid = tmp_path / "grid.yaml"
        grid.write_text(
            "regions:\n  - [global]\n  - [global, cone]\n"
            "aggregators:\n  pooling: [max, mean]\n  norms: [l1, l2, std]\n"
        )
        out = tmp_path / "ablate.tsv"
        code = main(["ablate", "--dataset", str(synth[0]), "--test-dataset", str(synth[1]), "--grid", str(grid),
                     "--grids", "regions", "aggregators", "--output", str(out)] + SMALL)
        assert code == 0
        lines = out.read_text().splitlines()
        header = lines[0].split("\t")
        rows = [dict(zip(header, line.split("\t"))) for line in lines[1:]]
        assert [(r["grid"], r["cell"]) for r in rows] == [
            ("regions", "global"), ("regions", "global+cone"), ("aggregators", "pooling"), ("aggregators", "norms")]
        assert [int(r["feature_dim"]) for r in rows] == [7 * 24, 4 * 7 * 24, 10 * 2 * 24, 10 * 3 * 24]
        assert all(int(r["selected"]) == 48 for r in rows)
        assert all(0.0 <= float(r["overall"]) <= 1.0 for r in rows)

    def test_bad_grid_file(self, synth, tmp_path):
        grid = tmp_path / "grid.yaml"
        grid.write_text("radius: [1, 2]\n")
        code = main(["ablate", "--dataset", str(synth[0]), "--test-dataset", str(synth[1]), "--grid", str(grid)])
        assert code == 2


class TestConvertAndRuns:
    def test_convert_writes_manifest(self, tmp_path, rng):
        for cls in ("a", "b"):
            for i in range(4):
                write_points(rng.normal(size=(64, 3)) * (1 if cls == "a" else 2), tmp_path / "src" / cls / f"{i}.txt")
        assert main(["convert", "--src", str(tmp_path / "src"), "--dst", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "manifest.tsv").exists()

    def test_record_and_list(self, synth, model_file, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("GREENHOP_DB_URL", f"sqlite:///{tmp_path}/runs.db")
        assert main(["eval", "--model", str(model_file), "--dataset", str(synth[1]), "--record"]) == 0
        capsys.readouterr()
        assert main(["runs", "--kind", "eval"]) == 0
        assert "\teval\t" in capsys.readouterr().out
        assert main(["runs", "--id", "999"]) == 2
