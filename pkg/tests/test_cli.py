import json

import numpy as np
import pytest

from hgmda.cli import main
from hgmda.data import load_features, write_features
from hgmda.synthetic import rotated_gaussian_task


@pytest.fixture
def task_files(tmp_path):
    source, tgt_X, tgt_y = rotated_gaussian_task(n_per_class=10, seed=0)
    paths = {
        "source_features": tmp_path / "src_X.csv",
        "source_labels": tmp_path / "src_y.csv",
        "target_features": tmp_path / "tgt_X.csv",
        "target_labels": tmp_path / "tgt_y.csv",
    }
    write_features(paths["source_features"], source.features)
    np.savetxt(paths["source_labels"], source.labels, fmt="%d")
    write_features(paths["target_features"], tgt_X)
    np.savetxt(paths["target_labels"], tgt_y, fmt="%d")
    return {k: str(v) for k, v in paths.items()}


class TestAdaptCommand:
    def test_writes_all_artifacts(self, task_files, tmp_path, capsys):
        out = tmp_path / "run"
        code = main([
            "adapt",
            "--source-features", task_files["source_features"],
            "--source-labels", task_files["source_labels"],
            "--target-features", task_files["target_features"],
            "--cg-iters", "8",
            "--admm-iters", "400",
            "--out", str(out),
        ])
        assert code == 0
        adapted = load_features(str(out / "adapted.csv"))
        assert adapted.shape == (20, 2)
        matching = load_features(str(out / "matching.csv"))
        report = json.loads((out / "report.json").read_text())
        assert len(report["rounds"]) == 1
        assert matching.shape == (
            report["rounds"][0]["n_source_exemplars"],
            report["rounds"][0]["n_target_exemplars"],
        )
        assert report["config"]["admm_iters"] == 400
        assert "wrote" in capsys.readouterr().out

    def test_missing_input_is_exit_one(self, task_files, tmp_path, capsys):
        code = main([
            "adapt",
            "--source-features", str(tmp_path / "absent.csv"),
            "--source-labels", task_files["source_labels"],
            "--target-features", task_files["target_features"],
            "--out", str(tmp_path / "run"),
        ])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_invalid_eta_is_exit_one(self, task_files, tmp_path, capsys):
        code = main([
            "adapt",
            "--source-features", task_files["source_features"],
            "--source-labels", task_files["source_labels"],
            "--target-features", task_files["target_features"],
            "--eta", "2.0",
            "--out", str(tmp_path / "run"),
        ])
        assert code == 1
        capsys.readouterr()


class TestEvaluateCommand:
    def test_predictions_to_file_with_accuracy(self, task_files, tmp_path, capsys):
        out = tmp_path / "preds.csv"
        code = main([
            "evaluate",
            "--train-features", task_files["source_features"],
            "--train-labels", task_files["source_labels"],
            "--test-features", task_files["target_features"],
            "--test-labels", task_files["target_labels"],
            "--out", str(out),
        ])
        assert code == 0
        preds = [int(line) for line in out.read_text().strip().split("\n")]
        assert len(preds) == 20
        assert set(preds) <= {1, 2}
        assert "accuracy" in capsys.readouterr().out

    def test_predictions_to_stdout(self, task_files, capsys):
        code = main([
            "evaluate",
            "--train-features", task_files["source_features"],
            "--train-labels", task_files["source_labels"],
            "--test-features", task_files["target_features"],
        ])
        assert code == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 20


class TestBenchmarkCommand:
    def test_runs_spec_file(self, task_files, tmp_path, capsys):
        doc = {
            "seed": 0,
            "trials": 1,
            "per_class": 5,
            "config": {"cg_iters": 6, "admm_iters": 400},
            "tasks": [dict(name="toy", **task_files)],
        }
        spec_path = tmp_path / "bench.json"
        spec_path.write_text(json.dumps(doc))
        out = tmp_path / "results.csv"
        code = main(["benchmark", "--spec", str(spec_path), "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("task,")
        assert lines[1].startswith("toy,")
        assert "toy" in capsys.readouterr().out

    def test_missing_spec_is_exit_one(self, tmp_path, capsys):
        code = main(["benchmark", "--spec", str(tmp_path / "absent.json")])
        assert code == 1
        capsys.readouterr()


class TestLpCheckCommand:
    def test_prints_max_deviation(self, capsys):
        code = main(["lp-check", "--n", "3", "--trials", "5", "--seed", "0"])
        assert code == 0
        out = capsys.readouterr().out
        assert "max |Tr(G^T C) - exact LP minimum|" in out
        worst = float(out.strip().split()[-1])
        assert worst < 0.05

    def test_oversized_n_is_exit_one(self, capsys):
        code = main(["lp-check", "--n", "9"])
        assert code == 1
        capsys.readouterr()


class TestArgumentHandling:
    def test_no_command_is_exit_one(self, capsys):
        assert main([]) == 1
        capsys.readouterr()

    def test_help_is_exit_zero(self, capsys):
        assert main(["--help"]) == 0
        capsys.readouterr()
