"""End-to-end CLI pipeline run in-process."""

import json

import pytest

from prefixmt.cli import main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    code = main([
        "synth-corpus", "--sentences", "260", "--seed", "33",
        "--out-src", str(root / "full.src"), "--out-tgt", str(root / "full.tgt"),
        "--vocab-size", "30",
    ])
    assert code == 0
    src_lines = (root / "full.src").read_text(encoding="utf-8").splitlines()
    tgt_lines = (root / "full.tgt").read_text(encoding="utf-8").splitlines()
    for name, lines in (("train", slice(0, 240)), ("test", slice(240, 260))):
        (root / f"{name}.src").write_text("\n".join(src_lines[lines]) + "\n", "utf-8")
        (root / f"{name}.tgt").write_text("\n".join(tgt_lines[lines]) + "\n", "utf-8")
    return root


@pytest.fixture(scope="module")
def smt_model_dir(workdir):
    code = main([
        "train-smt",
        "--train-src", str(workdir / "train.src"),
        "--train-tgt", str(workdir / "train.tgt"),
        "--out-dir", str(workdir / "models"),
        "--lm-order", "3", "--em-iterations", "4",
    ])
    assert code == 0
    return workdir / "models"


class TestSynthCorpus:
    def test_files_line_aligned(self, workdir):
        src = (workdir / "full.src").read_text("utf-8").splitlines()
        tgt = (workdir / "full.tgt").read_text("utf-8").splitlines()
        assert len(src) == len(tgt) == 260

    def test_seed_required(self, workdir, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["synth-corpus", "--sentences", "5",
                  "--out-src", "a", "--out-tgt", "b"])
        assert exc.value.code == 2


class TestTrainSmt:
    def test_model_files_written(self, smt_model_dir):
        assert (smt_model_dir / "smt" / "phrase_table.txt").exists()
        assert (smt_model_dir / "smt" / "lm.arpa").exists()
        assert (smt_model_dir / "smt" / "weights.tsv").exists()


class TestModernize:
    def test_output_written(self, workdir, smt_model_dir):
        out = workdir / "hyp.txt"
        code = main([
            "modernize", "--engine", "smt", "--model-dir", str(smt_model_dir),
            "--input", str(workdir / "test.src"), "--output", str(out),
        ])
        assert code == 0
        assert len(out.read_text("utf-8").splitlines()) == 20

    def test_missing_model_exit_1(self, workdir, capsys):
        code = main([
            "modernize", "--engine", "smt", "--model-dir", str(workdir / "nowhere"),
            "--input", str(workdir / "test.src"), "--output", str(workdir / "x"),
        ])
        assert code == 1
        assert "nowhere" in capsys.readouterr().err

    def test_env_var_model_dir(self, workdir, smt_model_dir, monkeypatch):
        monkeypatch.setenv("IMT_MODEL_DIR", str(smt_model_dir))
        out = workdir / "hyp_env.txt"
        code = main([
            "modernize", "--engine", "smt",
            "--input", str(workdir / "test.src"), "--output", str(out),
        ])
        assert code == 0


class TestImtSimulate:
    def test_report_layout(self, workdir, smt_model_dir, capsys):
        code = main([
            "imt-simulate", "--engine", "smt", "--model-dir", str(smt_model_dir),
            "--test", f"{workdir / 'test.src'},{workdir / 'test.tgt'}",
            "--trace", str(workdir / "trace.tsv"),
            "--json", str(workdir / "imt.json"),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "WSR" in out and "MAR" in out
        payload = json.loads((workdir / "imt.json").read_text("utf-8"))
        assert payload["system"] == "smt"
        assert payload["sentences"] == 20
        assert 0 <= payload["wsr"] <= 100
        trace = (workdir / "trace.tsv").read_text("utf-8")
        assert trace.startswith("IT-")


class TestEvaluate:
    def test_identity_scores(self, workdir, capsys):
        code = main([
            "evaluate", "--ref", str(workdir / "test.tgt"),
            "--hyp", f"exact={workdir / 'test.tgt'}",
            "--reps", "50", "--json", str(workdir / "eval.json"),
        ])
        assert code == 0
        rows = json.loads((workdir / "eval.json").read_text("utf-8"))
        assert rows[0]["bleu"] == 100.0
        assert rows[0]["ter"] == 0.0

    def test_baseline_and_significance(self, workdir, smt_model_dir, capsys):
        code = main([
            "evaluate", "--ref", str(workdir / "test.tgt"),
            "--baseline-src", str(workdir / "test.src"),
            "--hyp", f"smt={workdir / 'hyp.txt'}",
            "--reps", "200", "--seed", "1",
            "--json", str(workdir / "eval2.json"),
        ])
        assert code == 0
        rows = json.loads((workdir / "eval2.json").read_text("utf-8"))
        names = [r["system"] for r in rows]
        assert names == ["baseline", "smt"]
        assert "baseline" in rows[1]["p_values"]
        assert set(rows[1]["p_values"]["baseline"]) == {"bleu", "ter"}
        table = capsys.readouterr().out
        assert "BLEU" in table and "TER" in table

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--nonsense"])
        assert exc.value.code == 2


class TestTrainNmt:
    def test_tiny_training_run(self, workdir):
        code = main([
            "train-nmt",
            "--train-src", str(workdir / "train.src"),
            "--train-tgt", str(workdir / "train.tgt"),
            "--out-dir", str(workdir / "models"),
            "--dims", "8", "--merges", "60", "--updates", "3",
            "--batch-size", "8", "--seed", "5",
        ])
        assert code == 0
        assert (workdir / "models" / "neural" / "model.npz").exists()

    def test_neural_modernize_runs(self, workdir):
        out = workdir / "hyp_nmt.txt"
        code = main([
            "modernize", "--engine", "neural", "--model-dir", str(workdir / "models"),
            "--input", str(workdir / "test.src"), "--output", str(out),
        ])
        assert code == 0
        assert len(out.read_text("utf-8").splitlines()) == 20
