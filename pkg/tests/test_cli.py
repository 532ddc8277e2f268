import json

import pytest

from profilematch.cli import main
from profilematch.folds import read_fold_manifest
from profilematch.learn import load_model


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory):
    """synth -> folds once for the whole module."""
    base = tmp_path_factory.mktemp("cli")
    cfg = {
        "n_profiles_per_network": 120,
        "n_matched": 40,
        "typo_rate": 0.1,
        "token_swap_rate": 0.1,
        "pseudonym_rate": 0.0,
        "friend_overlap": 0.5,
        "field_drop_rate": 0.2,
        "seed": 3,
    }
    cfg_path = base / "cfg.json"
    cfg_path.write_text(json.dumps(cfg), encoding="utf-8")
    data = base / "data"
    folds = base / "folds"
    assert main(["synth", "--config", str(cfg_path), "--out", str(data)]) == 0
    assert main([
        "folds", "--s1", str(data / "s1.jsonl"), "--s2", str(data / "s2.jsonl"),
        "--ref", str(data), "--positives", str(data / "positives.csv"),
        "--out", str(folds), "--seed", "5", "--k", "5",
    ]) == 0
    return base


def test_synth_writes_documented_files(pipeline_dir):
    data = pipeline_dir / "data"
    for name in ("s1.jsonl", "s2.jsonl", "positives.csv", "name_frequency.tsv", "gazetteer.csv"):
        assert (data / name).exists(), name


def test_folds_manifest_loads(pipeline_dir):
    fold_data, manifest = read_fold_manifest(pipeline_dir / "folds" / "manifest.json")
    assert manifest["k"] == 5
    assert len(fold_data) == 5


def test_ingest_validates(pipeline_dir, capsys):
    data = pipeline_dir / "data"
    assert main(["ingest", "--in", str(data / "s1.jsonl"), "--network", "S1"]) == 0
    assert "120 profiles ok" in capsys.readouterr().out


def test_ingest_rejects_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "u1"}\n', encoding="utf-8")
    assert main(["ingest", "--in", str(bad), "--network", "S1"]) == 1
    assert "full_name" in capsys.readouterr().err


def test_evaluate_scenario_a(pipeline_dir):
    out = pipeline_dir / "reportA.json"
    csv_out = pipeline_dir / "reportA.csv"
    roc_dir = pipeline_dir / "roc"
    code = main([
        "evaluate", "--folds", str(pipeline_dir / "folds" / "manifest.json"),
        "--scenario", "A", "--out", str(out), "--csv", str(csv_out),
        "--roc-dir", str(roc_dir),
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["scenario"] == "A"
    assert report["mean"]["auc"] > 0.7
    assert csv_out.exists()
    roc_files = list(roc_dir.glob("roc_fold*.csv"))
    assert roc_files
    header = roc_files[0].read_text().splitlines()[0]
    assert header == "fpr,tpr"


def test_evaluate_scenario_b_zero_qualifying_exits_nonzero(tmp_path, capsys):
    cfg = {
        "n_profiles_per_network": 40,
        "n_matched": 12,
        "pseudonym_rate": 1.0,
        "typo_rate": 0.0,
        "token_swap_rate": 0.0,
        "friend_overlap": 0.5,
        "field_drop_rate": 0.0,
        "seed": 21,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg), encoding="utf-8")
    data = tmp_path / "data"
    folds = tmp_path / "folds"
    assert main(["synth", "--config", str(cfg_path), "--out", str(data)]) == 0
    assert main([
        "folds", "--s1", str(data / "s1.jsonl"), "--s2", str(data / "s2.jsonl"),
        "--ref", str(data), "--positives", str(data / "positives.csv"),
        "--out", str(folds), "--seed", "2", "--k", "4",
    ]) == 0
    code = main([
        "evaluate", "--folds", str(folds / "manifest.json"),
        "--scenario", "B", "--out", str(tmp_path / "reportB.json"),
    ])
    assert code == 1
    err = capsys.readouterr().err
    assert "error:" in err


def test_evaluate_scenario_c(pipeline_dir):
    out = pipeline_dir / "reportC.json"
    code = main([
        "evaluate", "--folds", str(pipeline_dir / "folds" / "manifest.json"),
        "--scenario", "C", "--out", str(out),
    ])
    assert code == 0
    assert json.loads(out.read_text())["feature_subset"] == list(range(10, 27))


def test_ablate_only_x_writes_27_rows(pipeline_dir):
    out = pipeline_dir / "ablation.json"
    csv_out = pipeline_dir / "ablation.csv"
    code = main([
        "ablate", "--folds", str(pipeline_dir / "folds" / "manifest.json"),
        "--mode", "only-x", "--out", str(out), "--csv", str(csv_out),
        "--iterations", "5",
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert len(report["per_feature"]) == 27
    assert len(csv_out.read_text().splitlines()) == 28  # header + 27 rows


def test_train_command_produces_loadable_model(pipeline_dir):
    model_path = pipeline_dir / "model.json"
    code = main([
        "train", "--train", str(pipeline_dir / "folds" / "fold00_train.csv"),
        "--model", "rf", "--trees", "10", "--out", str(model_path),
    ])
    assert code == 0
    model = load_model(model_path)
    assert model.kind == "random_forest"
    assert len(model.members) == 10


def test_features_command(pipeline_dir, tmp_path):
    data = pipeline_dir / "data"
    out = tmp_path / "fm.csv"
    code = main([
        "features", "--s1", str(data / "s1.jsonl"), "--s2", str(data / "s2.jsonl"),
        "--ref", str(data), "--pairs", str(data / "positives.csv"), "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 41  # header + 40 positives
    assert lines[0].startswith("id1,id2,label,f00_soundexName")


def test_missing_input_file_is_reported(tmp_path, capsys):
    assert main(["ingest", "--in", str(tmp_path / "nope.jsonl"), "--network", "S1"]) == 1
    assert "error:" in capsys.readouterr().err
