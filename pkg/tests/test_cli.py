import json

import numpy as np
import pytest

from texqc.cli import main
from texqc.image import GrayImage, write_pgm
from texqc.mlp import MlpModel, save_model
from texqc.synthgen import SynthSpec, generate


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    spec = out / "spec.json"
    spec.write_text(json.dumps({"width": 64, "height": 64}))
    rc = main(["generate", "--spec", str(spec), "--n", "16",
               "--defect-fraction", "0.5", "--out", str(out), "--seed", "3"])
    assert rc == 0
    return out


@pytest.fixture(scope="module")
def model_file(corpus_dir, tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "model.json"
    rc = main(["train", "--corpus", str(corpus_dir), "--out", str(path),
               "--epochs", "60", "--seed", "1"])
    assert rc == 0
    return path


def stub_model_file(tmp_path, p):
    b2 = np.log(p / (1 - p))
    m = MlpModel(np.zeros((2, 12)), np.zeros(2), np.zeros((1, 2)),
                 np.array([b2]), np.zeros(12), np.ones(12))
    path = tmp_path / "stub.json"
    path.write_bytes(save_model(m))
    return path


def pair_files(tmp_path, defect="none"):
    pair, _ = generate(SynthSpec(width=64, height=64, defect=defect))
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    a.write_bytes(write_pgm(pair.a))
    b.write_bytes(write_pgm(pair.b))
    return a, b


def test_no_arguments_is_usage_error(capsys):
    assert main([]) == 1


def test_unknown_flag_exits_1(capsys):
    assert main(["detect", "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_model_file_reported(tmp_path, capsys):
    a, b = pair_files(tmp_path)
    rc = main(["detect", "--a", str(a), "--b", str(b),
               "--model", str(tmp_path / "none.json")])
    assert rc == 1
    assert "none.json" in capsys.readouterr().err


def test_generate_layout(corpus_dir):
    assert (corpus_dir / "0015_b.pgm").exists()
    assert (corpus_dir / "labels.csv").exists()
    assert (corpus_dir / "corpus.json").exists()


def test_detect_exit_codes(tmp_path, capsys):
    clean = stub_model_file(tmp_path, 0.1)
    a, b = pair_files(tmp_path)
    assert main(["detect", "--a", str(a), "--b", str(b), "--model", str(clean)]) == 0
    doc = json.loads(capsys.readouterr().out.strip())
    assert doc["defect"] is False and 0 < doc["p"] < 1

    alarm = stub_model_file(tmp_path, 0.9)
    assert main(["detect", "--a", str(a), "--b", str(b), "--model", str(alarm)]) == 2
    assert json.loads(capsys.readouterr().out.strip())["defect"] is True


def test_detect_dump_density(tmp_path, capsys):
    model = stub_model_file(tmp_path, 0.1)
    a, b = pair_files(tmp_path)
    out = tmp_path / "density.csv"
    main(["detect", "--a", str(a), "--b", str(b), "--model", str(model),
          "--dump-density", str(out)])
    capsys.readouterr()
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 180
    theta, value = lines[1].split(",")
    assert float(theta) == 1.0 and float(value) >= 0


def test_stream_emits_decisions_and_stop(corpus_dir, tmp_path, capsys):
    alarm = stub_model_file(tmp_path, 0.9)
    rc = main(["stream", "--corpus", str(corpus_dir), "--model", str(alarm)])
    assert rc == 2
    lines = capsys.readouterr().out.strip().split("\n")
    assert json.loads(lines[0])["seq"] == 0
    assert json.loads(lines[-1]) == {"stop_at": 0}


def test_stream_no_stop(corpus_dir, tmp_path, capsys):
    clean = stub_model_file(tmp_path, 0.1)
    rc = main(["stream", "--corpus", str(corpus_dir), "--model", str(clean),
               "--no-stop"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 16
    assert all(not json.loads(l)["defect"] for l in lines)


def test_eval_report(corpus_dir, model_file, capsys):
    rc = main(["eval", "--corpus", str(corpus_dir), "--model", str(model_file)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out.strip())
    total = (doc["true_positives"] + doc["false_positives"]
             + doc["true_negatives"] + doc["false_negatives"])
    assert total == 16
    assert 0 <= doc["detection_rate"] <= 1


def test_eval_dump_features(corpus_dir, model_file, tmp_path, capsys):
    out = tmp_path / "features.csv"
    main(["eval", "--corpus", str(corpus_dir), "--model", str(model_file),
          "--dump-features", str(out)])
    capsys.readouterr()
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 16
    assert all(len(r.split(",")) == 13 for r in rows)


def test_bench(corpus_dir, model_file, capsys):
    rc = main(["bench", "--corpus", str(corpus_dir), "--model", str(model_file),
               "--reps", "1"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out.strip())
    assert doc["samples"] == 16
    assert doc["latency_p95_us"] <= doc["latency_max_us"]


def test_config_file_and_flag_override(tmp_path, capsys):
    model = stub_model_file(tmp_path, 0.6)
    a, b = pair_files(tmp_path)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"decision_threshold": 0.9,
                               "preproc": {"gaussian_radius": 1}}))
    # config alone: 0.6 < 0.9, no defect
    assert main(["detect", "--a", str(a), "--b", str(b), "--model", str(model),
                 "--config", str(cfg)]) == 0
    capsys.readouterr()
    # CLI flag wins over the config file
    assert main(["detect", "--a", str(a), "--b", str(b), "--model", str(model),
                 "--config", str(cfg), "--decision-threshold", "0.5"]) == 2


def test_unknown_config_key(tmp_path, capsys):
    model = stub_model_file(tmp_path, 0.5)
    a, b = pair_files(tmp_path)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"not_a_key": 1}))
    assert main(["detect", "--a", str(a), "--b", str(b), "--model", str(model),
                 "--config", str(cfg)]) == 1
    assert "not_a_key" in capsys.readouterr().err
