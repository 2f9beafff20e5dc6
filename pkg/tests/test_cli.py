import csv
import json

import numpy as np
import pytest

from cswatermark.cli import main
from cswatermark.experiment import CSV_COLUMNS
from cswatermark.image_core import load_pgm, save_pgm


@pytest.fixture
def cam_path(tmp_path, camera):
    p = tmp_path / "cameraman.pgm"
    save_pgm(camera, p)
    return p


@pytest.fixture
def marked(tmp_path, cam_path):
    out = tmp_path / "marked.pgm"
    assert main(["embed", "--input", str(cam_path), "--output", str(out),
                 "--seed", "1", "--alpha", "7"]) == 0
    return out


def test_embed_writes_image_and_key(marked, capsys, tmp_path):
    key = json.loads((tmp_path / "marked.pgm.key.json").read_text())
    assert key == {"seed": 1, "length": 4096, "distribution": "normal"}
    assert load_pgm(marked).shape == (256, 256)


def test_embed_prints_psnr_in_range(cam_path, tmp_path, capsys):
    main(["embed", "--input", str(cam_path), "--output", str(tmp_path / "m.pgm")])
    line = capsys.readouterr().out.splitlines()[0]
    value = float(line.split(":")[1].split()[0])
    assert 40 <= value <= 50


def test_embed_alpha_zero_reports_inf(cam_path, tmp_path, capsys):
    assert main(["embed", "--input", str(cam_path), "--output", str(tmp_path / "m.pgm"),
                 "--alpha", "0"]) == 0
    assert "embed PSNR: inf dB" in capsys.readouterr().out


def test_embed_missing_input(tmp_path):
    out = tmp_path / "never.pgm"
    assert main(["embed", "--input", str(tmp_path / "absent.pgm"), "--output", str(out)]) == 2
    assert not out.exists()
    assert not (tmp_path / "never.pgm.key.json").exists()


def test_embed_bad_dimensions(tmp_path):
    p = tmp_path / "six.pgm"
    p.write_bytes(b"P5\n6 6\n255\n" + bytes(36))
    assert main(["embed", "--input", str(p), "--output", str(tmp_path / "o.pgm")]) == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["embed", "--alpha", "7"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_detect_watermarked(marked, tmp_path):
    report, table = tmp_path / "rep.json", tmp_path / "resp.csv"
    code = main(["detect", "--input", str(marked), "--key", str(tmp_path / "marked.pgm.key.json"),
                 "--wrong-count", "100", "--wrong-seed-base", "1000",
                 "--output", str(report), "--csv", str(table)])
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["decision"] is True
    assert doc["wrong_key_count"] == 100
    assert doc["wrong_seeds"] == list(range(1001, 1101))
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == 101
    assert rows[0]["is_right"] == "true" and rows[0]["seed"] == "1"
    assert all(r["is_right"] == "false" for r in rows[1:])


def test_detect_with_impostor_key(marked, tmp_path):
    impostor = tmp_path / "impostor.json"
    impostor.write_text(json.dumps({"seed": 77, "length": 4096, "distribution": "normal"}))
    assert main(["detect", "--input", str(marked), "--key", str(impostor)]) == 3


def test_detect_key_mismatch(marked, tmp_path):
    bad = tmp_path / "short.json"
    bad.write_text(json.dumps({"seed": 1, "length": 100}))
    assert main(["detect", "--input", str(marked), "--key", str(bad)]) == 1


def test_attack_full_sampling(marked, tmp_path):
    out = tmp_path / "rec.pgm"
    code = main(["attack", "--input", str(marked), "--output", str(out),
                 "--v1", str(256 * 256), "--v2", "0"])
    assert code == 0
    doc = json.loads((tmp_path / "rec.json").read_text())
    assert doc["psnr_db"] == "inf" or doc["psnr_db"] >= 60
    assert doc["fraction_percent"] == 100.0
    assert doc["data_residual"] <= 1e-9


def test_attack_fraction_and_detection(marked, tmp_path):
    out = tmp_path / "rec.pgm"
    assert main(["attack", "--input", str(marked), "--output", str(out),
                 "--v1", "2000", "--v2", "12000", "--selection-seed", "3"]) == 0
    doc = json.loads(out.with_suffix(".json").read_text())
    assert doc["fraction_percent"] == pytest.approx(21.36, abs=5e-3)
    assert {"iterations_used", "final_tv", "data_residual", "psnr_db", "converged"} <= set(doc)
    assert main(["detect", "--input", str(out), "--key",
                 str(tmp_path / "marked.pgm.key.json")]) == 0


def test_attack_counts_too_large(marked, tmp_path):
    assert main(["attack", "--input", str(marked), "--output", str(tmp_path / "r.pgm"),
                 "--v1", "60000", "--v2", "10000"]) == 1


def test_attack_bad_solver_flag(marked, tmp_path):
    assert main(["attack", "--input", str(marked), "--output", str(tmp_path / "r.pgm"),
                 "--v1", "10", "--v2", "10", "--step", "-1"]) == 1


def test_attack_non_convergence(marked, tmp_path):
    out = tmp_path / "r.pgm"
    assert main(["attack", "--input", str(marked), "--output", str(out),
                 "--v1", "1000", "--v2", "5000", "--max-iters", "2"]) == 4
    assert out.exists()


def test_psnr_command(cam_path, marked, tmp_path, capsys):
    rep = tmp_path / "q.json"
    assert main(["psnr", "--reference", str(cam_path), "--input", str(cam_path),
                 "--output", str(rep)]) == 0
    assert json.loads(rep.read_text()) == {"mse": 0.0, "psnr_db": "inf"}
    assert main(["psnr", "--reference", str(cam_path), "--input", str(marked)]) == 0
    assert "PSNR 4" in capsys.readouterr().out


def test_experiment_small(cam_path, tmp_path):
    out = tmp_path / "table.csv"
    code = main(["experiment", "--input", str(cam_path), "--output", str(out),
                 "--wrong-count", "20"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 7
    manifest = json.loads(out.with_suffix(".json").read_text())["manifest"]
    assert manifest["wrong_key_seeds"] == list(range(1001, 1021))
    assert manifest["solver"]["max_iterations"] == 300
    responses = list(csv.DictReader((tmp_path / "table_responses.csv").open()))
    assert len(responses) == 7 * 21
    assert responses[0]["stage"] == "watermarked"


def test_experiment_non_convergence_exit(cam_path, tmp_path):
    assert main(["experiment", "--input", str(cam_path), "--output", str(tmp_path / "t.csv"),
                 "--wrong-count", "5", "--max-iters", "2"]) == 4
