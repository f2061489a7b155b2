import json

import numpy as np
import pytest

from lcwt.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, EXIT_TASK, main
from lcwt.lcsg import read_lcsg

CHIRP = "builtin:chirp(f0=2,f1=20,T=4)"


def config(tmp_path, name="cfg.json", **kw):
    raw = {"input": CHIRP, "matrix": [1, 2, 0.5, 2], "wavelet": "lc-mexican-hat", "tasks": ["transform"]}
    raw.update(kw)
    p = tmp_path / name
    p.write_text(json.dumps(raw))
    return p


def snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_transform_is_deterministic(tmp_path):
    cfg = config(tmp_path, tasks=["transform", "reconstruct"])
    assert main([str(cfg), "--out", str(tmp_path / "one")]) == EXIT_OK
    assert main([str(cfg), "--out", str(tmp_path / "two")]) == EXIT_OK
    one, two = snapshot(tmp_path / "one"), snapshot(tmp_path / "two")
    assert set(one) == {
        "scalogram.lcsg", "scalogram.pgm", "scalogram.pgm.txt", "transform.json",
        "reconstruction.csv", "reconstruct.json",
    }
    assert one == two
    meta = json.loads(one["transform.json"])
    assert meta["input"] == CHIRP and meta["matrix"] == [1.0, 2.0, 0.5, 2.0]
    assert json.loads(one["reconstruct.json"])["relative_error"] <= 1e-2


def test_heatmap_layout(tmp_path):
    assert main([str(config(tmp_path)), "--out", str(tmp_path / "o")]) == EXIT_OK
    S = read_lcsg(tmp_path / "o" / "scalogram.lcsg")
    img = (tmp_path / "o" / "scalogram.pgm").read_bytes()
    header = f"P5\n{S.grid.n_shifts} {S.grid.n_scales}\n255\n".encode()
    assert img.startswith(header)
    gray = np.frombuffer(img[len(header):], dtype=np.uint8).reshape(S.grid.n_scales, S.grid.n_shifts)
    assert gray.max() == 255
    side = dict(line.split("=") for line in (tmp_path / "o" / "scalogram.pgm.txt").read_text().split())
    assert float(side["max_abs"]) == np.abs(S.coefficients).max()
    assert float(side["log10_floor"]) == -6.0


def test_determinant_error_exits_2(tmp_path, capsys):
    cfg = config(tmp_path, matrix=[1.01, 0, 0, 1.0])
    assert main([str(cfg)]) == EXIT_CONFIG
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError" and "determinant" in err["message"]


@pytest.mark.parametrize(
    "override",
    [
        {"tasks": []},
        {"tasks": ["plot"]},
        {"input": "missing.csv"},
        {"wavelet": "haar"},
        {"matrix": [0, 0, 0, 0]},
        {"matrix": [1, 0, 0, 1]},
        {"grid": {"n_shifts": 5}},
    ],
)
def test_config_errors(tmp_path, capsys, override):
    assert main([str(config(tmp_path, **override))]) == EXIT_CONFIG
    assert json.loads(capsys.readouterr().err)["error"] == "ConfigError"


def test_unreadable_config(tmp_path):
    (tmp_path / "bad.json").write_text("{")
    assert main([str(tmp_path / "bad.json")]) == EXIT_CONFIG
    assert main([str(tmp_path / "none.json")]) == EXIT_CONFIG


def test_task_error_exits_3(tmp_path, capsys):
    (tmp_path / "x.csv").write_text("0,1\n0.5,2\n1.7,3\n")
    assert main([str(config(tmp_path, input="x.csv"))]) == EXIT_TASK
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "NonUniformGrid" and err["task"] == "ingest"


def test_csv_input_relative_to_config(tmp_path):
    t = np.arange(256) * 0.05
    rows = "".join(f"{float(x)!r},{float(np.exp(-((x - 6) ** 2)) * np.cos(4 * x))!r}\n" for x in t)
    (tmp_path / "sig.csv").write_text(rows)
    assert main([str(config(tmp_path, input="sig.csv", output="res"))]) == EXIT_OK
    assert (tmp_path / "res" / "scalogram.lcsg").exists()


def test_parseval_and_tolerance_scale(tmp_path):
    cfg = config(tmp_path, tasks=["verify-parseval"])
    assert main([str(cfg), "--out", str(tmp_path / "a")]) == EXIT_OK
    doc = json.loads((tmp_path / "a" / "parseval.json").read_text())
    assert doc["all_hold"] and [r["theorem"] for r in doc["records"]] == ["lct-parseval", "lcwt-plancherel"]
    assert main([str(cfg), "--out", str(tmp_path / "b"), "--tol-scale", "1e-12"]) == EXIT_FAILED


def test_verify_up_default_suite(tmp_path):
    cfg = config(tmp_path, tasks=["verify-up"])
    assert main([str(cfg), "--out", str(tmp_path / "o"), "--seed", "42"]) == EXIT_OK
    doc = json.loads((tmp_path / "o" / "uncertainty.json").read_text())
    holds = [r for r in doc["records"] if r["holds"] is True]
    assert len(holds) >= 50 and doc["all_hold"] and doc["context"]["seed"] == 42
    assert list(doc["records"][0]) == ["theorem", "parameters", "lhs", "rhs", "slack", "holds", "grid_metadata"]
