import json
import math
import subprocess
import sys

import pytest

from affiq.cli import main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_body_generate_and_inspect(tmp_path, capsys):
    path = tmp_path / "cube.json"
    assert main(["body", "generate", "--kind", "cube", "--n", "3", "--out", str(path)]) == 0
    assert main(["body", "inspect", str(path)]) == 0
    info = _json(capsys)
    assert info["volume"] == pytest.approx(1.0)
    assert info["inradius"] == pytest.approx(0.5)
    assert info["vertices"] == 8


def test_body_generate_deterministic(capsys):
    argv = ["body", "generate", "--kind", "random-poly", "--n", "4", "--m", "12", "--seed", "3"]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == a


def test_quermass_compute_cube(tmp_path, capsys):
    path = tmp_path / "cube.json"
    main(["body", "generate", "--kind", "cube", "--n", "3", "--out", str(path)])
    assert main(["quermass", "compute", str(path), "--k", "2", "--p", "1", "--budget", "50000",
                 "--seed", "1"]) == 0
    out = _json(capsys)
    assert abs(out["Q"]["value"] - 2.0) < 4 * out["Q"]["stderr"]


def test_quermass_ball_exact(capsys):
    assert main(["quermass", "compute", "--body", "ball3", "--k", "1", "--seed", "1",
                 "--budget", "1000"]) == 0
    out = _json(capsys)
    assert out["Phi"]["stderr"] == 0.0
    assert out["Phi"]["value"] == pytest.approx(4 * math.pi / 3)


def test_symmetrize_box(capsys):
    assert main(["symmetrize", "--body", "box3a", "--u", "0,0,1", "--seed", "1",
                 "--n-extra", "0"]) == 0
    body = _json(capsys)
    zs = sorted({round(v[2], 12) for v in body["vertices"]})
    assert zs == [-1.5, 1.5]


@pytest.mark.parametrize("argv", [
    ["verify", "nosuch"],
    ["verify", "lutwak"],
    ["quermass", "compute", "--body", "cube3", "--k", "5", "--seed", "1"],
    ["symmetrize", "--body", "cube3", "--seed", "1"],
    ["body", "generate", "--kind", "donut", "--n", "3"],
    ["verify", "steiner", "--body", "nope", "--seed", "1"],
])
def test_usage_errors_exit_2(argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_numerical_failure_exit_3(tmp_path):
    path = tmp_path / "flat.json"
    path.write_text('{"kind": "vpoly", "vertices": [[0, 0], [1, 1], [2, 2]]}')
    assert main(["body", "inspect", str(path)]) == 3


def test_verify_list(capsys):
    assert main(["verify", "--list"]) == 0
    assert "lutwak" in capsys.readouterr().out


def test_verify_writes_json_and_csv(tmp_path):
    out = tmp_path / "report"
    assert main(["verify", "exact-geometry", "--seed", "1", "--out", str(out)]) == 0
    d = json.loads((tmp_path / "report.json").read_text())
    assert d["suite"] == "exact-geometry" and d["pass"]
    assert (tmp_path / "report.csv").read_text().startswith("suite,case,body")


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 4, "budget": 2000}))
    assert main(["quermass", "compute", "--body", "cube3", "--k", "1", "--config", str(cfg)]) == 0
    out = _json(capsys)
    assert out["seed"] == 4 and out["budget"] == 2000


def test_threads_flag_byte_identical_subprocess(tmp_path):
    outs = []
    for t in ("1", "4"):
        path = tmp_path / f"bp{t}.json"
        subprocess.run([sys.executable, "-m", "affiq.cli", "bp-check", "--seed", "3", "--budget",
                        "20000", "--threads", t, "--out", str(path), "--format", "json"], check=True,
                       capture_output=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
