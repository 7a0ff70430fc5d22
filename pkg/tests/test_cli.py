import json
import math
import subprocess
import sys

import pytest

from cubicflow import checks
from cubicflow.cli import main

OMEGA_108 = math.gamma(1 / 3) ** 3 / (4 * math.pi) * 108 ** (-1 / 6)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out) if out else None)


def test_classify_examples(capsys):
    assert run(capsys, "classify", "--cubic", "1,0,0,0") == (
        0, {"class": "MonomialComplete", "w": ["0", "-1"], "delta_disc": "0"})
    assert run(capsys, "classify", "--cubic", "0,1,1,0") == (
        0, {"class": "Definite", "delta_disc": "-3"})


def test_classify_accepts_rationals_and_json(capsys):
    code, out = run(capsys, "classify", "--cubic", '{"a": "1/8", "b": 0, "c": 0, "d": 0}')
    assert code == 0 and out["w"] == ["0", "-1/2"]
    code, out = run(capsys, "classify", "--cubic=-1/8,0,0,0")
    assert out["w"] == ["0", "1/2"]


@pytest.mark.parametrize("bad", ["1,0,0,x", "1,0,0", "1.5,0,0,0", "1,0,0,1/0"])
def test_classify_rejects_malformed(capsys, bad):
    assert main(["classify", "--cubic", bad]) == 2


def test_missing_required_argument():
    assert main(["integrate", "--cubic", "0,1,1,0"]) == 2
    assert main([]) == 2


def test_integrate_affine(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, rep = run(capsys, "integrate", "--cubic", "1,0,0,0", "--z0", "1,0", "--t", "10",
                    "--out", str(out))
    assert code == 0
    assert rep["forward"]["termination"] == "SpanCompleted"
    assert rep["backward"]["t_end"] == -10.0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    for t, p, q, *_ in rows:
        assert float(p) == pytest.approx(1.0, abs=1e-12)
        assert float(q) == pytest.approx(float(t), abs=1e-9)


def test_integrate_blowup(capsys, tmp_path):
    code, rep = run(capsys, "integrate", "--cubic", "0,1,1,0", "--z0", "1,1", "--t", "2",
                    "--out", str(tmp_path / "t.csv"))
    assert code == 3
    assert rep["forward"]["termination"] == "BlowUpForward"
    assert rep["forward"]["t_est"] == pytest.approx(OMEGA_108, rel=1e-5)
    assert rep["predicted_pole_forward"] == pytest.approx(OMEGA_108, rel=1e-10)
    assert rep["g3"] == 108.0


def test_integrate_critical(capsys, tmp_path):
    code, rep = run(capsys, "integrate", "--cubic", "0,1,1,0", "--z0", "0,0", "--t", "2",
                    "--out", str(tmp_path / "t.csv"))
    assert code == 0
    assert rep["initial_class"] == "Critical" and rep["samples"] == 3


def test_integrate_underflow(capsys, tmp_path):
    # a huge blow-up threshold lets the step size collapse at the pole first
    code, rep = run(capsys, "integrate", "--cubic", "0,1,1,0", "--z0", "1,1", "--t", "2",
                    "--blowup-norm", "1e300", "--out", str(tmp_path / "t.csv"))
    assert code == 4
    assert rep["forward"]["termination"] == "StepUnderflow"


def test_integrate_io_failure(capsys, tmp_path):
    code = main(["integrate", "--cubic", "1,0,0,0", "--z0", "1,0", "--t", "1",
                 "--out", str(tmp_path / "missing" / "t.csv")])
    assert code == 5


def test_integrate_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        main(["integrate", "--cubic", "2,-1,0,3", "--z0", "1/2,1", "--t-span=-0.3,0.4",
              "--out", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_predict(capsys):
    code, rep = run(capsys, "predict", "--cubic", "0,1,1,0", "--z0", "1,1")
    assert code == 0
    assert rep["initial_class"] == "Generic"
    assert rep["predicted_pole_backward"] == pytest.approx(-OMEGA_108, rel=1e-10)


def test_verify(capsys):
    code, rep = run(capsys, "verify", "--seed", "7", "--count", "50")
    assert code == 0 and rep["failures"] == 0
    assert set(rep["identities"]) == set(checks.IDENTITIES)
    assert all(v == {"pass": 50, "fail": 0} for v in rep["identities"].values())


def test_verify_empty(capsys):
    code, rep = run(capsys, "verify", "--count", "0")
    assert code == 0 and rep["identities"] == {}


def test_verify_injected_fault(capsys, monkeypatch):
    broken = dict(checks.IDENTITIES)
    broken["always_wrong"] = lambda c, x, y, z, v: False
    monkeypatch.setattr(checks, "IDENTITIES", broken)
    code, rep = run(capsys, "verify", "--seed", "1", "--count", "5")
    assert code == 1
    assert rep["identities"]["always_wrong"] == {"pass": 0, "fail": 5}


def read_jsonl(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_sweep_monomial_never_blows_up(capsys, tmp_path):
    out = tmp_path / "s.jsonl"
    code = main(["sweep", "--cubic=-1,1,-1,1", "--grid=-1,1,3,-1,1,3", "--t", "5",
                 "--out", str(out)])
    assert code == 0
    lines = read_jsonl(out)
    assert len(lines) == 9
    assert not any(line["blowup"] for line in lines)


def test_sweep_blowup_gap_and_critical(capsys, tmp_path):
    out = tmp_path / "s.jsonl"
    main(["sweep", "--cubic", "0,1,1,0", "--grid", "0,1,2,0,1,2", "--t", "3", "--out", str(out)])
    lines = {tuple(line["z0"]): line for line in read_jsonl(out)}
    assert lines[("1", "1")]["relative_gap"] <= 1e-5
    assert lines[("0", "0")]["class"] == "Critical"
    assert lines[("0", "0")]["blowup"] is False


def test_sweep_parallel_matches_serial(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    grid = ["--cubic", "1,2,0,-1", "--grid=-1,1,2,1/2,1,2", "--t", "1"]
    main(["sweep", *grid, "--out", str(a)])
    main(["sweep", *grid, "--out", str(b), "--jobs", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_io_failure(tmp_path):
    code = main(["sweep", "--cubic", "1,0,0,0", "--grid", "0,1,1,0,1,1",
                 "--out", str(tmp_path / "nope" / "s.jsonl")])
    assert code == 5


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cubicflow", "classify", "--cubic", "0,1,1,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["class"] == "Definite"
