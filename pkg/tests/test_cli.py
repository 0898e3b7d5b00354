import json
import subprocess
import sys

import pytest

import cfdyn.suites as suites
from cfdyn.cli import main
from cfdyn.report import CheckReport, validate_report


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_integer(capsys):
    code, out, _ = run(capsys, "expand", "5", "--algorithm", "diamond", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["digits"] == ["5+0i"] and d["terminated"]


def test_expand_zero(capsys):
    code, out, _ = run(capsys, "expand", "0", "--steps", "3", "--format", "json")
    assert code == 0 and json.loads(out)["digits"] == ["0+0i"]


def test_expand_float(capsys):
    code, out, _ = run(capsys, "expand", "1.4142135+1.7320508i", "--steps", "40", "--format", "json")
    d = json.loads(out)
    assert code == 0 and len(d["digits"]) == 40 and not d["terminated"]
    assert max(d["residuals"]) < 1e-9


def test_expand_text_and_negative_literal(capsys):
    code, out, _ = run(capsys, "expand", "-7/3+1/2i")
    assert code == 0 and "exact" in out and "terminated  yes" in out
    code, out, _ = run(capsys, "expand", "-i", "--steps", "2")
    assert code == 0


def test_parse_error_names_token(capsys):
    code, _, err = run(capsys, "expand", "1+2k")
    assert code == 2 and "1+2k" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["expand", "1", "--steps", "0"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 2


def test_convergents(capsys):
    code, out, _ = run(capsys, "convergents", "2+i", "-1+2i", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["convergents"][1]["p"] == "-5+3i" and d["convergents"][1]["q"] == "-1+2i"
    code, _, _ = run(capsys, "convergents", "1/2")
    assert code == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "0.3+0.1i")
    d = json.loads(out)
    assert code == 0 and set(d) == {"input", "dih", "k"}
    code, _, _ = run(capsys, "classify", "0")
    assert code == 2


def test_orbit_inside_V(capsys):
    code, out, _ = run(capsys, "orbit", "0.1", "1.2+0.3i", "--steps", "3", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["entry"]["V"] == 0 and len(d["steps"]) == 4


def test_orbit_reaches_V(capsys):
    code, out, _ = run(capsys, "orbit", "10+10i", "1.41421+1.73205i", "--steps", "500", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["entry"]["V"] == 4
    assert d["steps"][0]["branch"] in {"T", "T^-1", "U", "U^-1", "S"}
    n = d["entry"]["V"]
    assert all(s["Psi"] for s in d["steps"][n:])


def test_orbit_rational_w(capsys):
    code, _, err = run(capsys, "orbit", "1", "3/2+i")
    assert code == 5 and "finite" in err


def test_orbit_diagonal(capsys):
    code, _, _ = run(capsys, "orbit", "0.5", "0.5")
    assert code == 2


def test_verify_partition_small(capsys):
    argv = ["verify", "partition", "--samples", "300", "--seed", "1", "--grid", "80", "--no-timing"]
    code, out, _ = run(capsys, *argv)
    d = json.loads(out)
    validate_report(d)
    assert code == 0 and d["status"] == "pass" and d["elapsed_ms"] == 0
    code2, out2, _ = run(capsys, *argv)
    assert out2 == out


def fake_suite(status):
    def runner(cfg, **kw):
        return CheckReport("fake", status, cfg.samples, cfg.seed)
    return runner


@pytest.mark.parametrize("status,code", [("pass", 0), ("fail", 1), ("inconclusive", 3)])
def test_verify_exit_codes(capsys, monkeypatch, status, code):
    monkeypatch.setitem(suites.SUITES, "psi", fake_suite(status))
    got, out, _ = run(capsys, "verify", "psi")
    assert got == code and json.loads(out)["status"] == status


def test_config_from_env(capsys, monkeypatch, tmp_path):
    seen = {}

    def runner(cfg, **kw):
        seen["cfg"] = cfg
        return CheckReport("fake", "pass", cfg.samples, cfg.seed)

    monkeypatch.setitem(suites.SUITES, "psi", runner)
    conf = tmp_path / "c.toml"
    conf.write_text("[verify]\nsamples = 123\nseed = 7\nepsilon = 1e-6\ngrid = 50\n")
    monkeypatch.setenv("CFDYN_CONFIG", str(conf))
    run(capsys, "verify", "psi", "--seed", "9")
    assert (seen["cfg"].samples, seen["cfg"].seed, seen["cfg"].grid) == (123, 9, 50)
    conf.write_text("[verify]\nsampels = 1\n")
    assert run(capsys, "verify", "psi")[0] == 2
    monkeypatch.setenv("CFDYN_CONFIG", str(tmp_path / "missing.toml"))
    assert run(capsys, "verify", "psi")[0] == 2


def test_render_to_file(capsys, tmp_path):
    out = tmp_path / "p.svg"
    assert run(capsys, "render", "partition", "--out", str(out))[0] == 0
    assert out.read_text().count('class="cell"') == 40
    assert run(capsys, "render", "partition", "--out", str(tmp_path / "no" / "dir.svg"))[0] == 4


def test_console_entry_point_is_byte_stable():
    cmd = [sys.executable, "-m", "cfdyn.cli", "expand", "2+1.5i", "--steps", "12"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
