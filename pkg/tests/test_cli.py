import json
import subprocess
import sys

import pytest

from qinv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_ba(capsys, tmp_path):
    code, out, _ = run(capsys, "check-ba", "--preset", "lambda2")
    assert code == 0 and "BA: true" in out
    code, out, _ = run(capsys, "check-ba", "--preset", "lambda4")
    assert code == 0 and "BA: true" in out
    f = tmp_path / "custom.json"
    f.write_text(json.dumps({"lines": [{"dir": [1, 0]}, {"dir": [1, 1]}]}))
    code, out, _ = run(capsys, "check-ba", "--arr", str(f))
    assert code == 1 and "BA: false" in out
    assert "first  second" in out and "(1,1)" in out


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "check-ba", "--preset", "nope")[0] == 2
    assert run(capsys, "check-ba", "--arr", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check-ba", "--arr", str(bad))[0] == 2
    assert run(capsys, "spectral", "--xi", "1,0", "--deg", "4")[0] == 2
    assert run(capsys, "deform", "--beta", "1/0", "--xi", "1,1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["basis", "A", "--deg", "-1"])
    assert exc.value.code == 2


def test_basis_examples(capsys):
    code, out, _ = run(capsys, "basis", "A", "--preset", "lambda2", "--deg", "4")
    assert code == 0 and "Hilbert: 1,1,3,5,8" in out
    code, out, _ = run(capsys, "basis", "P", "--h", "-(z1+z2)", "--preset", "lambda2", "--deg", "4")
    assert code == 0 and "Hilbert: 0,0,1,3,6" in out
    code, out, _ = run(capsys, "basis", "cusp", "--m", "1", "--gamma", "0", "--deg", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["basis"] == ["1", "t^2", "t^3", "t^4"]


def test_spectral_and_sato(capsys):
    code, out, _ = run(capsys, "spectral", "--preset", "lambda2", "--xi", "1,1", "--deg", "8")
    assert code == 0 and "Hilbert OK; W = P(-u) OK; eigen OK" in out
    code, out, _ = run(capsys, "sato", "--preset", "lambda2", "--xi", "1,1", "--fn", "z1^2+z2^2", "--deg", "6")
    assert code == 0 and "matches CM Hamiltonian expansion: OK" in out


def test_deform(capsys):
    code, out, _ = run(capsys, "deform", "--beta", "1/3", "--xi", "1,1", "--deg", "6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    code, out, _ = run(capsys, "deform", "--beta", "1/3", "--xi", "1,1", "--deg", "6")
    for tag in ("(i)", "(ii)", "(iii)", "(iv)", "(v)"):
        assert tag in out


def test_determinism_and_json(capsys):
    args = ("props", "--count", "3", "--seed", "7", "--format", "json")
    a = run(capsys, *args)
    b = run(capsys, *args)
    assert a == b
    json.loads(a[1])
    c = run(capsys, "spectral", "--preset", "lambda2", "--seed", "11", "--deg", "5")
    assert c == run(capsys, "spectral", "--preset", "lambda2", "--seed", "11", "--deg", "5")


def test_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qinv.cli", "check-ba", "--preset", "lambda1"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "BA: true" in proc.stdout
