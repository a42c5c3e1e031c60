import hashlib
import io
import json

import pytest

from evovcs import read_pbm, write_pbm
from evovcs.cli import run, share_name

from conftest import half_secret


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def _digests(folder):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(folder.iterdir())}


@pytest.fixture
def secret_file(tmp_path):
    path = tmp_path / "s.pbm"
    write_pbm(path, half_secret(32, 48))
    return path


def test_share_extend_pipeline(tmp_path, secret_file):
    d = tmp_path / "d"
    code, out, _ = _run("share", "--scheme", "kgrouped", "--k", 3, "--n", 4, "--in", secret_file, "--seed", 7, "--out-dir", d)
    assert code == 0
    assert sorted(p.name for p in d.iterdir()) == ["dealer.json"] + [share_name(i) for i in range(1, 5)]
    first = {k: v for k, v in _digests(d).items() if k != "dealer.json"}
    code, _, _ = _run("extend", "--state", d / "dealer.json", "--count", 3)
    assert code == 0
    after = _digests(d)
    assert all(after[k] == v for k, v in first.items())
    assert share_name(7) in after
    assert json.loads((d / "dealer.json").read_text())["next_t"] == 8


def test_pipeline_is_byte_identical_across_runs(tmp_path, secret_file):
    for name in ("a", "b"):
        _run("share", "--k", 2, "--in", secret_file, "--out-dir", tmp_path / name)
        _run("extend", "--state", tmp_path / name / "dealer.json", "--count", 5)
    assert _digests(tmp_path / "a") == _digests(tmp_path / "b")


def test_tamper_guard(tmp_path, secret_file):
    d = tmp_path / "d"
    _run("share", "--k", 2, "--in", secret_file, "--out-dir", d)
    with open(d / share_name(1), "ab") as fh:
        fh.write(b"\0")
    code, _, err = _run("extend", "--state", d / "dealer.json")
    assert code == 1 and "checksum" in err
    (d / share_name(1)).unlink()
    code, _, err = _run("extend", "--state", d / "dealer.json")
    assert code == 1 and "missing" in err


def test_xor_recovery_of_a_group_prints_unit_contrast(tmp_path, secret_file):
    d = tmp_path / "d"
    _run("share", "--k", 3, "--in", secret_file, "--out-dir", d)
    _run("extend", "--state", d / "dealer.json", "--count", 3)
    shares = [d / share_name(i) for i in (4, 5, 6)]
    code, _, _ = _run("recover", "--mode", "xor", "--shares", *shares, "--out", tmp_path / "r.pbm")
    assert code == 0 and read_pbm(tmp_path / "r.pbm") == read_pbm(secret_file)
    code, out, _ = _run("contrast", "--recovered", tmp_path / "r.pbm", "--secret", secret_file)
    assert code == 0 and "alpha=1.000" in out


def test_contrast_by_partition(tmp_path, secret_file):
    d = tmp_path / "d"
    _run("share", "--scheme", "better3", "--in", secret_file, "--out-dir", d)
    _run("extend", "--state", d / "dealer.json", "--count", 8)
    code, out, _ = _run("contrast", "--partition", "1,1,1", "--state", d / "dealer.json", "--secret", secret_file)
    assert code == 0
    picked = [int(i) for i in out.splitlines()[0].split("=")[1].split(",")]
    assert len({(i - 1) // 4 for i in picked}) == 3
    code, _, err = _run("contrast", "--partition", "5", "--state", d / "dealer.json", "--secret", secret_file)
    assert code == 2 and "group size" in err


def test_better2_contrast_uses_stored_secret(tmp_path, secret_file):
    d = tmp_path / "d"
    _run("share", "--scheme", "better2", "--in", secret_file, "--out-dir", d)
    _run("extend", "--state", d / "dealer.json", "--count", 3)
    code, out, _ = _run("contrast", "--shares", d / share_name(1), d / share_name(2), "--secret", secret_file)
    assert code == 0 and "alpha=" in out
    code, out, _ = _run("contrast", "--partition", "2", "--state", d / "dealer.json")
    assert code == 0


def test_theory_outputs():
    code, out, _ = _run("theory", "--table", "I", "--kmax", 4)
    assert code == 0 and "13/112" in out and "67/1400" in out
    code, out, _ = _run("theory", "--table", "II", "--csv")
    assert out.splitlines()[0].startswith("k,n_or_t,partition,value_num,value_den,value_float")


def test_compare_and_convergence():
    code, out, _ = _run("compare", "--a", "better", "--b", "or", "--k", 2)
    assert code == 0 and "outcome=better" in out
    code, out, _ = _run("convergence", "--scheme", "xor", "--k", 3, "--eps", 0.05)
    assert code == 0 and out.strip() == "13"


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["share", "--k", "2"],
        ["theory", "--table", "IX"],
        ["share", "--k", "2", "--in", "nope.pbm", "--out-dir", "x"],
        ["contrast", "--partition", "1,2", "--state", "x"],
        ["convergence", "--scheme", "better", "--k", "5"],
        ["share", "--scheme", "better2", "--n", "3", "--in", "x", "--out-dir", "y"],
    ],
)
def test_usage_errors_exit_two(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "x").write_bytes(b"P1\n2 1\n0 1\n")
    code, _, _ = _run(*argv)
    assert code == 2


def test_runtime_error_exit_one(tmp_path):
    bad = tmp_path / "dealer.json"
    bad.write_text("{}")
    code, _, err = _run("extend", "--state", bad)
    assert code == 1 and err
