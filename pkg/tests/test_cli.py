"""Command-line surface: subcommands, formats, exit codes."""

import json

import pytest

from portcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_port_delta(capsys):
    code, out, _ = run(capsys, "port", "delta", "--R", "113322", "--c", "797", "--B", "149,3109")
    assert code == 0 and out.strip() == "1"


def test_port_ambient(capsys):
    code, out, _ = run(capsys, "port", "ambient", "2,3,11")
    assert code == 0 and out.strip() == "(66, 5)"


def test_port_transition(capsys):
    code, out, _ = run(capsys, "port", "transition", "--R", "66", "--c", "5", "--q", "17")
    assert code == 0 and out.strip() == "(1122, 19)"


def test_port_congruences_named_port(capsys):
    code, out, _ = run(capsys, "--format", "json", "port", "congruences", "--port", "H")
    assert code == 0
    assert json.loads(out) == {"filling_mod_R": "9953", "derivative_mod_c": "70"}


def test_port_audit(capsys):
    code, out, _ = run(capsys, "port", "audit", "--R", "113322", "--c", "797",
                       "--B", "157,1979,10093,16879")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 15  # 14 divisor rows + verdict
    assert lines[-1] == "verdict: primitive"
    assert any("11807" in line for line in lines)


def test_search_two_prime(capsys):
    code, out, _ = run(capsys, "search", "two-prime", "--R", "113322", "--c", "797", "--m", "101")
    assert code == 0
    assert "t=4: 149 * 3109" in out


def test_search_sieve_and_check(capsys, tmp_path):
    path = tmp_path / "excl.json"
    code, out, _ = run(capsys, "search", "sieve", "--port", "H",
                       "--prefix", "409,419,457,81199", "--moduli", "11", "--out", str(path))
    assert code == 0 and path.exists()
    code, out, _ = run(capsys, "search", "sieve", "--check", str(path))
    assert code == 0 and out.strip() == "valid"
    tampered = path.read_text().replace('"T": "0"', '"T": "3"')
    bad = tmp_path / "bad.json"
    bad.write_text(tampered)
    code, out, _ = run(capsys, "search", "sieve", "--check", str(bad))
    assert code == 1 and "invalid" in out


def test_search_prefixes_depth_one(capsys):
    code, out, _ = run(capsys, "search", "prefixes", "--port", "H", "--k", "6",
                       "--m", "101", "--depth", "1")
    assert code == 0
    primes = [int(x) for x in out.split()]
    assert len(primes) == 111 and primes[0] == 149 and primes[-1] == 829


def test_search_prefixes_snapshot_resume(capsys, tmp_path):
    snap = tmp_path / "snap.json"
    code, out, _ = run(capsys, "search", "prefixes", "--R", "6", "--c", "1", "--k", "3",
                       "--m", "3", "--snapshot", str(snap))
    assert code == 0 and snap.exists()
    first = snap.read_bytes()
    code, out, _ = run(capsys, "search", "prefixes", "--R", "6", "--c", "1", "--k", "3",
                       "--m", "3", "--snapshot", str(snap), "--resume")
    assert code == 0
    assert snap.read_bytes() == first
    assert "hit: prefix=(11,) t=10: 23 * 31" in out


def test_search_prefixes_resume_mismatch(capsys, tmp_path):
    snap = tmp_path / "snap.json"
    code, _, _ = run(capsys, "search", "prefixes", "--R", "6", "--c", "1", "--k", "3",
                     "--m", "3", "--snapshot", str(snap))
    assert code == 0
    code, _, err = run(capsys, "search", "prefixes", "--R", "6", "--c", "1", "--k", "4",
                       "--m", "3", "--snapshot", str(snap), "--resume")
    assert code == 2 and "resume mismatch" in err


def test_search_budget_exceeded(capsys, tmp_path):
    snap = tmp_path / "snap.json"
    code, _, err = run(capsys, "search", "prefixes", "--port", "H", "--k", "6", "--m", "101",
                       "--budget", "0", "--snapshot", str(snap))
    assert code == 3
    assert "budget exceeded" in err
    assert snap.exists()


def test_certify_and_check(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "certify", "407221", "--out", str(path))
    assert code == 0 and "base 2" in out
    code, out, _ = run(capsys, "check-cert", str(path))
    assert code == 0 and out.strip() == "valid"
    bad = tmp_path / "bad.json"
    bad.write_text(path.read_text().replace('"base": "2"', '"base": "1"'))
    code, out, _ = run(capsys, "check-cert", str(bad))
    assert code == 1 and "invalid" in out


def test_verify_only_mod288(capsys):
    code, out, _ = run(capsys, "verify", "--only", "mod288")
    assert code == 0
    assert "[PASS] mod288" in out


def test_verify_corrupted_constant_fails(capsys):
    code, out, _ = run(capsys, "verify", "--only", "mod288", "--corrupt", "mod288")
    assert code == 1
    assert "[FAIL] mod288" in out


def test_verify_json_round_trip(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "--only", "congruences")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    from portcalc.serialization import canonical_json_bytes

    assert canonical_json_bytes(obj).decode() == out


def test_usage_errors_exit_2(capsys):
    code, _, err = run(capsys, "port", "delta", "--B", "149,3109")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_audit_h6_runs(capsys):
    code, out, _ = run(capsys, "search", "audit-h6")
    assert code == 0
    assert "composite" in out
    assert "8 candidate pairs, 0 prime pairs" in out
    assert "52495396602" in out
