import json
import subprocess
import sys

import pytest

from twodescent.cli import enc, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, out, json.loads(out)


def test_rank_17(capsys):
    code, out, doc = run_json(capsys, "rank", "-p", "17")
    assert code == 0
    assert list(doc) == ["version", "command", "curve", "result", "trace"]
    assert doc["curve"] == {"p": "17", "roots": ["-102", "153", "306"], "a2": "-357", "a6": "4775436", "class": "SelmerOne"}
    res = doc["result"]
    assert res["rank_s"] == "1" and res["order"] == "8"
    # [PAPER] the eight members of Sel_2(E_17)
    assert res["elements"] == [
        ["1", "1"], ["10", "-255"], ["255", "-15"], ["102", "17"],
        ["3", "17"], ["30", "-15"], ["85", "-255"], ["34", "1"],
    ]
    assert len(doc["trace"]) == 256


def test_rank_53_table(capsys):
    code, out, _ = run(capsys, "rank", "-p", "53")
    assert code == 0
    assert "s = 0" in out and "4 elements" in out


@pytest.mark.parametrize("argv", [["rank", "-p", "4"], ["rank"], ["rank", "-p", "5"], ["scan", "--count", "2"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_bad_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["rank", "--mode", "fast"])
    assert exc.value.code == 2


def test_json_round_trip_and_determinism(capsys):
    _, first, doc = run_json(capsys, "family", "-p", "17", "--point", "5257,4,83581", "--depth", "2")
    assert json.dumps(doc, indent=2) == first.rstrip("\n")
    _, second, _ = run_json(capsys, "family", "-p", "17", "--point", "5257,4,83581", "--depth", "2")
    assert first == second
    # no floats anywhere
    assert not any(isinstance(v, float) or "." in str(v) for v in _leaves(doc["result"]))


def _leaves(x):
    if isinstance(x, dict):
        for v in x.values():
            yield from _leaves(v)
    elif isinstance(x, list):
        for v in x:
            yield from _leaves(v)
    else:
        yield x


def test_family(capsys):
    code, _, doc = run_json(capsys, "family", "-p", "17", "--point", "5257,4,83581", "--depth", "2")
    assert code == 0
    levels = doc["result"]["levels"]
    assert len(levels) == 3
    assert all(all(L["checks"].values()) for L in levels)
    code, _, doc = run_json(capsys, "family", "-p", "17", "--point", "5257,4,83581", "--depth", "0")
    (L,) = doc["result"]["levels"]
    assert (L["d1"], L["d2"]) == ("51", "-455")


def test_family_odd_t(capsys):
    code, _, err = run(capsys, "family", "-p", "17", "--point", "961962,83,-419073120", "--depth", "1")
    assert code == 1 and "t_even" in err


def test_family_point_off_curve(capsys):
    code, _, err = run(capsys, "family", "-p", "17", "--point", "5257,4,83582")
    assert code == 2


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "-p", "17", "--point", "5257,4,83581", "--expect", "2560")
    assert code == 0
    assert "[2560, 5120]" in out
    code, _, _ = run(capsys, "audit", "-p", "17", "--point", "5257,4,83581", "--expect", "2561")
    assert code == 1


def test_local_and_descend(capsys):
    code, _, doc = run_json(capsys, "local", "-p", "17", "--pair", "3,17")
    assert code == 0 and doc["result"]["everywhere_locally_solvable"] is True
    code, _, doc = run_json(capsys, "local", "-p", "17", "--pair=-1,1")
    assert code == 0 and doc["result"]["everywhere_locally_solvable"] is False
    code, _, doc = run_json(capsys, "descend", "-p", "17", "--point", "5257,4,83581")
    assert code == 0
    r = doc["result"]
    assert r["phi"] == ["1", "1"] and r["rank_lower"] == "1" and r["rank_upper"] == "1"
    assert r["sha2_dim_bound"] == "0"


def test_local_bad_pair(capsys):
    code, _, _ = run(capsys, "local", "-p", "17", "--pair", "7,1")
    assert code == 2


def test_scan(capsys):
    code, out, doc = run_json(capsys, "scan", "--classes", "17,113", "--count", "2")
    assert code == 0
    assert [r["p"] for r in doc["result"]["primes"]] == ["17", "137", "113", "233"]
    assert all(r["rank_s"] == "1" for r in doc["result"]["primes"])
    code, _, doc = run_json(capsys, "scan", "--classes", "53,77", "--count", "2")
    assert code == 0 and all(r["rank_s"] == "0" for r in doc["result"]["primes"])


def test_oracle_pair(capsys):
    code, _, doc = run_json(capsys, "oracle", "-p", "17", "--pair", "3,17")
    assert code == 0
    assert [r["status"] for r in doc["result"]["places"]] == ["found"] * 5


def test_enc():
    from fractions import Fraction

    assert enc({"a": [1, Fraction(1, 3), None, True]}) == {"a": ["1", "1/3", None, True]}
    with pytest.raises(TypeError):
        enc(1.5)


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "twodescent.cli", "rank", "-p", "17"], capture_output=True, text=True, check=False
    )
    assert out.returncode == 0 and "s = 1" in out.stdout
