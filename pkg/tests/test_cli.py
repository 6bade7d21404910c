import json
import re
import subprocess
import sys

import jsonschema
import pytest

from cmtype.cli import main
from cmtype.report import SCHEMA_V1, summary_from_dict, summary_to_dict
from cmtype.surface import analyze


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    env = json.loads(out)
    jsonschema.validate(env, SCHEMA_V1)
    return env


COMMANDS = [
    ("fermat", "analyze", "--m", "5", "--p", "2"),
    ("fermat", "analyze", "--m", "5", "--p", "11"),
    ("fermat", "analyze", "--m", "1", "--p", "2"),
    ("fermat", "analyze", "--m", "7", "--p", "3", "--list-orbits", "--expand-disc"),
    ("fermat", "quotient", "--m", "3", "--p", "2", "--subgroup", "1,2,0,0"),
    ("orbit", "sigma0", "--tau", "2,1,1,1,1,0"),
    ("orbit", "dieudonne", "--tau", "0,1,0,2,1,2"),
    ("oracle", "jacobi", "--m", "5", "--p", "2"),
]


@pytest.mark.parametrize("argv", COMMANDS)
def test_schema_and_determinism(capsys, argv):
    env = run_json(capsys, *argv)
    assert env["schema_version"] == 1 and env["command"] == " ".join(argv[:2])
    _, first, _ = run(capsys, *argv, "--json")
    _, second, _ = run(capsys, *argv, "--json")
    assert first == second


def test_analyze_m5_p2(capsys):
    r = run_json(capsys, "fermat", "analyze", "--m", "5", "--p", "2")["results"]
    assert r["supersingular"] and r["sigma0"] == 8
    assert r["disc"]["sign"] == 1 and r["disc"]["exponent"] == 16
    assert r["b2"] == 53


def test_analyze_ordinary(capsys):
    r = run_json(capsys, "fermat", "analyze", "--m", "5", "--p", "11")["results"]
    assert not r["supersingular"] and r["disc"] is None


def test_analyze_m1(capsys):
    r = run_json(capsys, "fermat", "analyze", "--m", "1", "--p", "2")["results"]
    assert r["b2"] == 1 and r["hodge"] == {"h20": 0, "h11": 1, "h02": 0}


def test_expand_disc(capsys):
    r = run_json(capsys, "fermat", "analyze", "--m", "5", "--p", "3", "--expand-disc")["results"]
    assert int(r["disc"]["value"]) == 3**16  # decimal string keeps big powers exact


def test_text_and_json_agree(capsys):
    for p in ("2", "11", "19"):
        r = run_json(capsys, "fermat", "analyze", "--m", "5", "--p", p)["results"]
        _, text, _ = run(capsys, "fermat", "analyze", "--m", "5", "--p", p)
        assert re.search(r"b2\s+(\d+)", text).group(1) == str(r["b2"])
        h = re.search(r"h20=(\d+) h11=(\d+) h02=(\d+)", text).groups()
        assert tuple(map(int, h)) == (r["hodge"]["h20"], r["hodge"]["h11"], r["hodge"]["h02"])
        assert int(re.search(r"orbits\s+(\d+)", text).group(1)) == r["n_orbits"]
        if r["disc"] is not None:
            assert int(re.search(r"sigma0\s+(\d+)\n", text).group(1)) == r["sigma0"]
            assert f"+{p}^{r['disc']['exponent']}" in text
        else:
            assert "absent" in text


def test_sigma0_text(capsys):
    code, out, _ = run(capsys, "orbit", "sigma0", "--tau", "0,2")
    assert code == 0
    assert "n              1" in out and "m's            (0,1)" in out and "contribution   1" in out
    code, out, _ = run(capsys, "orbit", "sigma0", "--tau", "1")
    assert "contribution   0" in out


def test_dieudonne_text(capsys):
    for tau, text in [("0,1,0,2,1,2", "F a = V b; F b = 0"), ("0,0,2,2", "F^2 a = 0"), ("1,1", "0 (no generators)")]:
        r = run_json(capsys, "orbit", "dieudonne", "--tau", tau)["results"]
        assert r["text"] == text


def test_exit_codes(capsys):
    assert run(capsys, "fermat", "analyze", "--m", "6", "--p", "3")[0] == 1
    assert run(capsys, "fermat", "analyze", "--m", "300", "--p", "7")[0] == 1
    assert run(capsys, "orbit", "sigma0", "--tau", "0,1")[0] == 1
    assert run(capsys, "oracle", "jacobi", "--m", "43", "--p", "2", "--oracle-q-cap", "100")[0] == 1
    for argv in (["fermat", "analyze", "--m", "5"], ["orbit", "sigma0", "--tau", "0,3"], ["bogus"],
                 ["fermat", "quotient", "--m", "3", "--p", "2", "--subgroup", "1,2"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2
    capsys.readouterr()


def test_error_goes_to_stderr(capsys):
    code, out, err = run(capsys, "fermat", "analyze", "--m", "6", "--p", "3")
    assert code == 1 and out == "" and "error" in err


def test_quotient_trivial_matches_analyze(capsys):
    q = run_json(capsys, "fermat", "quotient", "--m", "5", "--p", "2")["results"]
    a = run_json(capsys, "fermat", "analyze", "--m", "5", "--p", "2")["results"]
    assert q["invariant_part"] == a
    assert q["exceptional_lattice"] == "not computed"


def test_quotient_examples(capsys):
    r = run_json(capsys, "fermat", "quotient", "--m", "3", "--p", "2", "--subgroup", "1,2,0,0")["results"]
    assert r["invariant_count"] == 3
    full = "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1"
    r = run_json(capsys, "fermat", "quotient", "--m", "3", "--p", "2", "--subgroup", full)["results"]
    assert r["invariant_characters"] == [[0, 0, 0, 0]]


def test_summary_round_trip():
    s = analyze(7, 3, keep_orbits=True)
    d = summary_to_dict(s, True)
    assert summary_to_dict(summary_from_dict(d), True) == d


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "cmtype.cli", "orbit", "sigma0", "--tau", "0,2,1"],
                         capture_output=True, text=True, check=True).stdout
    assert "contribution   2" in out
