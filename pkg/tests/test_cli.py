import io
import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from holofloer.algebra import AffineBidegree
from holofloer.cli import main
from holofloer.colored import BUILTIN_KNOTS, knot_to_json

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def schema(verb):
    text = resources.files("holofloer").joinpath(f"schemas/{verb}.schema.json").read_text()
    return json.loads(text)


# goldens

@pytest.mark.parametrize(
    "argv,golden",
    [
        (["alex", "3_1", "--colored", "--r", "2", "--order", "8"], "alex_3_1_colored_r2.txt"),
        (["annihilator", "3_1", "--verify"], "annihilator_3_1_verify.txt"),
        (["certify", "3_1"], "certify_3_1.txt"),
        (["verify"], "verify.txt"),
    ],
)
def test_text_goldens(argv, golden):
    code, out, _ = run(*argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_certify_unknot_json_golden():
    code, out, _ = run("certify", "unknot", "--json")
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / "certify_unknot.json").read_text())


def test_alex_plain():
    assert run("alex", "3_1") == (0, "q^-1 - 1 + q\n", "")
    assert run("alex", "3_1", "--colored", "--reduced", "--r", "3")[1] == "1 - q^3 + q^6\n"


def test_cable_text():
    code, out, _ = run("cable", "3_1", "--r", "2", "--n", "2")
    assert code == 0 and "positive form = 1 - q + q^4 - q^7 + q^8" in out
    assert "below q^5" in out


def test_srcfk_text():
    code, out, _ = run("srcfk", "3_1", "--r", "2")
    assert code == 0
    assert out.splitlines()[0] == "S^2 CFK(3_1) = Λ[c] ⊕ t^6 q^4·F2[u]⊗Λ(ξ)"


def test_poincare_text():
    code, out, _ = run("poincare", "unknot", "--r", "2", "--order", "5")
    assert code == 0 and out.startswith("1 + t q")


def test_euler_check_text():
    code, out, _ = run("euler-check", "4_1")
    assert code == 0 and out.count("match mod q^64") == 3


# JSON schemas

VERB_ARGS = {
    "alex": ["alex", "3_1", "--colored"],
    "cable": ["cable", "3_1"],
    "annihilator": ["annihilator", "4_1", "--unreduced", "--verify", "--r-max", "4"],
    "srcfk": ["srcfk", "T(2,5)", "--r", "3"],
    "poincare": ["poincare", "3_1", "--order", "12"],
    "euler-check": ["euler-check", "3_1", "--order", "16"],
    "certify": ["certify", "3_1", "--verify", "--order", "16", "--r-max", "4"],
    "verify": ["verify", "--order", "16", "--r-max", "4"],
}


@pytest.mark.parametrize("verb", list(VERB_ARGS))
def test_json_matches_schema(verb):
    code, out, _ = run(*VERB_ARGS[verb], "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), schema(verb))


@pytest.mark.parametrize("name", list(BUILTIN_KNOTS))
def test_knot_schema(name):
    jsonschema.validate(knot_to_json(BUILTIN_KNOTS[name]), schema("knot"))


# inputs and exit codes

def test_unknown_knot_exit_2():
    code, out, err = run("alex", "9_42")
    assert code == 2 and out == "" and "unknown knot" in err


def test_missing_knot_exit_2():
    assert run("alex")[0] == 2


def test_bad_flag_exit_2():
    assert run("alex", "3_1", "--order", "0")[0] == 2
    assert run("nonsense")[0] == 2


def test_env_order(monkeypatch):
    monkeypatch.setenv("HOLOFLOER_ORDER", "6")
    assert run("alex", "3_1", "--colored")[1] == "1 - q + q^4 - q^5\n"
    # the flag wins over the environment
    assert run("alex", "3_1", "--colored", "--order", "8")[1] == "1 - q + q^4 - q^5 + q^6 - q^7\n"
    monkeypatch.setenv("HOLOFLOER_ORDER", "many")
    assert run("alex", "3_1")[0] == 2


def test_knot_file(tmp_path):
    path = tmp_path / "tref.json"
    path.write_text(json.dumps(knot_to_json(BUILTIN_KNOTS["3_1"])))
    assert run("alex", "--knot-file", str(path))[1] == "q^-1 - 1 + q\n"
    assert run("alex", str(path))[1] == "q^-1 - 1 + q\n"
    assert run("alex", "3_1", "--knot-file", str(path))[0] == 2


def bad_knot_file(tmp_path):
    data = knot_to_json(BUILTIN_KNOTS["3_1"])
    del data["cfk"]
    data["theta"] = AffineBidegree(4, -2, 4, 0).to_json()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    return path


def test_inconsistent_file_rejected(tmp_path):
    code, _, err = run("euler-check", "--knot-file", str(bad_knot_file(tmp_path)))
    assert code == 2 and "Euler" in err


def test_no_validate_downgrades_to_mismatch(tmp_path):
    with pytest.warns(UserWarning):
        code, out, _ = run("euler-check", "--knot-file", str(bad_knot_file(tmp_path)), "--no-validate")
    assert code == 1 and "mismatch" in out


def test_malformed_file_exit_2(tmp_path):
    path = tmp_path / "k.json"
    path.write_text("[1, 2]")
    assert run("alex", "--knot-file", str(path))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "holofloer", "alex", "unknot"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
