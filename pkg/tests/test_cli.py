import json
import shutil
import subprocess
from fractions import Fraction
from importlib import resources

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpquea import build_cartan, build_mpquea, theta
from mpquea.cli import main, parse_config, parse_expression
from mpquea.errors import ExponentNotInLattice, InconsistentData, ParseError, SchemaError, UnknownGenerator

F = Fraction
PSI = "[[0,1/6],[-1/6,0]]"
REPORT_SCHEMA = json.loads(resources.files("mpquea").joinpath("schemas/report.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_theta_command(capsys):
    code, out, _ = run(capsys, "mp", "theta", "--type", "A2", "--psi", PSI)
    assert code == 0
    assert out.strip() == "[[2,-2],[0,2]]"


def test_reduce_command(capsys):
    code, out, _ = run(capsys, "reduce", "--type", "A1", "--R", "[[2]]", "E1*F1")
    assert code == 0
    assert out.strip() == "F1*E1 + q^2/(q^2-1)*K[1] - q^2/(q^2-1)*L[1]"


def test_verify_iso_double_json(capsys):
    code, out, _ = run(capsys, "verify", "iso-double", "--type", "A2", "--psi", PSI, "--json")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["passed"] is True


@pytest.mark.parametrize("suite", ["duality", "iso-double", "iso-borel", "iso-g", "cocycle-equiv", "approx-iso", "hopf"])
def test_every_suite_runs(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--type", "A2", "--seed", "1", "--degree-bound", "2", "--json", "--no-timing")
    assert code == 0, out
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert "timing" not in rep
    assert any(c["kind"] == "control" for c in rep["checks"])


def test_verify_rank_one_uses_zero_twist(capsys):
    code, out, _ = run(capsys, "verify", "iso-double", "--type", "A1", "--json", "--no-timing")
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_bytes_deterministic(capsys):
    argv = ["verify", "duality", "--type", "B2", "--seed", "7", "--json", "--no-timing"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "duality", "--type", "A2", "--psi", PSI, "--S", "[[0,1/2],[1/2,0]]")
    assert code == 1
    assert "condition I (1,2)" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["mp", "theta", "--type", "A2", "--psi", "[[0,1,2],[1,0,2],[0,0,0]]"],
        ["mp", "theta", "--type", "Z9", "--psi", PSI],
        ["reduce", "--type", "A1", "--R", "[[2]]", "E1*"],
        ["reduce", "--type", "A1", "--R", "[[2]]", "E3"],
        ["reduce", "--type", "A1", "--R", "[[2]]", "K[1/2]"],
        ["build", "--type", "A2", "--degree-bound", "9"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_dynkin_and_equiv(capsys):
    code, out, _ = run(capsys, "mp", "dynkin", "--type", "A2", "--R", "[[2,-1],[-1,2]]")
    assert code == 0 and "edge 1-2: -2" in out
    code, out, _ = run(capsys, "mp", "witness", "--type", "A2", "--R", "[[2,-1],[-1,2]]", "--R2", "[[2,-2],[0,2]]")
    assert code == 0 and "[[0,-1],[0,0]]" in out
    code, _, _ = run(capsys, "mp", "equiv", "--type", "A2", "--R", "[[2,-1],[-1,2]]", "--R2", "[[4,-2],[-2,4]]")
    assert code == 1


def test_other_commands(capsys):
    assert run(capsys, "build", "--type", "A2", "--degree-bound", "3")[0] == 0
    assert run(capsys, "pair", "--type", "A2", "E1", "F1")[0] == 0
    assert run(capsys, "cocycle", "--type", "A2", "--S", "[[0,1/2],[-1/2,0]]", "K[1,0]", "F2")[0] == 0
    code, out, _ = run(capsys, "twist", "--type", "A2", "--psi", PSI, "--lattice", "Q")
    assert code == 1 and "psi_+" in out
    assert run(capsys, "twist", "--type", "A2", "--psi", PSI)[0] == 0


def test_config_examples():
    cfg = parse_config({"cartan": "A2", "psi": [[0, "1/6"], ["-1/6", 0]]})
    assert cfg.N == 6
    assert parse_config({"cartan": [[2, -1], [-1, 2]]}).cartan.A == build_cartan("A2").A
    with pytest.raises(InconsistentData):
        parse_config({"cartan": "A2", "R": [[2, -3], [0, 2]]})


def test_config_schema_errors():
    with pytest.raises(SchemaError) as err:
        parse_config({"cartan": "A2", "psi": "oops"})
    assert "psi" in err.value.path
    with pytest.raises(SchemaError):
        parse_config("{not json")


def test_config_file(tmp_path, capsys):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"cartan": "A2", "psi": [[0, "1/6"], ["-1/6", 0]]}))
    code, out, _ = run(capsys, "mp", "theta", "--config", str(p))
    assert code == 0 and out.strip() == "[[2,-2],[0,2]]"


@pytest.fixture(scope="module")
def a2_spec():
    c = build_cartan("A2")
    return build_mpquea(c, theta(c, [[0, F(1, 6)], [F(-1, 6), 0]]), root_order=6).spec


def test_parse_examples(a2_spec):
    s = a2_spec
    assert parse_expression(s, "E1*F1") == s.E(0) * s.F(0)
    assert parse_expression(s, "q^(1/2)*K[1,0]*E2") == s.K((1, 0)) * s.E(1) * s.q(F(1, 2))
    with pytest.raises(ExponentNotInLattice):
        parse_expression(s, "K[1/2,0]")
    with pytest.raises(UnknownGenerator):
        parse_expression(s, "E7")
    with pytest.raises(ParseError) as err:
        parse_expression(s, "E1 ** F1")
    assert err.value.position is not None


GEN = st.sampled_from(["E1", "E2", "F1", "F2", "K[1,0]", "L[0,1]", "K[-1,1]", "L[1,1]^-1", "q^(1/3)", "2", "(q-1)"])


@given(st.lists(st.lists(GEN, min_size=1, max_size=4), min_size=1, max_size=3))
def test_parse_render_round_trip(a2_spec, terms):
    s = a2_spec
    text = " + ".join("*".join(t) for t in terms)
    x = parse_expression(s, text)
    assert parse_expression(s, x.render()) == x


@pytest.mark.skipif(shutil.which("mpquea") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["mpquea", "mp", "theta", "--type", "A2", "--psi", PSI], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "[[2,-2],[0,2]]"
