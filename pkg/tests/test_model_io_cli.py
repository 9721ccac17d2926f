import glob
import json
from fractions import Fraction as F

import pytest

from paramopt.cli import main
from paramopt.groebner_nlp import NlpProblem
from paramopt.lp_model import LpProblem, Sense
from paramopt.model_io import ParseError, load_model, parse_model, render_model

MODELS = sorted(glob.glob("models/*.lp"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_linear_model():
    m = load_model("models/ex2_1.lp")
    p = m.problem
    assert isinstance(p, LpProblem) and m.kind == "lp"
    assert p.sense is Sense.MAXIMIZE
    assert p.objective == (1, 1)
    assert tuple(p.A) == ((1, 2), (-1, 1), (4, 2))
    assert tuple(p.b) == (4, 1, 12)
    assert m.row_names == ("c1", "c2", "c3")
    assert m.name == "ex2_1"


def test_decimal_coefficients_are_exact():
    p = parse_model("max\nobj: x + 3.5 y\nst\nc1: 0.25 x + y <= 1.1\nend\n").problem
    assert p.objective == (1, F(7, 2))
    assert tuple(p.A) == ((F(1, 4), 1),) and tuple(p.b) == (F(11, 10),)


def test_parse_polynomial_model():
    m = load_model("models/ex3_1.lp")
    assert isinstance(m.problem, NlpProblem) and m.kind == "nlp"
    assert m.problem.objective.degree == 2
    assert len(m.problem.inequalities) == 3


def test_integer_section():
    p = load_model("models/ex4_1.lp").problem
    assert p.integrality == (True, True)


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("maximize\nobj: x1 + + x2\nst\nend\n", 2, 10),
        ("maximize\nobj: x1^2\nst\nc1: x1 <= 1\nend\n", 2, 5),
        ("maximize\nobj: x1\nst\nc1: x1 <= 1\n", None, None),
        ("obj: x1\nst\nend\n", 1, None),
    ],
)
def test_parse_errors_carry_a_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_model(text)
    if line is not None:
        assert e.value.line == line
    if col is not None:
        assert e.value.col == col


@pytest.mark.parametrize("path", MODELS)
def test_round_trip(path):
    m = load_model(path)
    again = parse_model(render_model(m), m.name)
    assert again.problem == m.problem
    assert again.row_names == m.row_names
    assert render_model(again) == render_model(m)


def test_cli_parametric(capsys):
    code, out, _ = run(capsys, "solve", "--method", "parametric", "models/ex2_1.lp")
    assert code == 0
    lines = out.splitlines()
    for want in ("status: optimal", "objective: 10/3", "x1 = 8/3", "x2 = 2/3", "verified: true"):
        assert want in lines


def test_cli_geometric_trace(capsys):
    code, out, _ = run(capsys, "solve", "--method", "geometric-chord", "--start", "1,1", "models/ex_geo1.lp", "--trace")
    assert code == 0
    traj = out.split("trajectory:\n")[1].splitlines()
    assert traj == [
        "  0: objective 2 (2.000000) at (1, 1)",
        "  1: objective 8/3 (2.666667) at (4/3, 4/3)",
        "  2: objective 10/3 (3.333333) at (8/3, 2/3)",
    ]


def test_cli_integer_methods(capsys):
    for method in ("dio1", "dio2", "ip-brute"):
        code, out, _ = run(capsys, "solve", "--method", method, "models/ex4_1.lp")
        assert code == 0 and "objective: 55" in out.splitlines()
    code, out, _ = run(capsys, "solve", "models/ex4_2.lp")
    assert code == 0 and "objective: 26" in out.splitlines()


def test_cli_groebner(capsys):
    code, out, _ = run(capsys, "solve", "models/ex3_2.lp", "--trace")
    lines = out.splitlines()
    assert code == 0
    assert "objective: 67" in lines and "x1 = 3/2" in lines and "verified: true" in lines
    assert "basis:" in lines


@pytest.mark.parametrize(
    "argv,code",
    [
        (["solve", "models/ex2_5.lp"], 2),
        (["solve", "models/ex2_3.lp"], 3),
        (["solve", "--method", "dio1", "--budget", "2", "models/ex4_2.lp"], 4),
        (["solve", "--method", "dio1", "models/ex2_1.lp"], 1),
        (["solve", "models/does_not_exist.lp"], 1),
        (["solve", "--eps", "-1", "models/ex2_1.lp"], 1),
        (["solve", "--method", "nonsense", "models/ex2_1.lp"], 1),
        (["frobnicate"], 1),
    ],
)
def test_cli_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_cli_parse_error_goes_to_stderr(capsys, tmp_path):
    bad = tmp_path / "bad.lp"
    bad.write_text("maximize\nobj: x1 + + x2\nst\nend\n")
    code, out, err = run(capsys, "solve", str(bad))
    assert code == 1 and out == ""
    assert "line 2, column 10" in err


def test_cli_json(capsys):
    code, out, _ = run(capsys, "solve", "--format", "json", "models/ex2_2.lp")
    rep = json.loads(out)
    assert code == 0
    assert rep["status"] == "optimal" and rep["objective"] == "5/4"
    assert rep["x"] == {"x1": "1", "x2": "0", "x3": "1", "x4": "0"}
    assert rep["verified"] is True


def test_cli_all_methods(capsys):
    code, out, _ = run(capsys, "solve", "--all-methods", "--format", "json", "models/ex2_1.lp")
    rep = json.loads(out)
    assert code == 0 and rep["agreement"] is True
    assert {r["method"] for r in rep["results"]} >= {"parametric", "simplex", "geometric-chord"}


@pytest.mark.parametrize("path", MODELS)
def test_cli_is_deterministic(capsys, path):
    first = run(capsys, "solve", path, "--trace")
    second = run(capsys, "solve", path, "--trace")
    assert first == second
