import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from paramopt.groebner_nlp import (
    DegreeTooHigh,
    MultiPoly,
    NoCandidate,
    UnsupportedShape,
    build_nlp_system,
    buchberger,
    default_order,
    is_groebner,
    make_nlp,
    normal_form,
    optimize_parametric,
    s_polynomial,
    solve_nlp,
)
from paramopt.lp_model import Sense
from paramopt.model_io import load_model, parse_poly

ORDER31 = ("x2", "x1", "s1", "s2", "s3", "d")


def P(text, vars):
    return parse_poly(text, vars)


def ex(k):
    return load_model(f"models/ex3_{k}.lp").problem


def test_normal_form_basics():
    V = ("x", "y")
    assert normal_form(P("x^2", V), [P("x", V)]).is_zero()
    assert normal_form(P("x + y", V), [P("x - y", V)]) == P("2 y", V)


def test_linear_ideal():
    V = ("x", "y")
    assert buchberger([P("x + y", V), P("x - y", V)]) == [P("x", V), P("y", V)]


def test_system_for_three_constraint_example():
    p = ex(1)
    assert default_order(p) == ORDER31
    got = build_nlp_system(p)
    want = ["-x1^2 + 4 x1 + 2 x2 - d", "x1 + x2 + s1 - 4", "2 x1 + x2 + s2 - 5", "-x1 + 4 x2 - s3 - 2"]
    assert got == [P(w, ORDER31) for w in want]


def test_system_with_quadratic_constraint():
    p = ex(4)
    order = default_order(p)
    got = build_nlp_system(p)
    assert P("x1^2 + x2^2 + s2 - 26", order) in got
    assert P("x1 + x2 - 6", order) in got


def test_unconstrained_square():
    p = make_nlp("min", ["x"], "x^2")
    assert build_nlp_system(p) == [P("x^2 - d", ("x", "d"))]


def test_degree_cap():
    with pytest.raises(DegreeTooHigh):
        build_nlp_system(make_nlp("max", ["x"], "x^3"))


def test_basis_three_constraint_example():
    G = buchberger(build_nlp_system(ex(1)))
    d_elems = [g for g in G if "d" in g.variables()]
    assert len(d_elems) == 1
    shown = P("486 - 81 d - 18 s2 - 16 s2^2 + 36 s3 - 8 s2*s3 - s3^2", ORDER31)
    assert d_elems[0] == shown.monic()
    assert sum(1 for g in G if g.degree == 1) == 3


def test_basis_circle_example():
    p = ex(3)
    order = default_order(p)
    G = buchberger(build_nlp_system(p))
    assert P("5 x1^2 - 2 x1 - d + 10", order).monic() in G
    assert P("2 x1 + x2 - 3", order).monic() in G
    assert normal_form(build_nlp_system(p)[0], G).is_zero()


EXPECTED = {
    1: (F(9), (1, 3), (0, 0, 9)),
    2: (F(67), (F(3, 2), F(7, 4)), (F(3, 4), F(1, 4), F(7, 2))),
    3: (F(49, 5), (F(1, 5), F(13, 5)), ()),
    4: (F(-4), (1, 5), None),
    5: (F(-11, 2), (F(3, 2), F(1, 2)), (0,)),
}


@pytest.mark.parametrize("k", sorted(EXPECTED))
def test_optimum(k):
    p = ex(k)
    d, x, s = EXPECTED[k]
    r = solve_nlp(p, verify=True)
    assert r.d == d
    assert r.info["x"] == x
    if s is not None:
        assert r.info["slacks"] == s
    assert p.is_feasible(r.info["x"]) and p.value(r.info["x"]) == r.d
    assert abs(r.info["grid_value"] - float(d)) <= 1e-6
    assert r.info["verified"]


@pytest.mark.parametrize("k", sorted(EXPECTED))
def test_basis_properties(k):
    F_ = build_nlp_system(ex(k))
    G = buchberger(F_)
    assert all(normal_form(f, G).is_zero() for f in F_)
    assert is_groebner(G)
    shuffled = F_[:]
    random.Random(k).shuffle(shuffled)
    assert buchberger(shuffled) == G
    assert buchberger(list(reversed(F_))) == G


def test_nonlinear_d_is_rejected():
    with pytest.raises(UnsupportedShape):
        optimize_parametric([P("x^2 - d^2", ("x", "d"))], Sense.MAXIMIZE)


def test_infeasible_problem():
    with pytest.raises(NoCandidate):
        solve_nlp(make_nlp("max", ["x"], "x", [], [("x", "<=", -1)]))


def test_unconstrained_minimum():
    assert solve_nlp(make_nlp("min", ["x"], "x^2 - 2 x")).d == -1


VARS = ("x", "y", "z")
monomials = st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 1)).filter(lambda m: sum(m) <= 2)
polys = st.dictionaries(monomials, st.integers(-3, 3), min_size=1, max_size=3).map(
    lambda t: MultiPoly(VARS, {m: F(c) for m, c in t.items()})
)


@settings(max_examples=60, deadline=None)
@given(st.lists(polys, min_size=1, max_size=3))
def test_buchberger_output_is_a_basis(F_):
    F_ = [f for f in F_ if not f.is_zero()]
    if not F_:
        return
    G = buchberger(F_)
    for f in F_:
        assert normal_form(f, G).is_zero()
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            assert normal_form(s_polynomial(G[i], G[j]), G).is_zero()
    assert all(g.leading()[1] == 1 for g in G)
