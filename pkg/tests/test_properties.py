"""Randomized invariants that need no worked-example fixtures; runnable on their own."""

import itertools
import random
from fractions import Fraction as F

from paramopt.diophantine_ip import DioTable, NoIntegerSolution, diagonalize
from paramopt.exact_arith import AffineForm, ParamMatrix, rref, rref_plain
from paramopt.groebner_nlp import MultiPoly, buchberger, normal_form, s_polynomial
from paramopt.lp_model import dual_of, make_lp


def test_rref_commutation_and_idempotence():
    rng = random.Random(11)
    for _ in range(10_000):
        m, n = rng.randint(1, 5), rng.randint(1, 7)
        body = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        last = [AffineForm(rng.randint(-5, 5), rng.randint(-9, 9)) for _ in range(m)]
        M = ParamMatrix.build(body, last)
        R = rref(M)
        assert rref(R) == R
        dv = F(rng.randint(-20, 20), rng.randint(1, 6))
        assert rref_plain(M.substitute(dv), pivot_cols=M.ncols) == R.substitute(dv)


def _random_poly(rng, vars):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        m = tuple(rng.randint(0, 1) for _ in vars)
        if sum(m) <= 2:
            terms[m] = F(rng.randint(-4, 4))
    return MultiPoly(vars, terms)


def test_groebner_s_pairs_reduce_to_zero():
    rng = random.Random(12)
    vars = ("x", "y", "z", "d")
    for _ in range(150):
        F_ = [g for g in (_random_poly(rng, vars) for _ in range(rng.randint(1, 3))) if not g.is_zero()]
        if not F_:
            continue
        G = buchberger(F_)
        assert all(normal_form(f, G).is_zero() for f in F_)
        for a, b in itertools.combinations(G, 2):
            assert normal_form(s_polynomial(a, b), G).is_zero()


def test_diophantine_substitution_identity():
    rng = random.Random(13)
    checked = 0
    for _ in range(200):
        n, m = rng.randint(1, 4), rng.randint(1, 3)
        top = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        rhs = [AffineForm.param()] + [AffineForm.const(rng.randint(-5, 25)) for _ in range(m - 1)]
        t = DioTable(
            [row[:] for row in top], rhs, [[int(i == j) for j in range(n)] for i in range(n)], tuple(f"v{i}" for i in range(n))
        )
        try:
            sol = diagonalize(t)
        except NoIntegerSolution:
            continue
        for _ in range(100):
            d = rng.randint(-50, 50)
            if not sol.admissible(d):
                continue
            u = [rng.randint(-20, 20) for _ in sol.free]
            v = sol.values(d, u)
            assert all(x.denominator == 1 for x in v)
            for row, r in zip(top, rhs):
                assert sum(a * x for a, x in zip(row, v)) == r.at(d)
            checked += 1
    assert checked > 1000


def test_weak_duality_sampling():
    rng = random.Random(14)
    pairs = 0
    for _ in range(300):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        p = make_lp("max", [rng.randint(-6, 6) for _ in range(n)], [(r, "<=", rng.randint(0, 20)) for r in A])
        dual = dual_of(p)
        xs = [x for x in (tuple(F(rng.randint(0, 6)) for _ in range(n)) for _ in range(40)) if p.is_feasible(x)]
        ws = [w for w in (tuple(F(rng.randint(0, 6)) for _ in range(m)) for _ in range(40)) if dual.is_feasible(w)]
        for x in xs:
            for w in ws:
                assert p.value(x) <= dual.value(w)
                pairs += 1
    assert pairs > 1000
