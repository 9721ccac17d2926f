import random
from fractions import Fraction as F

import pytest

from paramopt.exact_arith import add_multiple, apply_ops
from paramopt.lp_model import dual_of, permute_constraints, reorder_permutations, to_standard_form
from paramopt.oracle import simplex_solve
from paramopt.parametric_lp import (
    Acceptability,
    Classification,
    R_after,
    acceptability,
    build_tableau,
    classify,
    nonbasic_columns_ok,
    read_solution,
    repair_by_row_ops,
    solve_parametric,
    tableau_from_matrix,
    thresholds,
)
from paramopt.outcome import Status

from cases import (
    BEALE_DUAL,
    BOTH_INFEASIBLE,
    DEGENERATE_CORNER,
    EMPTY_CONE,
    KLEE_MINTY_3,
    LP_SUITE,
    MIN_UNBOUNDED,
    MIXED_COLUMNS,
    PLAIN_14,
    REORDER_NEEDED,
    TRIANGLE,
    UNBOUNDED_WEDGE,
)
from generators import rand_lp


def tab(p):
    return build_tableau(to_standard_form(p))


def test_tableau_partitions():
    t = tab(TRIANGLE)
    assert sorted(t.basic_cols + t.nonbasic_cols) == list(range(t.R.ncols))
    assert not set(t.rn_rows) & set(t.rp_rows)


def test_classify():
    assert classify(tab(UNBOUNDED_WEDGE)) is Classification.UNBOUNDED
    assert classify(tab(MIN_UNBOUNDED)) is Classification.UNBOUNDED
    assert classify(tab(TRIANGLE)) is Classification.CONTINUE


def test_thresholds():
    assert thresholds(tab(TRIANGLE)) == (F(10, 3), F(3))
    assert thresholds(tab(PLAIN_14))[0] == 14


def test_nonbasic_columns():
    t = tab(TRIANGLE)
    assert nonbasic_columns_ok(t)
    assert [t.R.body[i][4] for i in t.rn_rows] == [F(1, 2), F(1, 2), F(1)]
    t8 = tab(MIXED_COLUMNS)
    assert not nonbasic_columns_ok(t8)
    assert [t8.R.body[i][4] for i in t8.rn_rows] == [F(-2, 3), F(1, 3), F(-2, 3)]


def test_acceptability():
    assert acceptability(tab(PLAIN_14)) is Acceptability.ACCEPT
    assert acceptability(tab(REORDER_NEEDED)) is Acceptability.REJECT
    assert acceptability(tab(permute_constraints(REORDER_NEEDED, (0, 2, 1)))) is Acceptability.ACCEPT


def test_read_solution_triangle():
    out = read_solution(tab(TRIANGLE), F(10, 3), 2)
    assert out.tag is Status.OPTIMAL
    assert out.x == (F(8, 3), F(2, 3)) and out.slacks == (0, 3, 0)


def test_read_solution_empty_cone_is_infeasible():
    t = tab(EMPTY_CONE)
    d, _ = thresholds(t)
    assert read_solution(t, d, 2).tag is Status.INFEASIBLE


def test_repair_cycling_instance():
    fixed, ops = repair_by_row_ops(tab(BEALE_DUAL))
    assert fixed is not None and ops
    assert nonbasic_columns_ok(fixed)
    assert thresholds(fixed)[0] == F(5, 4)
    out = read_solution(fixed, F(5, 4), 4)
    assert out.x == (1, 0, 1, 0) and out.slacks == (F(3, 4), 0, 0)


def test_hand_row_op_on_degenerate_corner():
    t = tab(DEGENERATE_CORNER)
    t2 = R_after(t, [add_multiple(3, 2, 1)])
    assert nonbasic_columns_ok(t2)
    assert thresholds(t2)[0] == 9


def test_repair_klee_minty():
    fixed, _ = repair_by_row_ops(tab(KLEE_MINTY_3))
    assert fixed is not None
    d = thresholds(fixed)[0]
    out = read_solution(fixed, d, 3)
    assert d == 10000 and out.x == (0, 0, 10000) and out.slacks == (1, 100, 0)


def test_repair_noop_when_acceptable():
    t = tab(PLAIN_14)
    fixed, ops = repair_by_row_ops(t)
    assert fixed is t and ops == []


@pytest.mark.parametrize("label,p,status,value,x", LP_SUITE, ids=[c[0] for c in LP_SUITE])
def test_solve_suite(label, p, status, value, x):
    out = solve_parametric(p, strict=True)
    assert out.tag.value == status
    if value is not None:
        assert out.value == value
    if x is not None:
        assert out.x == tuple(F(v) for v in x)


def test_infeasible_and_unbounded_duals():
    assert solve_parametric(dual_of(BOTH_INFEASIBLE), strict=True).final_status is Status.INFEASIBLE
    assert solve_parametric(dual_of(MIN_UNBOUNDED), strict=True).final_status is Status.INFEASIBLE


def test_random_soundness_and_agreement():
    rng = random.Random(2024)
    for _ in range(150):
        p = rand_lp(rng)
        out = solve_parametric(p, strict=True)
        ref = simplex_solve(p)
        assert out.final_status is ref.final_status
        if out.final_status is Status.OPTIMAL:
            assert out.value == ref.value
            assert p.is_feasible(out.x) and p.value(out.x) == out.value


def test_row_ops_preserve_solutions():
    rng = random.Random(7)
    t = tab(MIXED_COLUMNS)
    fixed, ops = repair_by_row_ops(t)
    assert ops
    R0, R1 = t.R, apply_ops(t.R, ops)
    assert fixed is not None and fixed.R == R1
    for _ in range(200):
        # a point on the original system: pick d and the nonbasics, solve for the basics
        d = F(rng.randint(-30, 30), rng.randint(1, 4))
        free = {j: F(rng.randint(0, 6)) for j in t.nonbasic_cols}
        vals = [F(0)] * R0.ncols
        for j, v in free.items():
            vals[j] = v
        for i, b in enumerate(t.basic_of_row):
            if b is not None:
                vals[b] = R0.last_col[i].at(d) - sum(R0.body[i][j] * free[j] for j in free)
        for R in (R0, R1):
            for row, a in zip(R.body, R.last_col):
                assert sum(c * v for c, v in zip(row, vals)) == a.at(d)


def test_reorder_invariance():
    for p in (MIXED_COLUMNS, REORDER_NEEDED, DEGENERATE_CORNER, TRIANGLE):
        values = set()
        for pm in reorder_permutations(p):
            t = tab(permute_constraints(p, pm))
            if nonbasic_columns_ok(t) and acceptability(t) is not Acceptability.REJECT:
                d = thresholds(t)[0]
                out = read_solution(t, d, p.n)
                if out.tag is Status.OPTIMAL:
                    values.add(d)
        assert len(values) <= 1
        assert values <= {simplex_solve(p).value}


def test_tableau_from_matrix_round_trip():
    t = tab(TRIANGLE)
    assert tableau_from_matrix(t.R, t.sense) == t
