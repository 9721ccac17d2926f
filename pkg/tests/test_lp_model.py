from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramopt.exact_arith import AffineForm, rref
from paramopt.lp_model import (
    BadPermutation,
    MixedRelations,
    Relation,
    Sense,
    Unsupported,
    assemble_augmented,
    dual_of,
    inverse_permutation,
    make_lp,
    normalize_relations,
    permute_constraints,
    reorder_permutations,
    to_standard_form,
)
from paramopt.oracle import simplex_solve

from cases import BOTH_INFEASIBLE, DEGENERATE_CORNER, MIN_THREE_VAR, MIN_UNBOUNDED, MIXED_COLUMNS, REORDER_NEEDED, TRIANGLE


def test_standard_form_signs():
    assert to_standard_form(TRIANGLE).slack_sign == (1, 1, 1)
    assert to_standard_form(MIN_THREE_VAR).slack_sign == (-1, -1, -1, -1)
    eq = make_lp("min", [1, 1], [([2, 1], "=", 3)])
    sf = to_standard_form(eq)
    assert sf.slack_count == 0 and sf.total_vars == 2


def test_mixed_relations_rejected_until_normalized():
    p = make_lp("max", [1, 1], [([1, 1], "<=", 4), ([1, -1], ">=", -2)])
    with pytest.raises(MixedRelations):
        to_standard_form(p)
    q = normalize_relations(p)
    assert q.constraints[1].rel is Relation.LE
    assert q.constraints[1].coeffs == (-1, 1) and q.constraints[1].rhs == 2


def test_augmented_matrix_triangle():
    M = assemble_augmented(to_standard_form(TRIANGLE))
    assert [list(r) for r in M.body] == [[1, 1, 0, 0, 0], [1, 2, 1, 0, 0], [-1, 1, 0, 1, 0], [4, 2, 0, 0, 1]]
    assert list(M.last_col) == [AffineForm.param()] + [AffineForm.const(v) for v in (4, 1, 12)]


def test_augmented_matrix_minimize_uses_minus_identity():
    M = assemble_augmented(to_standard_form(MIN_THREE_VAR))
    assert [r[3:] for r in M.body[1:]] == [tuple(F(-1) if i == j else F(0) for j in range(4)) for i in range(4)]


def test_augmented_matrix_one_by_one():
    M = assemble_augmented(to_standard_form(make_lp("max", [1], [([1], "<=", 1)])))
    assert [list(r) for r in M.body] == [[1, 0], [1, 1]]
    assert list(M.last_col) == [AffineForm.param(), AffineForm.const(1)]


def test_augmented_recovers_data():
    M = assemble_augmented(to_standard_form(MIN_THREE_VAR))
    n = MIN_THREE_VAR.n
    assert M.body[0][:n] == MIN_THREE_VAR.objective
    for row, lc, c in zip(M.body[1:], M.last_col[1:], MIN_THREE_VAR.constraints):
        assert row[:n] == c.coeffs and lc.constant == c.rhs


def test_duals_of_the_infeasible_and_unbounded_pairs():
    dl = dual_of(BOTH_INFEASIBLE)
    assert dl.sense is Sense.MAXIMIZE and dl.objective == (2, -1)
    assert [(c.coeffs, c.rel, c.rhs) for c in dl.constraints] == [((1, -1), Relation.LE, 1), ((-1, 1), Relation.LE, -2)]
    du = dual_of(MIN_UNBOUNDED)
    assert du.objective == (5, -5)
    assert [(c.coeffs, c.rhs) for c in du.constraints] == [((1, 1), -1), ((-1, -1), -1)]


def test_double_dual_is_the_primal():
    p = MIN_THREE_VAR
    dd = dual_of(dual_of(p))
    assert dd.sense is p.sense and dd.objective == p.objective and dd.constraints == p.constraints


def test_dual_rejects_mixed_rows():
    with pytest.raises(Unsupported):
        dual_of(make_lp("max", [1], [([1], ">=", 1)]))


def test_permutation_reproduces_reordered_tableau():
    q = permute_constraints(DEGENERATE_CORNER, (1, 2, 0))
    R = rref(assemble_augmented(to_standard_form(q)))
    assert list(R.last_col) == [AffineForm(1, -8), AffineForm(-1, 12), AffineForm(-1, 9), AffineForm(-5, 54)]


def test_permutation_identity_and_inverse():
    p = DEGENERATE_CORNER
    assert permute_constraints(p, (0, 1, 2)) == p
    perm = (2, 0, 1)
    assert permute_constraints(permute_constraints(p, perm), inverse_permutation(perm)) == p
    with pytest.raises(BadPermutation):
        permute_constraints(p, (0, 0, 1))


def test_reorder_ranks_the_hand_reorder_first():
    perms = reorder_permutations(MIXED_COLUMNS)
    assert perms.index((0, 2, 1)) < perms.index((0, 1, 2))
    assert (0, 2, 1) in reorder_permutations(REORDER_NEEDED)[:3]
    assert reorder_permutations(make_lp("max", [1], [([1], "<=", 1)])) == [(0,)]


def test_reorder_candidates_share_the_optimum():
    for p in (MIXED_COLUMNS, REORDER_NEEDED, DEGENERATE_CORNER):
        ref = simplex_solve(p).value
        for pm in reorder_permutations(p):
            assert simplex_solve(permute_constraints(p, pm)).value == ref


small = st.integers(0, 5)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.integers(1, 4).flatmap(
            lambda m: st.tuples(
                st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m),
                st.lists(small, min_size=n, max_size=n),
                st.lists(small, min_size=m, max_size=m),
                st.lists(small, min_size=m, max_size=m),
                st.lists(small, min_size=n, max_size=n),
            )
        )
    )
)
def test_weak_duality(data):
    A, x, w, slack, surplus = data
    n = len(x)
    b = [sum(a * v for a, v in zip(row, x)) + s for row, s in zip(A, slack)]
    C = [sum(A[i][j] * w[i] for i in range(len(A))) - surplus[j] for j in range(n)]
    p = make_lp("max", C, [(row, "<=", bi) for row, bi in zip(A, b)])
    dl = dual_of(p)
    assert p.is_feasible([F(v) for v in x])
    assert dl.is_feasible([F(v) for v in w])
    assert p.value(x) <= dl.value(w)
