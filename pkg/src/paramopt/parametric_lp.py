"""Parametric-objective LP solver.

The objective is turned into the equation ``C x = d`` and stacked on top of the
slack-augmented constraints.  After reduced row echelon form every row reads
``basic + sum(nonbasic terms) = c*d + e``.  Rows with ``c < 0`` cap ``d`` from
above and rows with ``c > 0`` bound it from below, which is where the optimal
value is read off for maximization (and symmetrically for minimization).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact_arith import AffineForm, ParamMatrix, RowOp, add_multiple, elementary_row_op, render_rational, rref, scale
from .lp_model import (
    LpProblem,
    Sense,
    StandardForm,
    assemble_augmented,
    normalize_relations,
    permute_constraints,
    reorder_permutations,
    to_standard_form,
)
from .oracle import row_slacks, simplex_solve
from .outcome import LpOutcome, Status

__all__ = [
    "Acceptability",
    "Classification",
    "LpOutcome",
    "OracleDisagreement",
    "ParametricTableau",
    "Status",
    "acceptability",
    "build_tableau",
    "classify",
    "infeasibility_certificate",
    "nonbasic_columns_ok",
    "read_solution",
    "repair_by_row_ops",
    "solve_parametric",
    "thresholds",
    "unbounded_certificate",
]


class Classification(Enum):
    INCONSISTENT = "inconsistent"
    UNBOUNDED = "unbounded"
    CONTINUE = "continue"


class Acceptability(Enum):
    ACCEPT = "accept"
    ACCEPT_VIA_EK = "accept_via_ek"
    REJECT = "reject"


class OracleDisagreement(AssertionError):
    """The parametric answer differs from the reference simplex."""


@dataclass(frozen=True)
class ParametricTableau:
    R: ParamMatrix
    sense: Sense
    basic_of_row: tuple[Optional[int], ...]
    basic_cols: tuple[int, ...]
    nonbasic_cols: tuple[int, ...]
    rn_rows: tuple[int, ...]
    rp_rows: tuple[int, ...]

    @property
    def bounding_rows(self) -> tuple[int, ...]:
        """Rows that cap the objective: R_N for max, R_P for min."""
        return self.rn_rows if self.sense is Sense.MAXIMIZE else self.rp_rows

    @property
    def opposite_rows(self) -> tuple[int, ...]:
        return self.rp_rows if self.sense is Sense.MAXIMIZE else self.rn_rows

    def oriented(self, i: int) -> AffineForm:
        """Row ``i``'s right-hand side in terms of d' = +-d so that d' is maximized."""
        a = self.R.last_col[i]
        return a if self.sense is Sense.MAXIMIZE else AffineForm(-a.dcoeff, a.constant)

    def is_zero_row(self, i: int) -> bool:
        return all(v == 0 for v in self.R.body[i])

    def row_clean(self, i: int) -> bool:
        """Every nonbasic entry of row ``i`` is nonnegative."""
        row = self.R.body[i]
        return all(row[j] >= 0 for j in self.nonbasic_cols)


def tableau_from_matrix(R: ParamMatrix, sense: Sense) -> ParametricTableau:
    nrows, ncols = R.nrows, R.ncols
    basic_of_row: list[Optional[int]] = [None] * nrows
    for j in range(ncols):
        col = R.column(j)
        nz = [i for i, v in enumerate(col) if v != 0]
        if len(nz) == 1 and col[nz[0]] == 1 and basic_of_row[nz[0]] is None:
            basic_of_row[nz[0]] = j
    basic = tuple(sorted(j for j in basic_of_row if j is not None))
    nonbasic = tuple(j for j in range(ncols) if j not in basic)
    rn = tuple(i for i, a in enumerate(R.last_col) if a.dcoeff < 0)
    rp = tuple(i for i, a in enumerate(R.last_col) if a.dcoeff > 0)
    return ParametricTableau(R, sense, tuple(basic_of_row), basic, nonbasic, rn, rp)


def build_tableau(sf: StandardForm) -> ParametricTableau:
    return tableau_from_matrix(rref(assemble_augmented(sf)), sf.base.sense)


def thresholds(t: ParametricTableau) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """``(min d-, max d+)`` over the roots of the R_N and R_P rows."""
    dm = [t.R.last_col[i].root() for i in t.rn_rows]
    dp = [t.R.last_col[i].root() for i in t.rp_rows]
    return (min(dm) if dm else None, max(dp) if dp else None)


def _oriented_bounds(t: ParametricTableau) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """(cap, floor) on d' from all bounding / opposite rows."""
    caps = [t.oriented(i).root() for i in t.bounding_rows]
    floors = [t.oriented(i).root() for i in t.opposite_rows]
    return (min(caps) if caps else None, max(floors) if floors else None)


def nonbasic_columns_ok(t: ParametricTableau, sense: Optional[Sense] = None) -> bool:
    rows = t.bounding_rows if sense is None or sense is t.sense else t.opposite_rows
    return all(t.R.body[i][j] >= 0 for i in rows for j in t.nonbasic_cols)


def unbounded_certificate(t: ParametricTableau) -> Optional[tuple[Optional[int], Fraction]]:
    """A ray of feasible points along which the objective grows without limit.

    Points are ``d' = lam`` with nonbasic column ``j`` set to ``tau*lam`` (or no
    column when ``j`` is None) and other nonbasics zero.  Each row's basic then
    equals ``(c' - R_ij tau) lam + e``, so the ray is feasible for large ``lam``
    when every such slope is positive, or zero with ``e >= 0``.  Returns
    ``(j, tau)`` or None.
    """
    rows = range(t.R.nrows)
    for i in rows:
        if t.is_zero_row(i) and not t.R.last_col[i].is_zero():
            return None
    for j in (None,) + t.nonbasic_cols:
        col = [Fraction(0)] * t.R.nrows if j is None else list(t.R.column(j))
        # rows without a basic variable must stay exactly zero
        if any(t.basic_of_row[i] is None and not t.is_zero_row(i) for i in rows):
            return None
        lo, hi = Fraction(0), None
        ok = True
        for i in rows:
            c, a = t.oriented(i).dcoeff, col[i]
            # need c - a*tau >= 0
            if a < 0:
                lo = max(lo, c / a)
            elif a > 0:
                bound = c / a
                hi = bound if hi is None else min(hi, bound)
            elif c < 0:
                ok = False
                break
        if not ok or (hi is not None and hi < lo):
            continue
        tau = lo + 1 if hi is None else (lo + hi) / 2 if hi > lo else lo
        if j is None:
            tau = Fraction(0)
        if all(
            (t.oriented(i).dcoeff - col[i] * tau) > 0 or t.R.last_col[i].constant >= 0
            for i in rows
        ) and all(t.oriented(i).dcoeff - col[i] * tau >= 0 for i in rows):
            return (j, tau)
    return None


def classify(t: ParametricTableau) -> Classification:
    """Inconsistent rows first, then the unboundedness rules, else Continue.

    The structural unboundedness rules (no bounding rows, or a nonbasic column
    that is nonpositive everywhere and negative on every bounding row) are only
    reported when a feasible ray confirms them.
    """
    for i in range(t.R.nrows):
        a = t.R.last_col[i]
        if t.is_zero_row(i) and a.dcoeff == 0 and a.constant != 0:
            return Classification.INCONSISTENT
    bounding = t.bounding_rows
    structural = not bounding or any(
        all(v <= 0 for v in t.R.column(j)) and all(t.R.body[i][j] < 0 for i in bounding)
        for j in t.nonbasic_cols
    )
    if structural and unbounded_certificate(t) is not None:
        return Classification.UNBOUNDED
    return Classification.CONTINUE


def infeasibility_certificate(t: ParametricTableau) -> Optional[str]:
    """Reason the system has no nonnegative solution for any d, or None.

    Only rows whose nonbasic entries are all nonnegative are used: for those,
    ``c*d + e`` equals a sum of nonnegative terms, so it must itself be >= 0.
    """
    floor: Optional[Fraction] = None
    cap: Optional[Fraction] = None
    for i in range(t.R.nrows):
        a = t.R.last_col[i]
        if t.is_zero_row(i):
            if a.dcoeff == 0:
                if a.constant != 0:
                    return f"row {i + 1} reads 0 = {render_rational(a.constant)}"
                continue
            r = a.root()
            floor = r if floor is None else max(floor, r)
            cap = r if cap is None else min(cap, r)
            continue
        if not t.row_clean(i):
            continue
        if a.dcoeff == 0:
            if a.constant < 0:
                return f"row {i + 1} forces a nonnegative sum to equal {render_rational(a.constant)}"
        elif a.dcoeff > 0:
            floor = a.root() if floor is None else max(floor, a.root())
        else:
            cap = a.root() if cap is None else min(cap, a.root())
    if floor is not None and cap is not None and floor > cap:
        return f"d must be >= {render_rational(floor)} and <= {render_rational(cap)}"
    return None


def _candidate_d(t: ParametricTableau) -> Optional[Fraction]:
    lo, hi = thresholds(t)
    return lo if t.sense is Sense.MAXIMIZE else hi


def acceptability(t: ParametricTableau, sense: Optional[Sense] = None) -> Acceptability:
    sense = t.sense if sense is None else sense
    dmin, dmax = thresholds(t)
    if sense is Sense.MAXIMIZE:
        if dmin is None:
            return Acceptability.REJECT
        if dmax is None or dmin >= dmax:
            return Acceptability.ACCEPT
        d_star, others = dmin, t.rp_rows
    else:
        if dmax is None:
            return Acceptability.REJECT
        if dmin is None or dmin >= dmax:
            return Acceptability.ACCEPT
        d_star, others = dmax, t.rn_rows
    if all(t.R.last_col[i].constant > 0 for i in others) and all(
        a.at(d_star) >= 0 for a in t.R.last_col
    ):
        return Acceptability.ACCEPT_VIA_EK
    return Acceptability.REJECT


@dataclass
class _Layout:
    """Maps tableau columns back to the caller's variables and rows."""

    problem: LpProblem  # the caller's problem
    perm: tuple[int, ...]  # row order used to build the tableau
    sf: StandardForm

    def split(self, values: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        n = self.problem.n
        x = tuple(values[:n])
        return x, row_slacks(self.problem, x)


def read_solution(t: ParametricTableau, d_star: Fraction, n_vars: Optional[int] = None) -> LpOutcome:
    """Nonbasics at zero, basics from their rows at ``d = d_star``.

    ``x`` holds the first ``n_vars`` columns and ``slacks`` the rest, in
    tableau column order.
    """
    ncols = t.R.ncols
    vals = [Fraction(0)] * ncols
    for i, a in enumerate(t.R.last_col):
        v = a.at(d_star)
        j = t.basic_of_row[i]
        if j is None:
            if v != 0:
                return LpOutcome(
                    Status.INFEASIBLE,
                    info={"certified": False, "reason": f"row {i + 1} has no basic variable"},
                )
            continue
        vals[j] = v
    n = ncols if n_vars is None else n_vars
    if any(v < 0 for v in vals):
        reason = infeasibility_certificate(t)
        return LpOutcome(
            Status.INFEASIBLE,
            info={"certified": reason is not None, "reason": reason or "negative basic value"},
        )
    return LpOutcome(Status.OPTIMAL, d_star, tuple(vals[:n]), tuple(vals[n:]))


def _pivot_ops(t: ParametricTableau, r: int, j: int) -> list[RowOp]:
    R = t.R
    ops = []
    p = R.body[r][j]
    if p != 1:
        ops.append(scale(r, 1 / p))
    for k in range(R.nrows):
        f = R.body[k][j]
        if k != r and f != 0:
            ops.append(add_multiple(k, r, -f))
    return ops


def _offending(t: ParametricTableau) -> list[int]:
    """Rows to fix, most urgent first: dirty bounding rows, then rows negative at the candidate d."""
    out = [i for i in t.bounding_rows if not t.row_clean(i)]
    cap, _ = _oriented_bounds(t)
    if cap is not None:
        for i in range(t.R.nrows):
            if i not in out and t.oriented(i).at(cap) < 0:
                out.append(i)
    return out


def repair_by_row_ops(
    t: ParametricTableau,
    max_ops: Optional[int] = None,
    stop: Optional[Callable[[ParametricTableau], bool]] = None,
) -> tuple[Optional[ParametricTableau], list[RowOp]]:
    """Greedy clearing of negative nonbasic entries by elementary row operations.

    Each step picks an offending row ``i`` and a nonbasic column ``j`` where it
    is negative, then a row ``r`` with a positive entry in ``j`` and no negative
    entry in any other nonbasic column.  Row ``r`` is scaled so that entry is 1
    and added with the smallest positive multiple that clears column ``j`` in
    every other row, so ``j`` becomes basic in row ``r``.  Stops after
    ``max_ops`` row operations (default ``4*(rows)``), or early when ``stop``
    accepts the current tableau.  Returns the repaired tableau, or None with
    the operations tried.
    """
    cap = 4 * t.R.nrows if max_ops is None else max_ops
    used: list[RowOp] = []
    seen = {t.basic_of_row}
    while True:
        if nonbasic_columns_ok(t) and acceptability(t) is not Acceptability.REJECT:
            return t, used
        if stop is not None and used and stop(t):
            return t, used
        move = None
        for i in _offending(t):
            for j in t.nonbasic_cols:
                if t.R.body[i][j] >= 0:
                    continue
                pos = [r for r in range(t.R.nrows) if r != i and t.R.body[r][j] > 0]
                clean = [r for r in pos if all(t.R.body[r][k] >= 0 for k in t.nonbasic_cols if k != j)]
                rest = [r for r in pos if r not in clean]
                for r in _rank_pivot_rows(t, clean, j) + _rank_pivot_rows(t, rest, j):
                    ops = _pivot_ops(t, r, j)
                    nxt = R_after(t, ops)
                    if nxt.basic_of_row in seen:
                        continue
                    move = (ops, nxt)
                    break
                if move:
                    break
            if move:
                break
        if move is None or len(used) + len(move[0]) > cap:
            return None, used
        used.extend(move[0])
        t = move[1]
        seen.add(t.basic_of_row)


def _rank_pivot_rows(t: ParametricTableau, rows: list[int], j: int) -> list[int]:
    """Prefer the pivot row whose bound on d', scaled by its entry, is smallest."""

    def key(r: int) -> tuple:
        a = t.oriented(r)
        if a.dcoeff < 0:
            return (0, a.root(), r)
        return (1, -a.constant / t.R.body[r][j], r)

    return sorted(rows, key=key)


def R_after(t: ParametricTableau, ops: Sequence[RowOp]) -> ParametricTableau:
    R = t.R
    for op in ops:
        R = elementary_row_op(R, op)
    return tableau_from_matrix(R, t.sense)


def _try_tableau(
    t: ParametricTableau, layout: _Layout, trace: list[str]
) -> Optional[LpOutcome]:
    """Conclude from one tableau if the evidence is conclusive, else None."""
    cls = classify(t)
    if cls is Classification.INCONSISTENT:
        trace.append("zero row with nonzero constant: inconsistent")
        return LpOutcome(Status.INCONSISTENT, trace=trace)
    if cls is Classification.UNBOUNDED:
        trace.append("objective bound missing on a feasible ray: unbounded")
        return LpOutcome(Status.UNBOUNDED, trace=trace)
    reason = infeasibility_certificate(t)
    if reason is not None:
        trace.append(f"infeasible: {reason}")
        return LpOutcome(Status.INFEASIBLE, trace=trace)
    if not nonbasic_columns_ok(t):
        return None
    verdict = acceptability(t)
    if verdict is Acceptability.REJECT:
        return None
    d_star = _candidate_d(t)
    assert d_star is not None
    out = read_solution(t, d_star, layout.sf.base.n)
    if out.tag is Status.OPTIMAL:
        x, slacks = layout.split(out.x)
        trace.append(f"{verdict.value}: d = {render_rational(d_star)}")
        return LpOutcome(Status.OPTIMAL, d_star, x, slacks, trace)
    if out.info.get("certified"):
        trace.append(f"infeasible: {out.info['reason']}")
        return LpOutcome(Status.INFEASIBLE, trace=trace)
    return None


def _conclusive(t: ParametricTableau) -> bool:
    return (
        classify(t) is not Classification.CONTINUE
        or infeasibility_certificate(t) is not None
    )


def _verify(p: LpProblem, out: LpOutcome) -> Optional[str]:
    """Check an answer against the problem and the reference simplex; returns a complaint."""
    ref = simplex_solve(p)
    if out.final_status is not ref.final_status:
        return f"status {out.final_status.value} but reference says {ref.final_status.value}"
    if out.tag is Status.OPTIMAL:
        if not p.is_feasible(out.x):
            return "assignment violates a constraint"
        if p.value(out.x) != out.value:
            return "objective value does not match the assignment"
        if out.value != ref.value:
            return f"value {out.value} but reference says {ref.value}"
    return None


def solve_parametric(p: LpProblem, verify: bool = True, strict: bool = False) -> LpOutcome:
    """Run the full parametric pipeline on ``p``.

    The original row order is tried first, then the heuristic reorderings,
    then greedy row-operation repair on each of them.  If nothing is
    conclusive the reference simplex answer is returned with tag FALLBACK.
    With ``verify`` every conclusion is checked against the reference
    simplex; a mismatch raises ``OracleDisagreement`` when ``strict`` and
    otherwise becomes a FALLBACK.
    """
    base = normalize_relations(p)
    trace: list[str] = []
    perms = reorder_permutations(base)
    ident = tuple(range(base.m))
    order = [ident] + [pm for pm in perms if pm != ident]

    tableaux = []
    result: Optional[LpOutcome] = None
    for pm in order:
        q = permute_constraints(base, pm)
        sf = to_standard_form(q)
        t = build_tableau(sf)
        layout = _Layout(p, pm, sf)
        tableaux.append((pm, t, layout))
        local = trace + ([f"reorder rows {[i + 1 for i in pm]}"] if pm != ident else [])
        result = _try_tableau(t, layout, local)
        if result is not None:
            break
    if result is None:
        for pm, t, layout in tableaux:
            fixed, ops = repair_by_row_ops(t, stop=_conclusive)
            if fixed is None:
                continue
            local = trace + ([f"reorder rows {[i + 1 for i in pm]}"] if pm != ident else [])
            local += [op.render() for op in ops]
            result = _try_tableau(fixed, layout, local)
            if result is not None:
                break
    if result is None:
        ref = simplex_solve(p)
        trace.append("no acceptable tableau: reference simplex answer")
        return LpOutcome(Status.FALLBACK, ref.value, ref.x, ref.slacks, trace, resolved=ref.tag)
    if verify:
        complaint = _verify(p, result)
        if complaint is not None:
            if strict:
                raise OracleDisagreement(complaint)
            ref = simplex_solve(p)
            result.trace.append(f"rejected by reference check: {complaint}")
            return LpOutcome(Status.FALLBACK, ref.value, ref.x, ref.slacks, result.trace, resolved=ref.tag)
        result.info["verified"] = True
    return result
