"""Pure integer programs through the parametric Diophantine solution of ``[C 0; A I] (x, s) = (d, b)``.

The augmented system is diagonalized with integer row operations and
unimodular column operations.  The column operations are recorded, so every
variable becomes an integer-affine expression in a few free parameters and d.
Two searches are built on top of that:

* ``search_first_method`` lowers d from the LP bound and enumerates the free
  parameters inside the box that nonnegativity allows; the first hit is optimal.
* ``search_second_method`` runs the same descent but checks every candidate
  against the d-free system obtained by eliminating d, and certifies the result
  with the LP dual when the values meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact_arith import AffineForm, RowOp, add_multiple, render_rational, scale
from .lp_model import Constraint, LpProblem, Relation, Sense, Unsupported, dual_of, normalize_relations
from .oracle import simplex_solve
from .outcome import LpOutcome, Status

DEFAULT_BUDGET = 10**6

Interval = tuple[Optional[int], Optional[int]]


class NoIntegerSolution(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int, last_d: Optional[int] = None) -> None:
        super().__init__(f"enumeration budget exhausted after {nodes} nodes (last d tried: {last_d})")
        self.nodes = nodes
        self.last_d = last_d


def gcd_feasible_d(C: Sequence[int], d: int) -> bool:
    """True iff ``C.x = d`` has an integer solution, i.e. gcd(C) divides d."""
    g = math.gcd(*(int(c) for c in C))
    if g == 0:
        raise ValueError("objective has no nonzero coefficient")
    return d % g == 0


# --- integer form -------------------------------------------------------------

@dataclass(frozen=True)
class IntegerForm:
    """``max C x`` over ``A x <= b`` / ``A x = b`` with integer data.

    ``sign`` and ``scale`` map the internal objective back: caller value =
    sign * d / scale.
    """

    problem: LpProblem
    sign: int
    scale: int

    def caller_value(self, d: Fraction) -> Fraction:
        return self.sign * Fraction(d) / self.scale


def _lcm_den(values: Sequence[Fraction]) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


def integer_form(p: LpProblem) -> IntegerForm:
    """Maximization with only <= and = rows, all coefficients scaled to integers."""
    sign = 1
    if p.sense is Sense.MINIMIZE:
        p = LpProblem(Sense.MAXIMIZE, tuple(-c for c in p.objective), p.constraints, p.integrality, p.names)
        sign = -1
    p = normalize_relations(p)
    rows = []
    for c in p.constraints:
        k = _lcm_den(list(c.coeffs) + [c.rhs])
        rows.append(Constraint(tuple(a * k for a in c.coeffs), c.rel, c.rhs * k))
    k = _lcm_den(list(p.objective))
    obj = tuple(c * k for c in p.objective)
    return IntegerForm(LpProblem(Sense.MAXIMIZE, obj, tuple(rows), p.integrality, p.names), sign, k)


# --- the augmented table and its diagonal form --------------------------------

@dataclass
class DioTable:
    """Integer system ``top . v = rhs`` with the column operations kept in ``record``.

    Rows: the objective row ``C | 0`` then one row per constraint.  Columns: the
    decision variables then one slack per inequality row.  ``v = record . u``
    links the original unknowns ``v`` to the transformed ones ``u``.
    """

    top: list[list[int]]
    rhs: list[AffineForm]
    record: list[list[int]]
    names: tuple[str, ...]

    @classmethod
    def from_form(cls, form: IntegerForm) -> "DioTable":
        p = form.problem
        n = p.n
        slack_rows = [i for i, c in enumerate(p.constraints) if c.rel is Relation.LE]
        width = n + len(slack_rows)
        top = [[int(c) for c in p.objective] + [0] * len(slack_rows)]
        rhs = [AffineForm.param()]
        for i, c in enumerate(p.constraints):
            row = [int(a) for a in c.coeffs] + [0] * len(slack_rows)
            if i in slack_rows:
                row[n + slack_rows.index(i)] = 1
            top.append(row)
            rhs.append(AffineForm.const(c.rhs))
        names = tuple(p.names) + tuple(f"s{i + 1}" for i in slack_rows)
        record = [[int(r == c) for c in range(width)] for r in range(width)]
        return cls(top, rhs, record, names)

    @property
    def width(self) -> int:
        return len(self.record)


@dataclass(frozen=True)
class ParametricIntSolution:
    """Every unknown as ``sum(coeffs[j] * u[free[j]]) + offset(d)``.

    ``fixed`` maps the pinned parameters to their affine value in d; a value
    of d is admissible when all of them come out integral.
    """

    names: tuple[str, ...]
    fixed: dict[int, AffineForm]
    free: tuple[int, ...]
    expr: tuple[tuple[tuple[int, ...], AffineForm], ...]
    record: tuple[tuple[int, ...], ...]
    d_conditions: tuple[AffineForm, ...] = ()

    def admissible(self, d: int) -> bool:
        if any(c.at(d) != 0 for c in self.d_conditions):
            return False
        return all(f.at(d).denominator == 1 for f in self.fixed.values())

    def values(self, d: int, u: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(
            sum((c * v for c, v in zip(coeffs, u)), Fraction(0)) + off.at(d) for coeffs, off in self.expr
        )

    def parameters_of(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Solve ``record . u = v`` (exact; works for rational ``v`` too)."""
        return _solve_square([[Fraction(x) for x in row] for row in self.record], [Fraction(x) for x in v])

    def render(self) -> list[str]:
        out = [f"u{k + 1} = {_render_expr((), (), f)}" for k, f in sorted(self.fixed.items())]
        for name, (coeffs, off) in zip(self.names, self.expr):
            out.append(f"{name} = {_render_expr(coeffs, self.free, off)}")
        return out


def _render_expr(coeffs: Sequence[int], free: Sequence[int], off: AffineForm) -> str:
    parts = []
    if off.dcoeff:
        parts.append(("" if off.dcoeff == 1 else "-" if off.dcoeff == -1 else render_rational(off.dcoeff) + "*") + "d")
    for c, j in zip(coeffs, free):
        if c:
            parts.append(("" if c == 1 else "-" if c == -1 else f"{c}*") + f"u{j + 1}")
    if off.constant or not parts:
        parts.append(render_rational(off.constant))
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


def _solve_square(M: list[list[Fraction]], v: list[Fraction]) -> tuple[Fraction, ...]:
    n = len(M)
    A = [row[:] + [b] for row, b in zip(M, v)]
    for c in range(n):
        r = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[r] = A[r], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return tuple(A[i][n] for i in range(n))


def determinant(M: Sequence[Sequence[int]]) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        r = next((i for i in range(c, n) if A[i][c] != 0), None)
        if r is None:
            return Fraction(0)
        if r != c:
            A[c], A[r] = A[r], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


def _ever_integral(f: AffineForm) -> bool:
    """Whether ``a*d + b`` is an integer for some integer d."""
    D = f.dcoeff.denominator * f.constant.denominator // math.gcd(f.dcoeff.denominator, f.constant.denominator)
    a, b = int(f.dcoeff * D), int(f.constant * D)
    return b % math.gcd(a, D) == 0


def diagonalize(t: DioTable, on_step: Optional[Callable[[DioTable], None]] = None) -> ParametricIntSolution:
    """Integer row/column reduction to diagonal form, then read off the parametric solution.

    Works on a copy.  Pivot: the entry of least absolute value in the current
    row among columns not yet used as pivots (rightmost on ties, so slack
    columns are preferred and decision variables stay free where possible).  ``on_step`` is
    called with the working table after every column operation.
    """
    top = [row[:] for row in t.top]
    rhs = list(t.rhs)
    rec = [row[:] for row in t.record]
    work = DioTable(top, rhs, rec, t.names)
    nrows, ncols = len(top), t.width

    def col_add(dst: int, src: int, k: int) -> None:
        # column dst += k * column src, mirrored on the record
        for row in top:
            row[dst] += k * row[src]
        for row in rec:
            row[dst] += k * row[src]
        if on_step:
            on_step(work)

    def row_add(dst: int, src: int, k: int) -> None:
        top[dst] = [a + k * b for a, b in zip(top[dst], top[src])]
        rhs[dst] = rhs[dst] + rhs[src].scale(k)

    diag: list[tuple[int, int]] = []  # (row, column) of each pivot
    conditions: list[AffineForm] = []
    open_cols = list(range(ncols))
    for r in range(nrows):
        pc: Optional[int] = None
        while True:
            entries = [(abs(top[r][j]), -j) for j in open_cols if top[r][j] != 0]
            if not entries:
                pc = None
                break
            pc = -min(entries)[1]
            piv = top[r][pc]
            dirty = False
            for k in open_cols:
                if k != pc and top[r][k]:
                    col_add(k, pc, -(top[r][k] // piv))
                    dirty = dirty or top[r][k] != 0
            if dirty:
                continue
            for i in range(r + 1, nrows):
                if top[i][pc]:
                    row_add(i, r, -(top[i][pc] // piv))
                    if top[i][pc]:
                        # remainder left: bring that row up and continue the Euclid steps there
                        top[r], top[i] = top[i], top[r]
                        rhs[r], rhs[i] = rhs[i], rhs[r]
                        dirty = True
                        break
            if not dirty:
                break
        if pc is None:
            continue
        if top[r][pc] < 0:
            top[r] = [-a for a in top[r]]
            rhs[r] = -rhs[r]
        diag.append((r, pc))
        open_cols.remove(pc)

    pivot_rows = {rr for rr, _ in diag}
    for i in range(nrows):
        if i not in pivot_rows:
            if any(top[i]):
                raise AssertionError("row left undiagonalized")
            if rhs[i].dcoeff == 0 and rhs[i].constant != 0:
                raise NoIntegerSolution(f"equation 0 = {render_rational(rhs[i].constant)}")
            if rhs[i].dcoeff != 0:
                conditions.append(rhs[i])
    fixed = {c: rhs[rr].scale(Fraction(1, top[rr][c])) for rr, c in diag}
    for f in fixed.values():
        if not _ever_integral(f):
            raise NoIntegerSolution(f"{_render_expr((), (), f)} is not an integer for any integer d")
    free = tuple(j for j in range(ncols) if j not in fixed)
    expr = []
    for i in range(ncols):
        coeffs = tuple(rec[i][j] for j in free)
        off = AffineForm.const(0)
        for k, f in fixed.items():
            if rec[i][k]:
                off = off + f.scale(rec[i][k])
        expr.append((coeffs, off))
    return ParametricIntSolution(
        t.names, fixed, free, tuple(expr), tuple(tuple(r_) for r_ in rec), tuple(conditions)
    )


# --- bounds -------------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    params: tuple[Interval, ...]
    variables: tuple[Interval, ...]
    empty: bool = False


def _floor(x: Fraction) -> int:
    return math.floor(x)


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def _propagate(
    rows: Sequence[tuple[Sequence[Fraction], Fraction]],
    lo: list[Optional[Fraction]],
    hi: list[Optional[Fraction]],
    integral: Sequence[bool],
    rounds: int = 60,
) -> bool:
    """Tighten ``lo``/``hi`` in place from rows ``sum(a_j y_j) + c >= 0``; False when empty."""
    for _ in range(rounds):
        changed = False
        for a, c in rows:
            for j, aj in enumerate(a):
                if aj == 0:
                    continue
                # aj*y_j >= -c - max(sum of other terms)
                top = c
                ok = True
                for k, ak in enumerate(a):
                    if k == j or ak == 0:
                        continue
                    b = hi[k] if ak > 0 else lo[k]
                    if b is None:
                        ok = False
                        break
                    top += ak * b
                if not ok:
                    continue
                bound = -top / aj
                if aj > 0:
                    if integral[j]:
                        bound = Fraction(_ceil(bound))
                    if lo[j] is None or bound > lo[j]:
                        lo[j] = bound
                        changed = True
                else:
                    if integral[j]:
                        bound = Fraction(_floor(bound))
                    if hi[j] is None or bound < hi[j]:
                        hi[j] = bound
                        changed = True
                if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
                    return False
        if not changed:
            return True
    return True


def _rows_in_params(sol: ParametricIntSolution, d: Optional[int]) -> list[tuple[list[Fraction], Fraction]]:
    """Nonnegativity rows over the free parameters (plus d as a last unknown when ``d`` is None)."""
    out = []
    for coeffs, off in sol.expr:
        a = [Fraction(c) for c in coeffs]
        if d is None:
            out.append((a + [off.dcoeff], off.constant))
        else:
            out.append((a, off.at(d)))
    return out


def derive_bounds(sol: ParametricIntSolution, d_cap: int, d_floor: Optional[int] = None) -> Bounds:
    """Integer intervals for the free parameters and the unknowns, given ``d <= d_cap``.

    Uses repeated single-row reasoning on the nonnegativity inequalities; an
    interval end of ``None`` means no bound follows.
    """
    k = len(sol.free)
    lo: list[Optional[Fraction]] = [None] * k + [None if d_floor is None else Fraction(d_floor)]
    hi: list[Optional[Fraction]] = [None] * k + [Fraction(d_cap)]
    rows = _rows_in_params(sol, None)
    ok = _propagate(rows, lo, hi, [True] * (k + 1))
    params = tuple((_opt_int(lo[j]), _opt_int(hi[j])) for j in range(k))
    variables = []
    for a, c in rows:
        vlo, vhi = _interval_of(a, c, lo, hi)
        vlo = Fraction(0) if vlo is None or vlo < 0 else vlo
        variables.append((_ceil(vlo), None if vhi is None else _floor(vhi)))
    return Bounds(params, tuple(variables), not ok)


def _opt_int(x: Optional[Fraction]) -> Optional[int]:
    return None if x is None else int(x)


def _interval_of(a, c, lo, hi) -> tuple[Optional[Fraction], Optional[Fraction]]:
    vlo: Optional[Fraction] = c
    vhi: Optional[Fraction] = c
    for ak, l, h in zip(a, lo, hi):
        if ak == 0:
            continue
        lo_t = l if ak > 0 else h
        hi_t = h if ak > 0 else l
        vlo = None if vlo is None or lo_t is None else vlo + ak * lo_t
        vhi = None if vhi is None or hi_t is None else vhi + ak * hi_t
    return vlo, vhi


# --- enumeration at fixed d ---------------------------------------------------

@dataclass
class _Counter:
    budget: int
    nodes: int = 0
    d: Optional[int] = None

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.nodes, self.d)


def _slice_box(form_rows: list[tuple[list[Fraction], Fraction]], j: int, sense: int, fixed: dict[int, Fraction]) -> Optional[Fraction]:
    """LP bound on parameter j over the slice (used only when propagation leaves it open)."""
    k = len(form_rows[0][0])
    # parameters are free in sign: split u = u+ - u-
    rows = []
    for a, c in form_rows:
        coeffs = []
        for t in range(k):
            v = Fraction(0) if t in fixed else a[t]
            coeffs += [v, -v]
        const = c + sum((a[t] * fixed[t] for t in fixed), Fraction(0))
        rows.append((coeffs, ">=", -const))
    obj = [Fraction(0)] * (2 * k)
    obj[2 * j], obj[2 * j + 1] = Fraction(sense), Fraction(-sense)
    from .lp_model import make_lp

    r = simplex_solve(make_lp("max", obj, rows))
    if r.tag is Status.OPTIMAL:
        return sense * r.value
    return None


def _enumerate(sol: ParametricIntSolution, d: int, counter: _Counter) -> Optional[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """First parameter vector (largest values first) making every unknown nonnegative at ``d``."""
    rows = _rows_in_params(sol, d)
    k = len(sol.free)
    if k == 0:
        vals = sol.values(d, ())
        return ((), vals) if all(v >= 0 for v in vals) else None
    lo: list[Optional[Fraction]] = [None] * k
    hi: list[Optional[Fraction]] = [None] * k

    def search(depth: int, lo: list, hi: list) -> Optional[tuple[int, ...]]:
        counter.tick()
        lo, hi = lo[:], hi[:]
        if not _propagate(rows, lo, hi, [True] * k):
            return None
        if depth == k:
            return tuple(int(v) for v in lo)
        fixed = {t: lo[t] for t in range(depth)}
        if lo[depth] is None:
            b = _slice_box(rows, depth, -1, fixed)
            if b is None:
                raise BudgetExceeded(counter.nodes, d)
            lo[depth] = Fraction(_ceil(b))
        if hi[depth] is None:
            b = _slice_box(rows, depth, 1, fixed)
            if b is None:
                raise BudgetExceeded(counter.nodes, d)
            hi[depth] = Fraction(_floor(b))
        v = hi[depth]
        while v >= lo[depth]:
            lo2, hi2 = lo[:], hi[:]
            lo2[depth] = hi2[depth] = v
            got = search(depth + 1, lo2, hi2)
            if got is not None:
                return got
            v -= 1
        return None

    u = search(0, lo, hi)
    if u is None:
        return None
    vals = sol.values(d, u)
    assert all(v >= 0 and v.denominator == 1 for v in vals)
    return u, vals


# --- searches -----------------------------------------------------------------

@dataclass
class _Prepared:
    form: IntegerForm
    table: DioTable
    sol: Optional[ParametricIntSolution]
    d_cap: Optional[int]
    d_floor: Optional[int]
    relaxation: LpOutcome
    gcd: int = 1
    notes: list[str] = field(default_factory=list)


def _prepare(p: LpProblem) -> _Prepared:
    form = integer_form(p)
    q = form.problem
    relax = simplex_solve(q)
    table = DioTable.from_form(form)
    try:
        sol: Optional[ParametricIntSolution] = diagonalize(table)
    except NoIntegerSolution:
        sol = None
    g = math.gcd(*(int(c) for c in q.objective)) or 1
    d_cap = d_floor = None
    if relax.tag is Status.OPTIMAL:
        d_cap = _floor(relax.value)
        low = simplex_solve(LpProblem(Sense.MINIMIZE, q.objective, q.constraints))
        if low.tag is Status.OPTIMAL:
            d_floor = _ceil(low.value)
    return _Prepared(form, table, sol, d_cap, d_floor, relax, g)


def _descend(
    prep: _Prepared,
    budget: int,
    accept: Optional[Callable[[int, tuple[int, ...], tuple[Fraction, ...]], bool]] = None,
) -> LpOutcome:
    form, sol = prep.form, prep.sol
    q = form.problem
    method = "ip-first" if accept is None else "ip-second"
    if sol is None:
        return LpOutcome(Status.INFEASIBLE, info={"method": method, "reason": "the equations have no integer solution"})
    if prep.relaxation.tag is Status.INFEASIBLE:
        return LpOutcome(Status.INFEASIBLE, info={"method": method, "reason": "LP relaxation infeasible"})
    if prep.relaxation.tag is Status.UNBOUNDED:
        return LpOutcome(Status.UNBOUNDED, info={"method": method, "reason": "LP relaxation unbounded"})
    assert prep.d_cap is not None
    counter = _Counter(budget)
    tried: list[int] = []
    d = prep.d_cap - (prep.d_cap % prep.gcd)
    while prep.d_floor is None or d >= prep.d_floor:
        counter.d = d
        if sol.admissible(d):
            tried.append(d)
            hit = _enumerate(sol, d, counter)
            if hit is not None and (accept is None or accept(d, *hit)):
                u, vals = hit
                n = q.n
                x = vals[:n]
                value = form.caller_value(Fraction(d))
                slacks = _caller_slacks(prep, vals)
                info = {
                    "method": method,
                    "d": d,
                    "params": u,
                    "tried": tried,
                    "nodes": counter.nodes,
                    "lp_bound": form.caller_value(prep.relaxation.value),
                }
                return LpOutcome(Status.OPTIMAL, value, x, slacks, info=info)
        d -= prep.gcd
        counter.tick()
    return LpOutcome(
        Status.INFEASIBLE,
        info={"method": method, "reason": "no integer point down to the LP minimum", "tried": tried, "nodes": counter.nodes},
    )


def _caller_slacks(prep: _Prepared, vals: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Slack of each caller row (nonnegative, 0 for equalities), in the caller's own scaling."""
    q = prep.form.problem
    out = []
    it = iter(vals[q.n :])
    for c in q.constraints:
        out.append(next(it) if c.rel is Relation.LE else Fraction(0))
    return tuple(out)


def search_first_method(p: LpProblem, budget: int = DEFAULT_BUDGET) -> LpOutcome:
    """Highest admissible d (from the LP bound downward) with a nonnegative integer point."""
    return _descend(_prepare(p), budget)


# --- eliminating d ------------------------------------------------------------

TabRow = tuple[tuple[Fraction, ...], AffineForm]


@dataclass(frozen=True)
class Elimination:
    pivot: int
    rows: tuple[TabRow, ...]
    ops: tuple[RowOp, ...]

    @property
    def d_free(self) -> tuple[TabRow, ...]:
        return tuple(r for i, r in enumerate(self.rows) if i != self.pivot)


def eliminate_d(rows: Sequence[TabRow]) -> Elimination:
    """Clear d from every row but one, using integer combinations with a pivot row.

    The pivot is the row with the smallest nonzero |d coefficient| (first on
    ties).  A row whose d coefficient is a multiple of the pivot's gets
    ``R_i <- R_i + k R_p``; otherwise it is scaled first so the combination
    stays integral.
    """
    rows = [(tuple(Fraction(a) for a in r), rhs) for r, rhs in rows]
    cands = [(abs(rhs.dcoeff), i) for i, (_, rhs) in enumerate(rows) if rhs.dcoeff != 0]
    if not cands:
        raise ValueError("no row carries d")
    p = min(cands)[1]
    pr, prhs = rows[p]
    ops: list[RowOp] = []
    for i, (r, rhs) in enumerate(rows):
        if i == p or rhs.dcoeff == 0:
            continue
        k = -rhs.dcoeff / prhs.dcoeff
        if k.denominator != 1:
            s = k.denominator
            ops.append(scale(i, s))
            r, rhs = tuple(a * s for a in r), rhs.scale(s)
            k = -rhs.dcoeff / prhs.dcoeff
        ops.append(add_multiple(i, p, k))
        rows[i] = (tuple(a + k * b for a, b in zip(r, pr)), rhs + prhs.scale(k))
    return Elimination(p, tuple(rows), tuple(ops))


def parametric_rows(sol: ParametricIntSolution, negate_positive_d: bool = False) -> tuple[list[str], list[TabRow]]:
    """Rows ``v_i - sum(alpha_ij u_j) = offset_i(d)`` over the columns (unknowns, leftover parameters).

    A free parameter equal to a single unknown (expression ``1 * u_j``) is
    replaced by that unknown, and the then trivial row is dropped.  With
    ``negate_positive_d`` every row whose d coefficient is positive is negated.
    """
    nv = len(sol.names)
    alias: dict[int, int] = {}
    for i, (coeffs, off) in enumerate(sol.expr):
        nz = [j for j, c in enumerate(coeffs) if c]
        if len(nz) == 1 and coeffs[nz[0]] == 1 and off.is_zero() and nz[0] not in alias:
            alias[nz[0]] = i
    extra = [j for j in range(len(sol.free)) if j not in alias]
    cols = list(sol.names) + [f"u{sol.free[j] + 1}" for j in extra]
    out: list[TabRow] = []
    for i, (coeffs, off) in enumerate(sol.expr):
        row = [Fraction(0)] * len(cols)
        row[i] += 1
        for j, c in enumerate(coeffs):
            if not c:
                continue
            slot = alias[j] if j in alias else nv + extra.index(j)
            row[slot] -= c
        if not any(row) and off.is_zero():
            continue
        rhs = off
        if negate_positive_d and rhs.dcoeff > 0:
            row, rhs = [-a for a in row], -rhs
        out.append((tuple(row), rhs))
    return cols, out


def row_residuals(rows: Sequence[TabRow], point: Sequence[Fraction], d: Fraction) -> list[Fraction]:
    return [sum((a * v for a, v in zip(r, point)), Fraction(0)) - rhs.at(d) for r, rhs in rows]


def _column_values(sol: ParametricIntSolution, cols: Sequence[str], vals: Sequence[Fraction]) -> list[Fraction]:
    u = sol.parameters_of(vals)
    out = list(vals)
    for name in cols[len(vals) :]:
        out.append(u[int(name[1:]) - 1])
    return out


def _split_d(rows: Sequence[TabRow]) -> tuple[list[TabRow], list[TabRow]]:
    """(d-free rows, [pivot row]) after eliminating d; all rows are d-free when d is pinned elsewhere."""
    if not any(rhs.dcoeff for _, rhs in rows):
        return list(rows), []
    elim = eliminate_d(rows)
    return list(elim.d_free), [elim.rows[elim.pivot]]


def search_second_method(p: LpProblem, budget: int = DEFAULT_BUDGET) -> LpOutcome:
    """Descent on d where each candidate must also satisfy the d-free primal system.

    The dual LP optimum certifies the answer when its value equals the found d.
    """
    prep = _prepare(p)
    if prep.sol is None:
        return _descend(prep, budget)
    cols, rows = parametric_rows(prep.sol)
    d_free, pivot_rows = _split_d(rows)
    certificate: dict[str, object] = {}

    dual_value: Optional[Fraction] = None
    dual_point: Optional[tuple[Fraction, ...]] = None
    try:
        dual = dual_of(prep.form.problem)
    except Unsupported:
        dual = None
    if dual is not None and prep.relaxation.tag is Status.OPTIMAL:
        dual_form = integer_form(dual)
        dual_sol = diagonalize(DioTable.from_form(dual_form))
        dcols, drows = parametric_rows(dual_sol)
        ddf, dpiv = _split_d(drows)
        r = simplex_solve(dual_form.problem)
        if r.tag is Status.OPTIMAL:
            w = r.x
            surplus = tuple(c.rhs - c.lhs(w) for c in dual_form.problem.constraints)
            point = _column_values(dual_sol, dcols, w + surplus)
            dual_d = dual_form.problem.value(w)
            if not any(row_residuals(ddf + dpiv, point, dual_d)):
                dual_value = dual_form.caller_value(dual_d)
                dual_point = w

    def accept(d: int, u: tuple[int, ...], vals: tuple[Fraction, ...]) -> bool:
        point = _column_values(prep.sol, cols, vals)
        if any(row_residuals(d_free + pivot_rows, point, Fraction(d))):
            return False
        if dual_value is not None and Fraction(d) == dual_value:
            certificate["dual_certified"] = True
            certificate["dual_point"] = dual_point
        return True

    out = _descend(prep, budget, accept)
    out.info.update(certificate)
    out.info.setdefault("dual_certified", False)
    out.info["d_free_rows"] = len(d_free)
    return out


__all__ = [
    "BudgetExceeded",
    "Bounds",
    "DioTable",
    "Elimination",
    "IntegerForm",
    "NoIntegerSolution",
    "ParametricIntSolution",
    "derive_bounds",
    "determinant",
    "diagonalize",
    "eliminate_d",
    "gcd_feasible_d",
    "integer_form",
    "parametric_rows",
    "row_residuals",
    "search_first_method",
    "search_second_method",
]
