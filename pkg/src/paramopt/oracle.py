"""Independent reference solvers used to check the parametric methods.

* ``simplex_solve``: two-phase exact simplex with Bland's smallest-index rule.
* ``brute_force_ip``: exhaustive enumeration of an integer box.
* ``grid_nlp``: coarse-to-fine grid search for small polynomial programs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Optional, Sequence

from .lp_model import LpProblem, Relation, Sense
from .outcome import LpOutcome, Status

if TYPE_CHECKING:
    from .groebner_nlp import NlpProblem


class BoxUnbounded(ValueError):
    pass


class UnboundedRegion(ValueError):
    pass


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    p = T[r][c]
    if p != 1:
        T[r] = [v / p for v in T[r]]
    pr = T[r]
    for i, row in enumerate(T):
        f = row[c]
        if i != r and f != 0:
            T[i] = [a - f * b for a, b in zip(row, pr)]


def _bland(T: list[list[Fraction]], basis: list[int], obj: int, allowed: int) -> bool:
    """Maximize row ``obj`` (stored as reduced profits).  False if unbounded."""
    rows = [i for i in range(len(T)) if i != obj and i < len(basis)]
    while True:
        enter = next((j for j in range(allowed) if T[obj][j] > 0), None)
        if enter is None:
            return True
        best: Optional[tuple[Fraction, int, int]] = None
        for i in rows:
            a = T[i][enter]
            if a > 0:
                key = (T[i][-1] / a, basis[i], i)
                if best is None or key < best:
                    best = key
        if best is None:
            return False
        r = best[2]
        _pivot(T, r, enter)
        basis[r] = enter


def simplex_solve(p: LpProblem) -> LpOutcome:
    n = p.n
    # rows normalized to nonnegative rhs
    rows = []
    for c in p.constraints:
        a, rel, b = list(c.coeffs), c.rel, c.rhs
        if b < 0:
            a, rel, b = [-v for v in a], rel.flip(), -b
        rows.append((a, rel, b))
    nslack = sum(1 for _, rel, _ in rows if rel is not Relation.EQ)
    nart = sum(1 for _, rel, _ in rows if rel is not Relation.LE)
    width = n + nslack + nart
    T: list[list[Fraction]] = []
    basis: list[int] = []
    slack_of: list[Optional[int]] = []  # slack column; flipping a row keeps its slack value
    sc, ac = n, n + nslack
    for a, rel, b in rows:
        row = a + [Fraction(0)] * (nslack + nart) + [b]
        if rel is Relation.LE:
            row[sc] = Fraction(1)
            basis.append(sc)
        else:
            if rel is Relation.GE:
                row[sc] = Fraction(-1)
            row[ac] = Fraction(1)
            basis.append(ac)
            ac += 1
        if rel is Relation.EQ:
            slack_of.append(None)
        else:
            slack_of.append(sc)
            sc += 1
        T.append(row)

    # phase 1: maximize -(sum of artificials)
    w = [Fraction(0)] * (width + 1)
    for i, bv in enumerate(basis):
        if bv >= n + nslack:
            w = [x + y for x, y in zip(w, T[i])]
    for j in range(n + nslack, width):
        w[j] = Fraction(0)
    T.append(w)
    _bland(T, basis, len(T) - 1, width)
    if T[-1][-1] != 0:
        return LpOutcome(Status.INFEASIBLE, info={"method": "simplex"})
    T.pop()
    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n + nslack:
            j = next((j for j in range(n + nslack) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, j)
            basis[i] = j
        i += 1
    T = [r[: n + nslack] + [r[-1]] for r in T]

    sign = 1 if p.sense is Sense.MAXIMIZE else -1
    z = [sign * c for c in p.objective] + [Fraction(0)] * (nslack + 1)
    for i, bv in enumerate(basis):
        f = z[bv]
        if f != 0:
            z = [a - f * b for a, b in zip(z, T[i])]
    T.append(z)
    if not _bland(T, basis, len(T) - 1, n + nslack):
        return LpOutcome(Status.UNBOUNDED, info={"method": "simplex"})
    vals = [Fraction(0)] * (n + nslack)
    for i, bv in enumerate(basis):
        vals[bv] = T[i][-1]
    x = tuple(vals[:n])
    slacks = tuple(
        Fraction(0) if s is None else vals[s] for s in slack_of
    )
    return LpOutcome(
        Status.OPTIMAL,
        p.value(x),
        x,
        slacks,
        info={"method": "simplex", "basis": tuple(basis), "reduced": tuple(T[-1][:-1])},
    )


def row_slacks(p: LpProblem, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Nonnegative slack/surplus of each row at ``x`` (0 for equality rows)."""
    out = []
    for c in p.constraints:
        v = c.lhs(x)
        out.append(c.rhs - v if c.rel is Relation.LE else v - c.rhs if c.rel is Relation.GE else Fraction(0))
    return tuple(out)


def brute_force_ip(p: LpProblem, box: Sequence[tuple[int, int]]) -> LpOutcome:
    """Enumerate every integer point of ``box`` (inclusive bounds per variable)."""
    if len(box) != p.n or any(lo is None or hi is None for lo, hi in box):
        raise BoxUnbounded("every variable needs a finite integer range")
    best: Optional[tuple[Fraction, tuple[Fraction, ...]]] = None
    ranges = [range(max(0, int(lo)), int(hi) + 1) for lo, hi in box]
    better = (lambda a, b: a > b) if p.sense is Sense.MAXIMIZE else (lambda a, b: a < b)
    for pt in itertools.product(*ranges):
        x = tuple(Fraction(v) for v in pt)
        if all(c.holds(x) for c in p.constraints):
            v = p.value(x)
            if best is None or better(v, best[0]):
                best = (v, x)
    if best is None:
        return LpOutcome(Status.INFEASIBLE, info={"method": "ip-brute"})
    return LpOutcome(Status.OPTIMAL, best[0], best[1], row_slacks(p, best[1]), info={"method": "ip-brute"})


def lp_box(p: LpProblem) -> list[tuple[int, int]]:
    """Integer box from the LP bound of each variable (maximize x_i over the feasible set)."""
    box = []
    for i in range(p.n):
        e = [Fraction(0)] * p.n
        e[i] = Fraction(1)
        r = simplex_solve(LpProblem(Sense.MAXIMIZE, tuple(e), p.constraints))
        if r.tag is Status.UNBOUNDED:
            raise BoxUnbounded(f"variable {p.names[i]} is unbounded")
        if r.tag is not Status.OPTIMAL:
            return [(0, -1)] * p.n
        box.append((0, int(r.value // 1)))
    return box


# --- numeric NLP search -------------------------------------------------------

def grid_nlp(
    p: "NlpProblem",
    points: int = 41,
    rounds: int = 8,
    cap: float | None = None,
    feas_tol: float = 1e-9,
) -> tuple[float, tuple[float, ...]]:
    """Grid search with successive refinement around the incumbent.

    Equality constraints are eliminated numerically: the last variable with a
    nonzero linear coefficient in each equality is solved for, so the grid
    only ranges over the remaining free variables.  Returns (value, point).
    """
    from .groebner_nlp import eval_float

    nv = p.nvars
    lo, hi = _nlp_box(p, cap)
    solved = _equality_solvers(p)
    free = [i for i in range(nv) if i not in solved]
    sign = 1.0 if p.sense is Sense.MAXIMIZE else -1.0

    def complete(pt_free: Sequence[float]) -> Optional[list[float]]:
        x = [0.0] * nv
        for i, v in zip(free, pt_free):
            x[i] = v
        for i, fn in solved.items():
            x[i] = fn(x)
        if any(v < -feas_tol for v in x):
            return None
        for g, rel in p.inequalities:
            v = eval_float(g, x)
            if (rel == "<=" and v > feas_tol) or (rel == ">=" and v < -feas_tol):
                return None
        for h in p.equalities:
            if abs(eval_float(h, x)) > 1e-7:
                return None
        return x

    best: Optional[tuple[float, list[float]]] = None
    bounds = [(lo[i], hi[i]) for i in free]
    for _ in range(rounds + 1):
        axes = [
            [a + (b - a) * k / (points - 1) for k in range(points)] if b > a else [a]
            for a, b in bounds
        ]
        for pt in itertools.product(*axes):
            x = complete(pt)
            if x is None:
                continue
            val = sign * eval_float(p.objective, x)
            if best is None or val > best[0]:
                best = (val, x)
        if best is None:
            raise UnboundedRegion("no feasible grid point found")
        new = []
        for (a, b), i in zip(bounds, free):
            step = (b - a) / (points - 1) if points > 1 else 0.0
            c = best[1][i]
            new.append((max(lo[i], c - 2 * step), min(hi[i], c + 2 * step)))
        bounds = new
    assert best is not None
    return sign * best[0], tuple(best[1])


def _nlp_box(p: "NlpProblem", cap: float | None) -> tuple[list[float], list[float]]:
    """Per-variable [0, ub] from linear rows with nonnegative coefficients, else ``cap``."""
    from .groebner_nlp import linear_part

    nv = p.nvars
    ub: list[Optional[float]] = [None] * nv
    rows = [(g, "<=") for g, rel in p.inequalities if rel == "<="]
    rows += [(g, "=") for g in p.equalities]
    for g, _ in rows:
        lin = linear_part(g)
        if lin is None:
            # x_i^2 terms with positive weights also bound each variable
            sq = _square_bound(g, nv)
            for i, v in sq.items():
                ub[i] = v if ub[i] is None else min(ub[i], v)
            continue
        coeffs, const = lin
        if all(c >= 0 for c in coeffs) and const <= 0:
            for i, c in enumerate(coeffs):
                if c > 0:
                    v = float(-const / c)
                    ub[i] = v if ub[i] is None else min(ub[i], v)
    hi = []
    for i, v in enumerate(ub):
        if v is None:
            if cap is None:
                raise UnboundedRegion(f"variable {p.names[i]} has no derivable bound")
            v = cap
        hi.append(v)
    return [0.0] * nv, hi


def _square_bound(g, nv: int) -> dict[int, float]:
    """Bounds from rows of shape sum a_i x_i^2 + const <= 0 with a_i > 0."""
    out: dict[int, float] = {}
    const = 0.0
    sq: dict[int, float] = {}
    for mono, c in g.terms.items():
        if sum(mono) == 0:
            const = float(c)
        elif sum(mono) == 2 and max(mono) == 2:
            sq[mono.index(2)] = float(c)
        else:
            return {}
    if const < 0 and sq and all(a > 0 for a in sq.values()):
        for i, a in sq.items():
            out[i] = (-const / a) ** 0.5
    return out


def _equality_solvers(p: "NlpProblem") -> dict[int, Callable[[list[float]], float]]:
    from .groebner_nlp import linear_part

    solved: dict[int, Callable[[list[float]], float]] = {}
    for h in p.equalities:
        lin = linear_part(h)
        if lin is None:
            continue
        coeffs, const = lin
        idx = next((i for i in reversed(range(len(coeffs))) if coeffs[i] != 0 and i not in solved), None)
        if idx is None:
            continue
        cs = [float(c) for c in coeffs]
        k = float(const)

        def fn(x: list[float], idx: int = idx, cs: list[float] = cs, k: float = k) -> float:
            return -(k + sum(c * v for j, (c, v) in enumerate(zip(cs, x)) if j != idx)) / cs[idx]

        solved[idx] = fn
    return solved
