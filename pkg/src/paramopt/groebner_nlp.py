"""Polynomial programs via Gröbner bases: the objective becomes ``f(x) - d = 0``.

The system ``f - d``, ``h_j``, ``g_j +/- s_j`` is brought to a reduced lex
Gröbner basis.  When exactly one basis element carries d (linearly), solving
it gives d as a polynomial in a few remaining unknowns; its stationary points,
pushed onto the boundary where they leave the nonnegative orthant, give the
candidate optima.  The other basis elements recover the remaining unknowns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .exact_arith import Number, q, render_rational
from .lp_model import Sense

Mono = tuple[int, ...]
Scalar = Union[int, Fraction]


class DegreeTooHigh(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


class NoCandidate(ValueError):
    pass


# --- polynomials --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Sparse polynomial over ``vars``; lex order follows the position in ``vars``."""

    vars: tuple[str, ...]
    terms: Mapping[Mono, Fraction]

    def __post_init__(self) -> None:
        clean = {m: Fraction(c) for m, c in self.terms.items() if c != 0}
        for m in clean:
            if len(m) != len(self.vars):
                raise ValueError("exponent vector length does not match the variables")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def const(cls, vars: Sequence[str], c: Number) -> "MultiPoly":
        return cls(tuple(vars), {(0,) * len(vars): q(c)})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "MultiPoly":
        vars = tuple(vars)
        m = [0] * len(vars)
        m[vars.index(name)] = 1
        return cls(vars, {tuple(m): Fraction(1)})

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "MultiPoly":
        return cls(tuple(vars), {})

    # arithmetic
    def _lift(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError("polynomials over different variable lists")
            return other
        return MultiPoly.const(self.vars, other)

    def __add__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        o = self._lift(other)
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, Fraction(0)) + c
        return MultiPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Scalar) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            k = q(other)
            return MultiPoly(self.vars, {m: c * k for m, c in self.terms.items()})
        o = self._lift(other)
        t: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, Fraction(0)) + c1 * c2
        return MultiPoly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiPoly) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def leading(self) -> tuple[Mono, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    def monic(self) -> "MultiPoly":
        if self.is_zero():
            return self
        return self * (1 / self.leading()[1])

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, e in zip(self.vars, m) if e}

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((m[i] for m in self.terms), default=0)

    def reorder(self, vars: Sequence[str]) -> "MultiPoly":
        vars = tuple(vars)
        used = self.variables()
        if not used <= set(vars):
            raise ValueError(f"variables {sorted(used - set(vars))} missing from the new order")
        idx = [self.vars.index(v) if v in self.vars else None for v in vars]
        t = {tuple(0 if i is None else m[i] for i in idx): c for m, c in self.terms.items()}
        return MultiPoly(vars, t)

    def derivative(self, name: str) -> "MultiPoly":
        i = self.vars.index(name)
        t: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                t[tuple(mm)] = t.get(tuple(mm), Fraction(0)) + c * m[i]
        return MultiPoly(self.vars, t)

    def substitute(self, values: Mapping[str, Union[Fraction, int, "MultiPoly"]]) -> "MultiPoly":
        out = MultiPoly.zero(self.vars)
        for m, c in self.terms.items():
            term = MultiPoly.const(self.vars, c)
            for v, e in zip(self.vars, m):
                if not e:
                    continue
                if v in values:
                    val = values[v]
                    base = val if isinstance(val, MultiPoly) else MultiPoly.const(self.vars, val)
                else:
                    base = MultiPoly.var(self.vars, v)
                term = term * base**e
            out = out + term
        return out

    def evaluate(self, values: Union[Mapping[str, Fraction], Sequence[Fraction]]) -> Fraction:
        if not isinstance(values, Mapping):
            values = dict(zip(self.vars, values))
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(self.vars, m):
                if e:
                    t *= Fraction(values[v]) ** e
            total += t
        return total

    def linear_in(self, name: str) -> Optional[tuple[Fraction, "MultiPoly"]]:
        """``(a, rest)`` with ``self = a*name + rest``, a constant and rest free of ``name``."""
        i = self.vars.index(name)
        a = Fraction(0)
        rest: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                rest[m] = c
            elif m[i] == 1 and sum(m) == 1:
                a = c
            else:
                return None
        if a == 0:
            return None
        return a, MultiPoly(self.vars, rest)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, m) if e)
            mag = abs(c)
            if not mono:
                body = render_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{render_rational(mag)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self) -> str:
        return self.render()


def eval_float(g: MultiPoly, x: Sequence[float]) -> float:
    total = 0.0
    for m, c in g.terms.items():
        t = float(c)
        for v, e in zip(x, m):
            if e:
                t *= v**e
        total += t
    return total


def linear_part(g: MultiPoly) -> Optional[tuple[tuple[Fraction, ...], Fraction]]:
    """``(coefficients, constant)`` when ``g`` has degree at most one, else None."""
    if g.degree > 1:
        return None
    n = len(g.vars)
    coeffs = [Fraction(0)] * n
    const = Fraction(0)
    for m, c in g.terms.items():
        if sum(m) == 0:
            const = c
        else:
            coeffs[m.index(1)] = c
    return tuple(coeffs), const


# --- division and Buchberger --------------------------------------------------

def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_poly(vars: tuple[str, ...], m: Mono, c: Fraction) -> MultiPoly:
    return MultiPoly(vars, {m: c})


def normal_form(p: MultiPoly, G: Sequence[MultiPoly]) -> MultiPoly:
    """Remainder of ``p`` under multivariate division by ``G`` (lex on the shared variable order)."""
    G = [g for g in G if not g.is_zero()]
    if not G:
        raise ValueError("divisor set is empty")
    leads = [g.leading() for g in G]
    rem: dict[Mono, Fraction] = {}
    work = dict(p.terms)
    vars = p.vars
    while work:
        m = max(work)
        c = work[m]
        for g, (lm, lc) in zip(G, leads):
            if _divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                k = c / lc
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    v = work.get(t, Fraction(0)) - k * gc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
    return MultiPoly(vars, rem)


def s_polynomial(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    fm, fc = f.leading()
    gm, gc = g.leading()
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    a = _mono_poly(f.vars, tuple(x - y for x, y in zip(lcm, fm)), 1 / fc)
    b = _mono_poly(f.vars, tuple(x - y for x, y in zip(lcm, gm)), 1 / gc)
    return a * f - b * g


def buchberger(F: Iterable[MultiPoly]) -> list[MultiPoly]:
    """Reduced (monic, inter-reduced) lex Gröbner basis, sorted by leading term, highest first."""
    G = [f.monic() for f in F if not f.is_zero()]
    if not G:
        raise ValueError("need at least one nonzero polynomial")
    vars = G[0].vars
    if any(g.vars != vars for g in G):
        raise ValueError("polynomials over different variable lists")
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        i, j = pairs.pop(0)
        mi, mj = G[i].leading()[0], G[j].leading()[0]
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue  # coprime leading terms: the S-polynomial reduces to zero
        lcm = tuple(max(a, b) for a, b in zip(mi, mj))
        if any(
            k not in (i, j)
            and _divides(G[k].leading()[0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        h = normal_form(s_polynomial(G[i], G[j]), G)
        if not h.is_zero():
            G.append(h.monic())
            pairs.extend((k, len(G) - 1) for k in range(len(G) - 1))
    return _reduce_basis(G)


def _reduce_basis(G: list[MultiPoly]) -> list[MultiPoly]:
    G = sorted(G, key=lambda g: g.leading()[0])
    minimal: list[MultiPoly] = []
    for idx, g in enumerate(G):
        lm = g.leading()[0]
        if any(_divides(h.leading()[0], lm) for h in minimal) or any(
            _divides(h.leading()[0], lm) and h.leading()[0] != lm for h in G[idx + 1 :]
        ):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = normal_form(g, others) if others else g
        out.append(r.monic())
    return sorted(out, key=lambda g: g.leading()[0], reverse=True)


def is_groebner(G: Sequence[MultiPoly]) -> bool:
    return all(normal_form(s_polynomial(f, g), G).is_zero() for f, g in itertools.combinations(G, 2))


# --- problems -----------------------------------------------------------------

@dataclass(frozen=True)
class NlpProblem:
    """``sense f(x)`` subject to ``h(x) = 0`` and ``g(x) <= 0`` / ``g(x) >= 0``; every x >= 0.

    All polynomials are over ``names``.
    """

    sense: Sense
    names: tuple[str, ...]
    objective: MultiPoly
    equalities: tuple[MultiPoly, ...] = ()
    inequalities: tuple[tuple[MultiPoly, str], ...] = ()

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def slack_names(self) -> tuple[str, ...]:
        return tuple(f"s{i + 1}" for i in range(len(self.inequalities)))

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return self.objective.evaluate(x)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in x):
            return False
        if any(h.evaluate(x) != 0 for h in self.equalities):
            return False
        for g, rel in self.inequalities:
            v = g.evaluate(x)
            if (rel == "<=" and v > 0) or (rel == ">=" and v < 0):
                return False
        return True


def default_order(p: NlpProblem) -> tuple[str, ...]:
    """Problem variables (last-declared highest), then slacks in order, then d."""
    return tuple(reversed(p.names)) + p.slack_names + ("d",)


def build_nlp_system(p: NlpProblem, order: Optional[Sequence[str]] = None) -> list[MultiPoly]:
    """``f - d``, each ``h_j``, and ``g_j + s_j`` (for <=) or ``g_j - s_j`` (for >=)."""
    for poly in [p.objective, *p.equalities, *(g for g, _ in p.inequalities)]:
        if poly.degree > 2:
            raise DegreeTooHigh(f"degree {poly.degree} > 2 in {poly}")
    order = tuple(order) if order else default_order(p)
    lift = lambda g: g.reorder(order)  # noqa: E731
    out = [lift(p.objective) - MultiPoly.var(order, "d")]
    out += [lift(h) for h in p.equalities]
    for (g, rel), s in zip(p.inequalities, p.slack_names):
        sv = MultiPoly.var(order, s)
        if rel == "<=":
            out.append(lift(g) + sv)
        elif rel == ">=":
            out.append(lift(g) - sv)
        else:
            raise ValueError(f"unknown relation {rel!r}")
    return out


# --- optimizing d -------------------------------------------------------------

@dataclass
class NlpCandidate:
    d: Fraction
    values: dict[str, Fraction]
    zeroed: tuple[str, ...]
    order: tuple[str, ...]
    feasible: bool


@dataclass
class NlpResult:
    d: Fraction
    values: dict[str, Fraction]
    basis: list[MultiPoly]
    order: tuple[str, ...]
    candidates: list[NlpCandidate] = field(default_factory=list)
    info: dict[str, object] = field(default_factory=dict)


def d_element(G: Sequence[MultiPoly]) -> tuple[int, MultiPoly]:
    """Index of the single element carrying d and ``phi`` with ``d = phi`` on the variety."""
    hits = [i for i, g in enumerate(G) if "d" in g.variables()]
    if len(hits) != 1:
        raise UnsupportedShape(f"d appears in {len(hits)} basis elements")
    g = G[hits[0]]
    lin = g.linear_in("d")
    if lin is None:
        raise UnsupportedShape("d appears nonlinearly")
    a, rest = lin
    return hits[0], rest * (-1 / a)


def _shaped(G: Sequence[MultiPoly]) -> Optional[tuple[int, MultiPoly]]:
    """d-element when d sits in one element and phi's unknowns are not tied by another element."""
    try:
        k, phi = d_element(G)
    except UnsupportedShape:
        return None
    V = phi.variables()
    for i, g in enumerate(G):
        if i != k and g.variables() and g.variables() <= V:
            return None
    return k, phi


def _orders(base: tuple[str, ...], slacks: Sequence[str]) -> Iterable[tuple[str, ...]]:
    xs = [v for v in base if v != "d" and v not in slacks]
    yield base
    seen = {base}
    for perm in itertools.permutations(slacks):
        for o in (tuple(xs) + ("d",) + perm, tuple(xs) + perm + ("d",)):
            if o not in seen:
                seen.add(o)
                yield o
    for xp in (tuple(reversed(xs)),):
        for perm in itertools.permutations(slacks):
            for o in (xp + perm + ("d",), xp + ("d",) + perm):
                if o not in seen:
                    seen.add(o)
                    yield o


def shaped_basis(F: Sequence[MultiPoly], slacks: Sequence[str] = ()) -> tuple[list[MultiPoly], tuple[str, ...], int, MultiPoly]:
    """First variable order (default first) whose reduced basis has the single-d shape."""
    base = F[0].vars
    for order in _orders(base, [s for s in slacks if s in base]):
        G = buchberger([f.reorder(order) for f in F])
        if len(G) == 1 and G[0].degree == 0:
            raise NoCandidate("the system is inconsistent")
        got = _shaped(G)
        if got is not None:
            return G, order, got[0], got[1]
    raise UnsupportedShape("no variable order puts d in a single linear basis element")


def _solve_linear(rows: list[list[Fraction]], nvars: int) -> Optional[list[Fraction]]:
    """Unique solution of ``rows`` (augmented), or None if singular or inconsistent."""
    A = [r[:] for r in rows]
    piv_cols = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    if len(piv_cols) < nvars:
        return None
    if any(all(x == 0 for x in row[:nvars]) and row[nvars] != 0 for row in A):
        return None
    return [A[i][nvars] for i in range(nvars)]


def _stationary(phi: MultiPoly, sense: Sense, nonneg: set[str], zeroed: dict[str, Fraction]) -> Optional[dict[str, Fraction]]:
    """Values for phi's unknowns: sign rule, stationarity, then fixing at zero when forbidden."""
    phi = phi.substitute(zeroed) if zeroed else phi
    free = [v for v in phi.vars if v in phi.variables()]
    if not free:
        return dict(zeroed)
    up = sense is Sense.MAXIMIZE
    # unknowns that appear only linearly and push d the wrong way sit at zero
    for v in free:
        lin = phi.linear_in(v)
        if lin is not None and v in nonneg and ((lin[0] < 0) if up else (lin[0] > 0)):
            return _stationary(phi, sense, nonneg, {**zeroed, v: Fraction(0)})
    grads = [phi.derivative(v) for v in free]
    rows = []
    for g in grads:
        lin = linear_part(g)
        assert lin is not None
        coeffs, const = lin
        rows.append([coeffs[phi.vars.index(v)] for v in free] + [-const])
    sol = _solve_linear(rows, len(free))
    if sol is None:
        victim = _singular_victim(grads, free, phi.vars, nonneg) or free[0]
        return _stationary(phi, sense, nonneg, {**zeroed, victim: Fraction(0)})
    neg = [(val, v) for v, val in zip(free, sol) if v in nonneg and val < 0]
    if neg:
        victim = min(neg)[1]
        return _stationary(phi, sense, nonneg, {**zeroed, victim: Fraction(0)})
    out = dict(zeroed)
    out.update(zip(free, sol))
    return out


def _singular_victim(grads: Sequence[MultiPoly], free: Sequence[str], vars: tuple[str, ...], nonneg: set[str]) -> Optional[str]:
    """An unknown whose own stationarity equation forces a negative value for every nonnegative rest."""
    for v, g in zip(free, grads):
        if v not in nonneg:
            continue
        lin = g.linear_in(v)
        if lin is None:
            continue
        a, rest = lin
        # v = -rest / a
        sol = rest * (-1 / a)
        lp = linear_part(sol)
        if lp is None:
            continue
        coeffs, const = lp
        if const < 0 and all(c <= 0 for c, name in zip(coeffs, vars) if c and name in nonneg) and all(
            c == 0 for c, name in zip(coeffs, vars) if name not in nonneg
        ):
            return v
    return None


def _back_substitute(G: Sequence[MultiPoly], skip: int, values: dict[str, Fraction], order: tuple[str, ...]) -> Optional[dict[str, Fraction]]:
    vals = dict(values)
    pending = [g for i, g in enumerate(G) if i != skip]
    while True:
        progress = False
        for g in list(pending):
            unknown = [v for v in g.variables() if v not in vals and v != "d"]
            if not unknown:
                pending.remove(g)
                if "d" not in g.variables() and g.evaluate({**{v: Fraction(0) for v in g.vars}, **vals}) != 0:
                    return None
                progress = True
                continue
            if len(unknown) == 1:
                lin = g.linear_in(unknown[0])
                if lin is not None:
                    a, rest = lin
                    known = {**{v: Fraction(0) for v in g.vars}, **vals}
                    vals[unknown[0]] = -rest.evaluate(known) / a
                    pending.remove(g)
                    progress = True
        if not pending:
            break
        if not progress:
            # an unknown no element pins down: place it at zero
            left = [v for v in reversed(order) if v != "d" and v not in vals and any(v in g.variables() for g in pending)]
            if not left:
                return None
            vals[left[0]] = Fraction(0)
    for v in order:
        if v != "d" and v not in vals:
            vals[v] = Fraction(0)
    return vals


def _candidate(F: Sequence[MultiPoly], sense: Sense, nonneg: set[str], slacks: Sequence[str], zeroed: tuple[str, ...]) -> Optional[NlpCandidate]:
    vars = F[0].vars
    system = list(F) + [MultiPoly.var(vars, v) for v in zeroed]
    try:
        G, order, k, phi = shaped_basis(system, slacks)
    except (NoCandidate, UnsupportedShape):
        return None
    phi_vals = _stationary(phi, sense, nonneg, {})
    if phi_vals is None:
        return None
    vals = _back_substitute(G, k, phi_vals, order)
    if vals is None:
        return None
    d = phi.evaluate({**{v: Fraction(0) for v in phi.vars}, **vals})
    full = {**vals, "d": d}
    feasible = all(full[v] >= 0 for v in nonneg if v in full) and all(f.reorder(order).evaluate(full) == 0 for f in F)
    return NlpCandidate(d, {v: full[v] for v in vars if v != "d"}, zeroed, order, feasible)


def optimize_parametric(
    F: Sequence[MultiPoly],
    sense: Sense,
    nonneg: Optional[Iterable[str]] = None,
    slacks: Sequence[str] = (),
    max_zeroed: int = 2,
) -> NlpResult:
    """Best feasible candidate over the basis of ``F`` and of ``F`` with up to ``max_zeroed`` unknowns set to 0.

    ``F`` may be the raw system or a basis of it; every polynomial must share
    one variable list containing ``d``.  ``nonneg`` defaults to every unknown but d.
    """
    F = list(F)
    if not F:
        raise ValueError("empty system")
    vars = F[0].vars
    if "d" not in vars:
        raise UnsupportedShape("the system has no d")
    nn = set(nonneg) if nonneg is not None else {v for v in vars if v != "d"}
    slacks = tuple(slacks) or tuple(v for v in vars if v.startswith("s") and v[1:].isdigit())
    G0, order0, _, _ = shaped_basis(F, slacks)
    cands: list[NlpCandidate] = []
    pool = [v for v in vars if v in nn]
    for size in range(max_zeroed + 1):
        for zeroed in itertools.combinations(pool, size):
            c = _candidate(F, sense, nn, slacks, zeroed)
            if c is not None:
                cands.append(c)
    good = [c for c in cands if c.feasible]
    if not good:
        raise NoCandidate("no feasible stationary or boundary candidate")
    pick = max if sense is Sense.MAXIMIZE else min
    best = pick(good, key=lambda c: c.d)
    return NlpResult(best.d, best.values, G0, order0, cands, {"zeroed": best.zeroed, "order": best.order})


def solve_nlp(p: NlpProblem, verify: bool = False, grid_points: int = 41) -> NlpResult:
    """Build the slack system, optimize d, and report x, slacks and (optionally) the grid check."""
    F = build_nlp_system(p)
    res = optimize_parametric(F, p.sense, slacks=p.slack_names)
    x = tuple(res.values[v] for v in p.names)
    if not p.is_feasible(x) or p.value(x) != res.d:
        raise AssertionError("optimizer returned an assignment that fails the original problem")
    res.info["x"] = x
    res.info["slacks"] = tuple(res.values[s] for s in p.slack_names)
    if verify:
        from .oracle import grid_nlp

        val, pt = grid_nlp(p, points=grid_points, cap=_grid_cap(x))
        res.info["grid_value"] = val
        res.info["grid_point"] = pt
        res.info["verified"] = abs(val - float(res.d)) <= 1e-6 * max(1.0, abs(float(res.d)))
    return res


def _grid_cap(x: Sequence[Fraction]) -> float:
    return max(10.0, 4.0 * max((float(v) for v in x), default=0.0))


def make_nlp(
    sense: Union[str, Sense],
    names: Sequence[str],
    objective: Union[str, MultiPoly],
    equalities: Sequence[Union[str, MultiPoly]] = (),
    inequalities: Sequence[tuple[Union[str, MultiPoly], str, Union[str, MultiPoly, Number]]] = (),
) -> NlpProblem:
    """``make_nlp("min", ["x1", "x2"], "x1^2 - x2", ["x1 + x2 - 6"], [("x1", ">=", 1)])``.

    Inequalities are ``(lhs, rel, rhs)`` and are stored as ``lhs - rhs`` against 0.
    """
    from .model_io import parse_poly

    if isinstance(sense, str):
        sense = Sense.MAXIMIZE if sense.lower().startswith("max") else Sense.MINIMIZE
    names = tuple(names)

    def P(e: Union[str, MultiPoly, Number]) -> MultiPoly:
        if isinstance(e, MultiPoly):
            return e.reorder(names)
        if isinstance(e, str):
            return parse_poly(e, names)
        return MultiPoly.const(names, e)

    ineq = tuple((P(lhs) - P(rhs), rel) for lhs, rel, rhs in inequalities)
    return NlpProblem(sense, names, P(objective), tuple(P(h) for h in equalities), ineq)


__all__ = [
    "DegreeTooHigh",
    "MultiPoly",
    "NlpCandidate",
    "NlpProblem",
    "NlpResult",
    "NoCandidate",
    "UnsupportedShape",
    "buchberger",
    "build_nlp_system",
    "d_element",
    "default_order",
    "eval_float",
    "is_groebner",
    "linear_part",
    "make_nlp",
    "normal_form",
    "optimize_parametric",
    "s_polynomial",
    "shaped_basis",
    "solve_nlp",
]
