"""LP problem types, standard form, duals and constraint reordering."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .exact_arith import AffineForm, Number, ParamMatrix, q


class Sense(Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"

    def flip(self) -> "Sense":
        return Sense.MINIMIZE if self is Sense.MAXIMIZE else Sense.MAXIMIZE


class Relation(Enum):
    LE = "<="
    GE = ">="
    EQ = "="

    def flip(self) -> "Relation":
        return {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}[self]


class MixedRelations(ValueError):
    pass


class Unsupported(ValueError):
    pass


class BadPermutation(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: Relation
    rhs: Fraction

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, x)), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        if self.rel is Relation.LE:
            return v <= self.rhs
        if self.rel is Relation.GE:
            return v >= self.rhs
        return v == self.rhs


@dataclass(frozen=True)
class LpProblem:
    sense: Sense
    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    integrality: tuple[bool, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.objective)
        if n < 1 or not self.constraints:
            raise ValueError("need at least one variable and one constraint")
        if any(len(c.coeffs) != n for c in self.constraints):
            raise ValueError("every constraint row must have one coefficient per variable")
        if not self.integrality:
            object.__setattr__(self, "integrality", (False,) * n)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(n)))
        if len(self.integrality) != n or len(self.names) != n:
            raise ValueError("integrality and names must match the variable count")

    @property
    def n(self) -> int:
        return len(self.objective)

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def A(self) -> list[tuple[Fraction, ...]]:
        return [c.coeffs for c in self.constraints]

    @property
    def b(self) -> list[Fraction]:
        return [c.rhs for c in self.constraints]

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        return all(v >= 0 for v in x) and all(c.holds(x) for c in self.constraints)


def make_lp(
    sense: str | Sense,
    objective: Iterable[Number],
    rows: Iterable[tuple[Iterable[Number], str | Relation, Number]],
    integer: bool | Sequence[bool] = False,
    names: Sequence[str] = (),
) -> LpProblem:
    """Convenience constructor: ``make_lp("max", [1, 1], [([1, 2], "<=", 4), ...])``."""
    if isinstance(sense, str):
        sense = Sense.MAXIMIZE if sense.lower().startswith("max") else Sense.MINIMIZE
    obj = tuple(q(v) for v in objective)
    cons = tuple(
        Constraint(tuple(q(v) for v in a), rel if isinstance(rel, Relation) else Relation(rel), q(r))
        for a, rel, r in rows
    )
    if isinstance(integer, bool):
        integ = (integer,) * len(obj)
    else:
        integ = tuple(integer)
    return LpProblem(sense, obj, cons, integ, tuple(names))


@dataclass(frozen=True)
class StandardForm:
    base: LpProblem
    slack_sign: tuple[int, ...]  # +1 slack, -1 surplus, 0 for equality rows

    @property
    def slack_count(self) -> int:
        return sum(1 for s in self.slack_sign if s != 0)

    @property
    def total_vars(self) -> int:
        return self.base.n + self.slack_count

    def slack_columns(self) -> list[int | None]:
        """Body column holding each row's slack, or None for equality rows."""
        out: list[int | None] = []
        col = self.base.n
        for s in self.slack_sign:
            if s == 0:
                out.append(None)
            else:
                out.append(col)
                col += 1
        return out


def normalize_relations(p: LpProblem) -> LpProblem:
    """Negate rows so a max problem only has <= rows and a min problem only >= rows."""
    want = Relation.LE if p.sense is Sense.MAXIMIZE else Relation.GE
    rows = []
    for c in p.constraints:
        if c.rel is Relation.EQ or c.rel is want:
            rows.append(c)
        else:
            rows.append(Constraint(tuple(-a for a in c.coeffs), want, -c.rhs))
    return replace(p, constraints=tuple(rows))


def to_standard_form(p: LpProblem) -> StandardForm:
    signs = []
    for c in p.constraints:
        if c.rel is Relation.EQ:
            signs.append(0)
        elif p.sense is Sense.MAXIMIZE and c.rel is Relation.LE:
            signs.append(1)
        elif p.sense is Sense.MINIMIZE and c.rel is Relation.GE:
            signs.append(-1)
        else:
            raise MixedRelations(f"{p.sense.value} problem with a {c.rel.value} row; negate it first")
    return StandardForm(p, tuple(signs))


def assemble_augmented(sf: StandardForm) -> ParamMatrix:
    """The matrix ``[[C^T, 0], [A, +-I]]`` with right-hand side ``(d, b)``."""
    p = sf.base
    k = sf.slack_count
    body = [list(p.objective) + [Fraction(0)] * k]
    last = [AffineForm.param()]
    for c, col in zip(p.constraints, sf.slack_columns()):
        row = list(c.coeffs) + [Fraction(0)] * k
        if col is not None:
            row[col] = Fraction(sf.slack_sign[len(body) - 1])
        body.append(row)
        last.append(AffineForm.const(c.rhs))
    return ParamMatrix.build(body, last)


def dual_of(p: LpProblem) -> LpProblem:
    """Standard LP dual of ``max{C x : A x <= b}`` or ``min{C x : A x >= b}``."""
    if p.sense is Sense.MAXIMIZE:
        if any(c.rel is not Relation.LE for c in p.constraints):
            raise Unsupported("dual needs a max problem with only <= rows")
        rel = Relation.GE
    else:
        if any(c.rel is not Relation.GE for c in p.constraints):
            raise Unsupported("dual needs a min problem with only >= rows")
        rel = Relation.LE
    cols = list(zip(*p.A))
    rows = tuple(Constraint(tuple(col), rel, cj) for col, cj in zip(cols, p.objective))
    names = tuple(f"w{i + 1}" for i in range(p.m))
    return LpProblem(p.sense.flip(), tuple(p.b), rows, (False,) * p.m, names)


def permute_constraints(p: LpProblem, perm: Sequence[int]) -> LpProblem:
    """Reorder rows so that new row ``i`` is old row ``perm[i]`` (0-based)."""
    if sorted(perm) != list(range(p.m)):
        raise BadPermutation(f"{list(perm)} is not a permutation of 0..{p.m - 1}")
    return replace(p, constraints=tuple(p.constraints[i] for i in perm))


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return tuple(inv)


# Admissible column shapes as two-phase automata: (moves allowed in phase 0, in phase 1).
# A move outside phase 0 switches to phase 1 if phase 1 allows it.
_SHAPES = (
    ({"up"}, {"flat"}),  # rising then flat
    ({"down"}, {"flat"}),  # falling then flat
    ({"down", "flat"}, {"up", "flat"}),  # falling then rising
)


def _moves(col: Sequence[Fraction]) -> list[str]:
    out = []
    for a, b in zip(col, col[1:]):
        out.append("up" if b > a else "down" if b < a else "flat")
    return out


def _shape_violations(moves: Sequence[str], shape: tuple[set[str], set[str]]) -> int:
    phase, bad = 0, 0
    for mv in moves:
        if mv in shape[phase]:
            continue
        if phase == 0 and mv in shape[1]:
            phase = 1
        else:
            bad += 1
    return bad


def column_shape_score(col: Sequence[Fraction]) -> int:
    """Adjacent pairs that no admissible shape can absorb (minimum over shapes)."""
    mv = _moves(col)
    return min(_shape_violations(mv, s) for s in _SHAPES)


def reorder_score(p: LpProblem, perm: Sequence[int]) -> int:
    rows = [p.constraints[i].coeffs for i in perm]
    return sum(column_shape_score([r[j] for r in rows]) for j in range(p.n))


MAX_REORDER_CANDIDATES = 24


def reorder_permutations(p: LpProblem) -> list[tuple[int, ...]]:
    """Row permutations ranked by shape score, ties broken lexicographically."""
    cap = min(math.factorial(p.m), MAX_REORDER_CANDIDATES)
    if p.m <= 7:
        perms = list(itertools.permutations(range(p.m)))
    else:
        # Too many to rank exhaustively; rank a deterministic prefix of the enumeration.
        perms = list(itertools.islice(itertools.permutations(range(p.m)), 5040))
    perms.sort(key=lambda pm: (reorder_score(p, pm), pm))
    return perms[:cap]


def heuristic_reorder(p: LpProblem) -> list[LpProblem]:
    return [permute_constraints(p, pm) for pm in reorder_permutations(p)]
