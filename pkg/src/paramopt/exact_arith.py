"""Exact rational scalars, affine forms in one parameter ``d`` and parametric rref."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction, str]


class ZeroScale(ValueError):
    """A row was asked to be scaled by zero."""


def q(x: Number) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3.5"`` or ``"-2/7"`` to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {type(x).__name__}")


def render_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class AffineForm:
    """``dcoeff * d + constant``."""

    dcoeff: Fraction = Fraction(0)
    constant: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dcoeff", q(self.dcoeff))
        object.__setattr__(self, "constant", q(self.constant))

    @classmethod
    def const(cls, value: Number) -> "AffineForm":
        return cls(Fraction(0), q(value))

    @classmethod
    def param(cls) -> "AffineForm":
        return cls(Fraction(1), Fraction(0))

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(self.dcoeff + other.dcoeff, self.constant + other.constant)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(self.dcoeff - other.dcoeff, self.constant - other.constant)

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self.dcoeff, -self.constant)

    def scale(self, k: Number) -> "AffineForm":
        k = q(k)
        return AffineForm(self.dcoeff * k, self.constant * k)

    def __mul__(self, k: Number) -> "AffineForm":
        return self.scale(k)

    __rmul__ = __mul__

    def at(self, d: Number) -> Fraction:
        return self.dcoeff * q(d) + self.constant

    def is_zero(self) -> bool:
        return self.dcoeff == 0 and self.constant == 0

    def root(self) -> Fraction:
        if self.dcoeff == 0:
            raise ZeroDivisionError("affine form has no d term, so no root")
        return -self.constant / self.dcoeff

    def render(self) -> str:
        return f"{render_rational(self.dcoeff)}*d + {render_rational(self.constant)}"

    def __str__(self) -> str:
        return self.render()


_AFFINE_RE = re.compile(r"^\s*(\S+)\s*\*\s*d\s*\+\s*(\S+)\s*$")


def parse_affine(text: str) -> AffineForm:
    m = _AFFINE_RE.match(text)
    if m is None:
        raise ValueError(f"not an affine form: {text!r}")
    return AffineForm(parse_rational(m.group(1)), parse_rational(m.group(2)))


Row = tuple[Fraction, ...]


@dataclass(frozen=True)
class ParamMatrix:
    """Dense rational body with one affine right-hand side per row."""

    body: tuple[Row, ...]
    last_col: tuple[AffineForm, ...]

    def __post_init__(self) -> None:
        if len(self.body) != len(self.last_col):
            raise ValueError("body and last_col must have the same number of rows")
        widths = {len(r) for r in self.body}
        if len(widths) > 1:
            raise ValueError("ragged body")

    @classmethod
    def build(
        cls,
        body: Iterable[Iterable[Number]],
        last_col: Iterable[AffineForm | Number],
    ) -> "ParamMatrix":
        rows = tuple(tuple(q(v) for v in r) for r in body)
        lc = tuple(v if isinstance(v, AffineForm) else AffineForm.const(v) for v in last_col)
        return cls(rows, lc)

    @property
    def nrows(self) -> int:
        return len(self.body)

    @property
    def ncols(self) -> int:
        return len(self.body[0]) if self.body else 0

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.body)

    def substitute(self, d: Number) -> list[list[Fraction]]:
        """Plain rational matrix ``[body | rhs(d)]``."""
        return [list(r) + [a.at(d)] for r, a in zip(self.body, self.last_col)]

    def render(self) -> str:
        lines = []
        for r, a in zip(self.body, self.last_col):
            cells = ", ".join(render_rational(v) for v in r)
            lines.append(f"[{cells} | {a.render()}]")
        return "\n".join(lines)


@dataclass(frozen=True)
class RowOp:
    """``swap(i, j)``, ``scale(i, k)`` or ``add_multiple(i, j, k)`` meaning R_i <- R_i + k R_j."""

    kind: str
    i: int
    j: int = -1
    k: Fraction = Fraction(1)

    def render(self) -> str:
        if self.kind == "swap":
            return f"R{self.i + 1} <-> R{self.j + 1}"
        if self.kind == "scale":
            return f"R{self.i + 1} <- {render_rational(self.k)}*R{self.i + 1}"
        return f"R{self.i + 1} <- R{self.i + 1} + {render_rational(self.k)}*R{self.j + 1}"


def swap(i: int, j: int) -> RowOp:
    return RowOp("swap", i, j)


def scale(i: int, k: Number) -> RowOp:
    return RowOp("scale", i, -1, q(k))


def add_multiple(i: int, j: int, k: Number) -> RowOp:
    return RowOp("add_multiple", i, j, q(k))


def elementary_row_op(m: ParamMatrix, op: RowOp) -> ParamMatrix:
    body = [list(r) for r in m.body]
    lc = list(m.last_col)
    n = len(body)
    if not 0 <= op.i < n:
        raise IndexError(f"row {op.i} out of range")
    if op.kind == "swap":
        if not 0 <= op.j < n:
            raise IndexError(f"row {op.j} out of range")
        body[op.i], body[op.j] = body[op.j], body[op.i]
        lc[op.i], lc[op.j] = lc[op.j], lc[op.i]
    elif op.kind == "scale":
        if op.k == 0:
            raise ZeroScale("scale factor must be nonzero")
        body[op.i] = [v * op.k for v in body[op.i]]
        lc[op.i] = lc[op.i].scale(op.k)
    elif op.kind == "add_multiple":
        if not 0 <= op.j < n:
            raise IndexError(f"row {op.j} out of range")
        if op.i == op.j:
            raise ValueError("add_multiple needs two distinct rows")
        src = body[op.j]
        body[op.i] = [a + op.k * b for a, b in zip(body[op.i], src)]
        lc[op.i] = lc[op.i] + lc[op.j].scale(op.k)
    else:
        raise ValueError(f"unknown row operation {op.kind!r}")
    return ParamMatrix(tuple(tuple(r) for r in body), tuple(lc))


def rref_ops(m: ParamMatrix) -> list[RowOp]:
    """Row operations that bring ``m`` to reduced row echelon form.

    Pivots are the first nonzero entry found scanning columns left to right
    and, within a column, rows top to bottom.
    """
    ops: list[RowOp] = []
    body = [list(r) for r in m.body]
    nrows, ncols = len(body), (len(body[0]) if body else 0)
    lead = 0
    for col in range(ncols):
        if lead >= nrows:
            break
        pivot = next((r for r in range(lead, nrows) if body[r][col] != 0), None)
        if pivot is None:
            continue
        if pivot != lead:
            body[pivot], body[lead] = body[lead], body[pivot]
            ops.append(swap(lead, pivot))
        p = body[lead][col]
        if p != 1:
            body[lead] = [v / p for v in body[lead]]
            ops.append(scale(lead, 1 / p))
        for r in range(nrows):
            f = body[r][col]
            if r != lead and f != 0:
                body[r] = [a - f * b for a, b in zip(body[r], body[lead])]
                ops.append(add_multiple(r, lead, -f))
        lead += 1
    return ops


def apply_ops(m: ParamMatrix, ops: Sequence[RowOp]) -> ParamMatrix:
    for op in ops:
        m = elementary_row_op(m, op)
    return m


def rref(m: ParamMatrix) -> ParamMatrix:
    return apply_ops(m, rref_ops(m))


def rref_plain(rows: Sequence[Sequence[Number]], pivot_cols: int | None = None) -> list[list[Fraction]]:
    """Scalar rref where only the first ``pivot_cols`` columns may hold pivots."""
    body = [[q(v) for v in r] for r in rows]
    if not body:
        return body
    width = len(body[0]) if pivot_cols is None else pivot_cols
    lead = 0
    for col in range(width):
        if lead >= len(body):
            break
        pivot = next((r for r in range(lead, len(body)) if body[r][col] != 0), None)
        if pivot is None:
            continue
        body[pivot], body[lead] = body[lead], body[pivot]
        p = body[lead][col]
        body[lead] = [v / p for v in body[lead]]
        for r in range(len(body)):
            f = body[r][col]
            if r != lead and f != 0:
                body[r] = [a - f * b for a, b in zip(body[r], body[lead])]
        lead += 1
    return body
