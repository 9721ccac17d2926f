"""Line-oriented text format for LP, IP and polynomial models.

::

    # comment
    maximize            (or minimize)
    nlp                 (optional: allows x1^2 and x1*x2 terms)
    obj: 3 x1 + 2.5 x2
    st
    c1: x1 + 2 x2 <= 4
    c2: -x1 + x2 >= -1
    int x1 x2           (optional)
    end

Variables are implicitly nonnegative and ordered by first appearance.
Coefficients are exact: ``3.5`` reads as 7/2 and ``7/2`` is accepted too.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact_arith import render_rational
from .groebner_nlp import MultiPoly, NlpProblem
from .lp_model import Constraint, LpProblem, Relation, Sense


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


@dataclass
class ModelFile:
    problem: Union[LpProblem, NlpProblem]
    name: str = ""
    comments: list[str] = field(default_factory=list)
    row_names: tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return "nlp" if isinstance(self.problem, NlpProblem) else "lp"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:/\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\^|\*|\+|-|<=|>=|=))"
)

# term: exponent map + coefficient
_Term = tuple[dict[str, int], Fraction]


class _Lexer:
    def __init__(self, text: str, line: int, col0: int):
        self.text = text
        self.line = line
        self.col0 = col0
        self.pos = 0

    def col(self) -> int:
        return self.col0 + self.pos + 1

    def peek(self) -> Optional[tuple[str, str]]:
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.end() == self.pos:
            rest = self.text[self.pos :].strip()
            if rest:
                raise ParseError(self.line, self.col() + len(self.text[self.pos :]) - len(self.text[self.pos :].lstrip()), f"unexpected character {rest[0]!r}")
            return None
        kind = m.lastgroup
        assert kind is not None
        return kind, m.group(kind)

    def next(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError(self.line, self.col(), "unexpected end of line")
        m = _TOKEN.match(self.text, self.pos)
        assert m is not None
        self.pos = m.end()
        return tok

    def at_end(self) -> bool:
        return self.peek() is None


def _parse_expr(lx: _Lexer, poly_ok: bool, stop: tuple[str, ...] = ()) -> list[_Term]:
    """Sum of terms ``[coef] [*] factor (*? factor)*`` where factor is ``name`` or ``name^k``."""
    terms: list[_Term] = []
    first = True
    while True:
        tok = lx.peek()
        if tok is None or (tok[0] == "op" and tok[1] in stop):
            if first:
                raise ParseError(lx.line, lx.col(), "expected a term")
            return terms
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            lx.next()
            sign = -1 if tok[1] == "-" else 1
        elif not first:
            raise ParseError(lx.line, lx.col(), "expected '+' or '-'")
        first = False
        coef = Fraction(sign)
        tok = lx.peek()
        seen_num = False
        if tok is not None and tok[0] == "num":
            lx.next()
            coef *= Fraction(tok[1])
            seen_num = True
            tok = lx.peek()
            if tok == ("op", "*"):
                lx.next()
                tok = lx.peek()
                if tok is None or tok[0] != "name":
                    raise ParseError(lx.line, lx.col(), "expected a variable after '*'")
        powers: dict[str, int] = {}
        while tok is not None and tok[0] == "name":
            col = lx.col()
            name = lx.next()[1]
            k = 1
            if lx.peek() == ("op", "^"):
                lx.next()
                t = lx.next()
                if t[0] != "num" or not t[1].isdigit():
                    raise ParseError(lx.line, lx.col(), "expected an integer exponent")
                k = int(t[1])
            powers[name] = powers.get(name, 0) + k
            if not poly_ok and sum(powers.values()) > 1:
                raise ParseError(lx.line, col, "polynomial terms need the 'nlp' header")
            tok = lx.peek()
            if tok == ("op", "*"):
                lx.next()
                tok = lx.peek()
                if tok is None or tok[0] != "name":
                    raise ParseError(lx.line, lx.col(), "expected a variable after '*'")
        if not seen_num and not powers:
            raise ParseError(lx.line, lx.col(), "expected a number or variable")
        terms.append((powers, coef))


def _note_vars(terms: list[_Term], order: list[str]) -> None:
    for powers, _ in terms:
        for v in powers:
            if v not in order:
                order.append(v)


def _to_poly(terms: list[_Term], names: tuple[str, ...]) -> MultiPoly:
    t: dict[tuple[int, ...], Fraction] = {}
    for powers, c in terms:
        m = tuple(powers.get(v, 0) for v in names)
        t[m] = t.get(m, Fraction(0)) + c
    return MultiPoly(names, t)


def parse_poly(text: str, names: tuple[str, ...] | list[str]) -> MultiPoly:
    """Polynomial over ``names`` from text such as ``-1 x1^2 + 4 x1 + 2 x2``."""
    names = tuple(names)
    lx = _Lexer(text, 1, 0)
    terms = _parse_expr(lx, True)
    _check_end(lx)
    unknown = [v for powers, _ in terms for v in powers if v not in names]
    if unknown:
        raise ParseError(1, 1, f"unknown variable {unknown[0]!r}")
    return _to_poly(terms, names)


def _check_end(lx: _Lexer) -> None:
    if not lx.at_end():
        raise ParseError(lx.line, lx.col(), f"unexpected {lx.peek()[1]!r}")  # type: ignore[index]


_HEAD = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:")


def parse_model(text: str, name: str = "") -> ModelFile:
    sense: Optional[Sense] = None
    nlp = False
    obj: Optional[list[_Term]] = None
    rows: list[tuple[str, list[_Term], str, Fraction]] = []
    ints: list[tuple[str, int, int]] = []
    comments: list[str] = []
    order: list[str] = []
    stage = "head"  # head -> st -> end
    last_line = 0
    for ln, raw in enumerate(text.splitlines(), start=1):
        last_line = ln
        body, _, comment = raw.partition("#")
        if comment.strip() and not body.strip():
            comments.append(comment.strip())
        line = body.strip()
        if not line:
            continue
        col0 = len(body) - len(body.lstrip())
        word = line.split()[0].lower()
        if stage == "end":
            raise ParseError(ln, col0 + 1, "text after 'end'")
        if word in ("maximize", "minimize", "max", "min") and line.lower() == word:
            if sense is not None:
                raise ParseError(ln, col0 + 1, "objective sense given twice")
            sense = Sense.MAXIMIZE if word.startswith("max") else Sense.MINIMIZE
            continue
        if line.lower() == "nlp":
            if obj is not None:
                raise ParseError(ln, col0 + 1, "'nlp' must come before the objective")
            nlp = True
            continue
        if line.lower() in ("st", "subject to", "s.t."):
            if obj is None:
                raise ParseError(ln, col0 + 1, "expected 'obj:' before 'st'")
            stage = "st"
            continue
        if line.lower() == "end":
            stage = "end"
            continue
        if word == "int":
            if stage != "st":
                raise ParseError(ln, col0 + 1, "'int' must follow the constraints")
            pos = body.index("int") + 3
            for m in re.finditer(r"[A-Za-z_][A-Za-z0-9_]*", body[pos:]):
                ints.append((m.group(0), ln, pos + m.start() + 1))
            continue
        head = _HEAD.match(body)
        if head is None:
            raise ParseError(ln, col0 + 1, "expected 'name: expression'")
        label = head.group(1)
        lx = _Lexer(body[head.end() :], ln, head.end())
        if stage == "head":
            if label != "obj":
                raise ParseError(ln, col0 + 1, "expected 'obj:'")
            if sense is None:
                raise ParseError(ln, col0 + 1, "expected 'maximize' or 'minimize' before the objective")
            obj = _parse_expr(lx, nlp)
            _check_end(lx)
            _note_vars(obj, order)
            continue
        lhs = _parse_expr(lx, nlp, stop=("<=", ">=", "="))
        tok = lx.peek()
        if tok is None:
            raise ParseError(ln, lx.col(), "expected '<=', '>=' or '='")
        rel = lx.next()[1]
        rhs_terms = _parse_expr(lx, nlp)
        _check_end(lx)
        if any(p for p, _ in rhs_terms):
            raise ParseError(ln, lx.col(), "right-hand side must be a number")
        rhs = sum((c for _, c in rhs_terms), Fraction(0))
        _note_vars(lhs, order)
        if any(r[0] == label for r in rows):
            raise ParseError(ln, col0 + 1, f"duplicate row name {label!r}")
        rows.append((label, lhs, rel, rhs))
    if sense is None or obj is None:
        raise ParseError(last_line + 1, 1, "missing objective")
    if not rows and not nlp:
        raise ParseError(last_line + 1, 1, "expected at least one constraint")
    if stage != "end":
        raise ParseError(last_line + 1, 1, "expected 'end'")
    for v, ln, col in ints:
        if v not in order:
            raise ParseError(ln, col, f"unknown variable {v!r}")
    names = tuple(order)
    row_names = tuple(r[0] for r in rows)
    if nlp:
        if ints:
            raise ParseError(ints[0][1], ints[0][2], "integrality is not supported for nlp models")
        eqs, ineq, eq_names, ineq_names = [], [], [], []
        for label, lhs, rel, rhs in rows:
            g = _to_poly(lhs, names) - rhs
            if rel == "=":
                eqs.append(g)
                eq_names.append(label)
            else:
                ineq.append((g, rel))
                ineq_names.append(label)
        prob: Union[LpProblem, NlpProblem] = NlpProblem(sense, names, _to_poly(obj, names), tuple(eqs), tuple(ineq))
        # equalities are stored first, so the labels follow that order
        return ModelFile(prob, name, comments, tuple(eq_names + ineq_names))
    objective = [Fraction(0)] * len(names)
    for powers, c in obj:
        if powers:
            objective[names.index(next(iter(powers)))] += c
    cons = []
    for _, lhs, rel, rhs in rows:
        coeffs = [Fraction(0)] * len(names)
        for powers, c in lhs:
            if powers:
                coeffs[names.index(next(iter(powers)))] += c
            else:
                rhs -= c
        cons.append(Constraint(tuple(coeffs), Relation(rel), rhs))
    integer = {v for v, _, _ in ints}
    prob = LpProblem(sense, tuple(objective), tuple(cons), tuple(v in integer for v in names), names)
    return ModelFile(prob, name, comments, row_names)


def load_model(path: str) -> ModelFile:
    import os

    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_model(text, os.path.splitext(os.path.basename(path))[0])


def _render_linear(coeffs, names) -> str:
    parts = []
    for c, v in zip(coeffs, names):
        if c == 0:
            continue
        mag = render_rational(abs(c))
        parts.append(("- " if c < 0 else "+ ") + f"{mag} {v}")
    if not parts:
        return f"0 {names[0]}"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _render_poly(g: MultiPoly) -> str:
    parts = []
    for m in sorted(g.terms, reverse=True):
        c = g.terms[m]
        mono = " ".join(v if e == 1 else f"{v}^{e}" for v, e in zip(g.vars, m) if e)
        mono = mono.replace(" ", "*")
        body = f"{render_rational(abs(c))} {mono}" if mono else render_rational(abs(c))
        parts.append(("- " if c < 0 else "+ ") + body)
    if not parts:
        return f"0 {g.vars[0]}"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def render_model(m: ModelFile) -> str:
    p = m.problem
    out = [f"# {c}" for c in m.comments]
    out.append(p.sense.value)
    labels = list(m.row_names)
    if isinstance(p, NlpProblem):
        out.append("nlp")
        out.append(f"obj: {_render_poly(p.objective)}")
        out.append("st")
        rows = [(h, "=") for h in p.equalities] + list(p.inequalities)
        if len(labels) != len(rows):
            labels = [f"c{i + 1}" for i in range(len(rows))]
        for label, (g, rel) in zip(labels, rows):
            const = g.terms.get((0,) * len(g.vars), Fraction(0))
            out.append(f"{label}: {_render_poly(g - const)} {rel} {render_rational(-const)}")
    else:
        out.append(f"obj: {_render_linear(p.objective, p.names)}")
        out.append("st")
        if len(labels) != len(p.constraints):
            labels = [f"c{i + 1}" for i in range(len(p.constraints))]
        for label, c in zip(labels, p.constraints):
            out.append(f"{label}: {_render_linear(c.coeffs, p.names)} {c.rel.value} {render_rational(c.rhs)}")
        ints = [v for v, f in zip(p.names, p.integrality) if f]
        if ints:
            out.append("int " + " ".join(ints))
    out.append("end")
    return "\n".join(out) + "\n"


__all__ = ["ModelFile", "ParseError", "load_model", "parse_model", "parse_poly", "render_model"]
