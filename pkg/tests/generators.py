"""Seeded random instance generators shared by the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction as F

from paramopt.lp_model import LpProblem, make_lp
from paramopt.oracle import simplex_solve
from paramopt.outcome import Status


def rand_lp(rng: random.Random) -> LpProblem:
    """n, m <= 6, integer coefficients in [-9, 9], right-hand sides in [-20, 20]."""
    n, m = rng.randint(1, 6), rng.randint(1, 6)
    sense = rng.choice(["max", "min"])
    rel = "<=" if sense == "max" else ">="
    C = [rng.randint(-9, 9) for _ in range(n)]
    rows = [([rng.randint(-9, 9) for _ in range(n)], rel, rng.randint(-20, 20)) for _ in range(m)]
    return make_lp(sense, C, rows)


def _active(p: LpProblem, x) -> int:
    return sum(1 for c in p.constraints if c.lhs(x) == c.rhs) + sum(1 for v in x if v == 0)


def rand_nondegenerate_2d(rng: random.Random) -> tuple[LpProblem, F]:
    """Bounded 2-variable max LP with a unique, nondegenerate optimal vertex and an interior."""
    while True:
        m = rng.randint(2, 5)
        rows = [([rng.randint(-9, 9), rng.randint(-9, 9)], "<=", rng.randint(1, 20)) for _ in range(m)]
        p = make_lp("max", [rng.randint(1, 9), rng.randint(1, 9)], rows)
        r = simplex_solve(p)
        if r.tag is not Status.OPTIMAL or _active(p, r.x) != 2:
            continue
        unique = True
        for dc in ((F(1, 1000), 0), (0, F(1, 1000)), (-F(1, 1000), 0), (0, -F(1, 1000))):
            pp = make_lp("max", [p.objective[0] + dc[0], p.objective[1] + dc[1]], rows)
            if simplex_solve(pp).x != r.x:
                unique = False
        if unique:
            return p, r.value


def rand_ip(rng: random.Random) -> tuple[LpProblem, list[tuple[int, int]]]:
    """Pure IP with n, m <= 3, mixed relations, and explicit box rows x_i <= U_i <= 20."""
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    sense = rng.choice(["max", "min"])
    C = [rng.randint(-9, 9) for _ in range(n)]
    if not any(C):
        C[0] = rng.choice([2, 3, -4])
    rows = []
    for _ in range(m):
        rel = rng.choice(["<=", "<=", ">=", "="]) if rng.random() < 0.5 else "<="
        rows.append(([rng.randint(-9, 9) for _ in range(n)], rel, rng.randint(-5, 25)))
    box = [rng.randint(0, 20) for _ in range(n)]
    for i, u in enumerate(box):
        e = [0] * n
        e[i] = 1
        rows.append((e, "<=", u))
    return make_lp(sense, C, rows, integer=True), [(0, u) for u in box]
