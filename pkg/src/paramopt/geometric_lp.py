"""Interior-path LP heuristics: advance along the objective, recentre, repeat.

Every point stays strictly inside ``{x >= 0, A x <= b}``.  The recentring step
is one of

* ``centroid``: mean of the projections of the current point onto each
  constraint facet intersected with the current objective plane;
* ``chord``: midpoint of the longest chord through the point within the
  objective plane, over a small family of directions orthogonal to C;
* ``perp_planes`` / ``perp_edges``: mean of the perpendicular feet on the
  constraint hyperplanes, or on their intersections with the objective plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact_arith import Number, q
from .lp_model import LpProblem, Relation, Sense, make_lp, normalize_relations
from .oracle import simplex_solve
from .outcome import Status

Vec = tuple[Fraction, ...]


class UnboundedRay(ValueError):
    pass


class DegenerateGeometry(ValueError):
    pass


class InfeasibleStart(ValueError):
    pass


@dataclass(frozen=True)
class GeoConfig:
    epsilon: Fraction = Fraction(1, 2**20)
    max_iters: int = 100
    stall_tol: Fraction = Fraction(0)
    # Restart points are rounded to multiples of 2**-round_bits to keep exact arithmetic cheap.
    round_bits: Optional[int] = 48

    def __post_init__(self) -> None:
        if self.epsilon < 0 or self.stall_tol < 0 or self.max_iters < 1:
            raise ValueError("epsilon and stall_tol must be >= 0 and max_iters >= 1")


@dataclass(frozen=True)
class InteriorPoint:
    coords: Vec

    @classmethod
    def of(cls, values: Sequence[Number]) -> "InteriorPoint":
        return cls(tuple(q(v) for v in values))

    def margins(self, p: LpProblem) -> Vec:
        """Row slacks ``b_i - A_i x`` followed by the coordinates themselves."""
        return tuple(c.rhs - _dot(c.coeffs, self.coords) for c in p.constraints) + self.coords

    def strictly_feasible(self, p: LpProblem) -> bool:
        return all(v > 0 for v in self.margins(p))


@dataclass
class GeoResult:
    status: Status
    best: Optional[Vec]
    best_value: Optional[Fraction]
    trajectory: list[tuple[Vec, Fraction]] = field(default_factory=list)
    stop_reason: str = ""


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _add(a: Sequence[Fraction], b: Sequence[Fraction], k: Fraction = Fraction(1)) -> Vec:
    return tuple(x + k * y for x, y in zip(a, b))


def _as_max(p: LpProblem) -> LpProblem:
    """Max problem with only <= rows; minimization is handled by negating C."""
    if any(c.rel is Relation.EQ for c in p.constraints):
        raise InfeasibleStart("equality rows leave no interior to move in")
    if p.sense is Sense.MINIMIZE:
        p = LpProblem(Sense.MAXIMIZE, tuple(-c for c in p.objective), p.constraints, p.integrality, p.names)
    return normalize_relations(p)


def ray_limit(x: Sequence[Fraction], direction: Sequence[Fraction], p: LpProblem, bounds: bool = True) -> Optional[Fraction]:
    """Largest step along ``direction`` before a constraint (or coordinate) is hit."""
    best: Optional[Fraction] = None
    for c in p.constraints:
        rate = _dot(c.coeffs, direction)
        if rate > 0:
            a = (c.rhs - _dot(c.coeffs, x)) / rate
            best = a if best is None else min(best, a)
    if bounds:
        for xk, dk in zip(x, direction):
            if dk < 0:
                a = -xk / dk
                best = a if best is None else min(best, a)
    return best


def ray_advance(
    x: InteriorPoint,
    direction: Sequence[Number],
    p: LpProblem,
    eps: Number = Fraction(1, 2**20),
    bounds: bool = True,
) -> InteriorPoint:
    """Move to ``x + alpha*(1-eps)*dir`` where ``alpha`` hits the nearest boundary."""
    d = tuple(q(v) for v in direction)
    if all(v == 0 for v in d):
        raise ValueError("direction must be nonzero")
    alpha = ray_limit(x.coords, d, p, bounds)
    if alpha is None:
        raise UnboundedRay("no constraint limits this direction")
    step = max(alpha, Fraction(0)) * (1 - q(eps))
    if eps != 0:
        step = dyadic_floor(step)
    return InteriorPoint(_add(x.coords, d, step))


def dyadic_floor(v: Fraction, bits: int = 48) -> Fraction:
    """Largest ``k / 2**e`` not above ``v`` with about ``bits`` significant bits."""
    if v <= 0:
        return Fraction(0)
    e = bits - (v.numerator.bit_length() - v.denominator.bit_length())
    if e <= 0:
        return Fraction(v.numerator // v.denominator)
    return Fraction((v.numerator << e) // v.denominator, 1 << e)


def _project_to_flat(x: Vec, rows: Sequence[tuple[Vec, Fraction]]) -> Optional[Vec]:
    """Orthogonal projection of ``x`` onto ``{y : a.y = r for (a, r) in rows}`` (two rows)."""
    (a1, r1), (a2, r2) = rows
    g11, g12, g22 = _dot(a1, a1), _dot(a1, a2), _dot(a2, a2)
    det = g11 * g22 - g12 * g12
    if det == 0:
        return None
    e1, e2 = _dot(a1, x) - r1, _dot(a2, x) - r2
    l1 = (g22 * e1 - g12 * e2) / det
    l2 = (g11 * e2 - g12 * e1) / det
    return tuple(xi - l1 * u - l2 * v for xi, u, v in zip(x, a1, a2))


def _facets(p: LpProblem) -> list[tuple[Vec, Fraction]]:
    """Constraint hyperplanes followed by the coordinate planes ``x_k = 0``."""
    out = [(c.coeffs, c.rhs) for c in p.constraints]
    for k in range(p.n):
        e = [Fraction(0)] * p.n
        e[k] = Fraction(-1)
        out.append((tuple(e), Fraction(0)))
    return out


def polygon_centroid(x_f: InteriorPoint, p: LpProblem) -> Vec:
    p = _as_max(p)
    C = p.objective
    d_f = _dot(C, x_f.coords)
    pts = []
    for a, b in _facets(p):
        pt = _project_to_flat(x_f.coords, [(C, d_f), (a, b)])
        if pt is not None:
            pts.append(pt)
    if not pts:
        raise DegenerateGeometry("every constraint plane is parallel to the objective plane")
    return _mean_on_polytope(pts, p, x_f.coords)


def _mean(pts: Sequence[Vec]) -> Vec:
    k = len(pts)
    return tuple(sum(col, Fraction(0)) / k for col in zip(*pts))


def _merge_close(pts: Sequence[Vec], origin: Vec, bits: int = 20) -> list[Vec]:
    """Keep one point per cell of a grid of spacing about 2**-bits (relative to ``origin``)."""
    scale = 1 + max((abs(v) for v in origin), default=Fraction(0))
    unit = 1 << bits
    seen: dict[tuple[int, ...], Vec] = {}
    for pt in pts:
        key = tuple(round(v * unit / scale) for v in pt)
        seen.setdefault(key, pt)
    return list(seen.values())


def _mean_on_polytope(pts: Sequence[Vec], p: LpProblem, origin: Optional[Vec] = None) -> Vec:
    """Mean of the points after pulling each one into the closed feasible region.

    A point outside is replaced by the boundary point on the segment from
    ``origin`` to it; without an origin, outside points are dropped (all are
    kept if none is inside).
    """
    if origin is not None:
        out = []
        for pt in pts:
            if _feasible(pt, p):
                out.append(pt)
                continue
            direction = tuple(a - b for a, b in zip(pt, origin))
            lim = ray_limit(origin, direction, p)
            if lim is not None and lim > 0:
                out.append(_add(origin, direction, min(lim, Fraction(1))))
        if out:
            return _mean(_merge_close(out, origin))
    inside = [pt for pt in pts if _feasible(pt, p)]
    return _mean(inside or pts)


def chord_directions(C: Sequence[Fraction]) -> list[Vec]:
    """Directions orthogonal to C: ones in the free slots, one slot solved from C.dir = 0.

    For each slot ``k`` with ``C_k != 0`` (taken in order, at most n-1 of them)
    the direction has ``dir_k = -sum(C_j for j != k) / C_k`` and 1 elsewhere;
    each is followed by its negation.  A direction that comes out zero is skipped.
    """
    n = len(C)
    out: list[Vec] = []
    slots = [k for k in range(n) if C[k] != 0][: max(n - 1, 1)]
    for k in slots:
        v = [Fraction(1)] * n
        v[k] = -sum((C[j] for j in range(n) if j != k), Fraction(0)) / C[k]
        vec = tuple(v)
        if any(vec):
            out.extend([vec, tuple(-t for t in vec)])
    if n >= 2 and not out:
        # every such direction vanished; fall back to unit-vector pairs orthogonal to C
        for i in range(n):
            for j in range(i + 1, n):
                v = [Fraction(0)] * n
                v[i], v[j] = C[j], -C[i]
                if any(v):
                    vec = tuple(v)
                    out.extend([vec, tuple(-t for t in vec)])
    return out


def chord_midpoint(x_f: InteriorPoint, p: LpProblem, eps: Number = Fraction(0)) -> Vec:
    """Midpoint between ``x_f`` and the farthest point reached along a direction orthogonal to C.

    The chord is cut by the constraint hyperplanes only; a direction that no
    constraint limits is cut by the coordinate bounds instead.
    """
    p = _as_max(p)
    if p.n < 2:
        raise DegenerateGeometry("need at least two variables for a chord")
    best: Optional[tuple[Fraction, Vec]] = None
    for direction in chord_directions(p.objective):
        alpha = ray_limit(x_f.coords, direction, p, bounds=False)
        if alpha is None:
            alpha = ray_limit(x_f.coords, direction, p, bounds=True)
        if alpha is None or alpha <= 0:
            continue
        alpha *= 1 - q(eps)
        x_g = _add(x_f.coords, direction, alpha)
        dist2 = alpha * alpha * _dot(direction, direction)
        if best is None or dist2 > best[0]:
            best = (dist2, x_g)
    if best is None:
        raise DegenerateGeometry("no direction in the objective plane leaves the point")
    return tuple((a + b) / 2 for a, b in zip(x_f.coords, best[1]))


def perpendicular_feet(x_f: InteriorPoint, p: LpProblem, variant: str = "planes") -> list[Vec]:
    """Feet of the perpendiculars from ``x_f`` on each facet hyperplane or facet flat."""
    p = _as_max(p)
    x = x_f.coords
    feet = []
    if variant == "planes":
        for a, b in _facets(p):
            nn = _dot(a, a)
            if nn:
                feet.append(_add(x, a, -(_dot(a, x) - b) / nn))
    elif variant == "edges":
        C = p.objective
        d_f = _dot(C, x)
        for a, b in _facets(p):
            pt = _project_to_flat(x, [(C, d_f), (a, b)])
            if pt is not None:
                feet.append(pt)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return feet


def perpendicular_centroid(
    x_f: InteriorPoint, p: LpProblem, variant: str = "planes", on_level: bool = False
) -> Vec:
    """Mean of the perpendicular feet, each pulled into the feasible region.

    With ``on_level`` every foot is first slid along C onto the objective
    plane through ``x_f``, so the result keeps the current objective value.
    """
    feet = perpendicular_feet(x_f, p, variant)
    if not feet:
        raise DegenerateGeometry("no constraint plane to drop a perpendicular on")
    p = _as_max(p)
    if on_level:
        C = p.objective
        d_f = _dot(C, x_f.coords)
        feet = [_onto_level(f, C, d_f) for f in feet]
    return _mean_on_polytope(feet, p, x_f.coords)


def clamp_toward(x_f: Vec, target: Vec, p: LpProblem, eps: Fraction) -> Vec:
    """Pull ``target`` back along the segment to ``x_f`` until strictly feasible."""
    direction = tuple(t - s for t, s in zip(target, x_f))
    if not any(direction):
        return x_f
    lim = ray_limit(x_f, direction, p)
    if lim is None or lim > 1:
        return target
    shrink = dyadic_floor(lim * (1 - eps)) if eps > 0 else lim / 2
    return _add(x_f, direction, shrink)


def _round_inside(x: Vec, p: LpProblem, bits: Optional[int]) -> Vec:
    """Round coordinates to dyadic rationals, refining until still strictly feasible."""
    if bits is None:
        return x
    for b in (bits, 2 * bits, 4 * bits, 8 * bits, 16 * bits):
        scale = 1 << b
        r = tuple(Fraction(round(v * scale), scale) for v in x)
        if InteriorPoint(r).strictly_feasible(p):
            return r
    return x


def default_start(p: LpProblem) -> InteriorPoint:
    """(1, ..., 1) when it is strictly feasible, otherwise an interior point from an LP."""
    p = _as_max(p)
    ones = InteriorPoint((Fraction(1),) * p.n)
    if ones.strictly_feasible(p):
        return ones
    # maximize t subject to A x + t*|A_i|_1 <= b, x_k >= t, t <= 1
    n = p.n
    rows = []
    for c in p.constraints:
        w = sum((abs(a) for a in c.coeffs), Fraction(0)) or Fraction(1)
        rows.append((list(c.coeffs) + [w], "<=", c.rhs))
    for k in range(n):
        e = [Fraction(0)] * (n + 1)
        e[k], e[n] = Fraction(-1), Fraction(1)
        rows.append((e, "<=", 0))
    rows.append(([0] * n + [1], "<=", 1))
    aux = make_lp("max", [0] * n + [1], rows)
    r = simplex_solve(aux)
    if r.tag is not Status.OPTIMAL or r.value is None or r.value <= 0:
        raise InfeasibleStart("the feasible region has no interior")
    return InteriorPoint(tuple(r.x[:n]))


ALGORITHMS = ("centroid", "chord", "perp_planes", "perp_edges")


def solve_geometric(
    p: LpProblem,
    algo: str = "chord",
    start: Optional[InteriorPoint] = None,
    cfg: GeoConfig = GeoConfig(),
) -> GeoResult:
    """Alternate advances along C with recentring; returns the trajectory.

    ``trajectory[0]`` is the start; every later entry is the point reached by an
    advance along C together with its objective value (in the caller's sense).
    A recentred point with a lower objective than the current one is first
    moved back onto the current objective plane.  Iteration stops after
    ``cfg.max_iters`` advances, when an advance gains no more than
    ``cfg.stall_tol``, or when recentring has nowhere to go.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    q_max = _as_max(p)
    sign = 1 if p.sense is Sense.MAXIMIZE else -1
    C = q_max.objective
    eps = cfg.epsilon
    x = start if start is not None else default_start(p)
    exact = eps == 0
    if not x.strictly_feasible(q_max) and not (exact and _feasible(x.coords, q_max)):
        raise InfeasibleStart("start point is not strictly feasible")
    cur = x.coords
    traj: list[tuple[Vec, Fraction]] = [(cur, sign * _dot(C, cur))]
    best, best_val = cur, _dot(C, cur)
    reason = "max_iters"
    status = Status.OPTIMAL
    restart = cur
    for it in range(cfg.max_iters):
        try:
            nxt = ray_advance(InteriorPoint(restart), C, q_max, eps).coords
        except UnboundedRay:
            reason, status = "unbounded ray", Status.UNBOUNDED
            break
        val = _dot(C, nxt)
        gain = val - best_val
        if val >= best_val:
            best, best_val = nxt, val
            traj.append((nxt, sign * val))
        if it > 0 and gain <= cfg.stall_tol:
            reason = "stalled"
            break
        cur = best
        try:
            target = _recentre(algo, InteriorPoint(cur), q_max, eps)
        except DegenerateGeometry:
            reason = "degenerate geometry"
            break
        if _dot(C, target) < best_val:
            target = _onto_level(target, C, best_val)
        if exact:
            restart = target if _feasible(target, q_max) else cur
        else:
            restart = clamp_toward(cur, target, q_max, eps)
            restart = _round_inside(restart, q_max, cfg.round_bits)
    return GeoResult(status, best, sign * best_val, traj, reason)


def _recentre(algo: str, x: InteriorPoint, p: LpProblem, eps: Fraction) -> Vec:
    if algo == "centroid":
        return polygon_centroid(x, p)
    if algo == "chord":
        return chord_midpoint(x, p, eps)
    if algo == "perp_planes":
        return perpendicular_centroid(x, p, "planes", on_level=True)
    return perpendicular_centroid(x, p, "edges")


def _onto_level(x: Vec, C: Vec, level: Fraction) -> Vec:
    nn = _dot(C, C)
    return _add(x, C, (level - _dot(C, x)) / nn) if nn else x


def _feasible(x: Vec, p: LpProblem) -> bool:
    return all(v >= 0 for v in InteriorPoint(x).margins(p))


def objective_gap(value: Fraction, optimum: Fraction) -> float:
    return abs(float(optimum - value)) / max(1.0, abs(float(optimum)))


def oracle_optimum(p: LpProblem) -> Optional[Fraction]:
    r = simplex_solve(p)
    return r.value if r.tag is Status.OPTIMAL else None


__all__ = [
    "ALGORITHMS",
    "DegenerateGeometry",
    "GeoConfig",
    "GeoResult",
    "InfeasibleStart",
    "InteriorPoint",
    "UnboundedRay",
    "chord_directions",
    "chord_midpoint",
    "clamp_toward",
    "default_start",
    "objective_gap",
    "oracle_optimum",
    "perpendicular_centroid",
    "polygon_centroid",
    "ray_advance",
    "solve_geometric",
]
