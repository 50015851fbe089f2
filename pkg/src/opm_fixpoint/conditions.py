"""Checkers for the hypotheses of the coupled fixed point theorems.

On a finite space every check is an exhaustive scan over comparable
quadruples ``(x, y, u, v)`` with ``x >= u`` and ``y <= v``. On a real-vector
space the quadruples are drawn from a uniform grid over the domain box, so
the verdict is a sampled one and the report says so (``exhaustive=False``).

Scans run in lexicographic order of point indices; the reported worst
violation is the first quadruple reaching the largest violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Tuple

import numpy as np

from .maps import CoupledMap, apply, require_valid
from .spaces import FiniteOrderedMetricSpace, PointError, RealVectorSpace

MIXED_MONOTONE = "mixed_monotone"
CLASSICAL_K = "classical_k"
NEW_DELTA = "new_delta"
REMARK_RATIO = "remark_ratio"

REMARK_RADIUS = 0.25
DEFAULT_EPS_FP = 1e-9


@dataclass(frozen=True)
class Grid:
    """Where a real-vector space is sampled.

    When a check would need more than ``max_checks`` evaluations, a uniform
    random subset of that size (fixed by ``seed``) is scanned instead.
    """

    points_per_axis: int = 21
    max_checks: int = 200_000
    seed: int = 0


@dataclass(frozen=True)
class Witness:
    """The arguments of the worst violation and both sides of its inequality."""

    args: tuple
    lhs: Any
    rhs: Any
    kind: str = ""

    def to_dict(self):
        return {
            "args": [_jsonable(a) for a in self.args],
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "kind": self.kind,
        }


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    holds: bool
    quadruples_checked: int
    worst_violation: Optional[Witness] = None
    minimal_k: Optional[float] = None
    exhaustive: bool = True
    details: dict = field(default_factory=dict)

    @property
    def infeasible(self) -> bool:
        return self.condition == CLASSICAL_K and not self.holds

    def to_dict(self):
        d = {
            "condition": self.condition,
            "holds": self.holds,
            "quadruples_checked": self.quadruples_checked,
            "exhaustive": self.exhaustive,
            "worst_violation": None if self.worst_violation is None else self.worst_violation.to_dict(),
        }
        if self.condition == CLASSICAL_K:
            d["minimal_k"] = _jsonable(self.minimal_k)
            d["infeasible"] = self.infeasible
        d["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return d


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(c) for c in v]
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


class _Scan:
    """Index-level view of (space, F, sample points) shared by the checkers."""

    def __init__(self, F: CoupledMap, space, grid: Optional[Grid]):
        if F.backend != space.backend:
            raise PointError(f"{F.backend} map used with a {space.backend} space")
        require_valid(F, space)
        self.space = space
        self.F = F
        if isinstance(space, FiniteOrderedMetricSpace):
            self.exhaustive = True
            self.points = space.elements
            self.m = len(space.elements)
            self.le = space._le
            table = F.as_index_table(space)
            self.image = lambda i, j: table[i][j]
            self.d = _finite_dist(space)
            self.value = lambda i: i
            self.public = lambda v: space.elements[v]
            self.out_le = lambda a, b: space._le[a][b]
            self.max_checks = None
            self.rng = None
        else:
            grid = grid or Grid()
            self.exhaustive = False
            self.points = space.grid(grid.points_per_axis)
            self.m = len(self.points)
            pts = self.points
            self.le = tuple(
                tuple(all(a <= b for a, b in zip(p, q)) for q in pts) for p in pts
            )
            cache = {}

            def image(i, j):
                key = (i, j)
                if key not in cache:
                    cache[key] = apply(F, space, pts[i], pts[j])
                return cache[key]

            self.image = image
            self.d = space._dist
            self.value = lambda i: pts[i]
            self.public = lambda v: v
            self.out_le = lambda a, b: all(p <= q for p, q in zip(a, b))
            self.max_checks = grid.max_checks
            self.rng = np.random.default_rng(grid.seed)

    def _pairs(self):
        below = [(i, j) for i in range(self.m) for j in range(self.m) if self.le[j][i]]
        return below

    def quadruples(self):
        """Index quadruples ``(ix, iy, iu, iv)`` with u <= x and y <= v."""
        ge = self._pairs()  # (x, u) with u <= x
        le = [(j, i) for i, j in ge]  # (y, v) with y <= v
        total = len(ge) * len(le)
        if self.max_checks is None or total <= self.max_checks:
            by_x = {}
            for ix, iu in ge:
                by_x.setdefault(ix, []).append(iu)
            by_y = {}
            for iy, iv in le:
                by_y.setdefault(iy, []).append(iv)
            for ix in sorted(by_x):
                for iy in sorted(by_y):
                    for iu in by_x[ix]:
                        for iv in by_y[iy]:
                            yield ix, iy, iu, iv
            return
        picks = np.sort(self.rng.choice(total, size=self.max_checks, replace=False))
        self.exhaustive = False
        chosen = []
        for p in picks:
            (ix, iu), (iy, iv) = ge[p // len(le)], le[p % len(le)]
            chosen.append((ix, iy, iu, iv))
        chosen.sort()
        yield from chosen

    def delta(self, ix, iy, iu, iv) -> float:
        val, img, d = self.value, self.image, self.d
        x, y, u, v = val(ix), val(iy), val(iu), val(iv)
        fxy, fyx, fuv, fvu = img(ix, iy), img(iy, ix), img(iu, iv), img(iv, iu)
        num = math.fsum((d(x, fuv), d(y, fvu), d(u, fxy), d(v, fyx)))
        den = 1 + 2 * math.fsum((d(x, fxy), d(y, fyx), d(u, fuv), d(v, fvu)))
        return num / den

    def quad_public(self, q):
        return tuple(self.public(self.value(i)) for i in q)


def _finite_dist(space: FiniteOrderedMetricSpace):
    D = space._d
    return lambda a, b: D[a][b]


def _point_delta(F, space, x, y, u, v) -> float:
    d = space.dist
    fxy, fyx = apply(F, space, x, y), apply(F, space, y, x)
    fuv, fvu = apply(F, space, u, v), apply(F, space, v, u)
    num = math.fsum((d(x, fuv), d(y, fvu), d(u, fxy), d(v, fyx)))
    den = 1 + 2 * math.fsum((d(x, fxy), d(y, fyx), d(u, fuv), d(v, fvu)))
    return num / den


def delta(F: CoupledMap, space, x, y, u, v) -> float:
    """The state-dependent contraction ratio of the new condition.

    Its denominator is at least 1, so it is defined for every quadruple.
    """
    if F.backend != space.backend:
        raise PointError(f"{F.backend} map used with a {space.backend} space")
    for p in (x, y, u, v):
        space.check_point(p)
    return _point_delta(F, space, x, y, u, v)


def is_mixed_monotone(F: CoupledMap, space, grid: Optional[Grid] = None) -> ConditionReport:
    """F nondecreasing in its first argument and nonincreasing in its second."""
    s = _Scan(F, space, grid)
    pairs = s._pairs()  # (hi, lo) with lo <= hi
    # checks are (kind, hi, lo, fixed) over both arguments
    total = 2 * len(pairs) * s.m
    if s.max_checks is None or total <= s.max_checks:
        checks = [
            (kind, hi, lo, w)
            for kind in (0, 1)
            for w in range(s.m)
            for hi, lo in pairs
        ]
    else:
        s.exhaustive = False
        picks = np.sort(s.rng.choice(total, size=s.max_checks, replace=False))
        half = len(pairs) * s.m
        checks = []
        for p in picks:
            kind, rest = divmod(int(p), half)
            w, k = divmod(rest, len(pairs))
            hi, lo = pairs[k]
            checks.append((kind, hi, lo, w))

    worst, worst_margin = None, 0.0
    for kind, hi, lo, w in checks:
        if kind == 0:
            small, big = s.image(lo, w), s.image(hi, w)
        else:
            # y1 = lo <= y2 = hi requires F(w, y1) >= F(w, y2)
            small, big = s.image(w, hi), s.image(w, lo)
        if s.out_le(small, big):
            continue
        margin = _order_margin(small, big)
        if worst is None or margin > worst_margin:
            if kind == 0:
                wit = Witness(
                    (s.public(s.value(lo)), s.public(s.value(hi)), s.public(s.value(w))),
                    s.public(small), s.public(big), "first_argument",
                )
            else:
                wit = Witness(
                    (s.public(s.value(w)), s.public(s.value(lo)), s.public(s.value(hi))),
                    s.public(big), s.public(small), "second_argument",
                )
            worst, worst_margin = wit, margin
    details = {} if s.exhaustive else {"sampling": "grid"}
    return ConditionReport(
        MIXED_MONOTONE, worst is None, len(checks), worst, exhaustive=s.exhaustive, details=details
    )


def _order_margin(small, big) -> float:
    """How badly ``small <= big`` fails; labels give a flat 1.0."""
    if isinstance(small, tuple):
        return max(a - b for a, b in zip(small, big))
    return 1.0


def check_new_condition(
    F: CoupledMap, space, grid: Optional[Grid] = None, atol: float = 0.0
) -> ConditionReport:
    """d(F(x,y), F(u,v)) <= delta(x,y,u,v) * [d(x,u) + d(y,v)] on comparable quadruples."""
    s = _Scan(F, space, grid)
    worst, worst_margin, count, max_delta = None, 0.0, 0, 0.0
    for q in s.quadruples():
        count += 1
        ix, iy, iu, iv = q
        x, y, u, v = (s.value(i) for i in q)
        lhs = s.d(s.image(ix, iy), s.image(iu, iv))
        dl = s.delta(ix, iy, iu, iv)
        max_delta = max(max_delta, dl)
        rhs = dl * (s.d(x, u) + s.d(y, v))
        if lhs > rhs + atol:
            margin = lhs - rhs
            if worst is None or margin > worst_margin:
                worst, worst_margin = Witness(s.quad_public(q), lhs, rhs), margin
    details = {"max_delta": max_delta}
    if not s.exhaustive:
        details["sampling"] = "grid"
    return ConditionReport(NEW_DELTA, worst is None, count, worst, exhaustive=s.exhaustive, details=details)


def _classical_ratios(s: _Scan):
    """Yield ``(quadruple, lhs, separation)`` for every comparable quadruple."""
    for q in s.quadruples():
        ix, iy, iu, iv = q
        x, y, u, v = (s.value(i) for i in q)
        lhs = s.d(s.image(ix, iy), s.image(iu, iv))
        sep = s.d(x, u) + s.d(y, v)
        yield q, lhs, sep


def _ratio(lhs: float, sep: float) -> float:
    if sep > 0:
        return 2 * lhs / sep
    return 0.0 if lhs == 0 else math.inf


def check_classical_condition(
    F: CoupledMap, space, grid: Optional[Grid] = None
) -> ConditionReport:
    """Smallest k with d(F(x,y), F(u,v)) <= k/2 [d(x,u) + d(y,v)] on comparable quadruples.

    ``minimal_k`` is the largest ratio 2 d(F(x,y), F(u,v)) / [d(x,u) + d(y,v)];
    a quadruple with zero separation but distinct images makes it infinite.
    The condition holds iff ``minimal_k < 1``. The witness reports the worst
    quadruple with ``lhs = d(F(x,y), F(u,v))`` and ``rhs`` the bound at k = 1.
    """
    s = _Scan(F, space, grid)
    best, best_q, count = 0.0, None, 0
    for q, lhs, sep in _classical_ratios(s):
        count += 1
        r = _ratio(lhs, sep)
        if r > best:
            best, best_q = r, (q, lhs, sep)
    holds = best < 1
    worst = None
    if not holds:
        q, lhs, sep = best_q
        worst = Witness(s.quad_public(q), lhs, sep / 2)
    details = {}
    if best_q is not None:
        details["argmax"] = s.quad_public(best_q[0])
    if not s.exhaustive:
        details["sampling"] = "grid"
    return ConditionReport(
        CLASSICAL_K, holds, count, worst, minimal_k=best, exhaustive=s.exhaustive, details=details
    )


def classical_holds_with(F: CoupledMap, space, k: float, grid: Optional[Grid] = None) -> bool:
    """Whether the classical condition holds for this particular ``k``.

    Compared in ratio form, the same arithmetic that produces ``minimal_k``,
    so ``k = minimal_k`` always passes.
    """
    s = _Scan(F, space, grid)
    return all(_ratio(lhs, sep) <= k for _, lhs, sep in _classical_ratios(s))


def check_remark_ratio(F: CoupledMap, space, grid: Optional[Grid] = None) -> ConditionReport:
    """Every comparable quadruple with d(x,u) + d(y,v) < 1/4 has delta < 1/2."""
    s = _Scan(F, space, grid)
    worst, worst_margin, count, premise = None, 0.0, 0, 0
    for q in s.quadruples():
        count += 1
        x, y, u, v = (s.value(i) for i in q)
        sep = s.d(x, u) + s.d(y, v)
        if not sep < REMARK_RADIUS:
            continue
        premise += 1
        dl = s.delta(*q)
        if not dl < 0.5:
            margin = dl - 0.5
            if worst is None or margin > worst_margin:
                worst, worst_margin = Witness(s.quad_public(q), dl, 0.5), margin
    details = {"premise_count": premise}
    if not s.exhaustive:
        details["sampling"] = "grid"
    return ConditionReport(REMARK_RATIO, worst is None, count, worst, exhaustive=s.exhaustive, details=details)


def coupled_residual(F: CoupledMap, space, x, y) -> Tuple[float, float]:
    """``(d(F(x,y), x), d(F(y,x), y))``."""
    x, y = space.check_point(x), space.check_point(y)
    return space.dist(apply(F, space, x, y), x), space.dist(apply(F, space, y, x), y)


def is_coupled_fixed_point(F: CoupledMap, space, x, y, eps: float = DEFAULT_EPS_FP) -> bool:
    """F(x, y) = x and F(y, x) = y; exact on finite spaces, within ``eps`` otherwise."""
    if F.backend != space.backend:
        raise PointError(f"{F.backend} map used with a {space.backend} space")
    x, y = space.check_point(x), space.check_point(y)
    if isinstance(space, RealVectorSpace):
        rx, ry = coupled_residual(F, space, x, y)
        return rx <= eps and ry <= eps
    return F(x, y) == x and F(y, x) == y
