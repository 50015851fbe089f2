"""Partially ordered metric spaces: a finite backend and a real-vector backend.

A finite space stores its full distance matrix and the explicit list of
order pairs. Nothing is closed or repaired on construction; the validators
below report what is wrong instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import PointError, SpaceError

Label = str
Vector = Tuple[float, ...]
Point = Union[Label, Vector]


@dataclass(frozen=True)
class Violation:
    """One broken axiom with the elements that witness it."""

    axiom: str
    witness: tuple
    detail: str = ""

    def to_dict(self):
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, axiom: str) -> Tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.axiom == axiom)

    def __add__(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)

    def to_dict(self):
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


class FiniteOrderedMetricSpace:
    """A finite set of labelled points with a distance matrix and a partial order.

    ``order`` is the set of pairs ``(a, b)`` meaning ``a <= b``; reflexive
    pairs must be listed explicitly.
    """

    backend = "finite"

    def __init__(
        self,
        elements: Sequence[Label],
        distance,
        order: Iterable[Tuple[Label, Label]],
    ):
        elements = tuple(elements)
        if not elements:
            raise SpaceError("a space needs at least one element")
        for e in elements:
            if not isinstance(e, str):
                raise SpaceError(f"element labels must be strings, got {e!r}")
        if len(set(elements)) != len(elements):
            dupes = sorted({e for e in elements if elements.count(e) > 1})
            raise SpaceError(f"duplicate element labels: {dupes}")

        matrix = np.array(distance, dtype=float)
        n = len(elements)
        if matrix.shape != (n, n):
            raise SpaceError(
                f"distance matrix has shape {matrix.shape}, expected ({n}, {n})"
            )
        matrix.setflags(write=False)

        self.elements: Tuple[Label, ...] = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.distance = matrix
        # nested tuples are much faster than numpy scalars in the scan loops
        self._d = tuple(tuple(float(v) for v in row) for row in matrix)

        pairs = []
        for pair in order:
            a, b = pair
            for label in (a, b):
                if label not in self.index:
                    raise SpaceError(f"order pair {(a, b)!r} uses unknown label {label!r}")
            pairs.append((a, b))
        self.order = frozenset(pairs)
        le = [[False] * n for _ in range(n)]
        for a, b in self.order:
            le[self.index[a]][self.index[b]] = True
        self._le = tuple(tuple(row) for row in le)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteOrderedMetricSpace(elements={list(self.elements)!r})"

    def __eq__(self, other):
        if not isinstance(other, FiniteOrderedMetricSpace):
            return NotImplemented
        return (
            self.elements == other.elements
            and self._d == other._d
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.elements, self._d, self.order))

    def check_point(self, p) -> Label:
        if not isinstance(p, str):
            raise PointError(f"finite space expects a label, got {p!r}")
        if p not in self.index:
            raise PointError(f"unknown label {p!r}")
        return p

    def leq(self, a: Label, b: Label) -> bool:
        return self._le[self.index[self.check_point(a)]][self.index[self.check_point(b)]]

    def dist(self, a: Label, b: Label) -> float:
        return self._d[self.index[self.check_point(a)]][self.index[self.check_point(b)]]

    def points(self) -> Tuple[Label, ...]:
        return self.elements

    def to_dict(self):
        order = sorted(self.order, key=lambda p: (self.index[p[0]], self.index[p[1]]))
        return {
            "finite": {
                "elements": list(self.elements),
                "distance": [list(row) for row in self._d],
                "order_pairs": [list(p) for p in order],
            }
        }


class Metric(str, Enum):
    L1 = "L1"
    L2 = "L2"
    LInf = "LInf"


@dataclass(frozen=True)
class RealVectorSpace:
    """R^n with the componentwise order and one of three standard metrics.

    ``domain_box`` optionally restricts points to a closed box; it is also
    what the sampling grid of the condition checkers spans.
    """

    dimension: int
    metric: Metric = Metric.L2
    domain_box: Optional[Tuple[Tuple[float, float], ...]] = None
    backend: str = field(default="real_vector", init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise SpaceError(f"dimension must be a positive integer, got {self.dimension!r}")
        try:
            object.__setattr__(self, "metric", Metric(self.metric))
        except ValueError:
            raise SpaceError(
                f"unknown metric {self.metric!r}; expected one of L1, L2, LInf"
            ) from None
        if self.domain_box is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in self.domain_box)
            if len(box) != self.dimension:
                raise SpaceError(
                    f"domain_box has {len(box)} intervals for dimension {self.dimension}"
                )
            for i, (lo, hi) in enumerate(box):
                if not lo <= hi:
                    raise SpaceError(f"domain_box interval {i} has lower bound > upper bound")
            object.__setattr__(self, "domain_box", box)

    def check_point(self, p) -> Vector:
        if isinstance(p, str):
            raise PointError(f"real-vector space expects a vector, got label {p!r}")
        try:
            v = tuple(float(c) for c in p)
        except TypeError:
            raise PointError(f"expected a vector of length {self.dimension}, got {p!r}") from None
        if len(v) != self.dimension:
            raise PointError(f"vector {v!r} has length {len(v)}, expected {self.dimension}")
        if self.domain_box is not None and not self.in_box(v):
            raise PointError(f"vector {v!r} lies outside the domain box")
        return v

    def in_box(self, v: Vector) -> bool:
        if self.domain_box is None:
            return True
        return all(lo <= c <= hi for c, (lo, hi) in zip(v, self.domain_box))

    def leq(self, a, b) -> bool:
        a, b = self.check_point(a), self.check_point(b)
        return all(ai <= bi for ai, bi in zip(a, b))

    def dist(self, a, b) -> float:
        a, b = self.check_point(a), self.check_point(b)
        return self._dist(a, b)

    def _dist(self, a: Vector, b: Vector) -> float:
        diffs = [abs(ai - bi) for ai, bi in zip(a, b)]
        if self.metric is Metric.L1:
            return math.fsum(diffs)
        if self.metric is Metric.L2:
            return math.hypot(*diffs)
        return max(diffs)

    def grid(self, points_per_axis: int = 21) -> Tuple[Vector, ...]:
        """Uniform tensor grid over the domain box, in lexicographic order."""
        if self.domain_box is None:
            raise SpaceError("sampling a real-vector space requires a domain_box")
        if points_per_axis < 1:
            raise ValueError("points_per_axis must be positive")
        axes = [
            np.linspace(lo, hi, points_per_axis) if points_per_axis > 1 else np.array([lo])
            for lo, hi in self.domain_box
        ]
        return tuple(
            tuple(float(c) for c in combo) for combo in itertools.product(*axes)
        )

    def to_dict(self):
        d = {"dimension": self.dimension, "metric": self.metric.value}
        if self.domain_box is not None:
            d["domain_box"] = [list(iv) for iv in self.domain_box]
        return {"real_vector": d}


Space = Union[FiniteOrderedMetricSpace, RealVectorSpace]


def validate_metric(space: FiniteOrderedMetricSpace) -> ValidationReport:
    """Check every metric axiom on the distance matrix by exhaustive scan.

    Triangle violations are reported as ``(a, b, c)`` meaning
    ``d(a, c) > d(a, b) + d(b, c)``.
    """
    n = len(space.elements)
    d = space._d
    if space.distance.shape != (n, n):
        raise SpaceError("distance matrix does not match the element list")
    el = space.elements
    found = []
    for i in range(n):
        for j in range(n):
            v = d[i][j]
            if not math.isfinite(v):
                found.append(Violation("finite", (el[i], el[j]), f"d = {v}"))
            elif v < 0:
                found.append(Violation("non_negativity", (el[i], el[j]), f"d = {v}"))
    for i in range(n):
        if d[i][i] != 0:
            found.append(Violation("zero_diagonal", (el[i],), f"d = {d[i][i]}"))
    for i, j in itertools.combinations(range(n), 2):
        if d[i][j] != d[j][i]:
            found.append(
                Violation("symmetry", (el[i], el[j]), f"{d[i][j]} != {d[j][i]}")
            )
        if d[i][j] == 0 or d[j][i] == 0:
            found.append(Violation("identity", (el[i], el[j]), "distinct points at distance 0"))
    for i, j, k in itertools.permutations(range(n), 3):
        if d[i][k] > d[i][j] + d[j][k]:
            found.append(
                Violation(
                    "triangle",
                    (el[i], el[j], el[k]),
                    f"d({el[i]},{el[k]}) = {d[i][k]} > {d[i][j]} + {d[j][k]}",
                )
            )
    return ValidationReport(tuple(found))


def validate_order(space: FiniteOrderedMetricSpace) -> ValidationReport:
    el = space.elements
    n = len(el)
    le = space._le
    found = []
    for i in range(n):
        if not le[i][i]:
            found.append(Violation("reflexivity", (el[i],), f"missing ({el[i]}, {el[i]})"))
    for i, j in itertools.combinations(range(n), 2):
        if le[i][j] and le[j][i]:
            found.append(Violation("antisymmetry", (el[i], el[j]), "both directions present"))
    for i, j, k in itertools.product(range(n), repeat=3):
        if le[i][j] and le[j][k] and not le[i][k]:
            found.append(
                Violation("transitivity", (el[i], el[j], el[k]), f"missing ({el[i]}, {el[k]})")
            )
    return ValidationReport(tuple(found))


def comparable_quadruples(space: Space, points: Optional[Sequence[Point]] = None):
    """All ``(x, y, u, v)`` over ``points`` with ``x >= u`` and ``y <= v``.

    Ordered lexicographically by point index. ``points`` defaults to every
    element of a finite space and is required for a real-vector space.
    """
    if points is None:
        if space.backend != "finite":
            raise SpaceError("comparable_quadruples on a real-vector space needs sample points")
        points = space.elements
    points = list(points)
    m = len(points)
    le = [[space.leq(points[i], points[j]) for j in range(m)] for i in range(m)]
    out = []
    for ix, iy, iu, iv in itertools.product(range(m), repeat=4):
        if le[iu][ix] and le[iy][iv]:
            out.append((points[ix], points[iy], points[iu], points[iv]))
    return out
