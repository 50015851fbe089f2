"""Coupled maps F: X x X -> X for both space backends."""

from __future__ import annotations

from collections import Counter
from typing import Callable, Iterable, Sequence, Tuple, Union

from . import expr as _expr
from .errors import MapError
from .spaces import (
    FiniteOrderedMetricSpace,
    Label,
    RealVectorSpace,
    ValidationReport,
    Vector,
    Violation,
)


class TableMap:
    """A coupled map on a finite space, given as ``(x, y, F(x, y))`` triples.

    The triples are kept as given so that :func:`validate_map` can report
    duplicates; lookups on an incomplete or ambiguous table raise.
    """

    backend = "finite"

    def __init__(self, triples: Iterable[Tuple[Label, Label, Label]]):
        self.triples = tuple((str(a), str(b), str(c)) for a, b, c in triples)
        counts = Counter((a, b) for a, b, _ in self.triples)
        self._ambiguous = frozenset(k for k, c in counts.items() if c > 1)
        self._table = {(a, b): c for a, b, c in self.triples}

    @classmethod
    def from_function(cls, space: FiniteOrderedMetricSpace, f: Callable[[Label, Label], Label]):
        return cls((a, b, f(a, b)) for a in space.elements for b in space.elements)

    @classmethod
    def from_dict(cls, table):
        return cls((a, b, c) for (a, b), c in table.items())

    def __call__(self, x: Label, y: Label) -> Label:
        key = (x, y)
        if key in self._ambiguous:
            raise MapError(f"table has several entries for {key!r}")
        try:
            return self._table[key]
        except KeyError:
            raise MapError(f"table has no entry for {key!r}") from None

    def __eq__(self, other):
        if not isinstance(other, TableMap):
            return NotImplemented
        return sorted(self.triples) == sorted(other.triples)

    def __hash__(self):
        return hash(tuple(sorted(self.triples)))

    def __repr__(self):
        return f"TableMap({len(self.triples)} entries)"

    def as_index_table(self, space: FiniteOrderedMetricSpace):
        """``t[i][j]`` is the index of F(e_i, e_j); assumes a validated table."""
        idx = space.index
        return tuple(
            tuple(idx[self(a, b)] for b in space.elements) for a in space.elements
        )

    def to_dict(self):
        return {"table": [list(t) for t in self.triples]}


class ExprMap:
    """A coupled map on R^n; component ``i`` is an expression in x1..xn, y1..yn."""

    backend = "real_vector"

    def __init__(self, components: Sequence[_expr.Expr], sources: Sequence[str] = None):
        self.components = tuple(components)
        if not self.components:
            raise MapError("an expression map needs at least one component")
        self.sources = (
            tuple(sources) if sources is not None
            else tuple(_expr.to_source(c) for c in self.components)
        )

    @classmethod
    def from_strings(cls, texts: Sequence[str], dimension: int = None):
        texts = list(texts)
        dimension = len(texts) if dimension is None else dimension
        if len(texts) != dimension:
            raise MapError(f"{len(texts)} components given for dimension {dimension}")
        return cls([_expr.parse(t, dimension) for t in texts], texts)

    @property
    def dimension(self) -> int:
        return len(self.components)

    def __call__(self, x: Sequence[float], y: Sequence[float]) -> Vector:
        return tuple(_expr.evaluate(c, x, y) for c in self.components)

    def __repr__(self):
        return f"ExprMap({list(self.sources)!r})"

    def to_dict(self):
        return {"components": list(self.sources)}


CoupledMap = Union[TableMap, ExprMap]


def validate_map(F: CoupledMap, space) -> ValidationReport:
    """Totality and well-typedness of ``F`` on ``space``."""
    if F.backend != space.backend:
        return ValidationReport(
            (Violation("backend", (F.backend, space.backend), "map and space backends differ"),)
        )
    if isinstance(F, ExprMap):
        if F.dimension != space.dimension:
            return ValidationReport(
                (Violation("dimension", (F.dimension, space.dimension), "component count != dimension"),)
            )
        too_big = [i for i, c in enumerate(F.components) if _expr.max_index(c) > space.dimension]
        return ValidationReport(
            tuple(Violation("variable_range", (i,), "variable index exceeds dimension") for i in too_big)
        )
    found = []
    labels = space.index
    seen = Counter()
    for a, b, c in F.triples:
        for label in (a, b, c):
            if label not in labels:
                found.append(Violation("unknown_label", (a, b, c), f"{label!r} is not an element"))
        seen[(a, b)] += 1
    for (a, b), count in sorted(seen.items(), key=lambda kv: str(kv[0])):
        if count > 1:
            found.append(Violation("duplicate_entry", (a, b), f"{count} entries"))
    for a in space.elements:
        for b in space.elements:
            if (a, b) not in seen:
                found.append(Violation("missing_entry", (a, b), "no image given"))
    return ValidationReport(tuple(found))


def require_valid(F: CoupledMap, space) -> None:
    report = validate_map(F, space)
    if not report.ok:
        v = report.violations[0]
        raise MapError(f"invalid map: {v.axiom} at {v.witness!r} ({v.detail})")


def apply(F: CoupledMap, space, x, y):
    """F(x, y), with the result checked to lie in ``space``."""
    out = F(x, y)
    if isinstance(space, RealVectorSpace) and not space.in_box(out):
        raise MapError(f"F({x!r}, {y!r}) = {out!r} leaves the domain box")
    return out
