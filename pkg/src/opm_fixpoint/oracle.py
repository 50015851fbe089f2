"""Brute-force ground truth on finite spaces and a randomized stress runner."""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .conditions import check_new_condition, is_mixed_monotone
from .errors import GenerationError
from .maps import TableMap, require_valid
from .solver import CONVERGED, CYCLE, IterationTrace, check_start, iterate
from .spaces import FiniteOrderedMetricSpace, validate_metric, validate_order

SEPARATION_BOUND = 0.25
DEFAULT_DISTANCE_GRID = tuple(0.25 * k for k in range(1, 17))
MAP_KINDS = ("uniform", "monotone")


@dataclass(frozen=True)
class CoupledFixedPointSet:
    pairs: Tuple[Tuple[str, str], ...]
    space: FiniteOrderedMetricSpace = field(repr=False, compare=False)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def to_dict(self):
        return {"pairs": [list(p) for p in self.pairs]}


def enumerate_cfp(F: TableMap, space: FiniteOrderedMetricSpace) -> CoupledFixedPointSet:
    """Every (x, y) with F(x, y) = x and F(y, x) = y, in lexicographic index order."""
    require_valid(F, space)
    el = space.elements
    pairs = tuple((x, y) for x in el for y in el if F(x, y) == x and F(y, x) == y)
    return CoupledFixedPointSet(pairs, space)


@dataclass(frozen=True)
class SeparationReport:
    """Smallest d(x,u) + d(y,v) over unordered pairs of distinct coupled fixed points."""

    vacuous: bool
    minimum: Optional[float] = None
    pair: Optional[Tuple[tuple, tuple]] = None
    pairs_checked: int = 0

    @property
    def holds(self) -> bool:
        return self.vacuous or self.minimum >= SEPARATION_BOUND

    def to_dict(self):
        return {
            "vacuous": self.vacuous,
            "minimum": self.minimum,
            "pair": None if self.pair is None else [list(p) for p in self.pair],
            "pairs_checked": self.pairs_checked,
            "bound": SEPARATION_BOUND,
            "holds": self.holds,
        }


def separation_bound(cfps: CoupledFixedPointSet, space: FiniteOrderedMetricSpace) -> SeparationReport:
    pts = list(cfps.pairs)
    if len(pts) < 2:
        return SeparationReport(vacuous=True)
    best, best_pair, count = None, None, 0
    for (x, y), (u, v) in itertools.combinations(pts, 2):
        count += 1
        s = space.dist(x, u) + space.dist(y, v)
        if best is None or s < best:
            best, best_pair = s, ((x, y), (u, v))
    return SeparationReport(False, best, best_pair, count)


@dataclass(frozen=True)
class RandomInstanceSpec:
    """Parameters of the random instance generator.

    Off-diagonal distances are drawn uniformly from ``distance_grid`` and then
    replaced by shortest-path distances so the triangle inequality holds.
    Dyadic grid values keep that repair exact in floating point.
    """

    n: int
    distance_grid: Tuple[float, ...] = DEFAULT_DISTANCE_GRID
    order_density: float = 0.5
    seed: int = 0
    map_kind: str = "uniform"
    max_attempts: int = 100

    def __post_init__(self):
        object.__setattr__(self, "distance_grid", tuple(float(v) for v in self.distance_grid))
        if not isinstance(self.n, int) or not 1 <= self.n <= 8:
            raise ValueError(f"n must be an integer in 1..8, got {self.n!r}")
        if not self.distance_grid or any(not (v > 0 and np.isfinite(v)) for v in self.distance_grid):
            raise ValueError("distance_grid must be a nonempty set of positive finite values")
        if not 0.0 <= self.order_density <= 1.0:
            raise ValueError("order_density must lie in [0, 1]")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an integer in [0, 2**64)")
        if self.map_kind not in MAP_KINDS:
            raise ValueError(f"map_kind must be one of {MAP_KINDS}")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")

    def to_dict(self):
        d = asdict(self)
        d["distance_grid"] = list(self.distance_grid)
        d["seed"] = int(self.seed)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["distance_grid"] = tuple(d.get("distance_grid", DEFAULT_DISTANCE_GRID))
        return cls(**d)


def instance_seed(seed: int, index: int) -> int:
    """Seed of the ``index``-th instance of a stream started from ``seed``."""
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _random_metric(rng, n, grid):
    raw = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    raw[iu] = rng.choice(grid, size=len(iu[0]))
    raw = raw + raw.T
    if n == 1:
        return raw
    # csgraph treats zeros as missing edges; every off-diagonal entry is positive
    repaired = shortest_path(raw, method="FW", directed=False)
    return np.minimum(repaired, repaired.T)


def _random_order(rng, n, p):
    perm = rng.permutation(n)
    le = np.eye(n, dtype=bool)
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < p:
            le[perm[a], perm[b]] = True
    for k in range(n):
        le |= le[:, [k]] & le[[k], :]
    return le, perm


def _monotone_table(rng, n, le, perm):
    """A table that is mixed monotone by construction.

    Half the time F(x, y) = g(x) with g order-preserving (these maps tend
    to have many coupled fixed points); otherwise
    F(x, y) = chain[phi(h(x) - h(y))] with h order-preserving, phi
    nondecreasing and ``chain`` a chain of the order.
    """
    if rng.random() < 0.5:
        g = _order_preserving(rng, n, le, perm)
        return [[g[i]] * n for i in range(n)]
    rank = np.empty(n, dtype=int)
    rank[perm] = np.arange(n)
    steps = rng.integers(0, 3, size=n)
    steps[0] = 0
    height = np.cumsum(steps)  # nondecreasing along the linear extension
    h = height[rank]
    start = int(rng.integers(n))
    chain = [perm[start]]
    for e in perm[start + 1:]:
        if le[chain[-1], e]:
            chain.append(e)
    span = int(height[-1])
    phi = np.sort(rng.integers(0, len(chain), size=2 * span + 1))
    return [[chain[phi[h[i] - h[j] + span]] for j in range(n)] for i in range(n)]


def _order_preserving(rng, n, le, perm):
    """Random g with a <= b implying g(a) <= g(b); identity when greedy choice dead-ends."""
    g = {}
    for e in perm:
        lower = [g[a] for a in g if le[a, e]]
        options = [c for c in range(n) if all(le[b, c] for b in lower)]
        if not options:
            return list(range(n))
        g[e] = int(options[rng.integers(len(options))])
    return [g[i] for i in range(n)]


def generate_instance(spec: RandomInstanceSpec):
    """A random ``(space, map)`` pair, fully determined by ``spec``.

    The space always passes both validators. The map is total; whether it
    is mixed monotone is for the caller to check.
    """
    rng = np.random.default_rng(int(spec.seed))
    n = spec.n
    labels = [str(i) for i in range(n)]
    grid = np.array(spec.distance_grid)
    for _ in range(spec.max_attempts):
        dist = _random_metric(rng, n, grid)
        le, perm = _random_order(rng, n, spec.order_density)
        if spec.map_kind == "monotone":
            table = _monotone_table(rng, n, le, perm)
        else:
            table = rng.integers(0, n, size=(n, n)).tolist()
        if n > 1 and np.any(dist[~np.eye(n, dtype=bool)] <= 0):
            continue
        order = [(labels[i], labels[j]) for i in range(n) for j in range(n) if le[i, j]]
        space = FiniteOrderedMetricSpace(labels, dist, order)
        if not (validate_metric(space).ok and validate_order(space).ok):
            continue
        F = TableMap(
            (labels[i], labels[j], labels[int(table[i][j])]) for i in range(n) for j in range(n)
        )
        return space, F
    raise GenerationError(
        f"no valid instance after {spec.max_attempts} attempts (seed {spec.seed})"
    )


@dataclass
class InstanceOutcome:
    """Hypotheses and conclusions for one finite instance."""

    mixed_monotone: bool
    new_condition: bool
    starts: Tuple[Tuple[str, str], ...]
    cfps: Optional[CoupledFixedPointSet] = None
    traces: Tuple[IterationTrace, ...] = ()
    separation: Optional[SeparationReport] = None
    failed: Tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return self.mixed_monotone and self.new_condition and bool(self.starts)


def check_instance(space: FiniteOrderedMetricSpace, F: TableMap) -> InstanceOutcome:
    """Test the theorem's conclusions on one instance if its hypotheses hold."""
    mm = is_mixed_monotone(F, space).holds
    nc = check_new_condition(F, space).holds
    starts = tuple(
        (a, b) for a in space.elements for b in space.elements if check_start(F, space, a, b).ok
    )
    out = InstanceOutcome(mm, nc, starts)
    if not out.hypotheses_hold:
        return out
    cfps = enumerate_cfp(F, space)
    traces = tuple(iterate(F, space, a, b) for a, b in starts)
    sep = separation_bound(cfps, space)
    failed = []
    if not cfps.pairs:
        failed.append("existence")
    stray = [
        {"start": [t.points[0][0], t.points[0][1]], "verdict": t.verdict,
         "limit": None if t.limit is None else list(t.limit)}
        for t in traces
        if not (t.converged and t.limit in cfps)
    ]
    if stray:
        failed.append("iteration")
        out.details["stray_runs"] = stray
    if not sep.holds:
        failed.append("separation")
        out.details["separation"] = sep.to_dict()
    out.cfps, out.traces, out.separation, out.failed = cfps, traces, sep, tuple(failed)
    return out


@dataclass
class StressSummary:
    instances: int = 0
    generation_failures: int = 0
    not_mixed_monotone: int = 0
    new_condition_fails: int = 0
    no_start: int = 0
    hypothesis_satisfied: int = 0
    cfp_nonempty: int = 0
    runs: int = 0
    converged: int = 0
    converged_in_set: int = 0
    cycles: int = 0
    max_iterations_exceeded: int = 0
    separation_checked: int = 0
    separation_ok: int = 0
    failures: List[dict] = field(default_factory=list)
    traces: List[IterationTrace] = field(default_factory=list, repr=False)

    @property
    def conclusion_failures(self) -> int:
        return len(self.failures)

    def to_dict(self):
        d = {k: v for k, v in asdict(self).items() if k not in ("failures", "traces")}
        d["conclusion_failures"] = self.conclusion_failures
        d["failures"] = self.failures
        return d

    def to_text(self) -> str:
        d = self.to_dict()
        width = max(len(k) for k in d)
        lines = [f"{k:<{width}}  {v}" for k, v in d.items() if k != "failures"]
        for f in self.failures:
            lines.append(
                f"FAILED {f['failed_conclusion']}: seed={f['seed']} index={f['index']}"
            )
        return "\n".join(lines)


def _tally(summary: StressSummary, outcome: InstanceOutcome, keep_traces: bool):
    if not outcome.mixed_monotone:
        summary.not_mixed_monotone += 1
    if not outcome.new_condition:
        summary.new_condition_fails += 1
    if not outcome.starts:
        summary.no_start += 1
    if not outcome.hypotheses_hold:
        return
    summary.hypothesis_satisfied += 1
    summary.cfp_nonempty += bool(outcome.cfps.pairs)
    for t in outcome.traces:
        summary.runs += 1
        summary.converged += t.converged
        summary.converged_in_set += t.converged and t.limit in outcome.cfps
        summary.cycles += t.verdict == CYCLE
        summary.max_iterations_exceeded += t.verdict not in (CONVERGED, CYCLE)
    if keep_traces:
        summary.traces.extend(outcome.traces)
    if not outcome.separation.vacuous:
        summary.separation_checked += 1
        summary.separation_ok += outcome.separation.holds


def stress_theorem(
    spec: RandomInstanceSpec,
    count: int,
    inject: Sequence[Tuple[FiniteOrderedMetricSpace, TableMap]] = (),
    keep_traces: bool = False,
) -> StressSummary:
    """Generate ``count`` instances and test the theorem's conclusions on each.

    Instance ``i`` is generated from ``instance_seed(spec.seed, i)``.
    Instances in ``inject`` are checked first. Every failed conclusion is
    recorded in ``summary.failures`` with enough data to reproduce it.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    summary = StressSummary()
    work = [("injected", k, None, inst) for k, inst in enumerate(inject)]
    work += [("generated", i, instance_seed(spec.seed, i), None) for i in range(count)]
    for source, index, seed, inst in work:
        summary.instances += 1
        sub = spec if seed is None else replace(spec, seed=seed)
        if inst is None:
            try:
                inst = generate_instance(sub)
            except GenerationError:
                summary.generation_failures += 1
                continue
        space, F = inst
        outcome = check_instance(space, F)
        _tally(summary, outcome, keep_traces)
        for name in outcome.failed:
            summary.failures.append({
                "seed": None if seed is None else int(seed),
                "index": index,
                "source": source,
                "spec": sub.to_dict(),
                "space": space.to_dict(),
                "map": F.to_dict(),
                "failed_conclusion": name,
                "details": outcome.details,
            })
    return summary


def append_archive(path, records: Iterable[dict]) -> int:
    """Append ``records`` as JSON lines; returns how many were written."""
    n = 0
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            n += 1
    return n


def read_archive(path) -> List[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
