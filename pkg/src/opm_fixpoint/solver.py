"""Coupled Picard iteration x_{n+1} = F(x_n, y_n), y_{n+1} = F(y_n, x_n)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from .conditions import DEFAULT_EPS_FP, is_coupled_fixed_point
from .errors import PointError, StartConditionError, TraceError
from .maps import CoupledMap, apply, require_valid
from .spaces import RealVectorSpace

log = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations_exceeded"
CYCLE = "cycle"

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000

X_START = "x0 <= F(x0, y0)"
Y_START = "y0 >= F(y0, x0)"


@dataclass(frozen=True)
class StartCheck:
    ok: bool
    failed: Tuple[str, ...]
    x_image: object
    y_image: object

    def __bool__(self):
        return self.ok


def check_start(F: CoupledMap, space, x0, y0) -> StartCheck:
    """Whether ``(x0, y0)`` is an admissible starting pair; ``failed`` names what is not."""
    if F.backend != space.backend:
        raise PointError(f"{F.backend} map used with a {space.backend} space")
    x0, y0 = space.check_point(x0), space.check_point(y0)
    fx, fy = apply(F, space, x0, y0), apply(F, space, y0, x0)
    failed = []
    if not space.leq(x0, fx):
        failed.append(X_START)
    if not space.leq(fy, y0):
        failed.append(Y_START)
    return StartCheck(not failed, tuple(failed), fx, fy)


@dataclass(frozen=True)
class IterationTrace:
    """Everything one run of the iteration produced.

    ``step_distances[n]`` is d(x_{n+1}, x_n) + d(y_{n+1}, y_n) and
    ``monotone_ok[n]`` says whether x_n <= x_{n+1} and y_n >= y_{n+1}.
    ``iterations`` counts applications of the pair map, so a run started
    at a coupled fixed point has one iteration with step distance 0.
    """

    points: Tuple[tuple, ...]
    step_distances: Tuple[float, ...]
    betas: Tuple[float, ...]
    monotone_ok: Tuple[bool, ...]
    verdict: str
    iterations: int
    limit: Optional[tuple] = None
    period: Optional[int] = None
    hypothesis_met: bool = True
    limit_is_fixed: Optional[bool] = None

    @property
    def converged(self) -> bool:
        return self.verdict == CONVERGED

    @property
    def betas_nonincreasing(self) -> bool:
        return all(b2 <= b1 for b1, b2 in zip(self.betas, self.betas[1:]))

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "iterations": self.iterations,
            "limit": None if self.limit is None else [_plain(c) for c in self.limit],
            "period": self.period,
            "hypothesis_met": self.hypothesis_met,
            "limit_is_fixed": self.limit_is_fixed,
            "points": [[_plain(x), _plain(y)] for x, y in self.points],
            "step_distances": list(self.step_distances),
            "betas": list(self.betas),
            "betas_nonincreasing": self.betas_nonincreasing,
            "monotone_ok": list(self.monotone_ok),
        }

    def to_text(self) -> str:
        rows = [f"{'n':>5}  {'x_n':>24}  {'y_n':>24}  {'D_n':>12}  {'beta_n':>10}  mono"]
        for n, (x, y) in enumerate(self.points):
            dn = f"{self.step_distances[n]:12.6g}" if n < len(self.step_distances) else " " * 12
            bn = f"{self.betas[n - 1]:10.6f}" if 1 <= n <= len(self.betas) else " " * 10
            mono = ("yes" if self.monotone_ok[n] else "NO") if n < len(self.monotone_ok) else ""
            rows.append(f"{n:>5}  {_fmt(x):>24}  {_fmt(y):>24}  {dn}  {bn}  {mono}".rstrip())
        return "\n".join(rows)


def _plain(p):
    return list(p) if isinstance(p, tuple) else p


def _fmt(p) -> str:
    if isinstance(p, tuple):
        return "(" + ", ".join(f"{c:.6g}" for c in p) + ")"
    return str(p)


def iterate(
    F: CoupledMap,
    space,
    x0,
    y0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    allow_unmet_start: bool = False,
    eps_fp: float = DEFAULT_EPS_FP,
) -> IterationTrace:
    """Run the coupled iteration from ``(x0, y0)``.

    Stops when the pair repeats (a repeat of the current pair is
    convergence, an earlier pair is a cycle), when the step distance drops
    below ``tol`` on a real-vector space, or after ``max_iter`` applications.
    Raises :class:`StartConditionError` for an inadmissible start unless
    ``allow_unmet_start`` is set.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be a positive integer")
    require_valid(F, space)
    start = check_start(F, space, x0, y0)
    if not start.ok and not allow_unmet_start:
        raise StartConditionError(
            "start condition unmet: " + " and ".join(start.failed), start.failed
        )
    x, y = space.check_point(x0), space.check_point(y0)
    continuous = isinstance(space, RealVectorSpace)

    points = [(x, y)]
    seen = {(x, y): 0}
    dists, mono = [], []
    verdict, limit, period = MAX_ITERATIONS, None, None
    for n in range(max_iter):
        nx, ny = apply(F, space, x, y), apply(F, space, y, x)
        points.append((nx, ny))
        step = space.dist(nx, x) + space.dist(ny, y)
        dists.append(step)
        mono.append(space.leq(x, nx) and space.leq(ny, y))
        if (nx, ny) == (x, y) or (continuous and step < tol):
            verdict, limit = CONVERGED, (nx, ny)
            break
        if (nx, ny) in seen:
            verdict, period = CYCLE, n + 1 - seen[(nx, ny)]
            break
        seen[(nx, ny)] = n + 1
        x, y = nx, ny
    else:
        log.info("no convergence after %d iterations", max_iter)

    limit_is_fixed = None
    if limit is not None:
        limit_is_fixed = is_coupled_fixed_point(F, space, *limit, eps=eps_fp)
    try:
        betas = _betas(dists, verdict)
    except TraceError:
        betas = ()
    return IterationTrace(
        points=tuple(points),
        step_distances=tuple(dists),
        betas=betas,
        monotone_ok=tuple(mono),
        verdict=verdict,
        iterations=len(dists),
        limit=limit,
        period=period,
        hypothesis_met=start.ok,
        limit_is_fixed=limit_is_fixed,
    )


def _padded_steps(dists, verdict):
    dists = list(dists)
    # a zero step means the pair is fixed, so every later step is zero too
    if verdict == CONVERGED and dists and dists[-1] == 0:
        dists.append(0.0)
    return dists


def _betas(dists, verdict) -> Tuple[float, ...]:
    D = _padded_steps(dists, verdict)
    if len(D) < 2:
        raise TraceError("beta needs at least two step distances")
    out = []
    for n in range(1, len(D)):
        s = D[n - 1] + D[n]
        out.append(2 * s / (1 + 2 * s))
    return tuple(out)


def beta_sequence(trace: IterationTrace) -> Tuple[float, ...]:
    """beta_n = 2 (D_{n-1} + D_n) / (1 + 2 (D_{n-1} + D_n)) for n = 1, 2, ...

    The numerator is the denominator minus one, so every value lies in
    [0, 1). A trace that stopped on an exactly fixed pair is extended by
    its (zero) next step.
    """
    return _betas(trace.step_distances, trace.verdict)


@dataclass(frozen=True)
class CauchyReport:
    """Pairwise check of d(x_n, x_m) + d(y_n, y_m) against beta_1^n * D_0.

    ``violations`` lists ``(n, m, lhs, rhs)`` for that bound.
    ``series_violations`` does the same for the summed geometric bound
    beta_1^n (1 - beta_1^(m-n)) / (1 - beta_1) * D_0.
    """

    beta_1: float
    base: float
    pairs_checked: int
    violations: Tuple[tuple, ...]
    series_violations: Tuple[tuple, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "beta_1": self.beta_1,
            "base": self.base,
            "pairs_checked": self.pairs_checked,
            "holds": self.holds,
            "violations": [list(v) for v in self.violations],
            "series_violations": [list(v) for v in self.series_violations],
        }


def cauchy_bound_check(trace: IterationTrace, space) -> CauchyReport:
    betas = beta_sequence(trace)
    b1 = betas[0]
    base = trace.step_distances[0]
    pts = trace.points
    bad, bad_series, count = [], [], 0
    for n in range(len(pts)):
        xn, yn = pts[n]
        for m in range(n + 1, len(pts)):
            xm, ym = pts[m]
            lhs = space.dist(xn, xm) + space.dist(yn, ym)
            rhs = b1 ** n * base
            count += 1
            if lhs > rhs:
                bad.append((n, m, lhs, rhs))
            series = b1 ** n * (1 - b1 ** (m - n)) / (1 - b1) * base if b1 < 1 else float("inf")
            if lhs > series:
                bad_series.append((n, m, lhs, series))
    return CauchyReport(b1, base, count, tuple(bad), tuple(bad_series))
