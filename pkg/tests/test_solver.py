import json

import pytest
from hypothesis import given, settings, strategies as st

from opm_fixpoint import (
    ExprMap,
    RandomInstanceSpec,
    RealVectorSpace,
    StartConditionError,
    TableMap,
    TraceError,
    beta_sequence,
    cauchy_bound_check,
    check_start,
    enumerate_cfp,
    generate_instance,
    is_coupled_fixed_point,
    is_mixed_monotone,
    iterate,
)
from opm_fixpoint.solver import CONVERGED, CYCLE, MAX_ITERATIONS, X_START, Y_START


class TestCheckStart:
    def test_two_point_start(self, two_point_space, two_point_map):
        res = check_start(two_point_map, two_point_space, "0", "1")
        assert res.ok and (res.x_image, res.y_image) == ("0", "1")

    def test_at_fixed_point(self, two_point_space, two_point_map):
        assert check_start(two_point_map, two_point_space, "1", "1")

    def test_continuous(self, line, linear_map):
        res = check_start(linear_map, line, (-1.0,), (1.0,))
        assert res.ok
        assert res.x_image == (-0.375,) and res.y_image == (0.375,)

    def test_failure_names_inequality(self, two_point_space):
        G = TableMap.from_function(two_point_space, lambda a, b: "0")
        res = check_start(G, two_point_space, "1", "0")
        assert not res.ok and res.failed == (X_START,)
        H = TableMap.from_function(two_point_space, lambda a, b: "1")
        assert check_start(H, two_point_space, "1", "0").failed == (Y_START,)


class TestIterate:
    def test_two_point_converges_immediately(self, two_point_space, two_point_map):
        t = iterate(two_point_map, two_point_space, "0", "1")
        assert t.verdict == CONVERGED
        assert t.limit == ("0", "1")
        assert t.iterations == 1
        assert t.step_distances == (0.0,)

    def test_linear_map(self, line, linear_map):
        t = iterate(linear_map, line, (-1.0,), (1.0,), tol=1e-9)
        assert t.verdict == CONVERGED
        assert t.iterations <= 60
        (x,), (y,) = t.limit
        assert abs(x) + abs(y) < 1e-9
        assert t.limit_is_fixed
        assert all(t.monotone_ok)
        # x_n = -(3/8)^n and y_n = (3/8)^n exactly up to rounding
        for n, ((xn,), (yn,)) in enumerate(t.points):
            assert xn == pytest.approx(-(0.375 ** n), rel=1e-12)
            assert yn == -xn

    def test_recurrence_replay(self):
        space, F = generate_instance(RandomInstanceSpec(n=5, seed=11))
        t = iterate(F, space, "0", "1", allow_unmet_start=True)
        for (x, y), nxt in zip(t.points, t.points[1:]):
            assert nxt == (F(x, y), F(y, x))
        assert all(d >= 0 for d in t.step_distances)

    def test_unmet_start_blocks(self, two_point_space):
        G = TableMap.from_function(two_point_space, lambda a, b: "0")
        with pytest.raises(StartConditionError) as info:
            iterate(G, two_point_space, "1", "0")
        assert info.value.failed == (X_START,)
        t = iterate(G, two_point_space, "1", "0", allow_unmet_start=True)
        assert not t.hypothesis_met
        assert t.limit == ("0", "0")

    def test_cycle(self, two_point_space):
        swap = TableMap.from_function(two_point_space, lambda a, b: b)
        t = iterate(swap, two_point_space, "0", "1", allow_unmet_start=True)
        # (0,1) -> (1,0) -> (0,1)
        assert t.verdict == CYCLE and t.period == 2

    def test_max_iterations(self, line):
        slow = ExprMap.from_strings(["(x1 + 1)/2"])
        t = iterate(slow, line, (0.0,), (1.0,), tol=1e-12, max_iter=5)
        assert t.verdict == MAX_ITERATIONS and t.iterations == 5 and t.limit is None

    def test_bad_parameters(self, two_point_space, two_point_map):
        with pytest.raises(ValueError):
            iterate(two_point_map, two_point_space, "0", "1", tol=0)
        with pytest.raises(ValueError):
            iterate(two_point_map, two_point_space, "0", "1", max_iter=0)

    def test_serialization(self, line, linear_map):
        t = iterate(linear_map, line, (-1.0,), (1.0,))
        d = json.loads(json.dumps(t.to_dict()))
        assert d["verdict"] == CONVERGED and len(d["points"]) == len(t.points)
        text = t.to_text()
        assert text.splitlines()[0].split()[:3] == ["n", "x_n", "y_n"]
        assert len(text.splitlines()) == len(t.points) + 1


class TestBeta:
    def test_all_zero_steps(self, two_point_space, two_point_map):
        t = iterate(two_point_map, two_point_space, "1", "1")
        assert beta_sequence(t) == (0.0,)

    def test_two_point_trace(self, two_point_space, two_point_map):
        t = iterate(two_point_map, two_point_space, "0", "1")
        assert beta_sequence(t)[0] == 0

    def test_recomputed_from_points(self, line, linear_map):
        t = iterate(linear_map, line, (-1.0,), (1.0,))
        D = [line.dist(a[0], b[0]) + line.dist(a[1], b[1]) for a, b in zip(t.points, t.points[1:])]
        expected = [2 * (D[n - 1] + D[n]) / (1 + 2 * (D[n - 1] + D[n])) for n in range(1, len(D))]
        assert list(beta_sequence(t)) == expected
        assert t.betas == beta_sequence(t)
        assert all(0 <= b < 1 for b in t.betas)
        assert t.betas_nonincreasing

    def test_too_short(self, line):
        slow = ExprMap.from_strings(["(x1 + 1)/2"])
        t = iterate(slow, line, (0.0,), (1.0,), max_iter=1)
        with pytest.raises(TraceError):
            beta_sequence(t)


class TestCauchyBound:
    def test_constant_trace(self, two_point_space, two_point_map):
        rep = cauchy_bound_check(iterate(two_point_map, two_point_space, "1", "0"), two_point_space)
        assert rep.holds and rep.pairs_checked == 1

    def test_linear_trace_breaks_only_at_n_zero(self, line, linear_map):
        t = iterate(linear_map, line, (-1.0,), (1.0,))
        rep = cauchy_bound_check(t, line)
        # direct computation: lhs(n, m) = 2((3/8)^n - (3/8)^m), rhs = beta_1^n * 5/4
        b1 = 2 * (1.25 + 0.46875) / (1 + 2 * (1.25 + 0.46875))
        assert rep.beta_1 == pytest.approx(b1, rel=1e-15)
        expected = [
            (n, m)
            for n in range(len(t.points))
            for m in range(n + 1, len(t.points))
            if 2 * (0.375 ** n - 0.375 ** m) > b1 ** n * 1.25 * (1 + 1e-12)
        ]
        assert [(n, m) for n, m, _, _ in rep.violations] == expected
        assert expected and all(n == 0 for n, _ in expected)
        assert rep.series_violations == ()

    def test_slow_decay_is_still_evaluated(self, line):
        slow = ExprMap.from_strings(["(99*x1 + 1)/100"])
        t = iterate(slow, line, (0.0,), (1.0,), max_iter=200, tol=1e-12)
        assert t.betas[0] < 1
        rep = cauchy_bound_check(t, line)
        assert rep.pairs_checked == len(t.points) * (len(t.points) - 1) // 2


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**40), st.integers(1, 5))
def test_monotone_chain_under_hypotheses(seed, n):
    space, F = generate_instance(RandomInstanceSpec(n=n, seed=seed, map_kind="monotone"))
    assert is_mixed_monotone(F, space).holds
    fixed = enumerate_cfp(F, space)
    for x0 in space.elements:
        for y0 in space.elements:
            if not check_start(F, space, x0, y0):
                continue
            t = iterate(F, space, x0, y0)
            assert all(t.monotone_ok)
            assert t.converged and t.limit in fixed
            assert is_coupled_fixed_point(F, space, *t.limit)
            assert all(0 <= b < 1 for b in t.betas)
