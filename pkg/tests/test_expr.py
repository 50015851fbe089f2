import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from opm_fixpoint import ExprEvalError, ExprSyntaxError
from opm_fixpoint.expr import BinOp, Call, Neg, Num, Var, evaluate, parse, to_source


# Reference evaluator: precedence climbing that computes while it reads,
# with no tree in between.
_REF_TOKEN = re.compile(r"\s*(\d+\.\d*|\d+|\.\d+|[xy]\d+|min|max|abs|[-+*/(),])")
_BINDING = {"+": 1, "-": 1, "*": 2, "/": 2}


def reference_eval(text, x, y):
    tokens = _REF_TOKEN.findall(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def operand():
        tok = take()
        if tok == "-":
            return -operand()
        if tok == "(":
            v = climb(1)
            assert take() == ")"
            return v
        if tok in ("min", "max", "abs"):
            assert take() == "("
            args = [climb(1)]
            while peek() == ",":
                take()
                args.append(climb(1))
            assert take() == ")"
            return {"min": min, "max": max, "abs": abs}[tok](*args)
        if tok[0] in "xy":
            return (x if tok[0] == "x" else y)[int(tok[1:]) - 1]
        return float(tok)

    def climb(min_bind):
        lhs = operand()
        while peek() in _BINDING and _BINDING[peek()] >= min_bind:
            op = take()
            rhs = climb(_BINDING[op] + 1)
            if op == "+":
                lhs = lhs + rhs
            elif op == "-":
                lhs = lhs - rhs
            elif op == "*":
                lhs = lhs * rhs
            else:
                lhs = lhs / rhs
        return lhs

    v = climb(1)
    assert pos == len(tokens)
    return v


def random_expression(rng, dim, depth=0):
    r = rng.random()
    if depth > 3 or r < 0.3:
        leaf = rng.random()
        if leaf < 0.4:
            return rng.choice(["x", "y"]) + str(rng.randint(1, dim))
        return rng.choice(["0.5", "2", "3.25", "7", "1.", ".75", "10"])
    if r < 0.75:
        op = rng.choice("+-*/")
        sp = rng.choice(["", " ", "  "])
        return f"{random_expression(rng, dim, depth + 1)}{sp}{op}{sp}{random_expression(rng, dim, depth + 1)}"
    if r < 0.85:
        return f"-{random_expression(rng, dim, depth + 1) if rng.random() < 0.5 else '(' + random_expression(rng, dim, depth + 1) + ')'}"
    if r < 0.92:
        return f"({random_expression(rng, dim, depth + 1)})"
    f = rng.choice(["min", "max", "abs"])
    if f == "abs":
        return f"abs({random_expression(rng, dim, depth + 1)})"
    return f"{f}({random_expression(rng, dim, depth + 1)}, {random_expression(rng, dim, depth + 1)})"


class TestParse:
    def test_division_shape(self):
        e = parse("(x1 - 2*y1)/8", 1)
        assert e == BinOp("/", BinOp("-", Var("x", 1), BinOp("*", Num(2.0), Var("y", 1))), Num(8.0))

    def test_variable_out_of_range(self):
        with pytest.raises(ExprSyntaxError, match="out of range") as info:
            parse("x2", 1)
        assert info.value.offset == 0

    def test_min_node(self):
        e = parse("min(x1, y1) + 0.5", 1)
        assert e == BinOp("+", Call("min", (Var("x", 1), Var("y", 1))), Num(0.5))
        assert evaluate(e, [3.0], [-1.0]) == -0.5
        assert evaluate(e, [1.0], [4.0]) == 1.5

    @pytest.mark.parametrize(
        "text, offset",
        [("x1 +", 4), ("x1 $ 2", 3), ("foo(x1)", 0), ("(x1", 3), ("min(x1)", 0), ("x1 x1", 3), ("", 0)],
    )
    def test_syntax_errors_carry_offsets(self, text, offset):
        with pytest.raises(ExprSyntaxError) as info:
            parse(text, 1)
        assert info.value.offset == offset

    def test_offset_is_in_bytes(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("é + ?", 1)
        assert info.value.offset == 0
        with pytest.raises(ExprSyntaxError) as info:
            parse("x1 + é", 1)
        assert info.value.offset == 5

    def test_whitespace_insensitive(self):
        assert parse(" ( x1-2 * y1 ) / 8 ", 1) == parse("(x1-2*y1)/8", 1)


class TestEvaluate:
    def test_linear_map_value(self):
        assert evaluate(parse("(x1 - 2*y1)/8", 1), [-1.0], [1.0]) == -0.375

    def test_identity(self):
        assert evaluate(parse("x1", 1), [4.25], [9.0]) == 4.25

    def test_abs(self):
        assert evaluate(parse("abs(x1 - y1)", 1), [2.0], [5.0]) == 3

    def test_precedence(self):
        assert evaluate(parse("2+3*4", 1), [0.0], [0.0]) == 14
        assert evaluate(parse("-x1*x1", 1), [3.0], [0.0]) == -9
        assert evaluate(parse("8/4/2", 1), [0.0], [0.0]) == 1
        assert evaluate(parse("8-4-2", 1), [0.0], [0.0]) == 2

    def test_division_by_zero_is_an_error(self):
        with pytest.raises(ExprEvalError):
            evaluate(parse("1/(x1 - y1)", 1), [2.0], [2.0])

    def test_higher_dimension(self):
        e = parse("max(x1, x2) - y2", 2)
        assert evaluate(e, [1.0, 5.0], [0.0, 2.0]) == 3


def test_agrees_with_reference_on_random_corpus():
    rng = random.Random(20240117)
    corpus = [random_expression(rng, 2) for _ in range(60)]
    assert len(set(corpus)) >= 50
    compared = 0
    for text in corpus:
        e = parse(text, 2)
        for _ in range(10):
            x = [rng.uniform(-5, 5), rng.uniform(-5, 5)]
            y = [rng.uniform(-5, 5), rng.uniform(-5, 5)]
            try:
                expected = reference_eval(text, x, y)
            except ZeroDivisionError:
                with pytest.raises(ExprEvalError):
                    evaluate(e, x, y)
                continue
            assert evaluate(e, x, y) == expected, text
            compared += 1
    assert compared >= 500


leaves = st.one_of(
    st.floats(0, 1e6, allow_nan=False).map(Num),
    st.builds(Var, st.sampled_from(["x", "y"]), st.integers(1, 3)),
)
trees = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.builds(Neg, kids),
        st.builds(BinOp, st.sampled_from("+-*/"), kids, kids),
        st.builds(lambda a, b, f: Call(f, (a, b)), kids, kids, st.sampled_from(["min", "max"])),
        st.builds(lambda a: Call("abs", (a,)), kids),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_pretty_print_round_trip(tree):
    assert parse(to_source(tree), 3) == tree
