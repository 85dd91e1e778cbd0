import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helixsub.catalog import parse_immersion
from helixsub.errors import (
    ArityError,
    ComponentCountMismatch,
    ExprSyntaxError,
    NumericalDomain,
    UnknownIdentifier,
)
from helixsub.expr import (
    FUNCTIONS,
    BinOp,
    Func,
    Neg,
    Num,
    Param,
    Var,
    eval_ast,
    parse_expression,
    parse_expressions,
    to_text,
)

VARS = ["u1", "u2"]
U = (0.5, 2.0)

# (text, expected value at U with a = 3) -- values written out by hand
VALID = [
    ("3", 3.0),
    ("2.5e1", 25.0),
    (".5", 0.5),
    ("u1", 0.5),
    ("u1 + u2 * 2", 4.5),
    ("(u1 + u2) * 2", 5.0),
    ("u2 - u1 - 1", 0.5),
    ("u2 / u1 / 2", 2.0),
    ("2^3^2", 512.0),
    ("-u2^2", 4.0),
    ("-(u2^2)", -4.0),
    ("u1 - -u2", 2.5),
    ("u2^-1", 0.5),
    ("u2^0.5", math.sqrt(2.0)),
    ("(-2)^3", -8.0),
    ("sin(0) + cos(0)", 1.0),
    ("sqrt(u2 * 8)", 4.0),
    ("exp(log(u2))", 2.0),
    ("sinh(0) + cosh(0) + tan(0)", 1.0),
    ("a * u1", 1.5),
    ("pi", math.pi),
    ("2 * e", 2 * math.e),
    ("  u1\t+ u2  ", 2.5),
]

# (text, error type, 1-based position or None)
INVALID = [
    ("cos(", ExprSyntaxError, 5),
    ("cos(u1, u2)", ArityError, 4),
    ("2u1", ExprSyntaxError, 2),
    ("u1 +", ExprSyntaxError, 5),
    ("(u1", ExprSyntaxError, 4),
    ("u3", UnknownIdentifier, 1),
    ("foo(u1)", UnknownIdentifier, 1),
]


@pytest.mark.parametrize("text,expected", VALID)
def test_grammar_accepts(text, expected):
    ast = parse_expression(text, VARS, params=("a",))
    assert eval_ast(ast, U, {"a": 3.0}) == pytest.approx(expected, rel=1e-15, abs=1e-15)


@pytest.mark.parametrize("text,error,position", INVALID)
def test_grammar_rejects(text, error, position):
    with pytest.raises(error) as info:
        parse_expression(text, VARS)
    assert info.value.position == position


def test_conformance_suite_size():
    assert len(VALID) + len(INVALID) == 30


def test_syntax_error_lists_expected_tokens():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression("cos(", VARS)
    assert "number" in info.value.expected and "'('" in info.value.expected
    assert "position 5" in str(info.value)


def test_bare_function_name_needs_parenthesis():
    with pytest.raises(ExprSyntaxError):
        parse_expression("sin + 1", VARS)


def test_component_count():
    assert len(parse_expressions("u1, u2, u1*u2", VARS, n=3)) == 3
    with pytest.raises(ComponentCountMismatch):
        parse_expressions("u1, u2", VARS, n=3)


def test_eval_examples():
    assert eval_ast(Num(3.0), []) == 3.0
    assert eval_ast(parse_expression("sqrt(u1)", ["u1"]), [4.0]) == 2.0
    with pytest.raises(NumericalDomain) as info:
        eval_ast(parse_expression("log(u1)", ["u1"]), [0.0])
    assert info.value.position == 1


@pytest.mark.parametrize(
    "text,u",
    [("sqrt(u1)", -1.0), ("1 / u1", 0.0), ("u1^0.5", -4.0), ("u1^-1", 0.0), ("exp(u1)", 1e4)],
)
def test_eval_domain_faults(text, u):
    with pytest.raises(NumericalDomain):
        eval_ast(parse_expression(text, ["u1"]), [u])


def test_unbound_parameter():
    with pytest.raises(UnknownIdentifier):
        eval_ast(parse_expression("a", [], params=("a",)), [])


def test_parse_immersion_examples():
    cyl = parse_immersion("cos(u1), sin(u1), u2", 2, 3)
    np.testing.assert_allclose(cyl.map([0.0, 1.0]), [1.0, 0.0, 1.0], atol=1e-15)
    saddle = parse_immersion("u1, u2, u1*u2", 2, 3, domain=((-3, 3), (-3, 3)))
    np.testing.assert_allclose(saddle.map([1.0, 2.0]), [1.0, 2.0, 2.0])
    with pytest.raises(ArityError):
        parse_immersion("cos(u1, u2), u1, u2", 2, 3)
    with pytest.raises(ComponentCountMismatch):
        parse_immersion("u1, u2", 2, 3)


# round trip: random ASTs printed and reparsed evaluate identically

_leaves = st.one_of(
    # the grammar has no negative literals; negation is a Neg node
    st.floats(0, 10, allow_nan=False, allow_infinity=False).map(Num),
    st.sampled_from([Var("u1", 0), Var("u2", 1), Param("a"), Param("pi")]),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(Func, st.sampled_from(sorted(FUNCTIONS)), children),
        st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
    )


asts = st.recursive(_leaves, _extend, max_leaves=12)


def _strip(node):
    """Structure without source positions."""
    if isinstance(node, Num):
        return ("num", node.value)
    if isinstance(node, (Var, Param)):
        return ("id", node.name)
    if isinstance(node, Neg):
        return ("neg", _strip(node.arg))
    if isinstance(node, Func):
        return (node.name, _strip(node.arg))
    return (node.op, _strip(node.left), _strip(node.right))


def _value(ast, u):
    try:
        return eval_ast(ast, u, {"a": 1.7})
    except NumericalDomain:
        return None


POINTS = np.random.default_rng(7).uniform(-2, 2, size=(100, 2))


@settings(max_examples=100)
@given(asts)
def test_round_trip(ast):
    again = parse_expression(to_text(ast), VARS, params=("a",))
    assert _strip(again) == _strip(ast)
    for u in POINTS[:10]:
        a, b = _value(ast, u), _value(again, u)
        assert (a is None) == (b is None)
        if a is not None:
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_round_trip_on_100_points():
    text = "sin(u1)*u2^2 - exp(-u1/3) + a*cosh(u2/2) / (1 + u1^2)"
    ast = parse_expression(text, VARS, params=("a",))
    again = parse_expression(to_text(ast), VARS, params=("a",))
    for u in POINTS:
        assert abs(_value(ast, u) - _value(again, u)) <= 1e-12
