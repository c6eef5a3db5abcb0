from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qseries.errors import DomainError, ParseError
from qseries.evaluator import evaluate_expr
from qseries.parser import BinOp, Call, Imag, ListNode, Number, Unary, parse, to_text


def test_call_nodes():
    node = parse("qpoch(0.5,0.5,3)")
    assert isinstance(node, Call) and node.name == "qpoch" and len(node.args) == 3
    node = parse("phi([0.3],[],0.5,0.2)")
    assert node.name == "phi"
    assert node.args[0] == ListNode((Number("0.3"),)) and node.args[1] == ListNode(())


def test_complex_literal_and_precedence():
    node = parse("1.5+0.3i")
    assert node == BinOp("+", Number("1.5"), Imag("0.3"))
    node = parse("1-2*3")
    assert node.op == "-" and node.right.op == "*"
    assert isinstance(parse("-2"), Unary)


def test_unclosed_list_error_position():
    with pytest.raises(ParseError) as info:
        parse("phi([0.3,0.5)")
    err = info.value
    assert err.offset == 12
    assert (err.line, err.column) == (1, 13)
    assert "]" in err.expected


def test_multiline_error_position():
    with pytest.raises(ParseError) as info:
        parse("qpoch(0.5,\n0.5,,3)")
    assert (info.value.line, info.value.column) == (2, 5)


@pytest.mark.parametrize("text", ["", "qpoch(", "1 +", "2 $ 3", "[1,2", "f(1))"])
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


numbers = st.sampled_from(["0", "1", "0.5", "2.25", "3e-2", ".75"])
names = st.sampled_from(["qpoch", "phi", "theta", "f"])


def _trees():
    leaves = st.one_of(numbers.map(Number), numbers.map(Imag))

    def extend(children):
        return st.one_of(
            st.builds(BinOp, st.sampled_from("+-*/"), children, children),
            st.builds(Unary, st.sampled_from("+-"), children),
            st.builds(Call, names, st.lists(children, max_size=3).map(tuple)),
            st.lists(children, max_size=3).map(lambda xs: ListNode(tuple(xs))),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(_trees())
def test_print_parse_round_trip(tree):
    text = to_text(tree)
    again = parse(text)
    assert again == tree
    assert parse(to_text(again)) == again


def test_eval_examples():
    assert evaluate_expr("qbinom(4,2,0.5)") == pytest.approx(2.1875, rel=1e-14)
    assert evaluate_expr("qgamma(1,0.5)") == pytest.approx(1.0, rel=1e-14)
    assert abs(evaluate_expr("theta(1,0,0.5)")) <= 1e-15
    assert evaluate_expr("qbinom(4,2,1/2)", "rational") == Fraction(35, 16)


def test_eval_rational_mode_is_exact():
    assert evaluate_expr("qint(zero_to_one,[],monomial(1),1/2)", "rational") == Fraction(2, 3)
    assert evaluate_expr("qpoch(1/2,1/2,3)", "rational") == Fraction(21, 64)
    assert evaluate_expr("1/3+1/6", "rational") == Fraction(1, 2)


def test_eval_series_and_inf_index():
    a, q, z = 0.3, 0.5, 0.2
    got = evaluate_expr(f"phi([{a}],[],{q},{z})")
    want = evaluate_expr(f"qpoch({a * z},{q},inf)/qpoch({z},{q},inf)")
    assert got == pytest.approx(want, rel=1e-12)


def test_eval_complex_arithmetic():
    assert evaluate_expr("(1+2i)*(1-2i)") == pytest.approx(5)


def test_eval_errors_carry_location():
    with pytest.raises(DomainError) as info:
        evaluate_expr("1 + nosuch(2)")
    assert info.value.offset == 4
    with pytest.raises(DomainError):
        evaluate_expr("qpoch(0.5,0.5)")
    with pytest.raises(DomainError):
        evaluate_expr("1/0")
