"""Evaluation of parsed expressions by dispatch to the numeric modules."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

from .errors import DomainError, QSeriesError
from .parser import BinOp, Call, Imag, ListNode, Name, Node, Number, Unary, parse
from .qcalculus import KINDS, Monomial, PochQuotient, QIntegralSpec, q_beta, q_gamma, q_integral
from .qcore import is_exact, qbinom, qbinom_general, qpoch, qpoch_complex_index, qpoch_inf
from .series import evaluate, make_vwp, phi, psi
from .theta import theta

__all__ = ["evaluate_expr", "eval_ast", "FUNCTIONS", "QINT_KINDS", "INTEGRANDS", "INF"]

MODES = ("float", "rational")


class _Infinity:
    """Marker for the ``inf`` Pochhammer index."""

    def __repr__(self) -> str:
        return "inf"


INF = _Infinity()
_NAMES = {"inf": INF, "pi": math.pi}

# identifier used in the language -> q-integral kind
QINT_KINDS = {kind.replace("-", "_"): kind for kind in KINDS}


def _scalar(x, what: str):
    if isinstance(x, (list, _Infinity)) or isinstance(x, Monomial | PochQuotient):
        raise DomainError(f"{what} must be a number")
    return x


def _integer(x, what: str) -> int:
    if is_exact(x) and Fraction(x).denominator == 1:
        return int(x)
    if isinstance(x, (float, complex)) and complex(x).imag == 0 and float(complex(x).real).is_integer():
        return int(complex(x).real)
    raise DomainError(f"{what} must be an integer")


def _is_integral(x) -> bool:
    try:
        _integer(x, "")
        return True
    except DomainError:
        return False


def _list(x, what: str) -> list:
    if not isinstance(x, list):
        raise DomainError(f"{what} must be a bracketed list")
    return [_scalar(v, what) for v in x]


def _f_qpoch(a, q, n):
    if n is INF:
        return qpoch_inf(a, q)
    if _is_integral(n):
        return qpoch(a, q, _integer(n, "index"))
    return qpoch_complex_index(a, q, n)


def _f_qbinom(n, k, q):
    if _is_integral(n) and _is_integral(k):
        return qbinom(_integer(n, "n"), _integer(k, "k"), q)
    return qbinom_general(n, k, q)


def _f_phi(nums, dens, q, z):
    return evaluate(phi(_list(nums, "numerators"), _list(dens, "denominators"), q, z))


def _f_psi(nums, dens, q, z):
    return evaluate(psi(_list(nums, "numerators"), _list(dens, "denominators"), q, z))


def _f_w(a1, rest, q, z):
    return evaluate(make_vwp(a1, _list(rest, "parameters"), q, z))


def _f_theta(j, x, q):
    return theta(_integer(j, "theta index"), x, q)


def _f_monomial(c, coeff=1):
    return Monomial(_integer(c, "") if _is_integral(c) else c, coeff)


def _f_pochq(nums, dens, c=0):
    return ("pochq", _list(nums, "numerators"), _list(dens, "denominators"), c)


def _f_qint(kind, bounds, integrand, q):
    if not isinstance(bounds, list):
        raise DomainError("q-integral bounds must be a bracketed list")
    if isinstance(integrand, tuple):
        _, nums, dens, c = integrand
        integrand = PochQuotient(tuple(complex(u) for u in nums), tuple(complex(v) for v in dens), q, c)
    if not isinstance(integrand, Monomial | PochQuotient):
        raise DomainError("integrand must be monomial(c[, coeff]) or pochq([nums], [dens][, c])")
    lower, upper = 0, 1
    if kind == "zero-to-a":
        (upper,) = _bounds(bounds, 1, kind)
    elif kind == "a-to-b":
        lower, upper = _bounds(bounds, 2, kind)
    else:
        _bounds(bounds, 0, kind)
    return q_integral(QIntegralSpec(kind, integrand, q, lower, upper))


def _bounds(bounds: list, count: int, kind: str) -> list:
    if len(bounds) != count:
        raise DomainError(f"{kind} q-integral takes {count} bound(s)")
    return bounds


# name -> (callable, minimum arity, maximum arity)
FUNCTIONS: dict[str, tuple[Callable, int, int]] = {
    "qpoch": (_f_qpoch, 3, 3),
    "qbinom": (_f_qbinom, 3, 3),
    "phi": (_f_phi, 4, 4),
    "psi": (_f_psi, 4, 4),
    "W": (_f_w, 4, 4),
    "qgamma": (q_gamma, 2, 2),
    "qbeta": (q_beta, 3, 3),
    "theta": (_f_theta, 3, 3),
    "qint": (_f_qint, 4, 4),
}
INTEGRANDS = {"monomial": (_f_monomial, 1, 2), "pochq": (_f_pochq, 2, 3)}


def _number(text: str, mode: str):
    if mode == "rational":
        return Fraction(text)
    if any(ch in text for ch in ".eE"):
        return float(text)
    return int(text)


def _arith(op: str, x, y):
    for v in (x, y):
        _scalar(v, "arithmetic operand")
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if y == 0:
        raise DomainError("division by zero")
    if isinstance(x, int) and isinstance(y, int) and x % y == 0:
        return x // y
    return x / y


def _located(err: QSeriesError, node: Node, label: str) -> QSeriesError:
    if getattr(err, "located", False):
        return err
    try:
        new = type(err)(f"{err} [in {label} at offset {node.pos}]")
    except TypeError:
        return err
    new.offset = node.pos
    new.located = True
    return new


def eval_ast(node: Node, mode: str = "float", _qint_arg: bool = False):
    """Evaluate an AST; module errors carry the offset of the call that raised them."""
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}")
    if isinstance(node, Number):
        return _number(node.text, mode)
    if isinstance(node, Imag):
        return complex(0, float(node.text))
    if isinstance(node, Name):
        if node.id in QINT_KINDS and _qint_arg:
            return QINT_KINDS[node.id]
        if node.id not in _NAMES:
            raise _located(DomainError(f"unknown name {node.id!r}"), node, node.id)
        return _NAMES[node.id]
    if isinstance(node, ListNode):
        return [eval_ast(x, mode) for x in node.items]
    if isinstance(node, Unary):
        value = _scalar(eval_ast(node.operand, mode), "operand")
        return -value if node.op == "-" else value
    if isinstance(node, BinOp):
        try:
            return _arith(node.op, eval_ast(node.left, mode), eval_ast(node.right, mode))
        except QSeriesError as err:
            raise _located(err, node, f"'{node.op}'") from err
    if isinstance(node, Call):
        table = INTEGRANDS if _qint_arg and node.name in INTEGRANDS else FUNCTIONS
        if node.name not in table:
            raise _located(DomainError(f"unknown function {node.name!r}"), node, node.name)
        fn, lo, hi = table[node.name]
        if not lo <= len(node.args) <= hi:
            want = str(lo) if lo == hi else f"{lo} to {hi}"
            raise _located(DomainError(f"{node.name} takes {want} arguments, got {len(node.args)}"),
                           node, node.name)
        nested = node.name == "qint"
        args = [eval_ast(x, mode, _qint_arg=nested) for x in node.args]
        try:
            if node.name == "qint" and args[0] not in KINDS:
                raise DomainError(f"unknown q-integral kind; use one of {sorted(QINT_KINDS)}")
            return fn(*args)
        except QSeriesError as err:
            raise _located(err, node, node.name + "(...)") from err
        except ZeroDivisionError as err:
            raise _located(DomainError("division by zero"), node, node.name + "(...)") from err
    raise TypeError(f"not an AST node: {node!r}")


def evaluate_expr(text: str, mode: str = "float"):
    return eval_ast(parse(text), mode)
