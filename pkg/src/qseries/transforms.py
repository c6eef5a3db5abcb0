"""Transformation rules: a series rewritten as a sum of coefficient x series.

Each rule works on an explicit parameter record.  ``match`` recovers that
record from a :class:`SeriesSpec` and rejects the spec unless rebuilding the
rule's left side from the recovered parameters reproduces it.  The pair
(q a^{1/2}, -q a^{1/2}) over (a^{1/2}, -a^{1/2}) only contributes
(1 - a q^{2k})/(1 - a), so the branch of the root never changes a value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .domains import (
    ParamDomain,
    cbox,
    clear_of_poles,
    exact_base,
    exact_int,
    exact_rational,
    exact_square,
    finite_clear,
    ibox,
    make_rng,
)
from .errors import DomainError, PatternMismatch, UnknownIdentity
from .qcore import (
    PASS_TOL,
    all_exact,
    inf_quotient,
    is_exact,
    lift,
    principal_sqrt,
    qpoch,
    rqpoch,
)
from .reports import VerificationReport, compare
from .series import SeriesSpec, evaluate, make_vwp, phi, termination_index

__all__ = [
    "CoeffProduct", "Term", "Expression", "TransformRule", "RULES", "lookup_rule",
    "rule_catalog", "match", "apply", "expression", "heine_chain", "verify_transform",
    "sample_rule_params",
]

MATCH_TOL = 1e-10


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class CoeffProduct:
    """scalar * prod (x;q)_n / prod (y;q)_n * prod (u;q)_inf / prod (v;q)_inf."""

    base: object
    scalar: object = 1
    fin_num: tuple = ()
    fin_den: tuple = ()
    n: int = 0
    inf_num: tuple = ()
    inf_den: tuple = ()

    def evaluate(self):
        q = lift(self.base)
        value = lift(self.scalar)
        if not (is_exact(value) and is_exact(q)):
            value = complex(value)
        for x in self.fin_num:
            value *= qpoch(x, q, self.n)
        for y in self.fin_den:
            value *= rqpoch(y, q, self.n)
        if self.inf_num or self.inf_den:
            value = complex(value) * inf_quotient(self.inf_num, self.inf_den, q)
        return value

    def times(self, other: "CoeffProduct") -> "CoeffProduct":
        if self.fin_num or self.fin_den or other.fin_num or other.fin_den:
            if self.n != other.n:
                raise ValueError("finite factors with different indices")
        return CoeffProduct(
            self.base, lift(self.scalar) * lift(other.scalar),
            self.fin_num + other.fin_num, self.fin_den + other.fin_den,
            max(self.n, other.n), self.inf_num + other.inf_num,
            self.inf_den + other.inf_den)

    def simplified(self) -> "CoeffProduct":
        """Cancel factors that appear in both numerator and denominator."""
        fin_num, fin_den = _cancel(self.fin_num, self.fin_den)
        inf_num, inf_den = _cancel(self.inf_num, self.inf_den)
        return CoeffProduct(self.base, self.scalar, fin_num, fin_den, self.n, inf_num, inf_den)

    def describe(self) -> str:
        parts = []
        if self.scalar != 1:
            parts.append(f"{self.scalar}")
        if self.fin_num or self.fin_den:
            parts.append(f"fin[{len(self.fin_num)}/{len(self.fin_den)}]_{self.n}")
        if self.inf_num or self.inf_den:
            parts.append(f"inf[{len(self.inf_num)}/{len(self.inf_den)}]")
        return " * ".join(parts) or "1"


def _cancel(num: tuple, den: tuple) -> tuple:
    den = list(den)
    kept = []
    for x in num:
        hit = next((i for i, y in enumerate(den) if _close(x, y)), None)
        if hit is None:
            kept.append(x)
        else:
            del den[hit]
    return tuple(kept), tuple(den)


@dataclass(frozen=True)
class Term:
    coeff: CoeffProduct
    series: SeriesSpec | None = None


@dataclass(frozen=True)
class Expression:
    """A sum of coefficient x series terms, evaluated in declaration order."""

    terms: tuple

    def evaluate(self, tol: float = 1e-16):
        total = None
        for term in self.terms:
            value = term.coeff.evaluate()
            if term.series is not None:
                value = value * evaluate(term.series, tol)
            total = value if total is None else total + value
        return 0 if total is None else total

    def __len__(self) -> int:
        return len(self.terms)

    def describe(self) -> list:
        return [{"coefficient": t.coeff.describe(),
                 "series": t.series.label() if t.series is not None else None}
                for t in self.terms]


def _expr(*terms) -> Expression:
    return Expression(tuple(Term(c, s) for c, s in terms))


def _inf(q, num, den, scalar=1) -> CoeffProduct:
    return CoeffProduct(q, scalar, inf_num=tuple(num), inf_den=tuple(den))


def _fin(q, n, num, den, scalar=1) -> CoeffProduct:
    return CoeffProduct(q, scalar, fin_num=tuple(num), fin_den=tuple(den), n=n)


# -- rule records ------------------------------------------------------------

@dataclass(frozen=True)
class TransformRule:
    id: str
    title: str
    lhs: Callable[[Mapping], SeriesSpec]
    rhs: Callable[[Mapping], Expression]
    extract: Callable[[SeriesSpec], dict]
    domain: ParamDomain
    conditions: tuple = ()
    arity: int = 1
    tol: float = PASS_TOL
    lhs_text: str = ""
    rhs_text: str = ""

    def describe(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "parameters": self.domain.free_names,
            "derived": [name for name, _ in self.domain.derived],
            "conditions": [text for text, _ in self.conditions],
            "constraints": [text for text, _ in self.domain.constraints],
            "terms": self.arity,
            "tol": self.tol,
            "lhs": self.lhs_text,
            "rhs": self.rhs_text,
        }


RULES: dict[str, TransformRule] = {}


def _register(rule: TransformRule) -> None:
    if rule.id in RULES:
        raise ValueError(f"duplicate rule id {rule.id}")
    RULES[rule.id] = rule


def _qm(q, n: int):
    return lift(q) ** (-n)


def _w(a, rest: Sequence, q, z) -> SeriesSpec:
    return make_vwp(a, rest, q, z)


def _modulus(expr: Callable, bound: float = 1.0):
    return lambda p: abs(complex(expr(p))) < bound


SAMPLE_SHRINK = 0.9


def _bound(text: str, expr: Callable) -> tuple:
    """A stated condition |expr| < 1, as (text, value function)."""
    return (text, expr)


def _stated(bounds) -> tuple:
    return tuple((text, _modulus(expr)) for text, expr in bounds)


def _shrunk(bounds) -> tuple:
    return tuple((f"{text} (sampled below {SAMPLE_SHRINK})", _modulus(expr, SAMPLE_SHRINK))
                 for text, expr in bounds)


def _clear(values: Callable, margin: float = 0.05):
    return lambda p: clear_of_poles(values(p), p["q"], margin)


def _finclear(values: Callable, margin: float = 0.05):
    return lambda p: finite_clear(values(p), p["q"], p["n"] + 1, margin)


def _w_dens(a, rest, q) -> list:
    return [principal_sqrt(a), -principal_sqrt(a)] + [q * a / x for x in rest]


def _domain(boxes, derived=(), conditions=(), extra=(), exact=None, exact_post=None):
    return ParamDomain(boxes=boxes, derived=tuple(derived),
                       constraints=_shrunk(conditions) + tuple(extra),
                       exact=exact, exact_post=exact_post)


# -- extraction helpers ------------------------------------------------------

def _free_nonneg(x) -> bool:
    return x is not None and x >= 0


def _two_phi_one(spec: SeriesSpec) -> dict:
    if spec.bilateral or spec.r != 2 or spec.s != 1:
        raise PatternMismatch(f"expected a 2phi1, got {spec.label()}")
    a, b = spec.numerators
    return {"a": a, "b": b, "c": spec.denominators[0], "z": spec.argument, "q": spec.base}


def _terminating_index(x, q) -> int:
    n = termination_index(x, q)
    if not _free_nonneg(n):
        raise PatternMismatch("expected a q^-n numerator")
    return n


def _split_w(spec: SeriesSpec, count: int):
    """(a, rest) of a very-well-poised spec with ``count`` free parameters."""
    nums, dens, q = spec.numerators, spec.denominators, spec.base
    if spec.bilateral or len(nums) != count + 3 or len(dens) != count + 2:
        raise PatternMismatch(
            f"expected a {count + 3}phi{count + 2} very-well-poised series, got {spec.label()}")
    a, root = nums[0], dens[0]
    checks = [(nums[1], q * root), (nums[2], -q * root), (dens[1], -root), (root * root, a)]
    checks += [(x * y, q * a) for x, y in zip(nums[3:], dens[2:])]
    for got, want in checks:
        if not _close(got, want):
            raise PatternMismatch("series is not very-well-poised in the expected layout")
    return a, list(nums[3:])


def _close(x, y) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    x, y = complex(x), complex(y)
    return abs(x - y) <= MATCH_TOL * (1 + abs(y))


def _same_spec(u: SeriesSpec, v: SeriesSpec) -> bool:
    if u.r != v.r or u.s != v.s or u.bilateral != v.bilateral:
        return False
    pairs = list(zip(u.numerators, v.numerators)) + list(zip(u.denominators, v.denominators))
    pairs += [(u.base, v.base), (u.argument, v.argument)]
    return all(_close(x, y) for x, y in pairs)


def _same_w(u: SeriesSpec, v: SeriesSpec) -> bool:
    """Compare W-form specs while ignoring the sign chosen for a^{1/2}."""
    if u.r != v.r or u.s != v.s:
        return False
    pairs = [(u.numerators[0], v.numerators[0]), (u.base, v.base), (u.argument, v.argument)]
    pairs += list(zip(u.numerators[3:], v.numerators[3:]))
    pairs += list(zip(u.denominators[2:], v.denominators[2:]))
    return all(_close(x, y) for x, y in pairs)


# -- Heine family ------------------------------------------------------------

def _lhs_2phi1(p):
    return phi([p["a"], p["b"]], [p["c"]], p["q"], p["z"])


def _heine_1(p):
    a, b, c, z, q = p["a"], p["b"], p["c"], p["z"], p["q"]
    return _expr((_inf(q, [b, a * z], [c, z]), phi([c / b, z], [a * z], q, b)))


def _heine_2(p):
    a, b, c, z, q = p["a"], p["b"], p["c"], p["z"], p["q"]
    return _expr((_inf(q, [c / b, b * z], [c, z]),
                  phi([a * b * z / c, b], [b * z], q, c / b)))


def _heine_euler(p):
    a, b, c, z, q = p["a"], p["b"], p["c"], p["z"], p["q"]
    return _expr((_inf(q, [a * b * z / c], [z]),
                  phi([c / a, c / b], [c], q, a * b * z / c)))


def _jackson_2phi2(p):
    a, b, c, z, q = p["a"], p["b"], p["c"], p["z"], p["q"]
    return _expr((_inf(q, [a * z], [z]), phi([a, c / b], [c, a * z], q, b * z)))


_Q = cbox(0.1, 0.85)
_HEINE_BOXES = {"a": cbox(0.0, 1.5), "b": cbox(0.0, 1.5), "c": cbox(0.0, 1.5),
                "z": cbox(0.0, 0.9), "q": _Q}


def _heine_rule(ident, title, rhs, conditions, extra, rhs_text):
    _register(TransformRule(
        ident, title, lhs=_lhs_2phi1, rhs=rhs, extract=_two_phi_one,
        domain=_domain(_HEINE_BOXES, conditions=conditions, extra=extra),
        conditions=_stated(conditions), lhs_text="2phi1(a, b; c; q, z)", rhs_text=rhs_text))


_heine_rule(
    "heine_1", "Heine transformation, first form", _heine_1,
    [_bound("|z| < 1", lambda p: p["z"]), _bound("|b| < 1", lambda p: p["b"])],
    [("denominators away from zero", _clear(lambda p: [p["c"], p["z"], p["a"] * p["z"]]))],
    "(b, az;q)_inf / (c, z;q)_inf * 2phi1(c/b, z; az; q, b)")

_heine_rule(
    "heine_2", "Heine transformation, second form", _heine_2,
    [_bound("|z| < 1", lambda p: p["z"]), _bound("|c/b| < 1", lambda p: p["c"] / p["b"])],
    [("denominators away from zero",
      _clear(lambda p: [p["c"], p["z"], p["b"] * p["z"]]))],
    "(c/b, bz;q)_inf / (c, z;q)_inf * 2phi1(abz/c, b; bz; q, c/b)")

_heine_rule(
    "heine_euler", "Heine's q-analogue of Euler's transformation", _heine_euler,
    [_bound("|z| < 1", lambda p: p["z"]),
     _bound("|abz/c| < 1", lambda p: p["a"] * p["b"] * p["z"] / p["c"])],
    [("denominators away from zero", _clear(lambda p: [p["c"], p["z"]]))],
    "(abz/c;q)_inf / (z;q)_inf * 2phi1(c/a, c/b; c; q, abz/c)")

_heine_rule(
    "jackson_2phi2", "Jackson's 2phi1 to 2phi2 transformation", _jackson_2phi2,
    [_bound("|z| < 1", lambda p: p["z"])],
    [("denominators away from zero",
      _clear(lambda p: [p["c"], p["z"], p["a"] * p["z"]]))],
    "(az;q)_inf / (z;q)_inf * 2phi2(a, c/b; c, az; q, bz)")


# -- Sears terminating 2phi1 -------------------------------------------------

def _sears_lhs(p):
    return phi([_qm(p["q"], p["n"]), p["b"]], [p["c"]], p["q"], p["z"])


def _sears_rhs(p):
    b, c, z, q, n = p["b"], p["c"], p["z"], p["q"], p["n"]
    qn = _qm(q, n)
    coeff = _fin(q, n, [c / b], [c], (b * z / q) ** n)
    return _expr((coeff, phi([qn, q / z, q * qn / c], [b * q * qn / c, 0], q, q)))


def _sears_extract(spec: SeriesSpec) -> dict:
    p = _two_phi_one(spec)
    n = _terminating_index(p["a"], p["q"])
    return {"b": p["b"], "c": p["c"], "z": p["z"], "q": p["q"], "n": n}


_register(TransformRule(
    "sears_2phi1_term", "Sears' transformation of a terminating 2phi1",
    lhs=_sears_lhs, rhs=_sears_rhs, extract=_sears_extract,
    domain=_domain(
        {"b": cbox(0.2, 1.5), "c": cbox(0.2, 1.5), "z": cbox(0.3, 1.5), "n": ibox(0, 5),
         "q": cbox(0.5, 0.85)},
        extra=[("denominators away from zero", _finclear(
            lambda p: [p["c"], p["b"] * lift(p["q"]) ** (1 - p["n"]) / p["c"]]))],
        exact={"b": exact_rational(), "c": exact_rational(), "z": exact_rational(),
               "n": exact_int(0, 5), "q": exact_base}),
    lhs_text="2phi1(q^-n, b; c; q, z)",
    rhs_text="(c/b;q)_n/(c;q)_n (bz/q)^n 3phi2(q^-n, q/z, q^{1-n}/c; bq^{1-n}/c, 0; q, q)",
))


# -- Watson ------------------------------------------------------------------

def _watson_lhs(p):
    a, b, c, d, e, q, n = p["a"], p["b"], p["c"], p["d"], p["e"], p["q"], p["n"]
    z = a * a * lift(q) ** (2 + n) / (b * c * d * e)
    return _w(a, [b, c, d, e, _qm(q, n)], q, z)


def _watson_rhs(p):
    a, b, c, d, e, q, n = p["a"], p["b"], p["c"], p["d"], p["e"], p["q"], p["n"]
    coeff = _fin(q, n, [a * q, a * q / (d * e)], [a * q / d, a * q / e])
    series = phi([_qm(q, n), d, e, a * q / (b * c)],
                 [a * q / b, a * q / c, d * e * _qm(q, n) / a], q, q)
    return _expr((coeff, series))


def _watson_extract(spec):
    a, rest = _split_w(spec, 5)
    q = spec.base
    return {"a": a, "b": rest[0], "c": rest[1], "d": rest[2], "e": rest[3],
            "n": _terminating_index(rest[4], q), "q": q}


def _watson_clear(p):
    a, b, c, d, e, q = p["a"], p["b"], p["c"], p["d"], p["e"], p["q"]
    vals = _w_dens(a, [b, c, d, e], q) + [a * lift(q) ** (p["n"] + 1), a * q / d, a * q / e,
                                          d * e * _qm(q, p["n"]) / a]
    return finite_clear(vals, q, p["n"] + 1)


_register(TransformRule(
    "watson_8to4", "Watson's transformation of a terminating 8phi7",
    lhs=_watson_lhs, rhs=_watson_rhs, extract=_watson_extract,
    domain=_domain(
        {"a": cbox(0.2, 1.5), "b": cbox(0.5, 1.5), "c": cbox(0.5, 1.5), "d": cbox(0.5, 1.5),
         "e": cbox(0.5, 1.5), "n": ibox(0, 5), "q": cbox(0.4, 0.85)},
        extra=[("denominators away from zero", _watson_clear)],
        exact={"a": exact_square(), "b": exact_rational(), "c": exact_rational(),
               "d": exact_rational(), "e": exact_rational(), "n": exact_int(0, 5),
               "q": exact_base}),
    lhs_text="8W7(a; b, c, d, e, q^-n; q, a^2 q^{n+2}/bcde)",
    rhs_text="(aq, aq/de;q)_n/(aq/d, aq/e;q)_n 4phi3(q^-n, d, e, aq/bc; aq/b, aq/c, deq^-n/a; q, q)",
))


# -- Bailey 10W9 -------------------------------------------------------------

def _lam(p):
    return p["q"] * p["a"] ** 2 / (p["b"] * p["c"] * p["d"])


def _b10_g(p):
    return _lam(p) * p["a"] * lift(p["q"]) ** (p["n"] + 1) / (p["e"] * p["f"])


def _b10_lhs(p):
    a, q = p["a"], p["q"]
    return _w(a, [p["b"], p["c"], p["d"], p["e"], p["f"], _b10_g(p), _qm(q, p["n"])], q, q)


def _b10_rhs(p):
    a, b, c, d, e, f, q, n = (p[k] for k in "abcdefqn")
    lam = _lam(p)
    coeff = _fin(q, n, [a * q, a * q / (e * f), lam * q / e, lam * q / f],
                 [a * q / e, a * q / f, lam * q / (e * f), lam * q])
    series = _w(lam, [lam * b / a, lam * c / a, lam * d / a, e, f, _b10_g(p), _qm(q, n)], q, q)
    return _expr((coeff, series))


def _b10_extract(spec):
    a, rest = _split_w(spec, 7)
    q = spec.base
    if not _close(spec.argument, q):
        raise PatternMismatch("expected argument q")
    return {"a": a, "b": rest[0], "c": rest[1], "d": rest[2], "e": rest[3], "f": rest[4],
            "n": _terminating_index(rest[6], q), "q": q}


def _b10_clear(p):
    a, b, c, d, e, f, q, n = (p[k] for k in "abcdefqn")
    lam = _lam(p)
    g = _b10_g(p)
    qn = _qm(q, n)
    vals = _w_dens(a, [b, c, d, e, f, g], q) + _w_dens(
        lam, [lam * b / a, lam * c / a, lam * d / a, e, f, g], q)
    vals += [a * q * q ** n, lam * q * q ** n, a * q / e, a * q / f, lam * q / (e * f)]
    return finite_clear(vals, q, n + 1) and all(v != 0 for v in (a, lam, qn))


def _square_lambda(raw):
    """Solve d from a square helper _l so that lambda = qa^2/bcd is a square."""
    out = dict(raw)
    out["d"] = raw["q"] * raw["a"] ** 2 / (raw["b"] * raw["c"] * raw["_l"])
    return out


_B10_BOXES = {"a": cbox(0.3, 1.2), "b": cbox(0.5, 1.5), "c": cbox(0.5, 1.5),
              "d": cbox(0.5, 1.5), "e": cbox(0.5, 1.5), "f": cbox(0.5, 1.5),
              "n": ibox(0, 4), "q": cbox(0.4, 0.85)}
_B10_EXACT = {"a": exact_square(), "b": exact_rational(), "c": exact_rational(),
              "_l": exact_square(), "e": exact_rational(), "f": exact_rational(),
              "n": exact_int(0, 4), "q": exact_base}

_register(TransformRule(
    "bailey_10W9", "Bailey's transformation between terminating 10W9 series",
    lhs=_b10_lhs, rhs=_b10_rhs, extract=_b10_extract,
    domain=_domain(_B10_BOXES, extra=[
        ("0.3 <= |lambda| <= 2", lambda p: 0.3 <= abs(complex(_lam(p))) <= 2.0),
        ("denominators away from zero", _b10_clear)],
        exact=_B10_EXACT, exact_post=_square_lambda),
    lhs_text="10W9(a; b, c, d, e, f, lambda a q^{n+1}/ef, q^-n; q, q), lambda = qa^2/bcd",
    rhs_text="(aq, aq/ef, lambda q/e, lambda q/f;q)_n / (aq/e, aq/f, lambda q/ef, lambda q;q)_n"
             " 10W9(lambda; lambda b/a, lambda c/a, lambda d/a, e, f, lambda a q^{n+1}/ef,"
             " q^-n; q, q)",
))


def _b10i_g(p):
    a, q = p["a"], p["q"]
    return a ** 3 * lift(q) ** (p["n"] + 2) / (p["b"] * p["c"] * p["d"] * p["e"] * p["f"])


def _b10i_lhs(p):
    a, q = p["a"], p["q"]
    return _w(a, [p["b"], p["c"], p["d"], p["e"], p["f"], _b10i_g(p), _qm(q, p["n"])], q, q)


def _b10i_top(p):
    return p["d"] * p["e"] * p["f"] * _qm(p["q"], p["n"] + 1) / p["a"]


def _b10i_rhs(p):
    a, b, c, d, e, f, q, n = (p[k] for k in "abcdefqn")
    top = _b10i_top(p)
    m = _qm(q, n + 1)
    coeff = _fin(q, n, [a * q, a * q / (d * e), a * q / (d * f), a * q / (e * f)],
                 [a * q / d, a * q / e, a * q / f, a * q / (d * e * f)])
    series = _w(top, [a * q / (b * c), d, e, f, b * d * e * f * m / a ** 2,
                      c * d * e * f * m / a ** 2, _qm(q, n)], q, q)
    return _expr((coeff, series))


def _b10i_clear(p):
    a, b, c, d, e, f, q, n = (p[k] for k in "abcdefqn")
    top = _b10i_top(p)
    m = _qm(q, n + 1)
    vals = _w_dens(a, [b, c, d, e, f, _b10i_g(p)], q) + _w_dens(
        top, [a * q / (b * c), d, e, f, b * d * e * f * m / a ** 2,
              c * d * e * f * m / a ** 2], q)
    vals += [a * q * q ** n, top * q * q ** n, a * q / d, a * q / e, a * q / f,
             a * q / (d * e * f)]
    return finite_clear(vals, q, n + 1) and top != 0


def _square_top(raw):
    """Solve f from a square helper _t so that def q^{-n-1}/a is a square."""
    out = dict(raw)
    out["f"] = raw["_t"] * raw["a"] * lift(raw["q"]) ** (raw["n"] + 1) / (raw["d"] * raw["e"])
    return out


_B10I_EXACT = {"a": exact_square(), "b": exact_rational(), "c": exact_rational(),
               "d": exact_rational(), "e": exact_rational(), "_t": exact_square(),
               "n": exact_int(0, 4), "q": exact_base}

_register(TransformRule(
    "bailey_10W9_iterated", "Bailey's iterated 10W9 transformation",
    lhs=_b10i_lhs, rhs=_b10i_rhs, extract=_b10_extract,
    domain=_domain(_B10_BOXES, extra=[("denominators away from zero", _b10i_clear)],
                   exact=_B10I_EXACT, exact_post=_square_top),
    lhs_text="10W9(a; b, c, d, e, f, a^3 q^{n+2}/bcdef, q^-n; q, q)",
    rhs_text="(aq, aq/de, aq/df, aq/ef;q)_n / (aq/d, aq/e, aq/f, aq/def;q)_n"
             " 10W9(def q^{-n-1}/a; aq/bc, d, e, f, bdef q^{-n-1}/a^2, cdef q^{-n-1}/a^2,"
             " q^-n; q, q)",
))


# -- nonterminating 8W7 ------------------------------------------------------

def _b8_lhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return _w(a, [b, c, d, e, f], q, _lam(p) * q / (e * f))


def _b8_rhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    lam = _lam(p)
    coeff = _inf(q, [a * q, a * q / (e * f), lam * q / e, lam * q / f],
                 [a * q / e, a * q / f, lam * q, lam * q / (e * f)])
    return _expr((coeff, _w(lam, [lam * b / a, lam * c / a, lam * d / a, e, f], q,
                            a * q / (e * f))))


def _w5_extract(spec):
    a, rest = _split_w(spec, 5)
    return {"a": a, "b": rest[0], "c": rest[1], "d": rest[2], "e": rest[3], "f": rest[4],
            "q": spec.base}


def _b8_clear(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    lam = _lam(p)
    vals = _w_dens(a, [b, c, d, e, f], q) + _w_dens(lam, [lam * b / a, lam * c / a,
                                                          lam * d / a, e, f], q)
    vals += [a * q / e, a * q / f, lam * q, lam * q / (e * f)]
    return clear_of_poles(vals, q)


_W5_BOXES = {"a": cbox(0.2, 0.9), "b": cbox(0.4, 1.5), "c": cbox(0.4, 1.5),
             "d": cbox(0.4, 1.5), "e": cbox(0.4, 1.5), "f": cbox(0.4, 1.5),
             "q": cbox(0.1, 0.7)}

_B8_CONDITIONS = [
    _bound("|aq/ef| < 1", lambda p: p["a"] * p["q"] / (p["e"] * p["f"])),
    _bound("|lambda q/ef| < 1", lambda p: _lam(p) * p["q"] / (p["e"] * p["f"])),
]

_register(TransformRule(
    "bailey_8W7_nonterm", "Bailey's transformation of a nonterminating 8W7",
    lhs=_b8_lhs, rhs=_b8_rhs, extract=_w5_extract,
    domain=_domain(_W5_BOXES, conditions=_B8_CONDITIONS, extra=[
        ("0.2 <= |lambda| <= 1.5", lambda p: 0.2 <= abs(complex(_lam(p))) <= 1.5),
        ("denominators away from zero", _b8_clear)]),
    conditions=_stated(_B8_CONDITIONS),
    lhs_text="8W7(a; b, c, d, e, f; q, lambda q/ef), lambda = qa^2/bcd",
    rhs_text="(aq, aq/ef, lambda q/e, lambda q/f;q)_inf / (aq/e, aq/f, lambda q, lambda q/ef;q)_inf"
             " 8W7(lambda; lambda b/a, lambda c/a, lambda d/a, e, f; q, aq/ef)",
))


# -- 8W7 as two balanced 4phi3 -----------------------------------------------

def _natural_arg(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return a * a * q * q / (b * c * d * e * f)


def _b84_lhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return _w(a, [b, c, d, e, f], q, _natural_arg(p))


def _b84_rhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    x = _natural_arg(p)
    first = (_inf(q, [a * q, a * q / (d * e), a * q / (d * f), a * q / (e * f)],
                  [a * q / d, a * q / e, a * q / f, a * q / (d * e * f)]),
             phi([a * q / (b * c), d, e, f], [a * q / b, a * q / c, d * e * f / a], q, q))
    second = (_inf(q, [a * q, a * q / (b * c), d, e, f, x * c, x * b],
                   [a * q / b, a * q / c, a * q / d, a * q / e, a * q / f, x,
                    d * e * f / (a * q)]),
              phi([a * q / (d * e), a * q / (d * f), a * q / (e * f), x],
                  [x * c, x * b, a * q * q / (d * e * f)], q, q))
    return _expr(first, second)


def _b84_clear(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    x = _natural_arg(p)
    vals = _w_dens(a, [b, c, d, e, f], q) + [
        a * q / b, a * q / c, d * e * f / a, x * b, x * c, a * q * q / (d * e * f),
        a * q / d, a * q / e, a * q / f, a * q / (d * e * f), x, d * e * f / (a * q)]
    return clear_of_poles(vals, q, 0.1)


_NATURAL_CONDITION = [_bound("|a^2 q^2/bcdef| < 1", _natural_arg)]

_register(TransformRule(
    "bailey_8phi7_to_4phi3", "nonterminating 8W7 as two balanced 4phi3 series",
    lhs=_b84_lhs, rhs=_b84_rhs, extract=_w5_extract,
    domain=_domain(
        {"a": cbox(0.2, 0.9), "b": cbox(0.5, 1.5), "c": cbox(0.5, 1.5), "d": cbox(0.5, 1.2),
         "e": cbox(0.5, 1.2), "f": cbox(0.5, 1.2), "q": cbox(0.1, 0.6)},
        conditions=_NATURAL_CONDITION,
        extra=[("denominators away from zero", _b84_clear)]),
    conditions=_stated(_NATURAL_CONDITION), arity=2,
    lhs_text="8W7(a; b, c, d, e, f; q, a^2 q^2/bcdef)",
    rhs_text="C1 4phi3(aq/bc, d, e, f; aq/b, aq/c, def/a; q, q) + C2 4phi3(aq/de, aq/df, aq/ef,"
             " a^2q^2/bcdef; a^2q^2/bdef, a^2q^2/cdef, aq^2/def; q, q)",
))


# -- Bailey 3-term -----------------------------------------------------------

def _b3_rhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    x = _natural_arg(p)
    first = (_inf(q, [a * q, a * q / (d * e), a * q / (d * f), a * q / (e * f), e * q / c,
                      f * q / c, b / a, b * e * f / a],
                  [a * q / d, a * q / e, a * q / f, a * q / (d * e * f), q / c, e * f * q / c,
                   b * e / a, b * f / a]),
             _w(e * f / c, [a * q / (b * c), a * q / (c * d), e * f / a, e, f], q, b * d / a))
    second = (_inf(q, [a * q, b * q / a, b * q / c, b * q / d, b * q / e, b * q / f, d, e, f,
                       a * q / (b * c), b * d * e * f / (a * a), a * a * q / (b * d * e * f)],
                   [a * q / b, a * q / c, a * q / d, a * q / e, a * q / f, b * d / a, b * e / a,
                    b * f / a, d * e * f / a, a * q / (d * e * f), q / c, b * b * q / a],
                   b / a),
              _w(b * b / a, [b, b * c / a, b * d / a, b * e / a, b * f / a], q, x))
    return _expr(first, second)


def _b3_clear(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    vals = _w_dens(a, [b, c, d, e, f], q)
    vals += _w_dens(e * f / c, [a * q / (b * c), a * q / (c * d), e * f / a, e, f], q)
    vals += _w_dens(b * b / a, [b, b * c / a, b * d / a, b * e / a, b * f / a], q)
    vals += [a * q / d, a * q / e, a * q / f, a * q / (d * e * f), q / c, e * f * q / c,
             b * e / a, b * f / a, a * q / b, a * q / c, b * d / a, d * e * f / a, b * b * q / a]
    return clear_of_poles(vals, q, 0.1)


_B3_CONDITIONS = [_bound("|bd/a| < 1", lambda p: p["b"] * p["d"] / p["a"])] \
    + _NATURAL_CONDITION

_register(TransformRule(
    "bailey_3term", "Bailey's three-term 8W7 transformation",
    lhs=_b84_lhs, rhs=_b3_rhs, extract=_w5_extract,
    domain=_domain(
        {"a": cbox(0.4, 0.9), "b": cbox(0.2, 0.8), "c": cbox(0.5, 1.5), "d": cbox(0.2, 0.8),
         "e": cbox(0.5, 1.2), "f": cbox(0.5, 1.2), "q": cbox(0.1, 0.6)},
        conditions=_B3_CONDITIONS,
        extra=[("denominators away from zero", _b3_clear)]),
    conditions=_stated(_B3_CONDITIONS), arity=2,
    lhs_text="8W7(a; b, c, d, e, f; q, a^2 q^2/bcdef)",
    rhs_text="C1 8W7(ef/c; aq/bc, aq/cd, ef/a, e, f; q, bd/a)"
             " + C2 8W7(b^2/a; b, bc/a, bd/a, be/a, bf/a; q, a^2q^2/bcdef)",
))


# -- Bailey 4-term -----------------------------------------------------------

def _b4_h(p):
    a, b, c, d, e, f, g, q = (p[k] for k in "abcdefgq")
    return a ** 3 * q * q / (b * c * d * e * f * g)


def _b4_lam(p):
    return p["q"] * p["a"] ** 2 / (p["c"] * p["d"] * p["e"])


def _b4_lhs(p):
    a, q = p["a"], p["q"]
    return _w(a, [p[k] for k in "bcdefgh"], q, q)


def _b4_rhs(p):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    lam = _b4_lam(p)
    bb = b * b
    t1 = (_inf(q, [a * q, b / a, lam * q / f, lam * q / g, lam * q / h, b * f / lam,
                   b * g / lam, b * h / lam],
               [lam * q, b / lam, a * q / f, a * q / g, a * q / h, b * f / a, b * g / a,
                b * h / a]),
          _w(lam, [b, lam * c / a, lam * d / a, lam * e / a, f, g, h], q, q))
    t2 = (_inf(q, [a * q, b / a, c, d, e, f, g, h, b * q / c, b * q / d, b * q / e, b * q / f,
                   b * q / g, b * q / h],
               [bb * q / a, a / b, a * q / c, a * q / d, a * q / e, a * q / f, a * q / g,
                a * q / h, b * c / a, b * d / a, b * e / a, b * f / a, b * g / a, b * h / a],
               -1),
          _w(bb / a, [b, b * c / a, b * d / a, b * e / a, b * f / a, b * g / a, b * h / a],
             q, q))
    t3 = (_inf(q, [a * q, b / a, f, g, h, b * q / f, b * q / g, b * q / h, lam * c / a,
                   lam * d / a, lam * e / a, a * b * q / (lam * c), a * b * q / (lam * d),
                   a * b * q / (lam * e)],
               [bb * q / lam, lam / b, a * q / c, a * q / d, a * q / e, a * q / f, a * q / g,
                a * q / h, b * c / a, b * d / a, b * e / a, b * f / a, b * g / a, b * h / a]),
          _w(bb / lam, [b, b * c / a, b * d / a, b * e / a, b * f / lam, b * g / lam,
                        b * h / lam], q, q))
    return _expr(t1, t2, t3)


def _b4_extract(spec):
    a, rest = _split_w(spec, 7)
    if not _close(spec.argument, spec.base):
        raise PatternMismatch("expected argument q")
    return dict(zip("abcdefg", [a] + rest[:6]), q=spec.base)


def _b4_clear(p):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    lam = _b4_lam(p)
    bb = b * b
    vals = _w_dens(a, [b, c, d, e, f, g, h], q)
    vals += _w_dens(lam, [b, lam * c / a, lam * d / a, lam * e / a, f, g, h], q)
    vals += _w_dens(bb / a, [b, b * c / a, b * d / a, b * e / a, b * f / a, b * g / a,
                             b * h / a], q)
    vals += _w_dens(bb / lam, [b, b * c / a, b * d / a, b * e / a, b * f / lam, b * g / lam,
                               b * h / lam], q)
    vals += [lam * q, b / lam, lam / b, a / b, bb * q / a, bb * q / lam]
    vals += [a * q / x for x in (c, d, e, f, g, h)] + [b * x / a for x in (c, d, e, f, g, h)]
    return clear_of_poles(vals, q, 0.1)


_register(TransformRule(
    "bailey_4term", "Bailey's four-term 10W9 transformation",
    lhs=_b4_lhs, rhs=_b4_rhs, extract=_b4_extract,
    domain=_domain(
        {"a": cbox(0.3, 0.8), "b": cbox(0.3, 0.8), "c": cbox(0.5, 1.0), "d": cbox(0.5, 1.0),
         "e": cbox(0.5, 1.0), "f": cbox(0.5, 1.0), "g": cbox(0.5, 1.0), "q": cbox(0.1, 0.5)},
        derived=[("h", _b4_h)],
        extra=[("0.3 <= |h| <= 1.2", lambda p: 0.3 <= abs(complex(p["h"])) <= 1.2),
               ("0.3 <= |lambda| <= 1.2",
                lambda p: 0.3 <= abs(complex(_b4_lam(p))) <= 1.2),
               ("denominators away from zero", _b4_clear)]),
    arity=3, tol=1e-8,
    lhs_text="10W9(a; b, c, d, e, f, g, h; q, q), a^3 q^2 = bcdefgh",
    rhs_text="C1 10W9(lambda; b, lambda c/a, lambda d/a, lambda e/a, f, g, h; q, q)"
             " - C2 10W9(b^2/a; b, bc/a, ..., bh/a; q, q)"
             " + C3 10W9(b^2/lambda; b, bc/a, bd/a, be/a, bf/lambda, bg/lambda, bh/lambda; q, q),"
             " lambda = qa^2/cde",
))


# -- public API ----------------------------------------------------------------

def lookup_rule(rule_id: str) -> TransformRule:
    try:
        return RULES[rule_id]
    except KeyError:
        raise UnknownIdentity(f"unknown transformation rule {rule_id!r}") from None


def rule_catalog() -> list:
    return [rule.describe() for rule in RULES.values()]


def match(rule_id: str, spec: SeriesSpec) -> dict:
    """Recover the rule's free parameters from ``spec``; PatternMismatch otherwise."""
    rule = lookup_rule(rule_id)
    params = rule.extract(spec)
    try:
        rebuilt = rule.lhs(rule.domain.complete(params))
    except (ZeroDivisionError, DomainError) as err:
        raise PatternMismatch(f"{rule_id}: {err}") from err
    same = _same_w if rule_id not in _TWO_PHI_ONE_RULES else _same_spec
    if not same(spec, rebuilt):
        raise PatternMismatch(f"{rule_id}: series does not have the rule's parameter relations")
    return params


_TWO_PHI_ONE_RULES = {"heine_1", "heine_2", "heine_euler", "jackson_2phi2", "sears_2phi1_term"}


def expression(rule_id: str, params: Mapping) -> Expression:
    """The rule's right side at ``params`` without any convergence checks."""
    rule = lookup_rule(rule_id)
    return rule.rhs(rule.domain.complete(params))


def apply(rule_id: str, target) -> Expression:
    """Rewrite a SeriesSpec (or an explicit parameter record) by the rule.

    Raises PatternMismatch when a spec has the wrong structure and
    DomainError when the rule's stated convergence conditions fail.
    """
    rule = lookup_rule(rule_id)
    params = match(rule_id, target) if isinstance(target, SeriesSpec) else dict(target)
    full = rule.domain.complete(params)
    bad = [text for text, pred in rule.conditions if not _holds(pred, full)]
    if bad:
        raise DomainError(f"{rule_id}: conditions fail: {'; '.join(bad)}")
    return rule.rhs(full)


def _holds(pred, params) -> bool:
    try:
        return bool(pred(params))
    except (ZeroDivisionError, ValueError, OverflowError):
        return False


def verify_transform(rule_id: str, params: Mapping, tol: float | None = None
                     ) -> VerificationReport:
    """Compare the series on the left with the evaluated right-side Expression."""
    rule = lookup_rule(rule_id)
    tol = rule.tol if tol is None else tol
    exact = all_exact(*params.values())
    try:
        full = rule.domain.complete(params)
    except DomainError as err:
        report = VerificationReport(rule_id, dict(params), tol=tol)
        report.error = f"DomainError: {err}"
        return report
    bad = rule.domain.violations(full)
    if bad:
        report = VerificationReport(rule_id, full, tol=tol,
                                    mode="rational" if exact else "float")
        report.error = f"DomainError: parameters violate: {'; '.join(bad)}"
        return report
    series_tol = 0.0 if exact else 1e-16
    return compare(rule_id, full,
                   lambda: evaluate(rule.lhs(full), series_tol),
                   lambda: apply(rule_id, full).evaluate(series_tol),
                   tol=tol, exact=exact)


def sample_rule_params(rule_id: str, seed: int, count: int, exact: bool = False) -> list:
    rule = lookup_rule(rule_id)
    rng = make_rng(seed, rule_id + (":exact" if exact else ""))
    return [rule.domain.sample(rng, exact=exact) for _ in range(count)]


# -- chained Heine transformations -------------------------------------------

def heine_chain(spec: SeriesSpec, steps: int) -> Expression:
    """Apply the first Heine form ``steps`` times (1 to 3).

    After the first step the two numerators are swapped before applying the
    rule again; without the swap the rule would simply undo itself.
    """
    if steps not in (1, 2, 3):
        raise DomainError("heine_chain supports 1 to 3 steps")
    params = _two_phi_one(spec)
    coeff = CoeffProduct(params["q"])
    for step in range(steps):
        if step > 0:
            params = dict(params, a=params["b"], b=params["a"])
        for text, pred in RULES["heine_1"].conditions:
            if not _holds(pred, params):
                raise DomainError(f"heine_chain step {step + 1}: {text} fails")
        try:
            term = _heine_1(params).terms[0]
        except ZeroDivisionError:
            raise DomainError(f"heine_chain step {step + 1}: the swapped 2phi1 has b = 0") from None
        coeff = coeff.times(term.coeff).simplified()
        params = _two_phi_one(term.series)
    return _expr((coeff, _lhs_2phi1(params)))
