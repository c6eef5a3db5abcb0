from fractions import Fraction as F

import numpy as np
import pytest

from qseries.errors import DomainError, PatternMismatch, UnknownIdentity
from qseries.identities import evaluate_both
from qseries.qcore import qpoch_inf
from qseries.series import eval_phi, evaluate, make_vwp, phi
from qseries.transforms import (
    RULES,
    apply,
    expression,
    heine_chain,
    lookup_rule,
    match,
    rule_catalog,
    sample_rule_params,
    verify_transform,
)


def close(x, y, tol=1e-10):
    return abs(complex(x) - complex(y)) <= tol * (1 + abs(complex(y)))


def test_catalog_has_twelve_rules():
    assert len(RULES) == 12
    assert [r["id"] for r in rule_catalog()] == list(RULES)
    assert lookup_rule("bailey_4term").tol == 1e-8
    with pytest.raises(UnknownIdentity):
        lookup_rule("heine_9")


def test_term_counts():
    terms = {rid: rule.arity for rid, rule in RULES.items()}
    assert terms["bailey_8phi7_to_4phi3"] == 2
    assert terms["bailey_3term"] == 2
    assert terms["bailey_4term"] == 3
    assert terms["heine_1"] == 1


def test_heine_1_on_collapsed_series():
    a, b, q, z = 0.3, 0.6, 0.5, 0.4
    value = apply("heine_1", phi([a, b], [b], q, z)).evaluate()
    assert close(value, qpoch_inf(a * z, q) / qpoch_inf(z, q))


def test_watson_at_n_zero():
    params = {"a": 0.3, "b": 0.4, "c": 0.5, "d": 0.6, "e": 0.7, "n": 0, "q": 0.5}
    assert close(expression("watson_8to4", params).evaluate(), 1)
    assert verify_transform("watson_8to4", params).passed


def test_sears_term_at_n_zero():
    rep = verify_transform("sears_2phi1_term", {"b": 0.3, "c": 0.6, "z": 0.4, "n": 0, "q": 0.5})
    assert rep.passed and close(rep.lhs["re"] if isinstance(rep.lhs, dict) else rep.lhs, 1)


def test_every_rule_hundred_samples():
    for rid, rule in RULES.items():
        for params in sample_rule_params(rid, seed=17, count=100):
            rep = verify_transform(rid, params)
            assert rep.passed, (rid, params, rep.rel_err, rep.error)
            assert rep.tol == rule.tol


def test_exact_rules_in_rational_mode():
    for rid, rule in RULES.items():
        if rule.domain.exact is None:
            continue
        for params in sample_rule_params(rid, seed=4, count=5, exact=True):
            rep = verify_transform(rid, params)
            assert rep.mode == "rational" and rep.rel_err == 0, rid


def test_match_and_mismatch():
    spec = phi([0.3, 0.4], [0.6], 0.5, 0.2)
    got = match("heine_1", spec)
    assert got["a"] == 0.3 and got["c"] == 0.6
    with pytest.raises(PatternMismatch):
        match("heine_1", phi([0.3], [0.6], 0.5, 0.2))
    with pytest.raises(PatternMismatch):
        match("watson_8to4", spec)


def test_apply_enforces_conditions():
    with pytest.raises(DomainError):
        apply("heine_1", phi([0.3, 0.4], [0.6], 0.5, 1.2))


def test_heine_chain_three_steps_closed_form():
    a, b, c, q, z = 0.3, 0.7, 0.5, 0.4, 0.6
    spec = phi([a, b], [c], q, z)
    chain = heine_chain(spec, 3)
    closed = (qpoch_inf(a * b * z / c, q) / qpoch_inf(z, q)
              * eval_phi(phi([c / a, c / b], [c], q, a * b * z / c)))
    assert close(chain.evaluate(), closed, 1e-10)
    assert close(chain.evaluate(), eval_phi(spec), 1e-10)
    for steps in (1, 2):
        assert close(heine_chain(spec, steps).evaluate(), eval_phi(spec), 1e-10)


def test_heine_chain_at_zero_argument():
    # two steps still reduce to 1; the third would need the degenerate b = 0 form
    spec = phi([0.3, 0.7], [0.5], 0.4, 0)
    for steps in (1, 2):
        assert close(heine_chain(spec, steps).evaluate(), 1)
    with pytest.raises(DomainError):
        heine_chain(spec, 3)


def test_heine_chain_rejects_bad_steps():
    with pytest.raises(DomainError):
        heine_chain(phi([0.3, 0.5], [0.7], 0.4, 0.2), 4)


def test_heine_euler_continuation_satisfies_q_difference_equation():
    # outside |z| < 1 the right side defines phi(z); check the second-order q-difference equation
    a, b, c, q = 0.3, 0.4, 0.9, 0.5

    def g(z):
        return expression("heine_euler", {"a": a, "b": b, "c": c, "z": z, "q": q}).evaluate()

    for z in (1.7, 2.5 + 0.4j, -3.0):
        assert abs(a * b * z / c) < 1 < abs(z)
        lhs = g(z) - (1 + c / q) * g(q * z) + (c / q) * g(q * q * z)
        rhs = z * (g(z) - (a + b) * g(q * z) + a * b * g(q * q * z))
        assert close(lhs, rhs, 1e-9)
    # inside the disk the continuation is the series itself
    assert close(g(0.6), eval_phi(phi([a, b], [c], q, 0.6)), 1e-12)


def test_watson_then_saalschutz_gives_jackson():
    q = F(1, 2)
    for n, (a, b, c, d) in enumerate([(F(1, 4), F(1, 3), F(2, 5), F(3, 7)),
                                      (F(4, 9), F(2, 7), F(5, 3), F(1, 5)),
                                      (F(1, 9), F(3, 4), F(2, 3), F(5, 7)),
                                      (F(9, 4), F(1, 6), F(2, 9), F(7, 3)),
                                      (F(1, 16), F(3, 5), F(4, 3), F(2, 11))]):
        e = a * a * q ** (n + 1) / (b * c * d)
        watson = expression("watson_8to4", {"a": a, "b": b, "c": c, "d": d, "e": e, "n": n, "q": q})
        _, jackson = evaluate_both("jackson_8phi7", {"a": a, "b": b, "c": c, "d": d, "n": n, "q": q})
        assert watson.evaluate(0.0) == jackson


def test_bailey_10W9_is_an_involution():
    for params in sample_rule_params("bailey_10W9", seed=8, count=10):
        first = expression("bailey_10W9", params)
        (term,) = first.terms
        again = apply("bailey_10W9", term.series)
        twice = term.coeff.evaluate() * again.evaluate()
        direct = evaluate(RULES["bailey_10W9"].lhs(params))
        assert close(twice, direct, 1e-9)


def test_bailey_8phi7_to_4phi3_two_terms():
    for params in sample_rule_params("bailey_8phi7_to_4phi3", seed=2, count=10):
        expr = expression("bailey_8phi7_to_4phi3", params)
        assert len(expr) == 2
        a, q = params["a"], params["q"]
        rest = [params[k] for k in "bcdef"]
        z = a * a * q * q / np.prod(rest)
        assert abs(z) < 1
        assert close(expr.evaluate(), evaluate(make_vwp(a, rest, q, z)), 1e-9)
