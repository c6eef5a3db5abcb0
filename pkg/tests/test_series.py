import math
from fractions import Fraction as F

import numpy as np
import pytest

from qseries.errors import ConvergenceError, DomainError, PoleError
from qseries.qcore import counting, qpoch, qpoch_inf
from qseries.series import (
    classify,
    convergence_region,
    eval_phi,
    eval_psi,
    evaluate,
    make_vwp,
    phi,
    phi_terms,
    psi,
    term_ratio,
)


def close(x, y, tol=1e-12):
    return abs(complex(x) - complex(y)) <= tol * (1 + abs(complex(y)))


def test_classify_balanced_terminating_3phi2():
    a, b, c, q, n = 0.3, 0.45, 0.7, 0.5, 4
    spec = phi([a, b, q ** -n], [c, a * b * q ** (1 - n) / c], q, q)
    cls = classify(spec)
    assert cls.terminating == n
    assert cls.balanced_k == 1


def test_classify_vwp_6phi5():
    a, b, c, q, n = 0.3, 0.45, 0.7, 0.5, 3
    spec = make_vwp(a, [b, c, q ** -n], q, a * q ** (n + 1) / (b * c))
    cls = classify(spec)
    assert cls.very_well_poised and cls.well_poised
    assert cls.terminating == n
    assert spec.r == 6 and spec.s == 5


def test_classify_generic():
    cls = classify(phi([0.3, 0.4], [0.5], 0.5, 0.2))
    assert cls.terminating is None and cls.balanced_k is None
    assert not (cls.well_poised or cls.very_well_poised or cls.split_poised)


def test_make_vwp_8phi7_layout():
    a, q = F(1, 4), F(1, 2)
    rest = [F(1, 3), F(2, 5), F(3, 7), F(5, 11), q ** -2]
    spec = make_vwp(a, rest, q, F(1, 9))
    root = F(1, 2)
    assert spec.numerators == (a, q * root, -q * root, *rest)
    assert spec.denominators == (root, -root, *[a * q / x for x in rest])


def test_region_examples():
    assert convergence_region(phi([0.3, 0.4], [0.5], 0.5, 0.2)).kind == "disk"
    assert convergence_region(phi([], [0.5], 0.5, 9.0)).kind == "all-z"
    reg = convergence_region(psi([0.5], [0.1], 0.4, 0.5))
    assert reg.kind == "annulus"
    assert math.isclose(reg.inner, 0.2) and reg.outer == 1.0
    assert convergence_region(phi([0.5 ** -3, 0.2, 0.3, 0.4], [0.6], 0.5, 40)).kind == "all-z"


def test_eval_1phi0_product():
    a, q, z = 0.3, 0.5, 0.2
    assert close(eval_phi(phi([a], [], q, z)), qpoch_inf(a * z, q) / qpoch_inf(z, q))


def test_eval_0phi0_is_euler_product():
    q, z = 0.5, 0.7
    assert close(eval_phi(phi([], [], q, -z)), qpoch_inf(-z, q))


def test_terminating_term_count():
    with counting() as tally:
        eval_phi(phi([0.5 ** -2], [], 0.5, 0.3))
    assert tally.series_terms == 3


def test_exact_terminating_matches_finite_sum():
    q, a, b, c, z = F(1, 3), F(2, 5), F(3, 7), F(5, 9), F(1, 2)
    for n in range(7):
        spec = phi([q ** -n, a, b], [c, F(7, 4)], q, z)
        direct = sum(qpoch(q ** -n, q, k) * qpoch(a, q, k) * qpoch(b, q, k) * z ** k
                     / (qpoch(q, q, k) * qpoch(c, q, k) * qpoch(F(7, 4), q, k)) for k in range(n + 1))
        got = eval_phi(spec)
        assert isinstance(got, F) and got == direct


def test_outside_region_raises():
    with pytest.raises(ConvergenceError):
        eval_phi(phi([0.3, 0.4], [0.5], 0.5, 1.5))
    with pytest.raises(ConvergenceError):
        eval_psi(psi([0.5], [0.1], 0.4, 0.1))


def test_denominator_pole_raises():
    with pytest.raises(PoleError):
        eval_phi(phi([0.3], [0.5 ** -1], 0.5, 0.2))


def test_psi_with_b_equal_q_collapses():
    a, q, z = 0.3, 0.5, 0.4
    assert close(eval_psi(psi([a], [q], q, z)), eval_phi(phi([a], [], q, z)))


def test_ramanujan_1psi1_value():
    a, b, q, z = 0.5, 0.1, 0.4, 0.5
    rhs = (qpoch_inf(q, q) * qpoch_inf(b / a, q) * qpoch_inf(a * z, q) * qpoch_inf(q / (a * z), q)
           / (qpoch_inf(b, q) * qpoch_inf(q / a, q) * qpoch_inf(z, q) * qpoch_inf(b / (a * z), q)))
    assert close(eval_psi(psi([a], [b], q, z)), rhs, 1e-10)


def test_psi_split_orders_agree():
    spec = psi([0.3 + 0.2j, 0.6], [0.9, 0.2], 0.5, 0.9)
    assert close(eval_psi(spec, method="split"), eval_psi(spec, method="direct"), 1e-10)


def test_psi_zero_argument():
    with pytest.raises((DomainError, ConvergenceError)):
        eval_psi(psi([0.5], [0.1], 0.4, 0))


def test_qgt1_by_base_inversion():
    a, q, z = 0.5, 2.0, 0.3
    got = evaluate(phi([a], [], q, z))
    term, direct = 1.0, 1.0
    for k in range(80):
        term *= (1 - a * q ** k) * z / (1 - q ** (k + 1))
        direct += term
    assert close(got, direct, 1e-10)
    assert close(got, evaluate(phi([1 / a], [], 1 / q, a * z / q)), 1e-10)


def test_term_ratio_is_rational_in_qn():
    spec = phi([0.3, 0.4, 0.2], [0.5, 0.6], 0.5, 0.25)
    terms = phi_terms(spec, 6)
    for n in range(5):
        assert close(terms[n + 1] / terms[n], term_ratio(spec, n))


def test_ratio_recovers_parameters():
    # for 2phi1 the ratio (1-aq^n)(1-bq^n) z / ((1-q^{n+1})(1-cq^n)) fixes a, b, c from three ratios
    a, b, c, q, z = 0.3, 0.4, 0.6, 0.5, 0.2
    spec = phi([a, b], [c], q, z)
    rs = [term_ratio(spec, n) for n in range(3)]
    xs = [q ** n for n in range(3)]
    # r_n (1-q^{n+1})(1-c x) = z (1-a x)(1-b x): linear in c, ab and a+b
    m = np.array([[r * (1 - q * x) * x, z * x * x, -z * x] for r, x in zip(rs, xs)], dtype=complex)
    rhs = np.array([r * (1 - q * x) - z for r, x in zip(rs, xs)], dtype=complex)
    c_rec, ab, apb = np.linalg.solve(m, rhs)
    assert close(c_rec, c) and close(ab, a * b) and close(apb, a + b)


def test_functional_equations_of_binomial_series():
    rng = np.random.default_rng(7)
    for _ in range(100):
        a = complex(*rng.uniform(-1, 1, 2))
        q = rng.uniform(0.1, 0.9)
        z = complex(*rng.uniform(-0.6, 0.6, 2))

        def f(a_, z_):
            return eval_phi(phi([a_], [], q, z_))

        assert close((1 - z) * f(a, z), (1 - a * z) * f(a, q * z), 1e-10)
        assert close(f(a, z), (1 - a * z) * f(a * q, z), 1e-10)


def test_1psi1_recurrence_in_b():
    rng = np.random.default_rng(9)
    for _ in range(30):
        a = rng.uniform(0.5, 0.9)
        b = rng.uniform(0.05, 0.3)
        q = rng.uniform(0.3, 0.7)
        z = rng.uniform(0.5, 0.9)

        def f(b_):
            return eval_psi(psi([a], [b_], q, z))

        rhs = (1 - b / a) / ((1 - b) * (1 - b / (a * z))) * f(b * q)
        assert close(f(b), rhs, 1e-9)
