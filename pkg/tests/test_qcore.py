import cmath
from fractions import Fraction as F

import numpy as np
import pytest

from qseries.errors import DomainError, PoleError
from qseries.qcore import (
    counting,
    invert_base_poch,
    qbinom,
    qbinom_general,
    qpoch,
    qpoch_complex_index,
    qpoch_inf,
    qpoch_multi,
    rqpoch,
)


def close(x, y, tol=1e-12):
    return abs(complex(x) - complex(y)) <= tol * (1 + abs(complex(y)))


def test_qpoch_small_cases():
    assert qpoch(0.7, 0.3, 0) == 1
    assert close(qpoch(0.5, 0.5, 3), 0.328125)
    assert close(qpoch(0.25, 0.5, -1), 2)


def test_qpoch_exact_stays_rational():
    val = qpoch(F(1, 2), F(1, 2), 3)
    assert val == F(21, 64)
    assert qpoch(F(1, 4), F(1, 2), -1) == 2


def test_qpoch_inf_values():
    assert qpoch_inf(0, 0.5) == 1
    assert close(qpoch_inf(0.5, 0.5), 0.2887880951, 1e-10)
    with pytest.raises(DomainError):
        qpoch_inf(0.3, 1.1)


def test_qpoch_inf_tally_counts_factors():
    with counting() as tally:
        qpoch_inf(0.5, 0.5)
    assert 40 < tally.product_factors < 80


def test_complex_index():
    assert close(qpoch_complex_index(0.3, 0.5, 0), 1)
    assert close(qpoch_complex_index(0.3, 0.5, 4), qpoch(0.3, 0.5, 4))
    q = 0.5
    v = qpoch_complex_index(q, q, 0.5)
    assert close(v * qpoch_inf(q ** 1.5, q), qpoch_inf(q, q))


def test_qpoch_multi():
    assert qpoch_multi([], 0.5, 4) == 1
    assert close(qpoch_multi([0.3], 0.5, 4), qpoch(0.3, 0.5, 4))
    assert close(qpoch_multi([0.5, 0.25], 0.5, 2), qpoch(0.5, 0.5, 2) * qpoch(0.25, 0.5, 2))


def test_qbinom():
    assert qbinom(5, 0, 0.3) == 1
    assert close(qbinom(2, 1, 0.3), 1.3)
    assert close(qbinom(4, 2, 0.5), 2.1875)
    assert qbinom(4, 2, F(1, 2)) == F(35, 16)


def test_qbinom_general_pascal_and_shift():
    rng = np.random.default_rng(3)
    for _ in range(50):
        alpha = rng.uniform(0.2, 3.0)
        k = int(rng.integers(1, 6))
        q = rng.uniform(0.1, 0.9)
        lhs = qbinom_general(alpha + 1, k, q)
        rhs = qbinom_general(alpha, k, q) * q ** k + qbinom_general(alpha, k - 1, q)
        assert close(lhs, rhs, 1e-10)
        shifted = qbinom_general(k + alpha, k, q)
        assert close(shifted, qpoch(q ** (alpha + 1), q, k) / qpoch(q, q, k), 1e-10)
    assert close(qbinom_general(2.5, 2.5, 0.4), 1)


def test_invert_base_poch():
    assert invert_base_poch(0.3, 0.5, 0) == 1
    assert close(invert_base_poch(0.3, 0.5, 1), 0.7)
    assert close(invert_base_poch(0.3, 0.5, 3), qpoch(0.3, 0.5, 3))


def test_split_index_property():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(200):
        a = complex(*rng.uniform(-1.5, 1.5, 2))
        q = complex(*rng.uniform(-0.8, 0.8, 2))
        n, k = (int(x) for x in rng.integers(-5, 6, 2))
        try:
            lhs = qpoch(a, q, n + k)
            rhs = qpoch(a, q, n) * qpoch(a * q ** n, q, k)
        except PoleError:
            continue
        assert close(lhs, rhs, 1e-9)
        checked += 1
    assert checked > 150


def test_finite_times_tail_is_infinite_product():
    for a, q, n in [(0.3, 0.5, 4), (0.2 + 0.5j, -0.6, 7), (1.4, 0.8, 3)]:
        assert close(qpoch(a, q, n) * qpoch_inf(a * q ** n, q), qpoch_inf(a, q))


def test_example_identities_over_ratio():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = rng.uniform(0.1, 2.0)
        q = rng.uniform(0.1, 0.9)
        n = int(rng.integers(0, 7))
        k = int(rng.integers(0, n + 1))
        assert close(qpoch(a * q ** k, q, n - k), qpoch(a, q, n) / qpoch(a, q, k), 1e-10)
        # (a;q)_{-n} = 1/(aq^{-n};q)_n = (-q/a)^n q^{C(n,2)}/(q/a;q)_n
        lhs = qpoch(a, q, -n)
        rhs = (-q / a) ** n * q ** (n * (n - 1) // 2) / qpoch(q / a, q, n)
        assert close(lhs, rhs, 1e-10)


def test_reciprocal_of_pole_is_zero():
    q = F(1, 2)
    for n in range(1, 4):
        for k in range(-6, -n + 1):
            assert rqpoch(q ** n, q, k) == 0
    with pytest.raises(PoleError):
        qpoch(F(1, 2), F(1, 2), -1)


def test_rational_and_float_agree():
    for a, q, n in [(F(1, 3), F(2, 3), 5), (F(-3, 7), F(1, 2), -3), (F(5, 2), F(1, 3), 4)]:
        assert close(float(qpoch(a, q, n)), qpoch(float(a), float(q), n))


def test_near_pole_guard():
    with pytest.raises(PoleError):
        qpoch(0.5 * (1 + 1e-15), 0.5, -1)


def test_principal_branch_power():
    v = qpoch_complex_index(0.3, -0.5 + 0.1j, 0.5)
    assert cmath.isfinite(v)
