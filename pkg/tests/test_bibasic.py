from fractions import Fraction as F

import numpy as np
import pytest

from qseries.bibasic import (
    BIBASIC,
    ba_orthogonality_sum,
    bibasic_check,
    bibasic_limit_check,
    build_inverse_pair,
    delta_checks,
    delta_sum,
    difference_forms,
    ex41_check,
    extended_bibasic,
    factorization_check,
    factorization_sides,
    gosper_bibasic,
    indefinite_bibasic,
    s_term,
    sample_bibasic_params,
)
from qseries.errors import DomainError, TruncationError, UnknownIdentity
from qseries.identities import verify

RATS = [F(1, 3), F(2, 7), F(5, 4), F(3, 5), F(7, 9), F(4, 11), F(-2, 3), F(9, 7)]


def close(x, y, tol=1e-12):
    return abs(complex(x) - complex(y)) <= tol * (1 + abs(complex(y)))


def rational_points(seed, count, k=4):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        nums = rng.integers(1, 12, k)
        dens = rng.integers(1, 12, k)
        signs = rng.choice([-1, 1], k)
        vals = [F(int(s * u), int(v)) for s, u, v in zip(signs, nums, dens)]
        if len(set(vals)) == k and all(abs(v) != 1 for v in vals):
            out.append(vals)
    return out


def test_indefinite_trivial_and_float():
    lhs, rhs = indefinite_bibasic(0.3, 0.2, 0.4, 0.6, 0.5, 0)
    assert close(lhs, 1) and close(rhs, 1)
    lhs, rhs = indefinite_bibasic(0.3, 0.2, 0.4, 0.6, 0.5, 4)
    assert close(lhs, rhs)


def test_indefinite_exact():
    a, b, c, p, q = F(1, 3), F(2, 7), F(5, 4), F(1, 2), F(2, 3)
    for n in range(6):
        lhs, rhs = indefinite_bibasic(a, b, c, p, q, n)
        assert isinstance(lhs, F) and lhs == rhs


def test_telescoping_skeleton():
    a, b, c, p, q = F(1, 3), F(2, 7), F(5, 4), F(1, 2), F(2, 3)
    assert s_term(a, b, c, p, q, -1) == 0
    for n in range(6):
        total = sum(s_term(a, b, c, p, q, k) - s_term(a, b, c, p, q, k - 1) for k in range(n + 1))
        assert total == s_term(a, b, c, p, q, n)


def test_difference_factorization_termwise():
    for a, b, c, p, q in [(F(1, 3), F(2, 7), F(5, 4), F(1, 2), F(2, 3)),
                          (F(-3, 5), F(4, 9), F(2, 3), F(1, 3), F(1, 2))]:
        for k in range(9):
            diff, braced, closed = difference_forms(a, b, c, p, q, k)
            assert diff == braced == closed


def test_p_equal_q_reduces_to_delta():
    a, b, q = F(1, 3), F(2, 7), F(1, 2)
    for n in range(6):
        lhs, rhs = indefinite_bibasic(a, b, q ** -n, q, q, n)
        assert lhs == delta_sum("delta_6phi5", {"a": a, "b": b, "q": q}, n)
        assert rhs == (1 if n == 0 else 0)
    lhs, rhs = indefinite_bibasic(0.3, 0.45, 0.5 ** -3, 0.5, 0.5, 3)
    assert abs(lhs) < 1e-12 and abs(rhs) < 1e-12


def test_gosper():
    lhs, rhs = gosper_bibasic(0.3, 0.4, 0.6, 0.5, 0)
    assert close(lhs, 1) and close(rhs, 1)
    for n in range(6):
        lhs, rhs = gosper_bibasic(F(1, 3), F(5, 4), F(1, 2), F(2, 3), n)
        assert lhs == rhs
    g = gosper_bibasic(0.3, 0.4, 0.6, 0.5, 4)[0]
    near = indefinite_bibasic(0.3, 1e-8, 0.4, 0.6, 0.5, 4)[0]
    assert close(g, near, 1e-6)


def test_extended():
    lhs, rhs = extended_bibasic(0.3, 0.2, 0.4, 0.7, 0.6, 0.5, 0, 0)
    assert close(lhs, rhs)
    lhs, rhs = extended_bibasic(F(1, 3), F(2, 7), F(5, 4), F(3, 5), F(1, 2), F(2, 3), 3, 2)
    assert isinstance(lhs, F) and lhs == rhs
    with pytest.raises(DomainError):
        extended_bibasic(0.3, 0.2, 0.4, 1, 0.6, 0.5, 2, 1)
    with pytest.raises(DomainError):
        extended_bibasic(0.3, 0.2, 0.4, 0.4, 0.6, 0.5, 2, 1)


def test_extended_continuous_near_d_one():
    vals = [extended_bibasic(0.3, 0.2, 0.4, 1 + h, 0.6, 0.5, 3, 2)[0] for h in (1e-3, 1e-4, 1e-5)]
    assert abs(vals[1] - vals[2]) < abs(vals[0] - vals[1])
    lhs, rhs = extended_bibasic(0.3, 0.2, 0.4, 1 + 1e-6, 0.6, 0.5, 3, 2)
    assert close(lhs, rhs, 1e-8)


def test_limit_check():
    rep = bibasic_limit_check(0.3, 0.2, 0.4, 0.7, 0.6, 0.5, 3, M=20)
    assert rep.passed
    assert rep.diagnostics["diff_2M"] <= rep.diagnostics["diff_M"]
    assert bibasic_limit_check(0.3, 0.2, 0.4, 0.7, 0.6, 0.5, 0, M=20).passed
    assert bibasic_limit_check(0.3, 0.2, 0.4, 0.7, 0.95, 0.9, 2, M=200).passed


def test_limit_check_near_one_is_never_silent():
    for p, q in [(0.9, 0.85), (0.95, 0.9), (0.98, 0.97)]:
        for M in (5, 20, 60):
            try:
                rep = bibasic_limit_check(0.3, 0.2, 0.4, 0.7, p, q, 2, M=M)
            except TruncationError:
                continue
            assert rep.passed or rep.error
    with pytest.raises(TruncationError):
        bibasic_limit_check(0.3, 0.2, 0.4, 0.7, 0.98, 0.97, 2, M=5)


def test_delta_checks():
    for which, params in [("delta_6phi5", {"a": F(1, 3), "b": F(2, 7), "q": F(1, 2)}),
                          ("delta_4phi3", {"a": F(1, 3), "q": F(1, 2)}),
                          ("bibasic_delta", {"a": F(1, 3), "b": F(2, 7), "p": F(1, 2), "q": F(2, 3)}),
                          ("bibasic_delta_pair", {"a": F(1, 3), "b": F(1, 5), "p": F(1, 2), "q": F(1, 3)}),
                          ("bibasic_delta_limit", {"a": F(1, 4), "p": F(2, 3), "q": F(1, 2)})]:
        for n in range(6):
            rep = delta_checks(which, params, n)
            assert rep.passed and rep.rel_err == 0, (which, n)
    assert delta_sum("bibasic_delta_pair", {"a": F(1, 3), "b": F(1, 5), "p": F(1, 2), "q": F(1, 3)}, 4) == 0
    assert delta_sum("bibasic_delta_limit", {"a": F(1, 4), "p": F(2, 3), "q": F(1, 2)}, 5) == 0
    with pytest.raises(UnknownIdentity):
        delta_checks("delta_9", {}, 1)


def test_inverse_pair_exact():
    one = build_inverse_pair(F(1, 3), F(2, 7), F(1, 2), F(2, 3), 1)
    assert one.size == 1 and one.A[0, 0] * one.B[0, 0] == 1
    for N in (5, 8):
        pair = build_inverse_pair(F(1, 3), F(2, 7), F(1, 2), F(2, 3), N)
        assert pair.exact and pair.is_inverse()
        assert pair.identity_errors() == (0, 0)


def test_inverse_pair_float():
    pair = build_inverse_pair(0.3 + 0.1j, 0.45, 0.6, 0.5, 6)
    assert not pair.exact and pair.is_inverse(1e-10)
    with pytest.raises(DomainError):
        build_inverse_pair(0.3, 0.4, 0.5, 0.6, 0)


def test_ba_orthogonality_matches_product():
    a, b, p, q = F(1, 3), F(2, 7), F(1, 2), F(2, 3)
    pair = build_inverse_pair(a, b, p, q, 6)
    _, ba = pair.products()
    for j in range(6):
        for k in range(6):
            val = ba_orthogonality_sum(a, b, p, q, j, k)
            assert val == (1 if j == k else 0)
            assert val == ba[j, k]


def test_factorization():
    assert factorization_check(F(1, 3), F(2, 7), F(5, 4), 1)
    assert factorization_check(0, F(2, 7), F(5, 4), F(3, 5))
    for a, b, c, d in rational_points(1, 20):
        lhs, rhs = factorization_sides(a, b, c, d)
        assert lhs == rhs
    assert factorization_check(0.3 + 0.2j, 0.7, -1.2, 0.45)


def test_factorization_points_carry_jackson_n_one():
    q = F(1, 2)
    exact = 0
    for a, b, c, d in rational_points(2, 20):
        assert factorization_check(a, b, c, d)
        rep = verify("jackson_8phi7", {"a": a * a, "b": b, "c": c, "d": d, "n": 1, "q": q})
        if rep.error:
            assert rep.error.startswith("DomainError")
        else:
            assert rep.rel_err == 0
            exact += 1
    assert exact >= 15


def test_ex41():
    assert ex41_check(0.3, 0.2, 0.7, 0.6, 0.5, 0).passed
    assert ex41_check(F(1, 3), F(2, 7), F(3, 5), F(1, 2), F(2, 3), 3).rel_err == 0
    for n in range(6):
        assert ex41_check(0.3 + 0.1j, 0.45, 0.7, 0.6, 0.7, n, tol=1e-12).passed


def test_catalog_exact_and_float_sweeps():
    for ident in BIBASIC:
        for params in sample_bibasic_params(ident, 11, 10, exact=True):
            rep = bibasic_check(ident, params)
            assert rep.passed and rep.rel_err == 0, (ident, params)
        for params in sample_bibasic_params(ident, 11, 10, exact=False):
            rep = bibasic_check(ident, params)
            assert rep.passed, (ident, params, rep.rel_err)
