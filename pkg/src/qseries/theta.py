"""Jacobi theta functions, the triple product and the quintuple product.

Series and product forms are computed by separate loops so that one can
certify the other.  For theta_1 and theta_2, q^{1/4} is the principal
fourth root, which is the real one for 0 < q < 1.
"""

from __future__ import annotations

import cmath

from .errors import DomainError
from .qcore import PRODUCT_TOL, current_tally, power, qpoch_inf

THETA_TOL = 1e-17
_MAX_TERMS = 100_000


def _check_q(q) -> complex:
    q = complex(q)
    if abs(q) >= 1:
        raise DomainError(f"theta functions need |q| < 1, got |q| = {abs(q):g}")
    return q


def _count(n: int) -> None:
    tally = current_tally()
    if tally is not None:
        tally.series_terms += n


def theta(j: int, x, q) -> complex:
    """theta_j(x) from its Fourier series, j in 1..4."""
    if j not in (1, 2, 3, 4):
        raise DomainError(f"theta index must be 1..4, got {j}")
    q = _check_q(q)
    x = complex(x)
    if q == 0:
        return complex(1.0) if j in (3, 4) else complex(0.0)
    aq = abs(q)
    quarter = power(q, 0.25)
    total = complex(0.0)
    n = 0 if j in (1, 2) else 1
    while n < _MAX_TERMS:
        if j in (1, 2):
            # q^{(n+1/2)^2} = q^{1/4} q^{n(n+1)}
            weight = quarter * q ** (n * (n + 1))
            size = aq ** ((n + 0.5) ** 2)
            if j == 1:
                total += (-1) ** n * weight * cmath.sin((2 * n + 1) * x)
            else:
                total += weight * cmath.cos((2 * n + 1) * x)
        else:
            weight = q ** (n * n)
            size = aq ** (n * n)
            sign = (-1) ** n if j == 4 else 1
            total += sign * weight * cmath.cos(2 * n * x)
        n += 1
        if size < THETA_TOL:
            break
    _count(n)
    return 2 * total if j in (1, 2) else 1 + 2 * total


def theta_product(j: int, x, q) -> complex:
    """theta_j(x) from its infinite-product form."""
    if j not in (1, 2, 3, 4):
        raise DomainError(f"theta index must be 1..4, got {j}")
    q = _check_q(q)
    x = complex(x)
    if q == 0:
        return complex(1.0) if j in (3, 4) else complex(0.0)
    aq = abs(q)
    c2 = cmath.cos(2 * x)
    prod = complex(1.0)
    n = 1
    while n < _MAX_TERMS:
        q2n = q ** (2 * n)
        if j == 1:
            prod *= (1 - q2n) * (1 - 2 * q2n * c2 + q2n * q2n)
        elif j == 2:
            prod *= (1 - q2n) * (1 + 2 * q2n * c2 + q2n * q2n)
        else:
            odd = q ** (2 * n - 1)
            sign = 1 if j == 3 else -1
            prod *= (1 - q2n) * (1 + sign * 2 * odd * c2 + odd * odd)
        if aq ** (2 * n - 1) < THETA_TOL:
            break
        n += 1
    _count(n)
    if j == 1:
        return 2 * power(q, 0.25) * cmath.sin(x) * prod
    if j == 2:
        return 2 * power(q, 0.25) * cmath.cos(x) * prod
    return prod


def jacobi_triple_sum(z, q) -> complex:
    """sum over all integers k of q^{k^2} z^k."""
    q, z = _check_q(q), complex(z)
    if z == 0:
        raise DomainError("triple product needs z != 0")
    total = complex(1.0)
    k = 1
    while k < _MAX_TERMS:
        a = q ** (k * k)
        total += a * (z ** k + z ** (-k))
        if abs(a) * max(abs(z), 1 / abs(z)) ** k < THETA_TOL * max(abs(total), 1.0):
            break
        k += 1
    _count(2 * k + 1)
    return total


def jacobi_triple_product(z, q) -> complex:
    """(q^2, -qz, -q/z; q^2)_inf."""
    q, z = _check_q(q), complex(z)
    if z == 0:
        raise DomainError("triple product needs z != 0")
    q2 = q * q
    return qpoch_inf(q2, q2, PRODUCT_TOL) * qpoch_inf(-q * z, q2) * qpoch_inf(-q / z, q2)


def quintuple_sum(z, q) -> complex:
    """sum over n of (-1)^n q^{n(3n-1)/2} z^{3n} (1 + z q^n)."""
    q, z = _check_q(q), complex(z)
    if z == 0:
        raise DomainError("quintuple product needs z != 0")
    total = 1 + z
    n = 1
    small = 0
    while n < _MAX_TERMS:
        pos = (-1) ** n * q ** (n * (3 * n - 1) // 2) * z ** (3 * n) * (1 + z * q ** n)
        m = -n
        neg = (-1) ** n * q ** (m * (3 * m - 1) // 2) * z ** (3 * m) * (1 + z * q ** m)
        total += pos + neg
        if abs(pos) + abs(neg) < THETA_TOL * max(abs(total), 1.0):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    _count(2 * n + 1)
    return total


def quintuple_product(z, q) -> complex:
    """(q, -z, -q/z; q)_inf (q z^2, q/z^2; q^2)_inf."""
    q, z = _check_q(q), complex(z)
    if z == 0:
        raise DomainError("quintuple product needs z != 0")
    q2 = q * q
    return (qpoch_inf(q, q) * qpoch_inf(-z, q) * qpoch_inf(-q / z, q)
            * qpoch_inf(q * z * z, q2) * qpoch_inf(q / (z * z), q2))
