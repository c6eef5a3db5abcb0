"""q-Pochhammer arithmetic: the numeric kernel every other module builds on.

Two number modes are supported transparently:

* float mode -- values are Python ``complex`` (floats are lifted);
* exact mode -- values are :class:`fractions.Fraction` (ints are lifted).

Exact mode only covers integer Pochhammer indices; anything needing an
infinite product or a non-integer power raises :class:`DomainError`.
"""

from __future__ import annotations

import cmath
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import DomainError, PoleError, TruncationError

Number = Union[int, Fraction, float, complex]

REL_TOL = 1e-12
PASS_TOL = 1e-9
POLE_GUARD = 1e-14
# Tail bound used to truncate (a;q)_inf: sum_{k>=K} |a q^k| < PRODUCT_TOL.
PRODUCT_TOL = 1e-17
MAX_PRODUCT_FACTORS = 10_000_000


# -- diagnostics -------------------------------------------------------------

@dataclass
class Tally:
    """Work counters collected while a :func:`counting` block is active."""

    series_terms: int = 0
    product_factors: int = 0
    integral_nodes: int = 0
    quadrature_order: int = 0

    def as_dict(self) -> dict:
        return {
            "series_terms": self.series_terms,
            "product_factors": self.product_factors,
            "integral_nodes": self.integral_nodes,
            "quadrature_order": self.quadrature_order,
        }


_TALLY: ContextVar[Tally | None] = ContextVar("qseries_tally", default=None)


@contextmanager
def counting() -> Iterator[Tally]:
    """Collect term/factor counts for everything evaluated inside the block."""
    tally = Tally()
    token = _TALLY.set(tally)
    try:
        yield tally
    finally:
        _TALLY.reset(token)


def current_tally() -> Tally | None:
    return _TALLY.get()


# -- scalar helpers ----------------------------------------------------------

def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(*xs) -> bool:
    return all(is_exact(x) for x in xs)


def lift(x: Number):
    """Normalise a scalar: ints become Fractions, floats become complex."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not q-series scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (float, complex)):
        return complex(x)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def one_like(*xs):
    return Fraction(1) if all_exact(*xs) else complex(1.0)


def is_zero(x) -> bool:
    """Exact zero test in exact mode, near-pole guard in float mode."""
    if is_exact(x):
        return x == 0
    return abs(x) < POLE_GUARD


def check_finite(x, what: str = "value"):
    if not is_exact(x) and not cmath.isfinite(x):
        raise DomainError(f"{what} is not finite")
    return x


def guarded_inverse(x, what: str = "denominator"):
    if is_zero(x):
        raise PoleError(f"{what} vanishes")
    return 1 / x


def power(q: Number, alpha: Number):
    """``q**alpha`` with the principal branch ``exp(alpha * Log q)``.

    Integer exponents are computed by repeated multiplication, so exact
    inputs stay exact.  Negative real ``q`` with non-integer ``alpha`` is
    branch sensitive; the principal logarithm is used.
    """
    if is_exact(alpha) and Fraction(alpha).denominator == 1:
        n = int(alpha)
        if q == 0 and n < 0:
            raise DomainError("zero raised to a negative power")
        return lift(q) ** n
    if isinstance(alpha, complex) and alpha.imag == 0 and float(alpha.real).is_integer():
        return power(q, int(alpha.real)) if is_exact(q) else complex(q) ** int(alpha.real)
    if isinstance(alpha, float) and alpha.is_integer():
        return complex(q) ** int(alpha)
    if q == 0:
        if complex(alpha).real > 0:
            return complex(0.0)
        raise DomainError("zero raised to a power with non-positive real part")
    return cmath.exp(complex(alpha) * cmath.log(complex(q)))


def _exact_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def principal_sqrt(x: Number):
    """Principal square root; exact for perfect-square Fractions."""
    if is_exact(x):
        r = _exact_sqrt(Fraction(x))
        if r is None:
            raise DomainError(f"{x} has no exact rational square root")
        return r
    return cmath.sqrt(complex(x))


def binom2(n: int) -> int:
    """n choose 2, valid for negative n as n(n-1)/2."""
    return n * (n - 1) // 2


# -- q-shifted factorials ----------------------------------------------------

def qpoch(a: Number, q: Number, n: int):
    """(a;q)_n for any integer n.

    For ``n < 0`` the extension ``(a;q)_{-m} = 1/(a q^{-m};q)_m`` is used.
    """
    if int(n) != n:
        raise TypeError("qpoch needs an integer index; see qpoch_complex_index")
    n = int(n)
    a, q = lift(a), lift(q)
    prod = one_like(a, q)
    if n >= 0:
        x = a
        for _ in range(n):
            prod *= 1 - x
            x *= q
        return prod
    if q == 0:
        raise DomainError("negative Pochhammer index needs q != 0")
    x = a
    for k in range(1, -n + 1):
        x = x / q
        factor = 1 - x
        if is_zero(factor):
            raise PoleError(f"(a;q)_{n}: factor 1 - a q^-{k} vanishes")
        prod *= factor
    return 1 / prod


def rqpoch(a: Number, q: Number, n: int):
    """1/(a;q)_n, honouring 1/(q^m;q)_k = 0 for m >= 1, k <= -m.

    For negative n the reciprocal is the finite product (a q^n;q)_{-n},
    which can legitimately vanish; for n >= 0 a vanishing (a;q)_n is a pole.
    """
    n = int(n)
    a, q = lift(a), lift(q)
    if n >= 0:
        # guard each factor: the whole product can be tiny (q near 1) without a pole
        prod, x = one_like(a, q), a
        for k in range(n):
            factor = 1 - x
            if is_zero(factor):
                raise PoleError(f"(a;q)_{n}: factor 1 - a q^{k} vanishes")
            prod *= factor
            x *= q
        return guarded_inverse(prod, f"(a;q)_{n}") if prod == 0 else 1 / prod
    if q == 0:
        raise DomainError("negative Pochhammer index needs q != 0")
    return qpoch(a * q ** n, q, -n)


def qpoch_multi(params: Iterable[Number], q: Number, n: int):
    """(a_1,...,a_k;q)_n as a product of single symbols."""
    prod = one_like(q)
    for a in params:
        prod *= qpoch(a, q, n)
    return prod


def _inf_product(a, q, tol: float, guard: bool):
    if is_exact(a) and a == 0:
        return one_like(q)
    if is_exact(q) and is_exact(a):
        raise DomainError("infinite products are not available in exact mode")
    a, q = complex(a), complex(q)
    aq = abs(q)
    if aq >= 1:
        raise DomainError(f"(a;q)_inf diverges for |q| = {aq:g} >= 1")
    if a == 0:
        return complex(1.0)
    prod = complex(1.0)
    x = a
    k = 0
    tail_scale = 1.0 / (1.0 - aq)
    while True:
        factor = 1 - x
        if guard and abs(factor) < POLE_GUARD:
            raise PoleError("infinite-product denominator factor vanishes")
        prod *= factor
        k += 1
        if abs(x) * aq * tail_scale < tol:
            break
        if k >= MAX_PRODUCT_FACTORS:
            raise TruncationError(f"(a;q)_inf did not converge in {k} factors")
        x *= q
    tally = _TALLY.get()
    if tally is not None:
        tally.product_factors += k
    return prod


def qpoch_inf(a: Number, q: Number, tol: float = PRODUCT_TOL):
    """(a;q)_inf, truncated once the tail sum of |a q^k| drops below ``tol``."""
    return _inf_product(a, q, tol, guard=False)


def qpoch_inf_multi(params: Iterable[Number], q: Number, tol: float = PRODUCT_TOL):
    prod = complex(1.0)
    for a in params:
        prod *= _inf_product(a, q, tol, guard=False)
    return prod


def inf_quotient(nums: Iterable[Number], dens: Iterable[Number], q: Number,
                 tol: float = PRODUCT_TOL):
    """prod (n;q)_inf / prod (d;q)_inf with the near-pole guard on denominators."""
    top = complex(1.0)
    for a in nums:
        top *= _inf_product(a, q, tol, guard=False)
    bottom = complex(1.0)
    for b in dens:
        bottom *= _inf_product(b, q, tol, guard=True)
    if abs(bottom) < POLE_GUARD * 1e-290:
        raise PoleError("infinite-product denominator underflows")
    return top / bottom


def inf_ratio(nums: Sequence[Number], dens: Sequence[Number], q: Number,
              tol: float = PRODUCT_TOL):
    """prod_k prod_i (1 - n_i q^k) / prod_j (1 - d_j q^k), factor by factor.

    Unlike :func:`inf_quotient` this never forms the separate products, so
    it stays finite when both of them underflow (|q| close to 1).
    """
    q = complex(q)
    aq = abs(q)
    if aq >= 1:
        raise DomainError(f"infinite products diverge for |q| = {aq:g} >= 1")
    xs = [complex(a) for a in nums]
    ys = [complex(b) for b in dens]
    scale = (sum(abs(x) for x in xs) + sum(abs(y) for y in ys)) / (1.0 - aq)
    value = complex(1.0)
    qk = complex(1.0)
    k = 0
    while True:
        for x in xs:
            value *= 1 - x * qk
        for y in ys:
            factor = 1 - y * qk
            if abs(factor) < POLE_GUARD:
                raise PoleError("infinite-product denominator factor vanishes")
            value /= factor
        k += 1
        qk *= q
        if scale * abs(qk) < tol or value == 0:
            break
        if k >= MAX_PRODUCT_FACTORS:
            raise TruncationError(f"product ratio did not converge in {k} factors")
    tally = _TALLY.get()
    if tally is not None:
        tally.product_factors += k * (len(xs) + len(ys))
    return value


def qpoch_complex_index(a: Number, q: Number, alpha: Number):
    """(a;q)_alpha = (a;q)_inf / (a q^alpha;q)_inf for complex alpha, |q| < 1."""
    q = complex(q)
    if q == 0:
        raise DomainError("complex-index Pochhammer needs q != 0")
    if abs(q) >= 1:
        raise DomainError("complex-index Pochhammer needs |q| < 1")
    shifted = complex(a) * power(q, alpha)
    return qpoch_inf(a, q) / _inf_product(shifted, q, PRODUCT_TOL, guard=True)


def qbinom(n: int, k: int, q: Number):
    """Gaussian binomial [n choose k]_q; zero for k outside 0..n."""
    q = lift(q)
    if k < 0 or k > n:
        return 0 * one_like(q)
    k = min(k, n - k)
    value = one_like(q)
    for j in range(1, k + 1):
        den = 1 - q ** j
        if is_zero(den):
            raise DomainError(f"q is a root of unity of order dividing {j}")
        value = value * (1 - q ** (n - k + j)) / den
    return value


def qbinom_general(alpha: Number, beta: Number, q: Number):
    """[alpha choose beta]_q for complex alpha, beta and |q| < 1.

    (q^{beta+1};q)_inf (q^{alpha-beta+1};q)_inf / ((q;q)_inf (q^{alpha+1};q)_inf)
    """
    q = complex(q)
    if abs(q) >= 1:
        raise DomainError("general q-binomial needs |q| < 1")
    alpha, beta = complex(alpha), complex(beta)
    top = qpoch_inf(power(q, beta + 1), q) * qpoch_inf(power(q, alpha - beta + 1), q)
    bottom = _inf_product(q, q, PRODUCT_TOL, guard=True) * _inf_product(
        power(q, alpha + 1), q, PRODUCT_TOL, guard=True)
    return top / bottom


def invert_base_poch(a: Number, q: Number, n: int):
    """(a^{-1};q^{-1})_n (-a)^n q^{n choose 2}, which equals (a;q)_n."""
    if n < 0:
        raise DomainError("base inversion is stated for n >= 0")
    a, q = lift(a), lift(q)
    if a == 0 or q == 0:
        raise DomainError("base inversion needs a != 0 and q != 0")
    return qpoch(1 / a, 1 / q, n) * (-a) ** n * q ** binom2(n)
