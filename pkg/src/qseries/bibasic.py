"""Indefinite sums mixing two independent bases p and q.

Everything here is a finite sum of q- and p-shifted factorials, so all
checks run exactly when the inputs are Fractions; that is the default the
catalog samplers use.  Negative indices always go through :func:`qpoch`'s
``(a;q)_{-m} = 1/(a q^{-m};q)_m`` extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .domains import (
    ParamDomain,
    cbox,
    exact_base,
    exact_int,
    exact_rational,
    finite_clear,
    ibox,
    make_rng,
)
from .errors import DomainError, TruncationError, UnknownIdentity
from .identities import IdentityEntry, verify_entry
from .qcore import PASS_TOL, all_exact, binom2, guarded_inverse, inf_quotient, lift, one_like, qpoch, rqpoch
from .reports import VerificationReport, compare, relative_error

__all__ = [
    "BibasicParams", "TriangularPair", "BIBASIC", "DELTA_IDS",
    "s_term", "difference_forms", "indefinite_term", "indefinite_bibasic",
    "gosper_bibasic", "extended_term", "extended_bibasic", "limit_rhs",
    "bibasic_limit_check", "delta_sum", "delta_checks", "build_inverse_pair",
    "ba_orthogonality_sum", "factorization_sides", "factorization_check",
    "ex41_sides", "ex41_check", "bibasic_check", "sample_bibasic_params",
]



@dataclass(frozen=True)
class BibasicParams:
    """Parameters shared by the two-base sums; ``d`` is only used by the extended form."""

    a: object
    b: object
    c: object
    p: object
    q: object
    d: object = None

    @property
    def exact(self) -> bool:
        vals = [self.a, self.b, self.c, self.p, self.q]
        if self.d is not None:
            vals.append(self.d)
        return all_exact(*vals)

    def check_poles(self, n: int) -> None:
        """PoleError if a denominator of the k = 0..n terms vanishes."""
        a, b, c, p, q = (lift(v) for v in (self.a, self.b, self.c, self.p, self.q))
        for k in range(n + 1):
            _mixed([], [a * p / c, b * c * p], [], [q, a * q / b], p, q, k)


def _mixed(p_num: Sequence, p_den: Sequence, q_num: Sequence, q_den: Sequence, p, q, k: int):
    """(p_num;p)_k (q_num;q)_k / ((q_den;q)_k (p_den;p)_k) for any integer k."""
    value = one_like(p, q, *p_num, *p_den, *q_num, *q_den)
    for x in p_num:
        value *= qpoch(x, p, k)
    for x in q_num:
        value *= qpoch(x, q, k)
    for y in q_den:
        value *= rqpoch(y, q, k)
    for y in p_den:
        value *= rqpoch(y, p, k)
    return value


def _lift_all(*xs):
    return tuple(lift(x) for x in xs)


def _check_n(n: int, name: str = "n") -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"{name} must be a nonnegative integer")
    return int(n)


# -- the indefinite sum --------------------------------------------------------

def s_term(a, b, c, p, q, k: int):
    """s_k = (ap, bp;p)_k (cq, aq/bc;q)_k / ((q, aq/b;q)_k (ap/c, bcp;p)_k); zero for k < 0."""
    a, b, c, p, q = _lift_all(a, b, c, p, q)
    return _mixed([a * p, b * p], [a * p / c, b * c * p], [c * q, a * q / (b * c)],
                  [q, a * q / b], p, q, k)


def indefinite_term(a, b, c, p, q, k: int):
    """The k-th summand of the indefinite bibasic sum."""
    a, b, c, p, q = _lift_all(a, b, c, p, q)
    pk, qk = p ** k, q ** k
    front = (1 - a * pk * qk) * (1 - b * pk / qk) * guarded_inverse((1 - a) * (1 - b))
    return front * _mixed([a, b], [a * p / c, b * c * p], [c, a / (b * c)],
                          [q, a * q / b], p, q, k) * qk


def difference_forms(a, b, c, p, q, k: int):
    """(s_k - s_{k-1}, the braced factored form, the closed product form)."""
    a, b, c, p, q = _lift_all(a, b, c, p, q)
    pk, qk = p ** k, q ** k
    diff = s_term(a, b, c, p, q, k) - s_term(a, b, c, p, q, k - 1)
    lead = (_mixed([a * p, b * p], [], [c * q, a * q / (b * c)], [], p, q, k - 1)
            * _mixed([], [a * p / c, b * c * p], [], [q, a * q / b], p, q, k))
    brace = ((1 - a * pk) * (1 - b * pk) * (1 - c * qk) * (1 - a * qk / (b * c))
             - (1 - qk) * (1 - a * qk / b) * (1 - a * pk / c) * (1 - b * c * pk))
    return diff, lead * brace, indefinite_term(a, b, c, p, q, k)


def indefinite_bibasic(a, b, c, p, q, n: int):
    """(direct finite sum over k = 0..n, closed form s_n)."""
    n = _check_n(n)
    lhs = sum((indefinite_term(a, b, c, p, q, k) for k in range(n + 1)), 0 * one_like(a, b, c, p, q))
    return lhs, s_term(a, b, c, p, q, n)


def gosper_bibasic(a, c, p, q, n: int):
    """The b -> 0 limit of the indefinite sum: (direct sum, closed form)."""
    n = _check_n(n)
    a, c, p, q = _lift_all(a, c, p, q)
    inv_a = guarded_inverse(1 - a, "1 - a")
    lhs = 0 * one_like(a, c, p, q)
    for k in range(n + 1):
        lhs += ((1 - a * p ** k * q ** k) * inv_a
                * _mixed([a], [a * p / c], [c], [q], p, q, k) * c ** (-k))
    rhs = _mixed([a * p], [a * p / c], [c * q], [q], p, q, n) * c ** (-n)
    return lhs, rhs


# -- the extended sum with lower limit -m --------------------------------------

def _extended_guard(a, b, c, d) -> None:
    if d == 1 or d == c:
        raise DomainError("the extended sum excludes d = 1 and d = c")


def extended_term(a, b, c, d, p, q, k: int):
    a, b, c, d, p, q = _lift_all(a, b, c, d, p, q)
    pk, qk = p ** k, q ** k
    front = ((1 - a * d * pk * qk) * (1 - b * pk / (d * qk))
             * guarded_inverse((1 - a * d) * (1 - b / d)))
    e = a * d * d / (b * c)
    return front * _mixed([a, b], [a * d * p / c, b * c * p / d], [c, e],
                          [d * q, a * d * q / b], p, q, k) * qk


# |x base^k| needed at the lower limit before the term ratio is trusted as geometric
GEOMETRIC_REACH = 100.0


def _lower_sum(a, b, c, d, p, q, m: int):
    """(sum over k = -1..-m, |t_-m|, |t_-m+1|, max |t_k|), stepping the factorials down.

    In float mode forming (x;p)_{-j} directly overflows long before the terms
    themselves become small, so consecutive factorial ratios are used instead.
    """
    e = a * d * d / (b * c)
    p_num, p_den = (a, b), (a * d * p / c, b * c * p / d)
    q_num, q_den = (c, e), (d * q, a * d * q / b)
    inv = guarded_inverse((1 - a * d) * (1 - b / d))
    total = term = 0 * one_like(a, b, c, d, p, q)
    core = one_like(a, b, c, d, p, q)
    prev = peak = 0.0
    for k in range(0, -m, -1):
        # (x;base)_{k-1} = (x;base)_k / (1 - x base^{k-1}); the q^k factor drops by q
        pk, qk = p ** (k - 1), q ** (k - 1)
        step = 1 / q
        for x in p_num:
            step *= guarded_inverse(1 - x * pk)
        for x in q_num:
            step *= guarded_inverse(1 - x * qk)
        for y in p_den:
            step *= 1 - y * pk
        for y in q_den:
            step *= 1 - y * qk
        core *= step
        prev = abs(term)
        term = (1 - a * d * pk * qk) * (1 - b * pk / (d * qk)) * inv * core
        total += term
        peak = max(peak, abs(term))
    return total, abs(term), prev, peak


def _extended_prefactor(a, b, c, d):
    e = a * d * d / (b * c)
    den = d * (1 - a * d) * (1 - b / d) * (1 - c / d) * (1 - a * d / (b * c))
    return (1 - a) * (1 - b) * (1 - c) * (1 - e) * guarded_inverse(den, "prefactor")


def _extended_upper(a, b, c, d, p, q, n: int):
    e = a * d * d / (b * c)
    return _mixed([a * p, b * p], [a * d * p / c, b * c * p / d], [c * q, e * q],
                  [d * q, a * d * q / b], p, q, n)


def extended_bibasic(a, b, c, d, p, q, n: int, m: int):
    """(direct sum over k = -m..n, closed form)."""
    n, m = _check_n(n), _check_n(m, "m")
    a, b, c, d, p, q = _lift_all(a, b, c, d, p, q)
    _extended_guard(a, b, c, d)
    lhs = 0 * one_like(a, b, c, d, p, q)
    for k in range(n + 1):
        lhs += extended_term(a, b, c, d, p, q, k)
    if all_exact(a, b, c, d, p, q):
        for k in range(-m, 0):
            lhs += extended_term(a, b, c, d, p, q, k)
    else:
        lhs += _lower_sum(a, b, c, d, p, q, m)[0]
    e = b * c / (a * d * d)
    lower = _mixed([c / (a * d), d / (b * c)], [1 / a, 1 / b], [1 / d, b / (a * d)],
                   [1 / c, e], p, q, m + 1)
    rhs = _extended_prefactor(a, b, c, d) * (_extended_upper(a, b, c, d, p, q, n) - lower)
    return lhs, rhs


def limit_rhs(a, b, c, d, p, q, n: int):
    """Closed form of the sum from k = -infinity to n (|p|, |q| < 1)."""
    a, b, c, d = (complex(v) for v in (a, b, c, d))
    p, q = complex(p), complex(q)
    if abs(p) >= 1 or abs(q) >= 1:
        raise DomainError("the bilateral limit needs |p| < 1 and |q| < 1")
    _extended_guard(a, b, c, d)
    lower = (inf_quotient([c / (a * d), d / (b * c)], [1 / a, 1 / b], p)
             * inf_quotient([1 / d, b / (a * d)], [1 / c, b * c / (a * d * d)], q))
    return _extended_prefactor(a, b, c, d) * (_extended_upper(a, b, c, d, p, q, n) - lower)


def bibasic_limit_check(a, b, c, d, p, q, n: int, M: int = 20,
                        tol: float = 1e-6) -> VerificationReport:
    """Extended sum with lower limit -2M against the infinite-product closed form.

    The lower tail decays like max(|p|, |q|)^M, hence the loose default
    tolerance.  The errors at -M and -2M are recorded and a pass also needs
    the second not to exceed the first.  TruncationError is raised when the
    factorial parameters at -2M are not yet large compared with 1, the terms
    are not yet decaying, or the geometric estimate of the remaining tail
    exceeds the tolerance.  Terms that grow far beyond the
    result before decaying make the float sum meaningless; that is
    recorded as a failure.
    """
    params = {"a": a, "b": b, "c": c, "d": d, "p": p, "q": q, "n": n, "M": M}
    a, b, c, d, p, q = (complex(v) for v in (a, b, c, d, p, q))
    _, last, prev, peak = _lower_sum(a, b, c, d, p, q, 2 * M)
    e = a * d * d / (b * c)
    reach = min([abs(x) * abs(p) ** (-2 * M) for x in (a, b, a * d * p / c, b * c * p / d)]
                + [abs(x) * abs(q) ** (-2 * M) for x in (c, e, d * q, a * d * q / b)])
    if reach < GEOMETRIC_REACH:
        # the factorials at -2M are not yet dominated by their largest factor,
        # so the terms may still grow and the last two say nothing about the tail
        raise TruncationError(f"lower limit -{2 * M} is too shallow for these bases")
    sums = {}

    def lhs():
        sums["M"] = extended_bibasic(a, b, c, d, p, q, n, M)[0]
        sums["2M"] = extended_bibasic(a, b, c, d, p, q, n, 2 * M)[0]
        return sums["2M"]

    report = compare("bibasic_limit", params, lhs, lambda: limit_rhs(a, b, c, d, p, q, n), tol=tol)
    if report.error is not None:
        return report
    scale = 1 + abs(report.rhs)
    ratio = last / prev if prev else 0.0
    if last > 0 and (ratio >= 1 or last * ratio / (1 - ratio) > tol * scale):
        raise TruncationError(f"lower tail at k = {-2 * M} is {last:.3g} with term ratio {ratio:.3g}")
    diff_m, diff_2m = abs(sums["M"] - report.rhs), abs(sums["2M"] - report.rhs)
    report.diagnostics.update({"diff_M": diff_m, "diff_2M": diff_2m, "peak_term": peak})
    report.passed = report.passed and diff_2m <= diff_m
    if peak * 1e-15 > tol * scale:
        report.passed = False
        report.error = f"cancellation: lower terms reach {peak:.3g} against a result of size {scale:.3g}"
    return report


# -- delta identities ----------------------------------------------------------

def _vwp_factor(a, q, k):
    """(1 - a q^{2k}) / (1 - a): what the +-q a^{1/2} pair contributes."""
    return (1 - a * q ** (2 * k)) * guarded_inverse(1 - a, "1 - a")


def _delta_6phi5(p, n):
    a, b, q = _lift_all(p["a"], p["b"], p["q"])
    total = 0 * one_like(a, b, q)
    for k in range(n + 1):
        total += (_vwp_factor(a, q, k)
                  * _mixed([], [], [a, b, a * q ** n / b, q ** (-n)],
                           [q, a * q / b, b * q ** (1 - n), a * q ** (n + 1)], q, q, k) * q ** k)
    return total


def _delta_4phi3(p, n):
    a, q = _lift_all(p["a"], p["q"])
    total = 0 * one_like(a, q)
    for k in range(n + 1):
        total += (_vwp_factor(a, q, k)
                  * _mixed([], [], [a, q ** (-n)], [q, a * q ** (n + 1)], q, q, k) * q ** (n * k))
    return total


def _delta_bibasic(p, n):
    a, b, pp, q = _lift_all(p["a"], p["b"], p["p"], p["q"])
    qn = q ** n
    inv = guarded_inverse((1 - a) * (1 - b))
    total = 0 * one_like(a, b, pp, q)
    for k in range(n + 1):
        pk, qk = pp ** k, q ** k
        total += ((1 - a * pk * qk) * (1 - b * pk / qk) * inv
                  * _mixed([a, b], [a * pp * qn, b * pp / qn], [1 / qn, a * qn / b],
                           [q, a * q / b], pp, q, k) * qk)
    return total


def _delta_pair(p, n):
    a, b, pp, q = _lift_all(p["a"], p["b"], p["p"], p["q"])
    total = 0 * one_like(a, b, pp, q)
    for k in range(n + 1):
        qk = q ** k
        total += (qpoch(a * qk, pp, n - 1) * qpoch(b / qk, pp, n - 1)
                  * (1 - a * q ** (2 * k) / b)
                  * rqpoch(q, q, k) * rqpoch(q, q, n - k) * rqpoch(a * qk / b, q, n + 1)
                  * (-1) ** k * q ** binom2(k))
    return (1 - a / pp) * (1 - b / pp) * total


def _delta_pair_limit(p, n):
    a, pp, q = _lift_all(p["a"], p["p"], p["q"])
    total = 0 * one_like(a, pp, q)
    for k in range(n + 1):
        total += (qpoch(a * q ** k, pp, n - 1) * rqpoch(q, q, k) * rqpoch(q, q, n - k)
                  * (-1) ** k * q ** binom2(n - k))
    return (1 - a / pp) * total


# Identifier -> (summand, parameter names).
DELTA_IDS = {
    "delta_6phi5": (_delta_6phi5, ("a", "b", "q")),
    "delta_4phi3": (_delta_4phi3, ("a", "q")),
    "bibasic_delta": (_delta_bibasic, ("a", "b", "p", "q")),
    "bibasic_delta_pair": (_delta_pair, ("a", "b", "p", "q")),
    "bibasic_delta_limit": (_delta_pair_limit, ("a", "p", "q")),
}


def delta_sum(which: str, params: Mapping, n: int):
    try:
        fn, names = DELTA_IDS[which]
    except KeyError:
        raise UnknownIdentity(f"unknown delta identity {which!r}") from None
    missing = [k for k in names if k not in params]
    if missing:
        raise DomainError(f"missing parameters: {', '.join(missing)}")
    return fn(params, _check_n(n))


def delta_checks(which: str, params: Mapping, n: int, tol: float = PASS_TOL) -> VerificationReport:
    """The finite sum against the Kronecker delta; exact when all inputs are."""
    if which not in DELTA_IDS:
        raise UnknownIdentity(f"unknown delta identity {which!r}")
    names = DELTA_IDS[which][1]
    exact = all_exact(*(params[k] for k in names if k in params))
    one = Fraction(1) if exact else complex(1.0)
    full = dict(params, n=n)
    return compare(which, full, lambda: delta_sum(which, params, n),
                   lambda: one if n == 0 else 0 * one, tol=tol, exact=exact)


# -- the inverse matrix pair ---------------------------------------------------

@dataclass(frozen=True)
class TriangularPair:
    """Lower-triangular matrices A = (a_nj), B = (b_jm) of size N, with A B = B A = I."""

    A: np.ndarray
    B: np.ndarray
    exact: bool

    @property
    def size(self) -> int:
        return self.A.shape[0]

    def products(self):
        return self.A @ self.B, self.B @ self.A

    def identity_errors(self):
        """max |AB - I| and max |BA - I| (Fractions in exact mode)."""
        eye = np.eye(self.size, dtype=int)
        out = []
        for prod in self.products():
            out.append(max(abs(x) for x in (prod - eye).ravel()))
        return tuple(out)

    def is_inverse(self, tol: float = 1e-10) -> bool:
        errs = self.identity_errors()
        if self.exact:
            return all(e == 0 for e in errs)
        return all(float(e) <= tol for e in errs)


def _a_entry(a, b, p, q, n, j):
    qn = q ** n
    sign = (-1) ** (n + j)
    top = ((1 - a * p ** j * q ** j) * (1 - b * p ** j / q ** j)
           * qpoch(a * p * qn, p, n - 1) * qpoch(b * p / qn, p, n - 1))
    return (sign * top * rqpoch(q, q, n - j) * rqpoch(a * p * qn, p, j)
            * rqpoch(b * p / qn, p, j) * rqpoch(b * q ** (1 - 2 * n) / a, q, n - j))


def _b_entry(a, b, p, q, j, m):
    r = j - m
    lead = (qpoch(a * p ** m * q ** m, p, r) * qpoch(b * p ** m / q ** m, p, r)
            * rqpoch(q, q, r) * rqpoch(a * q ** (1 + 2 * m) / b, q, r))
    return lead * (-(a / b) * q ** (1 + 2 * m)) ** r * q ** (2 * binom2(r))


def build_inverse_pair(a, b, p, q, N: int) -> TriangularPair:
    """The N x N leading blocks of the matrices (a_nj) and (b_jm)."""
    if int(N) != N or N < 1:
        raise DomainError("matrix size must be a positive integer")
    a, b, p, q = _lift_all(a, b, p, q)
    exact = all_exact(a, b, p, q)
    zero = Fraction(0) if exact else complex(0.0)
    A = np.full((N, N), zero, dtype=object if exact else complex)
    B = np.full((N, N), zero, dtype=object if exact else complex)
    for i in range(N):
        for j in range(i + 1):
            A[i, j] = _a_entry(a, b, p, q, i, j)
            B[i, j] = _b_entry(a, b, p, q, i, j)
    return TriangularPair(A, B, exact)


def ba_orthogonality_sum(a, b, p, q, j: int, k: int):
    """The (j, k) entry of B A written out as a single finite sum (delta_{j,k})."""
    a, b, p, q = _lift_all(a, b, p, q)
    r = j - k
    total = 0 * one_like(a, b, p, q)
    if r < 0:
        return total
    front = (1 - a * p ** k * q ** k) * (1 - b * p ** k / q ** k)
    for n in range(r + 1):
        qs = q ** (k + n)
        total += (front * qpoch(a * p ** (k + 1) * qs, p, r - 1)
                  * qpoch(b * p ** (k + 1) / qs, p, r - 1)
                  * rqpoch(q, q, n) * rqpoch(q, q, r - n)
                  * rqpoch(a * q ** (2 * k + n) / b, q, r + 1)
                  * (1 - a * q ** (2 * k + 2 * n) / b)
                  * (-1) ** n * q ** (n * (r - 1) + binom2(r - n)))
    return total


# -- the four-variable factorization and the exercise sum -----------------------

def factorization_sides(a, b, c, d):
    a, b, c, d = _lift_all(a, b, c, d)
    lhs = ((1 - a) * (1 - b) * (1 - c) * (1 - a * d * d / (b * c))
           - (1 - d) * (1 - a * d / b) * (1 - a * d / c) * (1 - b * c / d))
    rhs = (1 - a * d) * (1 - b / d) * (1 - a * d / (b * c)) * (d - c)
    return lhs, rhs


def factorization_check(a, b, c, d, tol: float = 1e-12) -> bool:
    """True when both sides agree (exactly for rational inputs)."""
    lhs, rhs = factorization_sides(a, b, c, d)
    if all_exact(lhs, rhs):
        return lhs == rhs
    return float(relative_error(lhs, rhs)) <= tol


def ex41_sides(a, b, d, p, q, n: int):
    """Extended sum with c = q^{-n} and lower limit 0, against its product form."""
    n = _check_n(n)
    a, b, d, p, q = _lift_all(a, b, d, p, q)
    qn = q ** n
    inv = guarded_inverse((1 - a * d) * (1 - b / d))
    lhs = 0 * one_like(a, b, d, p, q)
    for k in range(n + 1):
        pk, qk = p ** k, q ** k
        lhs += ((1 - a * d * pk * qk) * (1 - b * pk / (d * qk)) * inv
                * _mixed([a, b], [a * d * p * qn, b * p / (d * qn)], [1 / qn, a * d * d * qn / b],
                         [d * q, a * d * q / b], p, q, k) * qk)
    num = (1 - d) * (1 - a * d / b) * (1 - a * d * qn) * (1 - d * qn / b)
    den = (1 - a * d) * (1 - d / b) * (1 - d * qn) * (1 - a * d * qn / b)
    return lhs, num * guarded_inverse(den)


def ex41_check(a, b, d, p, q, n: int, tol: float = PASS_TOL) -> VerificationReport:
    params = {"a": a, "b": b, "d": d, "p": p, "q": q, "n": n}
    exact = all_exact(a, b, d, p, q)
    sides = {}

    def lhs():
        sides["v"] = ex41_sides(a, b, d, p, q, n)
        return sides["v"][0]

    return compare("bibasic_exercise", params, lhs, lambda: sides["v"][1], tol=tol, exact=exact)


# -- catalog -------------------------------------------------------------------

_BASE = cbox(0.3, 0.8)
_PAR = cbox(0.2, 1.5)
_N = ibox(0, 5)
_RAT = exact_rational(1, 9)


def _clear(fn):
    """Constraint: no vanishing denominator, using the (values, base, count) list of ``fn``."""
    def pred(p):
        return all(finite_clear(vals, base, count) for vals, base, count in fn(p))
    return ("denominators away from zero", pred)


def _indef_clear(p):
    a, b, c, pp, q, n = (p[k] for k in ("a", "b", "c", "p", "q", "n"))
    return [([a, b], q, 1), ([q, a * q / b], q, n), ([a * pp / c, b * c * pp], pp, n)]


def _gosper_clear(p):
    a, c, pp, q, n = (p[k] for k in ("a", "c", "p", "q", "n"))
    return [([a, c], q, 1), ([q], q, n), ([a * pp / c], pp, n)]


def _ext_clear(p):
    a, b, c, d, pp, q, n, m = (p[k] for k in ("a", "b", "c", "d", "p", "q", "n", "m"))
    e = a * d * d / (b * c)
    qm, pm = q ** (-m), pp ** (-m)
    return [
        ([a * d, b / d, c / d, a * d / (b * c), d, c], q, 1),
        ([d * q, a * d * q / b], q, n + 1), ([a * d * pp / c, b * c * pp / d], pp, n + 1),
        # negative indices: every factor becomes a reciprocal
        ([a * pm, b * pm, a * d * pp * pm / c, b * c * pp * pm / d], pp, m),
        ([c * qm, e * qm, d * q * qm, a * d * q * qm / b], q, m),
        ([1 / c, b * c / (a * d * d)], q, m + 1), ([1 / a, 1 / b], pp, m + 1),
    ]


def _ex_clear(p):
    a, b, d, pp, q, n = (p[k] for k in ("a", "b", "d", "p", "q", "n"))
    qn = q ** n
    return [([a * d, b / d, d / b, d * qn, a * d * qn / b], q, 1),
            ([d * q, a * d * q / b], q, n), ([a * d * pp * qn, b * pp / (d * qn)], pp, n)]


def _delta_clear(which):
    def fn(p):
        a, q, n = p["a"], p["q"], p["n"]
        if which == "delta_6phi5":
            b = p["b"]
            return [([a], q, 1), ([q, a * q / b, b * q ** (1 - n), a * q ** (n + 1)], q, n)]
        if which == "delta_4phi3":
            return [([a], q, 1), ([q, a * q ** (n + 1)], q, n)]
        pp = p["p"]
        if which == "bibasic_delta":
            b = p["b"]
            return [([a, b], q, 1), ([q, a * q / b], q, n),
                    ([a * pp * q ** n, b * pp / q ** n], pp, n)]
        if which == "bibasic_delta_pair":
            b = p["b"]
            # (x;p)_{-1} has the factor 1 - x/p in a denominator
            return [([a * q ** k / b for k in range(n + 1)], q, n + 1),
                    ([a * q ** k / pp for k in range(n + 1)], pp, 1),
                    ([b / (pp * q ** k) for k in range(n + 1)], pp, 1)]
        return [([a * q ** k / pp for k in range(n + 1)], pp, 1)]
    return fn


def _entry(ident, title, lhs, rhs, names, clear, lhs_text, rhs_text, extra=()):
    boxes = {}
    exact = {}
    for name in names:
        if name in ("p", "q"):
            boxes[name], exact[name] = _BASE, exact_base
        elif name in ("n", "m"):
            boxes[name], exact[name] = _N, exact_int(0, 5)
        else:
            boxes[name], exact[name] = _PAR, _RAT
    domain = ParamDomain(boxes=boxes, constraints=(_clear(clear), *extra), exact=exact)
    return IdentityEntry(ident, title, lhs, rhs, domain, exactable=True,
                         lhs_text=lhs_text, rhs_text=rhs_text)


def _delta_rhs(p):
    one = Fraction(1) if all_exact(*p.values()) else complex(1.0)
    return one if p["n"] == 0 else 0 * one


def _delta_entry(which, title, lhs_text):
    fn, names = DELTA_IDS[which]
    return _entry(which, title, lambda p, tol: fn(p, p["n"]), _delta_rhs, (*names, "n"),
                  _delta_clear(which), lhs_text, "delta_{n,0}")


def _pick(p, names):
    return [p[k] for k in names]


_ABC = ("a", "b", "c", "p", "q", "n")

BIBASIC: dict[str, IdentityEntry] = {e.id: e for e in (
    _entry("indefinite_bibasic", "indefinite two-base summation",
           lambda p, tol: indefinite_bibasic(*_pick(p, _ABC))[0],
           lambda p: s_term(*_pick(p, _ABC)), _ABC, _indef_clear,
           "sum_{k=0}^n (1-ap^kq^k)(1-bp^kq^-k)/((1-a)(1-b)) (a,b;p)_k (c,a/bc;q)_k"
           " / ((q,aq/b;q)_k (ap/c,bcp;p)_k) q^k",
           "(ap,bp;p)_n (cq,aq/bc;q)_n / ((q,aq/b;q)_n (ap/c,bcp;p)_n)"),
    _entry("gosper_bibasic", "two-base sum, b -> 0 limit",
           lambda p, tol: gosper_bibasic(*_pick(p, ("a", "c", "p", "q", "n")))[0],
           lambda p: gosper_bibasic(*_pick(p, ("a", "c", "p", "q", "n")))[1],
           ("a", "c", "p", "q", "n"), _gosper_clear,
           "sum_{k=0}^n (1-ap^kq^k)/(1-a) (a;p)_k (c;q)_k / ((q;q)_k (ap/c;p)_k) c^-k",
           "(ap;p)_n (cq;q)_n / ((q;q)_n (ap/c;p)_n) c^-n"),
    _entry("extended_bibasic", "two-base sum with lower limit -m",
           lambda p, tol: extended_bibasic(*_pick(p, ("a", "b", "c", "d", "p", "q", "n", "m")))[0],
           lambda p: extended_bibasic(*_pick(p, ("a", "b", "c", "d", "p", "q", "n", "m")))[1],
           ("a", "b", "c", "d", "p", "q", "n", "m"), _ext_clear,
           "sum_{k=-m}^n of the d-extended two-base summand",
           "prefactor * (upper product at n - lower product at m+1)"),
    _entry("bibasic_exercise", "two-base sum with c = q^-n and lower limit 0",
           lambda p, tol: ex41_sides(*_pick(p, ("a", "b", "d", "p", "q", "n")))[0],
           lambda p: ex41_sides(*_pick(p, ("a", "b", "d", "p", "q", "n")))[1],
           ("a", "b", "d", "p", "q", "n"), _ex_clear,
           "sum_{k=0}^n of the d-extended summand at c = q^-n",
           "(1-d)(1-ad/b)(1-adq^n)(1-dq^n/b) / ((1-ad)(1-d/b)(1-dq^n)(1-adq^n/b))"),
    _entry("bibasic_factorization", "four-variable polynomial factorization",
           lambda p, tol: factorization_sides(*_pick(p, ("a", "b", "c", "d")))[0],
           lambda p: factorization_sides(*_pick(p, ("a", "b", "c", "d")))[1],
           ("a", "b", "c", "d"), lambda p: [([p["b"], p["c"], p["d"]], 0, 0)],
           "(1-a)(1-b)(1-c)(1-ad^2/bc) - (1-d)(1-ad/b)(1-ad/c)(1-bc/d)",
           "(1-ad)(1-b/d)(1-ad/bc)(d-c)",
           extra=(("b, c, d nonzero", lambda p: all(p[k] != 0 for k in "bcd")),)),
    _delta_entry("delta_6phi5", "very-well-poised 6phi5 delta sum",
                 "6phi5(a, qa^1/2, -qa^1/2, b, aq^n/b, q^-n; a^1/2, -a^1/2, aq/b, bq^1-n, aq^n+1; q, q)"),
    _delta_entry("delta_4phi3", "very-well-poised 4phi3 delta sum",
                 "4phi3(a, qa^1/2, -qa^1/2, q^-n; a^1/2, -a^1/2, aq^n+1; q, q^n)"),
    _delta_entry("bibasic_delta", "two-base delta sum",
                 "indefinite two-base sum at c = q^-n"),
    _delta_entry("bibasic_delta_pair", "two-base delta sum behind the inverse pair",
                 "(1-a/p)(1-b/p) sum_k (aq^k, bq^-k;p)_{n-1} (1-aq^2k/b)"
                 " / ((q;q)_k (q;q)_{n-k} (aq^k/b;q)_{n+1}) (-1)^k q^C(k,2)"),
    _delta_entry("bibasic_delta_limit", "two-base delta sum, b -> 0 limit",
                 "(1-a/p) sum_k (aq^k;p)_{n-1} / ((q;q)_k (q;q)_{n-k}) (-1)^k q^C(n-k,2)"),
)}


def bibasic_check(ident: str, params: Mapping, tol: float = PASS_TOL) -> VerificationReport:
    try:
        entry = BIBASIC[ident]
    except KeyError:
        raise UnknownIdentity(f"unknown bibasic identity {ident!r}") from None
    return verify_entry(entry, params, tol, series_tol=0.0)


def sample_bibasic_params(ident: str, seed: int, count: int, exact: bool = True) -> list:
    entry = BIBASIC[ident]
    rng = make_rng(seed, ident + (":exact" if exact else ""))
    return [entry.domain.sample(rng, exact=exact) for _ in range(count)]
