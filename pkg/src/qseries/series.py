"""Unilateral r-phi-s and bilateral r-psi-s series: evaluation and structure.

Every series here is summed through its term ratio, which is a rational
function of q^n.  For a unilateral series with numerators a_i and
denominators b_j the ratio is

    t_{n+1}/t_n = prod(1 - a_i q^n) / (prod(1 - b_j q^n) (1 - q^{n+1}))
                  * (-q^n)^{1+s-r} * z
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConvergenceError, DomainError, PoleError, TruncationError
from .qcore import (
    all_exact,
    current_tally,
    is_exact,
    is_zero,
    lift,
    principal_sqrt,
)

SERIES_TOL = 1e-16
MAX_TERMS = 1_000_000
SMALL_RUN = 3
TERMINATION_TOL = 1e-12
N_MAX = 200
POISE_TOL = 1e-10


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of an r-phi-s (``bilateral=False``) or r-psi-s series."""

    numerators: tuple
    denominators: tuple
    base: object
    argument: object
    bilateral: bool = False

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(lift(a) for a in self.numerators))
        object.__setattr__(self, "denominators", tuple(lift(b) for b in self.denominators))
        object.__setattr__(self, "base", lift(self.base))
        object.__setattr__(self, "argument", lift(self.argument))

    @property
    def r(self) -> int:
        return len(self.numerators)

    @property
    def s(self) -> int:
        return len(self.denominators)

    @property
    def exact(self) -> bool:
        return all_exact(*self.numerators, *self.denominators, self.base, self.argument)

    def replace(self, **changes) -> "SeriesSpec":
        data = dict(numerators=self.numerators, denominators=self.denominators,
                    base=self.base, argument=self.argument, bilateral=self.bilateral)
        data.update(changes)
        return SeriesSpec(**data)

    def label(self) -> str:
        kind = "psi" if self.bilateral else "phi"
        return f"{self.r}{kind}{self.s}"


def phi(numerators: Sequence, denominators: Sequence, q, z) -> SeriesSpec:
    return SeriesSpec(tuple(numerators), tuple(denominators), q, z, False)


def psi(numerators: Sequence, denominators: Sequence, q, z) -> SeriesSpec:
    return SeriesSpec(tuple(numerators), tuple(denominators), q, z, True)


def make_vwp(a1, rest: Sequence, q, z, sqrt_a=None) -> SeriesSpec:
    """Expand the W-shorthand W(a1; a4, ..., a_{r+1}; q, z) into a phi spec.

    ``sqrt_a`` fixes the branch of a1^{1/2}; the principal root is the default.
    """
    root = principal_sqrt(a1) if sqrt_a is None else lift(sqrt_a)
    a1, q = lift(a1), lift(q)
    rest = [lift(x) for x in rest]
    nums = [a1, q * root, -q * root, *rest]
    dens = [root, -root, *[q * a1 / x for x in rest]]
    return phi(nums, dens, q, z)


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class SeriesClass:
    terminating: int | None = None
    balanced_k: int | None = None
    well_poised: bool = False
    very_well_poised: bool = False
    split_poised: bool = False

    def as_dict(self) -> dict:
        return {
            "terminating": self.terminating,
            "balanced_k": self.balanced_k,
            "well_poised": self.well_poised,
            "very_well_poised": self.very_well_poised,
            "split_poised": self.split_poised,
        }


def _close(x, y, tol=POISE_TOL) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def termination_index(a, q) -> int | None:
    """Smallest m in 0..N_MAX with a = q^{-m}, else None."""
    a, q = lift(a), lift(q)
    if a == 0 or q == 0:
        return None
    if is_exact(a) and is_exact(q):
        if q in (1, -1):
            return 0 if a == 1 else None
        x = Fraction(1)
        for m in range(N_MAX + 1):
            if a * x == 1:
                return m
            x *= q
        return None
    a, q = complex(a), complex(q)
    if abs(q) == 1:
        return 0 if abs(a - 1) <= TERMINATION_TOL else None
    est = -math.log(abs(a)) / math.log(abs(q))
    for m in sorted({max(0, math.floor(est)), max(0, math.ceil(est))}):
        for cand in (m - 1, m, m + 1):
            if 0 <= cand <= N_MAX and abs(a * q ** cand - 1) <= TERMINATION_TOL:
                return cand
    return None


def first_termination(params: Iterable, q) -> int | None:
    found = [m for m in (termination_index(a, q) for a in params) if m is not None]
    return min(found) if found else None


def _match_pairs(nums: list, dens: list, target) -> bool:
    """Greedy order-insensitive match: every numerator pairs with a denominator
    so that the product equals ``target``."""
    free = list(dens)
    for a in nums:
        for i, b in enumerate(free):
            if _close(a * b, target):
                del free[i]
                break
        else:
            return False
    return not free


def _vwp_pair(a1, q, nums: list, dens: list):
    """Indices of (q a1^{1/2}, -q a1^{1/2}) among ``nums`` and of
    (a1^{1/2}, -a1^{1/2}) among ``dens``, or None."""
    target = q * q * a1
    for i, u in enumerate(nums):
        if not _close(u * u, target):
            continue
        for j, v in enumerate(nums):
            if j != i and _close(v, -u):
                lo = [k for k, b in enumerate(dens) if _close(b, u / q)]
                hi = [k for k, b in enumerate(dens) if _close(b, -u / q)]
                for x in lo:
                    for y in hi:
                        if x != y:
                            return (i, j), (x, y)
    return None


def _well_poised(spec: SeriesSpec) -> tuple[bool, bool]:
    if spec.r != spec.s + 1 or spec.r == 0:
        return False, False
    a1, q = spec.numerators[0], spec.base
    nums = list(spec.numerators[1:])
    dens = list(spec.denominators)
    if not _match_pairs(nums, dens, q * a1):
        return False, False
    pair = _vwp_pair(a1, q, nums, dens)
    return True, pair is not None


def _balanced_k(spec: SeriesSpec) -> int | None:
    if spec.bilateral or spec.r != spec.s + 1 or not _close(spec.argument, spec.base):
        return None
    q = spec.base
    top = math.prod(spec.numerators, start=lift(1))
    bottom = math.prod(spec.denominators, start=lift(1))
    if top == 0 or q == 0 or bottom == 0:
        return None
    ratio = bottom / top
    if is_exact(ratio) and is_exact(q):
        if abs(q) in (0, 1):
            return None
        for k in range(-N_MAX, N_MAX + 1):
            if q ** k == ratio:
                return k
        return None
    if abs(abs(complex(q)) - 1) < 1e-15:
        return None
    est = math.log(abs(ratio)) / math.log(abs(q))
    k = round(est)
    if abs(k) <= N_MAX and _close(q ** k, ratio):
        return k
    return None


def _split_poised(spec: SeriesSpec, well: bool) -> bool:
    # Pairs of (numerator, denominator) whose products take exactly two
    # values, one of them q a1: a pairing that is poised only in part.
    if well or spec.r != spec.s + 1 or spec.r < 3:
        return False
    a1, q = spec.numerators[0], spec.base
    nums, dens = list(spec.numerators[1:]), list(spec.denominators)
    values = []
    free = list(dens)
    for a in nums:
        for i, b in enumerate(free):
            p = a * b
            if any(_close(p, v) for v in values) or len(values) < 2:
                if not any(_close(p, v) for v in values):
                    values.append(p)
                del free[i]
                break
        else:
            return False
    return len(values) == 2 and any(_close(v, q * a1) for v in values)


def classify(spec: SeriesSpec) -> SeriesClass:
    """Structural flags: termination, k-balance and poisedness."""
    term = first_termination(spec.numerators, spec.base) if spec.base != 0 else None
    well, very = (False, False) if spec.bilateral else _well_poised(spec)
    return SeriesClass(
        terminating=term,
        balanced_k=_balanced_k(spec),
        well_poised=well,
        very_well_poised=very,
        split_poised=False if spec.bilateral else _split_poised(spec, well),
    )


# -- convergence -------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRegion:
    """Set of |z| for which the series converges absolutely.

    kinds: ``all-z``; ``disk`` (|z| < outer); ``annulus`` (inner < |z| < outer);
    ``exterior`` (|z| > inner); ``punctured-disk`` (0 < |z| < outer);
    ``empty-unless-terminating``.  Boundaries count as outside.
    """

    kind: str
    inner: float = 0.0
    outer: float = math.inf
    note: str = ""

    @property
    def R(self) -> float:
        return self.inner if self.kind in ("annulus", "exterior") else self.outer

    def contains(self, z) -> bool:
        r = abs(complex(z))
        if self.kind == "all-z":
            return True
        if self.kind == "empty-unless-terminating":
            return False
        if self.kind == "disk":
            return r < self.outer
        if self.kind == "punctured-disk":
            return 0 < r < self.outer
        if self.kind == "exterior":
            return r > self.inner
        if self.kind == "annulus":
            return self.inner < r < self.outer
        raise ValueError(self.kind)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "inner": self.inner, "outer": self.outer, "note": self.note}


def _abs_prod(xs) -> float:
    result = 1.0
    for x in xs:
        result *= abs(complex(x))
    return result


def _phi_region(spec: SeriesSpec) -> ConvergenceRegion:
    r, s, q = spec.r, spec.s, abs(complex(spec.base))
    if q < 1:
        if r <= s:
            return ConvergenceRegion("all-z")
        if r == s + 1:
            return ConvergenceRegion("disk", outer=1.0)
        return ConvergenceRegion("empty-unless-terminating")
    if q == 1:
        return ConvergenceRegion("empty-unless-terminating", note="|q| = 1 is not supported")
    # |q| > 1: the ratio tends to prod(a) z / (prod(b) q) once zero
    # parameters, which change the growth rate, are accounted for.
    za = sum(1 for a in spec.numerators if a == 0)
    zb = sum(1 for b in spec.denominators if b == 0)
    if za > zb:
        return ConvergenceRegion("all-z")
    if zb > za:
        return ConvergenceRegion("empty-unless-terminating")
    nonzero_a = [a for a in spec.numerators if a != 0]
    nonzero_b = [b for b in spec.denominators if b != 0]
    radius = q * _abs_prod(nonzero_b) / _abs_prod(nonzero_a)
    return ConvergenceRegion("disk", outer=radius)


def _psi_region(spec: SeriesSpec) -> ConvergenceRegion:
    r, s, q = spec.r, spec.s, abs(complex(spec.base))
    pa, pb = _abs_prod(spec.numerators), _abs_prod(spec.denominators)
    R = math.inf if pa == 0 else pb / pa
    upper_done = first_termination(spec.numerators, spec.base) is not None
    lower_done = first_termination([spec.base / b for b in spec.denominators if b != 0],
                                   spec.base) is not None
    if q == 1:
        return ConvergenceRegion("empty-unless-terminating", note="|q| = 1 is not supported")
    if q < 1:
        upper = (ConvergenceRegion("all-z") if r < s else
                 ConvergenceRegion("disk", outer=1.0) if r == s else None)
        lower = ConvergenceRegion("exterior", inner=R)
    else:
        upper = ConvergenceRegion("disk", outer=R)
        lower = (ConvergenceRegion("all-z") if r > s else
                 ConvergenceRegion("exterior", inner=1.0) if r == s else None)
    if upper_done:
        upper = ConvergenceRegion("all-z")
    if lower_done:
        lower = ConvergenceRegion("all-z")
    if upper is None or lower is None:
        return ConvergenceRegion("empty-unless-terminating")
    return _intersect(upper, lower)


def _intersect(u: ConvergenceRegion, v: ConvergenceRegion) -> ConvergenceRegion:
    def bounds(reg):
        if reg.kind == "all-z":
            return 0.0, math.inf
        if reg.kind in ("disk", "punctured-disk"):
            return 0.0, reg.outer
        if reg.kind == "exterior":
            return reg.inner, math.inf
        return reg.inner, reg.outer

    lo = max(bounds(u)[0], bounds(v)[0])
    hi = min(bounds(u)[1], bounds(v)[1])
    if lo == 0 and hi == math.inf:
        return ConvergenceRegion("punctured-disk", outer=math.inf)
    if lo >= hi:
        return ConvergenceRegion("empty-unless-terminating", inner=lo, outer=hi)
    if lo == 0:
        return ConvergenceRegion("punctured-disk", outer=hi)
    if hi == math.inf:
        return ConvergenceRegion("exterior", inner=lo)
    return ConvergenceRegion("annulus", inner=lo, outer=hi)


def convergence_region(spec: SeriesSpec) -> ConvergenceRegion:
    """Region of absolute convergence in |z|; terminating series converge for all z."""
    if not spec.bilateral:
        if spec.base != 0 and first_termination(spec.numerators, spec.base) is not None:
            return ConvergenceRegion("all-z", note="terminating")
        return _phi_region(spec)
    return _psi_region(spec)


# -- summation kernel --------------------------------------------------------

def _product_ratio(nums, dens, x):
    """prod(1 - a x) / prod(1 - b x), raising PoleError on a vanishing denominator."""
    top = 1
    for a in nums:
        top *= 1 - a * x
    bottom = 1
    for b in dens:
        factor = 1 - b * x
        if is_zero(factor):
            raise PoleError("a denominator q-shifted factorial vanishes")
        bottom *= factor
    return top / bottom


def _ratio_sum(nums, dens, q, z, e: int, tol: float, stop: int | None):
    """Sum of t_n with t_0 = 1 and t_{n+1}/t_n = ratio(q^n) (-q^n)^e z.

    Returns (sum, number of terms).  ``stop`` is the last index to include
    for a terminating series.
    """
    exact = all_exact(*nums, *dens, q, z)
    if not exact:
        nums = [complex(a) for a in nums]
        dens = [complex(b) for b in dens]
        q, z = complex(q), complex(z)
    if stop is None and exact:
        raise DomainError("exact mode requires a terminating series")
    term = Fraction(1) if exact else complex(1.0)
    total = term
    qn = term
    small = 0
    n = 0
    while True:
        if stop is not None and n >= stop:
            break
        if n >= MAX_TERMS:
            raise TruncationError(f"series not converged after {MAX_TERMS} terms")
        scale = (-qn) ** e if e >= 0 else 1 / (-qn) ** (-e)
        term = term * _product_ratio(nums, dens, qn) * scale * z
        total += term
        n += 1
        qn = qn * q
        if stop is None:
            if abs(term) <= tol * abs(total):
                small += 1
                if small >= SMALL_RUN:
                    break
            else:
                small = 0
            if not exact and not cmath.isfinite(total):
                raise ConvergenceError("partial sums overflowed")
    tally = current_tally()
    if tally is not None:
        tally.series_terms += n + 1
    return total, n + 1


def _check_denominator_poles(dens, q, upto: int):
    """A denominator b = q^{-k} with k < upto makes a term infinite."""
    for b in dens:
        k = termination_index(b, q)
        if k is not None and k < upto:
            raise PoleError(f"denominator parameter {b} equals q^-{k} before termination")


def eval_phi(spec: SeriesSpec, tol: float = SERIES_TOL):
    """Sum an r-phi-s series; Fraction in, Fraction out for terminating series."""
    if spec.bilateral:
        raise DomainError("eval_phi needs a unilateral spec; use eval_psi")
    q, z = spec.base, spec.argument
    nums, dens = list(spec.numerators), list(spec.denominators)
    e = 1 + spec.s - spec.r
    if q == 0 and e < 0:
        raise DomainError("q = 0 with r > s + 1")
    stop = first_termination(nums, q)
    if stop is not None:
        _check_denominator_poles(dens, q, stop)
        return _ratio_sum(nums, dens + [q], q, z, e, tol, stop)[0]
    region = convergence_region(spec)
    if not region.contains(z):
        raise ConvergenceError(
            f"{spec.label()} does not converge at |z| = {abs(complex(z)):g} "
            f"(region: {region.kind})")
    if abs(complex(q)) > 1 and all(a != 0 for a in nums) and all(b != 0 for b in dens):
        return _eval_inverted(spec, tol)
    _check_denominator_poles(dens, q, N_MAX)
    return _ratio_sum(nums, dens + [q], q, z, e, tol, None)[0]


def _eval_inverted(spec: SeriesSpec, tol: float):
    """|q| > 1: rewrite in base 1/q, where the terms carry no q^{n choose 2}."""
    q = complex(spec.base)
    p = 1 / q
    nums = [1 / complex(a) for a in spec.numerators]
    dens = [1 / complex(b) for b in spec.denominators]
    arg = complex(spec.argument) / q
    for a in spec.numerators:
        arg *= complex(a)
    for b in spec.denominators:
        arg /= complex(b)
    return _ratio_sum(nums, dens + [p], p, arg, 0, tol, None)[0]


def phi_terms(spec: SeriesSpec, count: int) -> list:
    """The first ``count`` terms t_0..t_{count-1} of a unilateral series."""
    q, z = spec.base, spec.argument
    nums, dens = list(spec.numerators), list(spec.denominators) + [q]
    e = 1 + spec.s - spec.r
    term = lift(1)
    qn = lift(1)
    out = [term]
    for _ in range(count - 1):
        scale = (-qn) ** e if e >= 0 else 1 / (-qn) ** (-e)
        term = term * _product_ratio(nums, dens, qn) * scale * z
        out.append(term)
        qn *= q
    return out


def eval_psi(spec: SeriesSpec, tol: float = SERIES_TOL, method: str = "split"):
    """Sum an r-psi-s series as its n >= 0 half plus its n < 0 half.

    ``method="split"`` sums the negative half in the rewritten form with
    parameters q/b_j over q/a_i; ``method="direct"`` walks the original
    terms downward from n = 0.  The direct walk is also used whenever a
    parameter is zero, where the rewritten form is undefined.
    """
    if not spec.bilateral:
        raise DomainError("eval_psi needs a bilateral spec; use eval_phi")
    q, z = spec.base, spec.argument
    if q == 0:
        raise DomainError("bilateral series need q != 0")
    if z == 0:
        raise DomainError("bilateral series with negative powers need z != 0")
    region = convergence_region(spec)
    if not region.contains(z):
        raise ConvergenceError(
            f"{spec.label()} does not converge at |z| = {abs(complex(z)):g} "
            f"(region: {region.kind})")
    upper = _psi_upper(spec, tol)
    if method == "direct" or any(a == 0 for a in spec.numerators) \
            or any(b == 0 for b in spec.denominators):
        lower = _psi_lower_direct(spec, tol)
    elif method == "split":
        lower = _psi_lower_split(spec, tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    return upper + lower


def _psi_upper(spec: SeriesSpec, tol: float):
    q, z = spec.base, spec.argument
    nums, dens = list(spec.numerators), list(spec.denominators)
    stop = first_termination(nums, q)
    if stop is not None:
        _check_denominator_poles(dens, q, stop)
    return _ratio_sum(nums, dens, q, z, spec.s - spec.r, tol, stop)[0]


def _psi_lower_split(spec: SeriesSpec, tol: float):
    q, z = spec.base, spec.argument
    nums = [q / b for b in spec.denominators]
    dens = [q / a for a in spec.numerators]
    arg = 1 / z
    for b in spec.denominators:
        arg *= b
    for a in spec.numerators:
        arg /= a
    stop = first_termination(nums, q)
    if stop is not None:
        _check_denominator_poles(dens, q, stop)
    total, _ = _ratio_sum(nums, dens, q, arg, 0, tol, stop)
    return total - 1


def _psi_lower_direct(spec: SeriesSpec, tol: float):
    """sum_{n<0} v_n using v_{n-1}/v_n = prod(1-b q^{n-1})/prod(1-a q^{n-1})
    * (-1)^{s-r} q^{-(s-r)(n-1)} / z."""
    q, z = spec.base, spec.argument
    exact = spec.exact
    if not exact:
        q, z = complex(q), complex(z)
    nums, dens = list(spec.numerators), list(spec.denominators)
    e = spec.s - spec.r
    sign = -1 if e % 2 else 1
    term = lift(1) if exact else complex(1.0)
    total = 0 * term
    qm = 1 / q          # q^{n-1} at n = 0
    small = 0
    n = 0
    while True:
        if n >= MAX_TERMS:
            raise TruncationError(f"series not converged after {MAX_TERMS} terms")
        top = 1
        for b in dens:
            top *= 1 - b * qm
        bottom = 1
        for a in nums:
            factor = 1 - a * qm
            if is_zero(factor):
                raise PoleError("a bilateral term has a vanishing denominator")
            bottom *= factor
        term = term * top / bottom * sign * qm ** (-e) / z
        total += term
        n += 1
        qm = qm / q
        if term == 0:
            break
        if abs(term) <= tol * max(abs(total), 1e-300):
            small += 1
            if small >= SMALL_RUN:
                break
        else:
            small = 0
    tally = current_tally()
    if tally is not None:
        tally.series_terms += n
    return total


def evaluate(spec: SeriesSpec, tol: float = SERIES_TOL):
    return eval_psi(spec, tol) if spec.bilateral else eval_phi(spec, tol)


def term_ratio(spec: SeriesSpec, n: int):
    """v_{n+1}/v_n as computed by the summation kernel."""
    q = spec.base
    qn = q ** n
    e = (1 + spec.s - spec.r) if not spec.bilateral else (spec.s - spec.r)
    dens = list(spec.denominators) + ([] if spec.bilateral else [q])
    scale = (-qn) ** e if e >= 0 else 1 / (-qn) ** (-e)
    return _product_ratio(spec.numerators, dens, qn) * scale * spec.argument
