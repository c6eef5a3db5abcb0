"""q-orthogonal polynomial families defined by finite sums.

Every polynomial is evaluated straight from its defining sum; there are no
three-term recurrences here.  The trigonometric families (q-Hermite,
q-ultraspherical, Askey-Wilson) take x = cos(theta) with |x| <= 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .domains import ParamDomain, cbox, exact_base, exact_int, exact_rational, ibox, make_rng, rbox
from .errors import DomainError, UnknownIdentity
from .identities import IdentityEntry, verify_entry
from .qcalculus import aw_closed_form, aw_weight, theta_quadrature
from .qcore import (
    all_exact,
    binom2,
    current_tally,
    inf_quotient,
    is_exact,
    lift,
    one_like,
    qpoch,
    rqpoch,
)
from .reports import VerificationReport, compare

__all__ = [
    "FAMILIES", "ORTHOPOLY", "ORTHO_TOLS", "eval_poly", "hermite_theta",
    "ultraspherical_theta", "little_qjacobi", "askey_wilson_poly", "genfun_check",
    "little_qjacobi_weight_sum", "little_qjacobi_norm", "little_qjacobi_orthogonality",
    "gram_matrix", "connection_coeffs", "connection_matrix", "askey_wilson_orthogonality",
    "orthopoly_check", "sample_orthopoly_params",
]

FAMILIES = ("qhermite", "qultraspherical", "little_qjacobi", "askey_wilson")
REAL_TOL = 1e-12
GENFUN_TAIL = 1e-14
WEIGHT_TOL = 1e-16
SMALL_RUN = 3
MAX_WEIGHT_TERMS = 1_000_000


def _theta_of(x) -> float:
    if isinstance(x, complex):
        if x.imag != 0:
            raise DomainError("trigonometric families need real x = cos(theta)")
        x = x.real
    x = float(x)
    if abs(x) > 1:
        raise DomainError(f"x = {x:g} is outside [-1, 1]")
    return math.acos(x)


def _realify(value: complex, real_inputs: bool):
    """Return the real part when the inputs were real, checking the imaginary residue."""
    if not real_inputs:
        return value
    if abs(value.imag) > REAL_TOL * (1 + abs(value.real)):
        raise DomainError(f"imaginary residue {value.imag:.3g} for real inputs")
    return value.real


def _is_real(*xs) -> bool:
    return all(not isinstance(x, complex) or x.imag == 0 for x in xs)


# -- trigonometric sums ----------------------------------------------------------

def _exp_sum(coeffs: Sequence, theta):
    """sum_k coeffs[k] e^{i(n-2k)theta}, with n = len(coeffs) - 1; theta may be an array."""
    n = len(coeffs) - 1
    theta = np.asarray(theta, dtype=float)
    total = np.zeros(theta.shape, dtype=complex)
    for k, ck in enumerate(coeffs):
        total = total + complex(ck) * np.exp(1j * (n - 2 * k) * theta)
    return total


def _hermite_coeffs(n: int, q):
    qq = qpoch(q, q, n)
    return [qq * rqpoch(q, q, k) * rqpoch(q, q, n - k) for k in range(n + 1)]


def _ultra_coeffs(n: int, beta, q):
    return [qpoch(beta, q, k) * qpoch(beta, q, n - k) * rqpoch(q, q, k) * rqpoch(q, q, n - k)
            for k in range(n + 1)]


def hermite_theta(n: int, theta, q):
    """H_n(cos theta | q) = sum_k (q;q)_n / ((q;q)_k (q;q)_{n-k}) e^{i(n-2k)theta}."""
    return _exp_sum(_hermite_coeffs(n, lift(q)), theta)


def ultraspherical_theta(n: int, theta, beta, q):
    """C_n(cos theta; beta | q) = sum_k (beta;q)_k (beta;q)_{n-k} / ((q;q)_k (q;q)_{n-k}) e^{i(n-2k)theta}."""
    return _exp_sum(_ultra_coeffs(n, lift(beta), lift(q)), theta)


# -- little q-Jacobi -------------------------------------------------------------

def little_qjacobi(n: int, x, a, b, q):
    """p_n(x; a, b; q) = 2phi1(q^-n, abq^{n+1}; aq; q, qx) as a finite sum."""
    x, a, b, q = lift(x), lift(a), lift(b), lift(q)
    total = 0 * one_like(x, a, b, q)
    top = a * b * q ** (n + 1)
    for k in range(n + 1):
        total += (qpoch(q ** (-n), q, k) * qpoch(top, q, k)
                  * rqpoch(q, q, k) * rqpoch(a * q, q, k) * (q * x) ** k)
    return total


def little_qjacobi_norm(n: int, a, b, q):
    """sum_j (bq;q)_j/(q;q)_j (aq)^j p_n(q^j)^2 in closed form."""
    a, b, q = complex(a), complex(b), complex(q)
    finite = (qpoch(q, q, n) * qpoch(b * q, q, n) * (1 - a * b * q) * (a * q) ** n
              / (qpoch(a * q, q, n) * qpoch(a * b * q, q, n) * (1 - a * b * q ** (2 * n + 1))))
    return finite * inf_quotient([a * b * q * q], [a * q], q)


def little_qjacobi_weight_sum(n: int, m: int, a, b, q, tol: float = WEIGHT_TOL):
    """sum_j (bq;q)_j/(q;q)_j (aq)^j p_n(q^j) p_m(q^j), truncated once terms stay small."""
    a, b, q = complex(a), complex(b), complex(q)
    if not abs(a * q) < 1 or not abs(b * q) < 1:
        raise DomainError("the weight sum needs |aq| < 1 and |bq| < 1")
    total = 0j
    weight = 1 + 0j
    small = 0
    j = 0
    while True:
        x = q ** j
        term = weight * little_qjacobi(n, x, a, b, q) * little_qjacobi(m, x, a, b, q)
        total += term
        j += 1
        if abs(term) <= tol * (1 + abs(total)) and j > n + m:
            small += 1
            if small >= SMALL_RUN:
                break
        else:
            small = 0
        if j >= MAX_WEIGHT_TERMS:
            raise DomainError("weight sum did not converge")
        weight *= (1 - b * q ** j) / (1 - q ** j) * a * q
    tally = current_tally()
    if tally is not None:
        tally.series_terms += j
    return total


def little_qjacobi_orthogonality(n: int, m: int, a, b, q) -> VerificationReport:
    """Weighted sum against 0 (m != n, tol 1e-10) or the closed-form norm (tol 1e-9)."""
    params = {"n": n, "m": m, "a": a, "b": b, "q": q}
    if n != m:
        return compare("little_qjacobi_orthogonality", params,
                       lambda: little_qjacobi_weight_sum(n, m, a, b, q), lambda: 0j, tol=1e-10)
    return compare("little_qjacobi_orthogonality", params,
                   lambda: little_qjacobi_weight_sum(n, n, a, b, q),
                   lambda: little_qjacobi_norm(n, a, b, q), tol=1e-9)


def gram_matrix(size: int, a, b, q) -> np.ndarray:
    """G[n, m] = weighted sum of p_n p_m for n, m < size."""
    G = np.zeros((size, size), dtype=complex)
    for n in range(size):
        for m in range(n, size):
            G[n, m] = G[m, n] = little_qjacobi_weight_sum(n, m, a, b, q)
    return G


def _phi32_terminating(nums: Sequence, dens: Sequence, q, z, upto: int):
    total = 0 * one_like(q, z, *nums, *dens)
    for j in range(upto + 1):
        term = rqpoch(q, q, j) * z ** j
        for x in nums:
            term *= qpoch(x, q, j)
        for y in dens:
            term *= rqpoch(y, q, j)
        total += term
    return total


def connection_coeffs(n: int, a, b, c, d, q) -> list:
    """a_{k,n}, k = 0..n, with p_n(x; c, d; q) = sum_k a_{k,n} p_k(x; a, b; q)."""
    a, b, c, d, q = (lift(v) for v in (a, b, c, d, q))
    out = []
    for k in range(n + 1):
        lead = (qpoch(q ** (-n), q, k) * qpoch(a * q, q, k) * qpoch(c * d * q ** (n + 1), q, k)
                * rqpoch(q, q, k) * rqpoch(c * q, q, k) * rqpoch(a * b * q ** (k + 1), q, k))
        inner = _phi32_terminating(
            [q ** (k - n), c * d * q ** (n + k + 1), a * q ** (k + 1)],
            [c * q ** (k + 1), a * b * q ** (2 * k + 2)], q, q, n - k)
        # (-1)^k q^{C(k+1,2)} matches the normalisation of p_k; checked by reconstruction
        out.append((-1) ** k * q ** binom2(k + 1) * lead * inner)
    return out


def connection_matrix(size: int, a, b, c, d, q) -> np.ndarray:
    """Upper-triangular C with C[k, n] = a_{k,n} for n < size."""
    exact = all_exact(a, b, c, d, q)
    C = np.full((size, size), Fraction(0) if exact else 0j, dtype=object if exact else complex)
    for n in range(size):
        for k, v in enumerate(connection_coeffs(n, a, b, c, d, q)):
            C[k, n] = v
    return C


# -- Askey-Wilson ----------------------------------------------------------------

def _aw_pair(a, x, q, k):
    """(a e^{i theta}, a e^{-i theta}; q)_k = prod_{j<k} (1 - 2 a x q^j + a^2 q^{2j})."""
    prod = 1
    for j in range(k):
        prod = prod * (1 - 2 * a * x * q ** j + a * a * q ** (2 * j))
    return prod


def askey_wilson_poly(n: int, x, a, b, c, d, q):
    """p_n(x; a, b, c, d | q) from its terminating 4phi3; x may be a numpy array."""
    a, b, c, d, q = (lift(v) for v in (a, b, c, d, q))
    if not all_exact(a, b, c, d):
        # p_n is symmetric in a, b, c, d; dividing by the largest a^n limits cancellation
        a, b, c, d = sorted((a, b, c, d), key=lambda v: -abs(complex(v)))
    if isinstance(x, np.ndarray):
        a, b, c, d, q = (complex(v) for v in (a, b, c, d, q))
        x = x.astype(complex)
        total = np.zeros(x.shape, dtype=complex)
    else:
        x = lift(x)
        total = 0 * one_like(x, a, b, c, d, q)
    top = a * b * c * d * q ** (n - 1)
    for k in range(n + 1):
        coeff = (qpoch(q ** (-n), q, k) * qpoch(top, q, k) * rqpoch(q, q, k)
                 * rqpoch(a * b, q, k) * rqpoch(a * c, q, k) * rqpoch(a * d, q, k) * q ** k)
        total = total + coeff * _aw_pair(a, x, q, k)
    return qpoch(a * b, q, n) * qpoch(a * c, q, n) * qpoch(a * d, q, n) * a ** (-n) * total


def _aw_inner(n, m, a, b, c, d, q, N):
    def integrand(theta):
        x = np.cos(theta)
        return (askey_wilson_poly(n, x, a, b, c, d, q) * askey_wilson_poly(m, x, a, b, c, d, q)
                * aw_weight(theta, a, b, c, d, q))
    return theta_quadrature(integrand, N)


def askey_wilson_orthogonality(n: int, m: int, a, b, c, d, q, N: int = 128,
                               tol: float = 1e-6) -> VerificationReport:
    """Quadrature of p_n p_m against the Askey-Wilson weight.

    m != n: the integral divided by sqrt(|h_n h_m|) must vanish to ``tol``.
    n = m = 0: the integral must equal the closed-form total mass.
    n = m > 0: no closed form is checked; the report records the value.
    """
    if max(n, m) > 4 or min(n, m) < 0:
        raise DomainError("orthogonality checks support 0 <= n, m <= 4")
    params = {"n": n, "m": m, "a": a, "b": b, "c": c, "d": d, "q": q}
    ident = "askey_wilson_orthogonality"
    if n == m == 0:
        return compare(ident, params, lambda: _aw_inner(0, 0, a, b, c, d, q, N),
                       lambda: aw_closed_form(a, b, c, d, q), tol=tol)
    if n == m:
        report = compare(ident, params, lambda: _aw_inner(n, n, a, b, c, d, q, N),
                         lambda: _aw_inner(n, n, a, b, c, d, q, N), tol=tol)
        report.diagnostics["norm"] = "not compared with a closed form"
        return report
    scale = {}

    def lhs():
        scale["v"] = math.sqrt(abs(_aw_inner(n, n, a, b, c, d, q, N) * _aw_inner(m, m, a, b, c, d, q, N)))
        return _aw_inner(n, m, a, b, c, d, q, N) / scale["v"]

    report = compare(ident, params, lhs, lambda: 0j, tol=tol)
    if "v" in scale:
        report.diagnostics["norm_scale"] = scale["v"]
    return report


# -- generating functions --------------------------------------------------------

def _genfun_terms(t) -> int:
    at = abs(complex(t))
    if at == 0:
        return 0
    if at >= 1:
        raise DomainError("the generating functions need |t| < 1")
    return int(math.ceil(math.log(GENFUN_TAIL) / math.log(at))) + 10


def _genfun_parts(family: str, t, theta: float, q, params: Mapping, N: int):
    e = complex(math.cos(theta), math.sin(theta))
    ei = e.conjugate()
    if family == "qhermite":
        def lhs():
            total = 0j
            for n in range(N + 1):
                total += complex(hermite_theta(n, theta, q)) * rqpoch(q, q, n) * t ** n
            return total

        def rhs():
            return inf_quotient([], [t * e, t * ei], q)
    elif family == "qultraspherical":
        beta = complex(params["beta"])

        def lhs():
            total = 0j
            for n in range(N + 1):
                total += complex(ultraspherical_theta(n, theta, beta, q)) * t ** n
            return total

        def rhs():
            return inf_quotient([beta * t * e, beta * t * ei], [t * e, t * ei], q)
    else:
        raise UnknownIdentity(f"no generating function for family {family!r}")
    return lhs, rhs


def genfun_check(family: str, t, theta: float, q, params: Mapping | None = None,
                 N: int | None = None, tol: float = 1e-10) -> VerificationReport:
    """Truncated generating-function series against its infinite-product form.

    By default N is chosen so that |t|^N < 1e-14, plus a margin of 10 terms.
    """
    params = dict(params or {})
    t, q = complex(t), complex(q)
    N = _genfun_terms(t) if N is None else N
    lhs, rhs = _genfun_parts(family, t, theta, q, params, N)
    report = compare(f"genfun_{family}", {**params, "t": t, "theta": theta, "q": q},
                     lhs, rhs, tol=tol)
    report.diagnostics["terms"] = N + 1
    return report


def _genfun_side(family: str, side: int):
    def fn(p, tol=None):
        t, q = complex(p["t"]), complex(p["q"])
        return _genfun_parts(family, t, p["theta"], q, p, _genfun_terms(t))[side]()
    return fn


# -- dispatch --------------------------------------------------------------------

def eval_poly(family: str, n: int, x, params: Mapping | None = None):
    """Evaluate one family member; trigonometric families take x = cos(theta)."""
    params = dict(params or {})
    if int(n) != n or n < 0:
        raise DomainError("degree must be a nonnegative integer")
    n = int(n)
    q = params.get("q")
    if q is None:
        raise DomainError("missing parameter q")
    if family == "little_qjacobi":
        return little_qjacobi(n, x, params["a"], params["b"], q)
    if family not in FAMILIES:
        raise UnknownIdentity(f"unknown polynomial family {family!r}")
    theta = _theta_of(x)
    if family == "qhermite":
        return _realify(complex(hermite_theta(n, theta, q)), _is_real(q))
    if family == "qultraspherical":
        beta = params["beta"]
        return _realify(complex(ultraspherical_theta(n, theta, beta, q)), _is_real(q, beta))
    abcd = [params[k] for k in "abcd"]
    value = askey_wilson_poly(n, x, *abcd, q)
    if is_exact(value):
        return value
    return _realify(complex(value), _is_real(q, *abcd))


# -- catalog ---------------------------------------------------------------------

def _connection_lhs(p, tol):
    return little_qjacobi(p["n"], p["x"], p["c"], p["d"], p["q"])


def _connection_rhs(p):
    coeffs = connection_coeffs(p["n"], p["a"], p["b"], p["c"], p["d"], p["q"])
    return sum((ak * little_qjacobi(k, p["x"], p["a"], p["b"], p["q"]) for k, ak in enumerate(coeffs)),
               0 * one_like(p["x"], p["q"]))


def _aw_off_lhs(p, tol):
    args = [p[k] for k in ("a", "b", "c", "d", "q")]
    n, m = p["n"], p["m"]
    scale = math.sqrt(abs(_aw_inner(n, n, *args, 128) * _aw_inner(m, m, *args, 128)))
    return _aw_inner(n, m, *args, 128) / scale


_RQ = rbox(0.2, 0.8)
_SMALL = rbox(0.05, 0.9, signed=True)


def _distinct(p):
    return p["n"] != p["m"]


ORTHOPOLY: dict[str, IdentityEntry] = {e.id: e for e in (
    IdentityEntry(
        "genfun_qhermite", "q-Hermite generating function",
        _genfun_side("qhermite", 0), _genfun_side("qhermite", 1),
        ParamDomain({"t": cbox(0, 0.8), "theta": rbox(0, math.pi), "q": cbox(0.1, 0.85)}),
        lhs_text="sum_n H_n(cos theta|q) t^n / (q;q)_n",
        rhs_text="1 / (t e^{i theta}, t e^{-i theta};q)_inf"),
    IdentityEntry(
        "genfun_qultraspherical", "q-ultraspherical generating function",
        _genfun_side("qultraspherical", 0), _genfun_side("qultraspherical", 1),
        ParamDomain({"beta": cbox(0, 0.9), "t": cbox(0, 0.8), "theta": rbox(0, math.pi),
                     "q": cbox(0.1, 0.85)}),
        lhs_text="sum_n C_n(cos theta; beta|q) t^n",
        rhs_text="(beta t e^{i theta}, beta t e^{-i theta};q)_inf / (t e^{i theta}, t e^{-i theta};q)_inf"),
    IdentityEntry(
        "little_qjacobi_orthogonality", "little q-Jacobi orthogonality",
        lambda p, tol: little_qjacobi_weight_sum(p["n"], p["m"], p["a"], p["b"], p["q"]),
        lambda p: little_qjacobi_norm(p["n"], p["a"], p["b"], p["q"]) if p["n"] == p["m"] else 0j,
        ParamDomain({"n": ibox(0, 4), "m": ibox(0, 4), "a": rbox(0.05, 0.9),
                     "b": rbox(0.05, 0.9, signed=True), "q": _RQ},
                    constraints=(("0 < aq < 1 and bq < 1 (b-range assumed)",
                                  lambda p: 0 < p["a"] * p["q"] < 1 and p["b"] * p["q"] < 1),)),
        lhs_text="sum_j (bq;q)_j/(q;q)_j (aq)^j p_n(q^j) p_m(q^j)",
        rhs_text="delta_{m,n} (q,bq;q)_n (1-abq)(aq)^n (abq^2;q)_inf"
                 " / ((aq,abq;q)_n (1-abq^{2n+1}) (aq;q)_inf)"),
    IdentityEntry(
        "little_qjacobi_connection", "little q-Jacobi connection coefficients",
        _connection_lhs, _connection_rhs,
        ParamDomain({"n": ibox(0, 3), "x": rbox(0, 1), "a": _SMALL, "b": _SMALL,
                     "c": _SMALL, "d": _SMALL, "q": _RQ},
                    exact={"n": exact_int(0, 3), "x": exact_rational(1, 9),
                           "a": exact_rational(1, 9), "b": exact_rational(1, 9),
                           "c": exact_rational(1, 9), "d": exact_rational(1, 9), "q": exact_base},
                    constraints=(("denominators nonzero", lambda p: all(
                        abs(complex(1 - v * p["q"] ** j)) > 0.05
                        for v in (p["a"], p["c"], p["a"] * p["b"], p["c"] * p["d"])
                        for j in range(1, 10))),)),
        exactable=True,
        lhs_text="p_n(x; c, d; q)", rhs_text="sum_k a_{k,n} p_k(x; a, b; q)"),
    IdentityEntry(
        "askey_wilson_orthogonality", "Askey-Wilson polynomial orthogonality (off-diagonal)",
        _aw_off_lhs, lambda p: 0j,
        ParamDomain({"n": ibox(0, 4), "m": ibox(0, 4), "a": cbox(0, 0.6), "b": cbox(0, 0.6),
                     "c": cbox(0, 0.6), "d": cbox(0, 0.6), "q": cbox(0.3, 0.6)},
                    constraints=(("n != m", _distinct),)),
        lhs_text="int p_n p_m w dtheta / sqrt(h_n h_m)", rhs_text="0"),
)}

ORTHO_TOLS = {
    "genfun_qhermite": 1e-10,
    "genfun_qultraspherical": 1e-10,
    "little_qjacobi_orthogonality": 1e-9,
    "little_qjacobi_connection": 1e-10,
    "askey_wilson_orthogonality": 1e-6,
}


def orthopoly_check(ident: str, params: Mapping, tol: float | None = None) -> VerificationReport:
    try:
        entry = ORTHOPOLY[ident]
    except KeyError:
        raise UnknownIdentity(f"unknown orthogonal-polynomial check {ident!r}") from None
    return verify_entry(entry, params, ORTHO_TOLS[ident] if tol is None else tol, series_tol=0.0)


def sample_orthopoly_params(ident: str, seed: int, count: int, exact: bool = False) -> list:
    entry = ORTHOPOLY[ident]
    rng = make_rng(seed, ident + (":exact" if exact else ""))
    return [entry.domain.sample(rng, exact=exact) for _ in range(count)]
