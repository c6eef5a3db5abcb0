"""q-gamma and q-beta functions, q-integrals and integral evaluations.

q-integrals are the weighted node sums over geometric grids {a q^n}.  The
Askey-Wilson integral is the one continuous integral here; with x = cos(theta)
its weight 1/sqrt(1 - x^2) is absorbed and the integrand is smooth, even and
2 pi-periodic in theta, so the trapezoid rule converges geometrically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .domains import ParamDomain, cbox, clear_of_poles, make_rng, rbox
from .errors import DomainError, PoleError, QuadratureError, TruncationError, UnknownIdentity
from .identities import IdentityEntry, verify_entry
from .qcore import (
    PASS_TOL,
    PRODUCT_TOL,
    current_tally,
    inf_quotient,
    inf_ratio,
    is_exact,
    lift,
    power,
    principal_sqrt,
    qpoch,
)
from .reports import VerificationReport, compare
from .series import eval_phi, make_vwp, phi

__all__ = [
    "q_gamma", "q_beta", "q_beta_series", "QIntegralSpec", "Monomial", "PochQuotient",
    "q_integral", "integrate", "q_beta_integral_check", "thomae_integral_check",
    "QuadratureGrid", "theta_quadrature", "KINDS", "askey_wilson_integral", "aw_weight", "aw_closed_form", "aw_check",
    "QINTEGRALS", "qintegral_identity_check", "sample_qintegral_params",
]

INTEGRAL_TOL = 1e-16
SMALL_RUN = 5
MAX_NODES = 1_000_000
GATE_TOL = 1e-10


# -- q-gamma and q-beta ------------------------------------------------------

def _nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and z.real == int(z.real)


def _check_gamma_base(q):
    if is_exact(q):
        if not 0 < q < 1:
            raise DomainError("q-gamma needs 0 < q < 1 for rational q")
        return
    if not 0 < abs(complex(q)) < 1:
        raise DomainError("q-gamma needs 0 < |q| < 1")


def q_gamma(z, q):
    """Gamma_q(z) = (q;q)_inf (1-q)^{1-z} / (q^z;q)_inf with principal powers.

    For a positive integer z and rational q the value (q;q)_{z-1}/(1-q)^{z-1}
    is returned exactly.
    """
    _check_gamma_base(q)
    if _nonpositive_integer(z):
        raise PoleError(f"Gamma_q has a pole at z = {z}")
    if is_exact(q) and isinstance(z, int) and z >= 1:
        q = Fraction(q)
        return qpoch(q, q, z - 1) / (1 - q) ** (z - 1)
    q, z = complex(q), complex(z)
    return power(1 - q, 1 - z) * inf_ratio([q], [power(q, z)], q)


def q_beta(x, y, q):
    """B_q(x, y) = Gamma_q(x) Gamma_q(y) / Gamma_q(x + y)."""
    return q_gamma(x, q) * q_gamma(y, q) / q_gamma(x + y, q)


def q_beta_series(x, y, q, tol: float = INTEGRAL_TOL):
    """(1-q) sum_n (q^{n+1};q)_inf / (q^{n+y};q)_inf q^{nx}, for Re x, Re y > 0."""
    x, y, q = complex(x), complex(y), complex(q)
    if x.real <= 0 or y.real <= 0:
        raise DomainError("the q-beta series needs Re x > 0 and Re y > 0")
    qx, qy = power(q, x), power(q, y)
    term = inf_ratio([q], [qy], q)
    total = complex(0.0)
    qn = complex(1.0)
    small = 0
    n = 0
    while True:
        total += term
        n += 1
        if abs(term) <= tol * abs(total):
            small += 1
            if small >= SMALL_RUN:
                break
        else:
            small = 0
        if n >= MAX_NODES:
            raise TruncationError("q-beta series not converged")
        term = term * (1 - qn * qy) / (1 - qn * q) * qx
        qn *= q
    _count_terms(n)
    return (1 - q) * total


def _count_terms(n: int) -> None:
    tally = current_tally()
    if tally is not None:
        tally.integral_nodes += n


# -- q-integrals -------------------------------------------------------------

@dataclass(frozen=True)
class Monomial:
    """t -> coeff * t^c (principal power)."""

    c: object = 0
    coeff: object = 1

    def __call__(self, t):
        return self.coeff * power(t, self.c)


@dataclass(frozen=True)
class PochQuotient:
    """t -> t^c prod (u_i t;q)_inf / prod (v_j t;q)_inf."""

    nums: tuple
    dens: tuple
    base: object
    c: object = 0

    def __call__(self, t):
        t = complex(t)
        value = inf_ratio([u * t for u in self.nums], [v * t for v in self.dens], self.base)
        if self.c != 0:
            value *= power(t, self.c)
        return value


KINDS = ("zero-to-one", "zero-to-a", "a-to-b", "zero-to-infinity", "bilateral")


@dataclass(frozen=True)
class QIntegralSpec:
    kind: str
    integrand: Callable
    base: object
    lower: object = 0
    upper: object = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown q-integral kind {self.kind!r}")
        q = self.base
        if not 0 < abs(complex(q)) < 1:
            raise DomainError("q-integrals need 0 < |q| < 1")


def _node_sum(f: Callable, a, q, tol: float, direction: int = 1):
    """sum_{n} f(a q^n) q^n over n = 0, 1, ... (direction 1) or n = -1, -2, ... (-1)."""
    q = complex(q)
    step = q if direction > 0 else 1 / q
    qn = complex(1.0) if direction > 0 else step
    total = complex(0.0)
    small = 0
    n = 0
    while True:
        term = f(a * qn) * qn
        total += term
        n += 1
        if abs(term) <= tol * abs(total) or term == 0:
            small += 1
            if small >= SMALL_RUN:
                break
        else:
            small = 0
        if n >= MAX_NODES:
            raise TruncationError(f"q-integral not converged after {MAX_NODES} nodes")
        qn *= step
    _count_terms(n)
    return total


def _exact_monomial(f: Monomial, a, q):
    """a(1-q) sum_n (a q^n)^c q^n = a^{c+1} (1-q) / (1 - q^{c+1}), summed in closed form."""
    return f.coeff * a ** (f.c + 1) * (1 - q) / (1 - q ** (f.c + 1))


def _zero_to(f: Callable, a, q, tol: float):
    if a == 0:
        return 0 * lift(q)
    if (isinstance(f, Monomial) and isinstance(f.c, int) and f.c >= 0
            and is_exact(a) and is_exact(q) and is_exact(f.coeff)):
        return _exact_monomial(f, Fraction(a), Fraction(q))
    return a * (1 - q) * _node_sum(f, a, q, tol)


def q_integral(spec: QIntegralSpec, tol: float = INTEGRAL_TOL):
    """Evaluate the defining weighted node sum of a q-integral."""
    f, q = spec.integrand, spec.base
    if spec.kind == "zero-to-one":
        return _zero_to(f, lift(1), q, tol)
    if spec.kind == "zero-to-a":
        return _zero_to(f, spec.upper, q, tol)
    if spec.kind == "a-to-b":
        return _zero_to(f, spec.upper, q, tol) - _zero_to(f, spec.lower, q, tol)
    q = complex(q)
    if spec.kind == "zero-to-infinity":
        return (1 - q) * (_node_sum(f, 1, q, tol) + _node_sum(f, 1, q, tol, -1))
    both = lambda t: f(t) + f(-t)
    return (1 - q) * (_node_sum(both, 1, q, tol) + _node_sum(both, 1, q, tol, -1))


def integrate(f: Callable, a, b, q, tol: float = INTEGRAL_TOL):
    """int_a^b f d_q t as the difference of the two integrals from 0."""
    return q_integral(QIntegralSpec("a-to-b", f, q, a, b), tol)


def q_beta_integral_check(x, y, q, tol: float = 1e-10,
                          reference: str = "gamma") -> VerificationReport:
    """int_0^1 t^{x-1} (tq;q)_inf / (tq^y;q)_inf d_q t against B_q(x, y).

    ``reference="gamma"`` uses the Gamma_q quotient, ``"series"`` the series form.
    """
    params = {"x": x, "y": y, "q": q}
    if complex(x).real <= 0:
        return _failed("q_beta_integral", params, tol, "DomainError: needs Re x > 0")
    if _nonpositive_integer(y):
        return _failed("q_beta_integral", params, tol, "DomainError: y is a nonpositive integer")
    f = PochQuotient((complex(q),), (power(q, y),), q, complex(x) - 1)
    lhs = lambda: q_integral(QIntegralSpec("zero-to-one", f, q))
    rhs = (lambda: q_beta(x, y, q)) if reference == "gamma" else (lambda: q_beta_series(x, y, q))
    return compare("q_beta_integral", params, lhs, rhs, tol=tol)


def _failed(ident, params, tol, message) -> VerificationReport:
    report = VerificationReport(ident, dict(params), tol=tol)
    report.error = message
    return report


def thomae_integral_check(a, b, c, z, q, tol: float = PASS_TOL) -> VerificationReport:
    """2phi1(q^a, q^b; q^c; q, z) against its q-integral representation."""
    params = {"a": a, "b": b, "c": c, "z": z, "q": q}
    if complex(b).real <= 0:
        raise DomainError("the q-integral representation needs Re b > 0")
    if abs(complex(z)) >= 1:
        raise DomainError("the q-integral representation needs |z| < 1")
    if _nonpositive_integer(complex(c) - complex(b)):
        raise DomainError("c - b must not be a nonpositive integer")
    qa, qb, qc = power(q, a), power(q, b), power(q, c)
    lhs = lambda: eval_phi(phi([qa, qb], [qc], q, z))

    def rhs():
        f = PochQuotient((complex(z) * qa, complex(q)), (complex(z), power(q, c - b)), q,
                         complex(b) - 1)
        scale = q_gamma(c, q) / (q_gamma(b, q) * q_gamma(complex(c) - complex(b), q))
        return scale * q_integral(QIntegralSpec("zero-to-one", f, q))

    return compare("thomae_integral", params, lhs, rhs, tol=tol)


# -- Askey-Wilson integral ---------------------------------------------------

@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights of an N-point rule, in theta for the trapezoid kind."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    @property
    def order(self) -> int:
        return len(self.nodes)

    @staticmethod
    def gauss_legendre(n: int) -> "QuadratureGrid":
        """Gauss-Legendre on [-1, 1]; the weights sum to 2."""
        x, w = np.polynomial.legendre.leggauss(n)
        return QuadratureGrid(x, w, "gauss-legendre")

    @staticmethod
    def trapezoid_theta(n: int) -> "QuadratureGrid":
        """Trapezoid rule on [0, pi] with n panels, exact for cos(k theta), k < 2n."""
        theta = np.linspace(0.0, math.pi, n + 1)
        w = np.full(n + 1, math.pi / n)
        w[0] = w[-1] = math.pi / (2 * n)
        return QuadratureGrid(theta, w, "trapezoid")


def _h(theta: np.ndarray, params: Sequence, q: complex) -> np.ndarray:
    """h(cos theta; a_1, ..., a_m) = prod_i prod_n (1 - 2 a_i x q^n + a_i^2 q^{2n})."""
    x = np.cos(theta)
    out = np.ones(theta.shape, dtype=complex)
    aq = abs(q)
    factors = 0
    for a in params:
        a = complex(a)
        if a == 0:
            continue
        aqn = a
        while True:
            out *= 1 - 2 * aqn * x + aqn * aqn
            factors += 1
            if 3 * abs(aqn) * aq / (1 - aq) < PRODUCT_TOL:
                break
            aqn *= q
    tally = current_tally()
    if tally is not None:
        tally.product_factors += factors
    return out


def aw_weight(theta: np.ndarray, a, b, c, d, q) -> np.ndarray:
    """h(x; 1, -1, q^{1/2}, -q^{1/2}) / h(x; a, b, c, d) at x = cos(theta)."""
    q = complex(q)
    r = principal_sqrt(q)
    return _h(theta, [1, -1, r, -r], q) / _h(theta, [a, b, c, d], q)


def _check_aw(a, b, c, d, q) -> None:
    if max(abs(complex(v)) for v in (a, b, c, d, q)) >= 1:
        raise DomainError("the Askey-Wilson integral needs max(|a|,|b|,|c|,|d|,|q|) < 1")
    if complex(q) == 0:
        raise DomainError("the Askey-Wilson integral needs q != 0")


def theta_quadrature(fn: Callable[[np.ndarray], np.ndarray], n: int,
                     gate: float = GATE_TOL, method: str = "trapezoid"):
    """int_0^pi fn(theta) d theta at orders n and 2n; QuadratureError if they disagree."""

    def rule(m):
        if method == "trapezoid":
            grid = QuadratureGrid.trapezoid_theta(m)
            theta, w = grid.nodes, grid.weights
        elif method == "gauss":
            grid = QuadratureGrid.gauss_legendre(m)
            theta, w = (grid.nodes + 1) * (math.pi / 2), grid.weights * (math.pi / 2)
        else:
            raise ValueError(f"unknown quadrature method {method!r}")
        values = w * fn(theta)
        return complex(np.sum(values)), float(np.sum(np.abs(values)))

    (coarse, _), (fine, mass) = rule(n), rule(2 * n)
    # relative to the integral of |fn|, so cancelling integrands are gated fairly
    if abs(coarse - fine) > gate * (1 + mass):
        raise QuadratureError(
            f"quadrature at N={n} and N={2 * n} differ by {abs(coarse - fine):.3g}")
    tally = current_tally()
    if tally is not None:
        tally.quadrature_order = max(tally.quadrature_order, 2 * n)
    return fine


def askey_wilson_integral(a, b, c, d, q, n: int = 128, gate: float = GATE_TOL,
                          method: str = "trapezoid"):
    """int_{-1}^{1} h(x;1,-1,q^{1/2},-q^{1/2}) / h(x;a,b,c,d) dx / sqrt(1-x^2)."""
    _check_aw(a, b, c, d, q)
    return theta_quadrature(lambda t: aw_weight(t, a, b, c, d, q), n, gate, method)


def aw_closed_form(a, b, c, d, q):
    """2 pi (abcd;q)_inf / (q, ab, ac, ad, bc, bd, cd;q)_inf."""
    _check_aw(a, b, c, d, q)
    return 2 * math.pi * inf_quotient(
        [a * b * c * d], [q, a * b, a * c, a * d, b * c, b * d, c * d], q)


def aw_check(a, b, c, d, q, n: int = 128, tol: float = 1e-6) -> VerificationReport:
    params = {"a": a, "b": b, "c": c, "d": d, "q": q}
    return compare("askey_wilson_integral", params,
                   lambda: askey_wilson_integral(a, b, c, d, q, n),
                   lambda: aw_closed_form(a, b, c, d, q), tol=tol)


# -- q-integral identities ---------------------------------------------------

def _pq(nums, dens, q) -> PochQuotient:
    return PochQuotient(tuple(complex(u) for u in nums), tuple(complex(v) for v in dens), q)


def _w(a, rest, q, z):
    return eval_phi(make_vwp(a, rest, q, z))


def _av_d(p):
    return p["a"] * p["b"] * p["e"] * p["f"] * p["g"] * p["h"] / p["c"]


def _av_lhs(p, tol):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    return integrate(_pq([q / a, q / b, c, d], [e, f, g, h], q), a, b, q)


def _av_rhs(p):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    pre = b * (1 - q) * inf_quotient(
        [q, b * q / a, a / b, c * d / (e * h), c * d / (f * h), c * d / (g * h), b * c, b * d],
        [a * e, a * f, a * g, b * e, b * f, b * g, b * h, b * c * d / h], q)
    return pre * _w(b * c * d / (h * q), [b * e, b * f, b * g, c / h, d / h], q, a * h)


def _av_clear(p):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    big = b * c * d / (h * q)
    rest = [b * e, b * f, b * g, c / h, d / h]
    vals = [a * x for x in (e, f, g, h)] + [b * x for x in (e, f, g, h)]
    vals += [b * c * d / h, principal_sqrt(big)] + [q * big / x for x in rest]
    vals += [a / b, b * q / a]
    return clear_of_poles(vals, q, 0.1)


def _sq_c(p):
    return p["a"] * p["b"] * p["d"] * p["e"] * p["f"]


def _sq_lhs(p, tol):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return integrate(_pq([q / a, q / b, c], [d, e, f], q), a, b, q)


def _sq_rhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return b * (1 - q) * inf_quotient(
        [q, b * q / a, a / b, c / d, c / e, c / f],
        [a * d, a * e, a * f, b * d, b * e, b * f], q)


def _sq_clear(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return clear_of_poles([a * d, a * e, a * f, b * d, b * e, b * f, a / b, b * q / a], q, 0.1)


def _b8_f(p):
    return p["q"] * p["a"] ** 2 / (p["b"] * p["c"] * p["d"] * p["e"])


def _b8_lhs(p, tol):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    r = principal_sqrt(a)
    fn = _pq([q / a, q / b, 1 / r, -1 / r, q / c, q / d, q / e, q / f],
             [1, b / a, q / r, -q / r, c / a, d / a, e / a, f / a], q)
    return integrate(fn, a, b, q)


def _b8_rhs(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    return b * (1 - q) * inf_quotient(
        [q, a / b, b * q / a, a * q / (c * d), a * q / (c * e), a * q / (c * f),
         a * q / (d * e), a * q / (d * f), a * q / (e * f)],
        [b, c, d, e, f, b * c / a, b * d / a, b * e / a, b * f / a], q)


def _b8_clear(p):
    a, b, c, d, e, f, q = (p[k] for k in "abcdefq")
    r = principal_sqrt(a)
    nodes = [a, b]
    vals = [t * x for t in nodes for x in (1, b / a, q / r, -q / r, c / a, d / a, e / a, f / a)]
    vals += [b, c, d, e, f, b * c / a, b * d / a, b * e / a, b * f / a]
    return clear_of_poles(vals, q, 0.1)


def _b4_h(p):
    a, b, c, d, e, f, g, q = (p[k] for k in "abcdefgq")
    return a ** 3 * q * q / (b * c * d * e * f * g)


def _b4_lam(p):
    return p["q"] * p["a"] ** 2 / (p["c"] * p["d"] * p["e"])


def _b4_integrand(a, b, q, cs, ds):
    r = principal_sqrt(a)
    return _pq([q / a, q / b, 1 / r, -1 / r, *cs], [1, b / a, q / r, -q / r, *ds], q)


def _b4_lhs(p, tol):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    fn = _b4_integrand(a, b, q, [q / x for x in (c, d, e, f, g, h)],
                       [x / a for x in (c, d, e, f, g, h)])
    return integrate(fn, a, b, q)


def _b4_rhs(p):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    lam = _b4_lam(p)
    pre = a / lam * inf_quotient(
        [b / a, a * q / b, lam * c / a, lam * d / a, lam * e / a, b * f / lam, b * g / lam,
         b * h / lam],
        [b / lam, lam * q / b, c, d, e, b * f / a, b * g / a, b * h / a], q)
    fn = _b4_integrand(lam, b, q,
                       [a * q / (c * lam), a * q / (d * lam), a * q / (e * lam),
                        q / f, q / g, q / h],
                       [c / a, d / a, e / a, f / lam, g / lam, h / lam])
    return pre * integrate(fn, lam, b, q)


def _b4_clear(p):
    a, b, c, d, e, f, g, h, q = (p[k] for k in "abcdefghq")
    lam = _b4_lam(p)
    ra, rl = principal_sqrt(a), principal_sqrt(lam)
    vals = [t * x for t in (a, b) for x in
            (1, b / a, q / ra, -q / ra, c / a, d / a, e / a, f / a, g / a, h / a)]
    vals += [t * x for t in (lam, b) for x in
             (1, b / lam, q / rl, -q / rl, c / a, d / a, e / a, f / lam, g / lam, h / lam)]
    vals += [b / lam, lam * q / b, c, d, e, b * f / a, b * g / a, b * h / a]
    return clear_of_poles(vals, q, 0.1)


def _entry(ident, title, lhs, rhs, boxes, derived, constraints, lhs_text, rhs_text):
    return IdentityEntry(ident, title, lhs=lhs, rhs=rhs,
                         domain=ParamDomain(boxes=boxes, derived=tuple(derived),
                                            constraints=tuple(constraints)),
                         lhs_text=lhs_text, rhs_text=rhs_text)


_QR = rbox(0.2, 0.7)

QINTEGRALS: dict[str, IdentityEntry] = {e.id: e for e in (
    _entry("alsalam_verma", "q-integral form of the 8W7 to two 4phi3 transformation",
           _av_lhs, _av_rhs,
           {"a": cbox(0.3, 0.8), "b": cbox(0.3, 0.8), "c": cbox(0.3, 0.9),
            "e": cbox(0.3, 0.9), "f": cbox(0.3, 0.9), "g": cbox(0.3, 0.9),
            "h": cbox(0.3, 0.9), "q": _QR},
           [("d", _av_d)],
           [("|ah| < 0.5", lambda p: abs(complex(p["a"] * p["h"])) < 0.5),
            ("denominators away from zero", _av_clear)],
           "int_a^b (qt/a, qt/b, ct, dt;q)_inf / (et, ft, gt, ht;q)_inf d_q t, cd = abefgh",
           "b(1-q) C 8W7(bcd/hq; be, bf, bg, c/h, d/h; q, ah)"),
    _entry("sears_qint", "q-integral form of the nonterminating q-Saalschutz sum",
           _sq_lhs, _sq_rhs,
           {"a": cbox(0.2, 0.9), "b": cbox(0.2, 0.9), "d": cbox(0.2, 1.0),
            "e": cbox(0.2, 1.0), "f": cbox(0.2, 1.0), "q": _QR},
           [("c", _sq_c)],
           [("denominators away from zero", _sq_clear)],
           "int_a^b (qt/a, qt/b, ct;q)_inf / (dt, et, ft;q)_inf d_q t, c = abdef",
           "b(1-q) (q, bq/a, a/b, c/d, c/e, c/f;q)_inf / (ad, ae, af, bd, be, bf;q)_inf"),
    _entry("bailey_qint_8phi7", "q-integral form of Bailey's 8phi7 sum",
           _b8_lhs, _b8_rhs,
           {"a": cbox(0.3, 0.9), "b": cbox(0.3, 0.9), "c": cbox(0.4, 1.2),
            "d": cbox(0.4, 1.2), "e": cbox(0.4, 1.2), "q": _QR},
           [("f", _b8_f)],
           [("0.4 <= |f| <= 1.2", lambda p: 0.4 <= abs(complex(p["f"])) <= 1.2),
            ("denominators away from zero", _b8_clear)],
           "int_a^b (qt/a, qt/b, t/a^{1/2}, -t/a^{1/2}, qt/c, qt/d, qt/e, qt/f;q)_inf / "
           "(t, bt/a, qt/a^{1/2}, -qt/a^{1/2}, ct/a, dt/a, et/a, ft/a;q)_inf d_q t",
           "b(1-q) (q, a/b, bq/a, aq/cd, aq/ce, aq/cf, aq/de, aq/df, aq/ef;q)_inf / "
           "(b, c, d, e, f, bc/a, bd/a, be/a, bf/a;q)_inf, qa^2 = bcdef"),
    _entry("bailey_qint_4term", "q-integral form of Bailey's four-term transformation",
           _b4_lhs, _b4_rhs,
           {"a": cbox(0.3, 0.8), "b": cbox(0.3, 0.8), "c": cbox(0.5, 1.0),
            "d": cbox(0.5, 1.0), "e": cbox(0.5, 1.0), "f": cbox(0.5, 1.0),
            "g": cbox(0.5, 1.0), "q": rbox(0.2, 0.5)},
           [("h", _b4_h)],
           [("0.3 <= |h| <= 1.2", lambda p: 0.3 <= abs(complex(p["h"])) <= 1.2),
            ("0.3 <= |lambda| <= 1.2", lambda p: 0.3 <= abs(complex(_b4_lam(p))) <= 1.2),
            ("denominators away from zero", _b4_clear)],
           "int_a^b F_a(t) d_q t, a^3 q^2 = bcdefgh",
           "(a/lambda) C int_lambda^b F_lambda(t) d_q t, lambda = qa^2/cde"),
)}


def qintegral_identity_check(ident: str, params: Mapping, tol: float = 1e-8
                             ) -> VerificationReport:
    try:
        entry = QINTEGRALS[ident]
    except KeyError:
        raise UnknownIdentity(f"unknown q-integral identity {ident!r}") from None
    return verify_entry(entry, params, tol)


def sample_qintegral_params(ident: str, seed: int, count: int) -> list:
    entry = QINTEGRALS[ident]
    rng = make_rng(seed, ident)
    return [entry.domain.sample(rng) for _ in range(count)]
