"""Registry of closed-form summation and product identities.

Each entry pairs a left side, evaluated by summing a series, with a right
side built only from q-shifted factorials and infinite products.  The two
sides share nothing beyond the primitives in :mod:`qseries.qcore`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .domains import (
    ParamDomain,
    cbox,
    clear_of_poles,
    exact_base,
    exact_int,
    exact_rational,
    exact_square,
    finite_clear,
    ibox,
    make_rng,
    rbox,
)
from .errors import DomainError, UnknownIdentity
from .qcore import (
    PASS_TOL,
    inf_quotient,
    is_exact,
    lift,
    principal_sqrt,
    qbinom,
    qpoch,
    qpoch_inf,
    qpoch_inf_multi,
    rqpoch,
)
from .reports import VerificationReport, compare
from .series import eval_phi, eval_psi, make_vwp, phi, psi
from .theta import (
    jacobi_triple_product,
    jacobi_triple_sum,
    quintuple_product,
    quintuple_sum,
    theta,
    theta_product,
)

__all__ = [
    "IdentityEntry", "REGISTRY", "lookup", "catalog", "evaluate_both", "verify",
    "sample_params", "sears_expansion_check", "verify_entry", "theta", "theta_product",
]


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    title: str
    lhs: Callable
    rhs: Callable
    domain: ParamDomain
    exactable: bool = False
    lhs_text: str = ""
    rhs_text: str = ""

    @property
    def params(self) -> list:
        return self.domain.free_names

    def describe(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "parameters": self.domain.free_names,
            "derived": [name for name, _ in self.domain.derived],
            "constraints": [text for text, _ in self.domain.constraints],
            "exactable": self.exactable,
            "lhs": self.lhs_text,
            "rhs": self.rhs_text,
        }


# -- helpers -----------------------------------------------------------------

def _fin(nums: Sequence, dens: Sequence, q, n: int):
    """prod (x;q)_n / prod (y;q)_n."""
    value = lift(1) if all(is_exact(v) for v in (*nums, *dens, q)) else complex(1.0)
    for x in nums:
        value *= qpoch(x, q, n)
    for y in dens:
        value *= rqpoch(y, q, n)
    return value


def _qm(q, n: int):
    """q^{-n}."""
    return lift(q) ** (-n)


def _delta(n: int, exact: bool):
    one = Fraction(1) if exact else complex(1.0)
    return one if n == 0 else 0 * one


def _exactness(p: Mapping) -> bool:
    return all(is_exact(v) for v in p.values())


_Q = ("q", cbox(0.1, 0.85))
_Q_EXACT = {"q": exact_base}


def _domain(boxes: dict, derived=(), constraints=(), exact=None) -> ParamDomain:
    return ParamDomain(boxes=boxes, derived=tuple(derived),
                       constraints=tuple(constraints), exact=exact)


REGISTRY: dict[str, IdentityEntry] = {}


def _register(entry: IdentityEntry) -> None:
    if entry.id in REGISTRY:
        raise ValueError(f"duplicate identity id {entry.id}")
    REGISTRY[entry.id] = entry


# -- q-binomial family -------------------------------------------------------

_register(IdentityEntry(
    "q_binomial", "q-binomial theorem",
    lhs=lambda p, tol: eval_phi(phi([p["a"]], [], p["q"], p["z"]), tol),
    rhs=lambda p: inf_quotient([p["a"] * p["z"]], [p["z"]], p["q"]),
    domain=_domain(
        {"a": cbox(0.0, 1.5), "z": cbox(0.0, 0.9), "q": cbox(0.05, 0.9)},
        constraints=[("(z;q)_inf away from zero",
                      lambda p: clear_of_poles([p["z"]], p["q"]))]),
    lhs_text="1phi0(a; -; q, z)", rhs_text="(az;q)_inf / (z;q)_inf",
))

_register(IdentityEntry(
    "q_binomial_terminating", "terminating q-binomial theorem",
    lhs=lambda p, tol: eval_phi(phi([_qm(p["q"], p["m"])], [], p["q"], p["z"]), tol),
    rhs=lambda p: qpoch(p["z"] * _qm(p["q"], p["m"]), p["q"], p["m"]),
    domain=_domain(
        {"m": ibox(0, 8), "z": cbox(0.0, 3.0), "q": cbox(0.2, 0.9)},
        exact={"m": exact_int(0, 5), "z": exact_rational(), **_Q_EXACT}),
    exactable=True,
    lhs_text="1phi0(q^-m; -; q, z)", rhs_text="(z q^-m; q)_m",
))

_register(IdentityEntry(
    "q_binomial_qgt1", "q-binomial theorem for |q| > 1",
    lhs=lambda p, tol: eval_phi(phi([p["a"]], [], p["q"], p["z"]), tol),
    rhs=lambda p: inf_quotient([p["z"] / p["q"]], [p["a"] * p["z"] / p["q"]], 1 / p["q"]),
    domain=_domain(
        {"a": cbox(0.1, 2.0), "z": cbox(0.1, 3.0), "q": cbox(1.2, 3.0)},
        constraints=[
            ("|a z / q| < 0.9", lambda p: abs(p["a"] * p["z"] / p["q"]) < 0.9),
            ("(az/q;1/q)_inf away from zero",
             lambda p: clear_of_poles([p["a"] * p["z"] / p["q"]], 1 / p["q"])),
        ]),
    lhs_text="1phi0(a; -; q, z), |q| > 1",
    rhs_text="(z/q;1/q)_inf / (az/q;1/q)_inf",
))


def _product_addition_sum(p):
    a, b, q, n = p["a"], p["b"], p["q"], p["n"]
    total = 0
    for k in range(n + 1):
        total += qbinom(n, k, q) * qpoch(a, q, n - k) * qpoch(b, q, k) * lift(a) ** k
    return total


_register(IdentityEntry(
    "product_addition", "q-analogue of the binomial addition formula",
    lhs=lambda p, tol: _product_addition_sum(p),
    rhs=lambda p: qpoch(p["a"] * p["b"], p["q"], p["n"]),
    domain=_domain(
        {"a": cbox(0.0, 1.5), "b": cbox(0.0, 1.5), "q": cbox(0.1, 0.95), "n": ibox(0, 10)},
        exact={"a": exact_rational(), "b": exact_rational(), **_Q_EXACT,
               "n": exact_int(0, 5)}),
    exactable=True,
    lhs_text="sum_k [n k]_q (a;q)_{n-k} (b;q)_k a^k", rhs_text="(ab;q)_n",
))

# -- q-exponentials ----------------------------------------------------------

_register(IdentityEntry(
    "e_q", "small q-exponential as a product",
    lhs=lambda p, tol: eval_phi(phi([0], [], p["q"], p["z"]), tol),
    rhs=lambda p: 1 / qpoch_inf(p["z"], p["q"]),
    domain=_domain(
        {"z": cbox(0.0, 0.9), "q": cbox(0.05, 0.9)},
        constraints=[("(z;q)_inf away from zero",
                      lambda p: clear_of_poles([p["z"]], p["q"]))]),
    lhs_text="sum z^n / (q;q)_n", rhs_text="1 / (z;q)_inf",
))

_register(IdentityEntry(
    "E_q", "big q-exponential as a product",
    lhs=lambda p, tol: eval_phi(phi([], [], p["q"], -p["z"]), tol),
    rhs=lambda p: qpoch_inf(-p["z"], p["q"]),
    domain=_domain({"z": cbox(0.0, 3.0), "q": cbox(0.05, 0.85)}),
    lhs_text="sum q^{n(n-1)/2} z^n / (q;q)_n", rhs_text="(-z;q)_inf",
))

_register(IdentityEntry(
    "e_E_reciprocal", "the two q-exponentials are reciprocal",
    lhs=lambda p, tol: (eval_phi(phi([0], [], p["q"], p["z"]), tol)
                        * eval_phi(phi([], [], p["q"], p["z"]), tol)),
    rhs=lambda p: lift(1.0),
    domain=_domain(
        {"z": cbox(0.0, 0.9), "q": cbox(0.05, 0.9)},
        constraints=[("(z;q)_inf away from zero",
                      lambda p: clear_of_poles([p["z"]], p["q"]))]),
    lhs_text="e_q(z) E_q(-z)", rhs_text="1",
))

# -- bilateral series and products ---------------------------------------------

def _ramanujan_rhs(p):
    a, b, q, z = p["a"], p["b"], p["q"], p["z"]
    return inf_quotient([q, b / a, a * z, q / (a * z)], [b, q / a, z, b / (a * z)], q)


_register(IdentityEntry(
    "ramanujan_1psi1", "Ramanujan's bilateral 1psi1 sum",
    lhs=lambda p, tol: eval_psi(psi([p["a"]], [p["b"]], p["q"], p["z"]), tol),
    rhs=_ramanujan_rhs,
    domain=_domain(
        {"a": cbox(0.5, 2.0), "b": cbox(0.0, 1.2), "z": cbox(0.2, 0.9), "q": cbox(0.05, 0.85)},
        constraints=[
            ("|b/a| < 0.9 |z|", lambda p: abs(p["b"] / p["a"]) < 0.9 * abs(p["z"])),
            ("denominators away from zero", lambda p: clear_of_poles(
                [p["b"], p["q"] / p["a"], p["z"], p["b"] / (p["a"] * p["z"])], p["q"])),
        ]),
    lhs_text="1psi1(a; b; q, z)",
    rhs_text="(q, b/a, az, q/az;q)_inf / (b, q/a, z, b/az;q)_inf",
))

_register(IdentityEntry(
    "jacobi_triple", "Jacobi triple product",
    lhs=lambda p, tol: jacobi_triple_sum(p["z"], p["q"]),
    rhs=lambda p: jacobi_triple_product(p["z"], p["q"]),
    domain=_domain({"z": cbox(0.2, 5.0), "q": cbox(0.05, 0.9)}),
    lhs_text="sum_k q^{k^2} z^k", rhs_text="(q^2, -qz, -q/z; q^2)_inf",
))

_register(IdentityEntry(
    "quintuple", "quintuple product",
    lhs=lambda p, tol: quintuple_sum(p["z"], p["q"]),
    rhs=lambda p: quintuple_product(p["z"], p["q"]),
    domain=_domain({"z": cbox(0.3, 3.0), "q": cbox(0.05, 0.85)}),
    lhs_text="sum_n (-1)^n q^{n(3n-1)/2} z^{3n} (1 + z q^n)",
    rhs_text="(q, -z, -q/z;q)_inf (qz^2, q/z^2;q^2)_inf",
))

for _j in (1, 2, 3, 4):
    _register(IdentityEntry(
        f"theta{_j}", f"theta_{_j} series equals its product",
        lhs=(lambda j: lambda p, tol: theta(j, p["x"], p["q"]))(_j),
        rhs=(lambda j: lambda p: theta_product(j, p["x"], p["q"]))(_j),
        domain=_domain({"x": rbox(0.0, 3.141592653589793), "q": rbox(0.01, 0.9)}),
        lhs_text=f"theta_{_j}(x) Fourier series", rhs_text=f"theta_{_j}(x) product",
    ))

# -- 2phi1 and 3phi2 sums ------------------------------------------------------

_register(IdentityEntry(
    "heine_gauss_sum", "q-Gauss sum",
    lhs=lambda p, tol: eval_phi(
        phi([p["a"], p["b"]], [p["c"]], p["q"], p["c"] / (p["a"] * p["b"])), tol),
    rhs=lambda p: inf_quotient([p["c"] / p["a"], p["c"] / p["b"]],
                               [p["c"], p["c"] / (p["a"] * p["b"])], p["q"]),
    domain=_domain(
        {"a": cbox(0.3, 2.0), "b": cbox(0.3, 2.0), "c": cbox(0.0, 1.5), "q": cbox(0.05, 0.85)},
        constraints=[
            ("|c/ab| < 0.9", lambda p: abs(p["c"] / (p["a"] * p["b"])) < 0.9),
            ("denominators away from zero", lambda p: clear_of_poles(
                [p["c"], p["c"] / (p["a"] * p["b"])], p["q"])),
        ]),
    lhs_text="2phi1(a, b; c; q, c/ab)",
    rhs_text="(c/a, c/b;q)_inf / (c, c/ab;q)_inf",
))


def _vandermonde_domain(q_min: float = 0.2, n_max: int = 8):
    return _domain(
        {"a": cbox(0.2, 2.0), "c": cbox(0.0, 1.5), "n": ibox(0, n_max), "q": cbox(q_min, 0.9)},
        constraints=[("(c;q)_n away from zero",
                      lambda p: finite_clear([p["c"]], p["q"], p["n"]))],
        exact={"a": exact_rational(), "c": exact_rational(), "n": exact_int(0, 5),
               **_Q_EXACT})


_register(IdentityEntry(
    "q_vandermonde_a", "q-Chu-Vandermonde sum, first form",
    lhs=lambda p, tol: eval_phi(phi(
        [p["a"], _qm(p["q"], p["n"])], [p["c"]], p["q"],
        p["c"] * lift(p["q"]) ** p["n"] / p["a"]), tol),
    rhs=lambda p: _fin([p["c"] / p["a"]], [p["c"]], p["q"], p["n"]),
    domain=_vandermonde_domain(), exactable=True,
    lhs_text="2phi1(a, q^-n; c; q, c q^n / a)", rhs_text="(c/a;q)_n / (c;q)_n",
))

_register(IdentityEntry(
    "q_vandermonde_b", "q-Chu-Vandermonde sum, second form",
    lhs=lambda p, tol: eval_phi(phi(
        [p["a"], _qm(p["q"], p["n"])], [p["c"]], p["q"], p["q"]), tol),
    rhs=lambda p: _fin([p["c"] / p["a"]], [p["c"]], p["q"], p["n"]) * lift(p["a"]) ** p["n"],
    # Terms grow like |q|^{-n^2/2} and cancel down to an O(1) sum, so the
    # float domain keeps that growth below about 1e4.
    domain=_vandermonde_domain(q_min=0.5, n_max=5), exactable=True,
    lhs_text="2phi1(a, q^-n; c; q, q)", rhs_text="(c/a;q)_n a^n / (c;q)_n",
))


def _saalschutz_lhs(p, tol):
    a, b, c, q, n = p["a"], p["b"], p["c"], p["q"], p["n"]
    return eval_phi(phi([a, b, _qm(q, n)], [c, a * b * lift(q) ** (1 - n) / c], q, q), tol)


_register(IdentityEntry(
    "q_saalschutz", "q-Pfaff-Saalschutz sum",
    lhs=_saalschutz_lhs,
    rhs=lambda p: _fin([p["c"] / p["a"], p["c"] / p["b"]],
                       [p["c"], p["c"] / (p["a"] * p["b"])], p["q"], p["n"]),
    domain=_domain(
        {"a": cbox(0.2, 2.0), "b": cbox(0.2, 2.0), "c": cbox(0.0, 1.5),
         "n": ibox(0, 8), "q": cbox(0.2, 0.9)},
        constraints=[("denominators away from zero", lambda p: finite_clear(
            [p["c"], p["a"] * p["b"] * lift(p["q"]) ** (1 - p["n"]) / p["c"],
             p["c"] / (p["a"] * p["b"])], p["q"], p["n"]))],
        exact={"a": exact_rational(), "b": exact_rational(), "c": exact_rational(),
               "n": exact_int(0, 5), **_Q_EXACT}),
    exactable=True,
    lhs_text="3phi2(a, b, q^-n; c, ab q^{1-n}/c; q, q)",
    rhs_text="(c/a, c/b;q)_n / (c, c/ab;q)_n",
))


def _bailey_daum_rhs(p):
    a, b, q = p["a"], p["b"], p["q"]
    q2 = q * q
    return (qpoch_inf(-q, q) * qpoch_inf(a * q, q2) * qpoch_inf(a * q2 / (b * b), q2)
            / (qpoch_inf(a * q / b, q) * qpoch_inf(-q / b, q)))


_register(IdentityEntry(
    "bailey_daum", "q-Kummer (Bailey-Daum) sum",
    lhs=lambda p, tol: eval_phi(phi([p["a"], p["b"]], [p["a"] * p["q"] / p["b"]],
                                    p["q"], -p["q"] / p["b"]), tol),
    rhs=_bailey_daum_rhs,
    domain=_domain(
        {"a": cbox(0.0, 1.5), "b": cbox(0.2, 2.0), "q": cbox(0.05, 0.85)},
        constraints=[
            ("|q/b| < 0.9", lambda p: abs(p["q"] / p["b"]) < 0.9),
            ("denominators away from zero", lambda p: clear_of_poles(
                [p["a"] * p["q"] / p["b"], -p["q"] / p["b"]], p["q"])),
        ]),
    lhs_text="2phi1(a, b; aq/b; q, -q/b)",
    rhs_text="(-q;q)_inf (aq, aq^2/b^2;q^2)_inf / (aq/b, -q/b;q)_inf",
))

# -- very-well-poised sums -----------------------------------------------------

def _root(a):
    return principal_sqrt(a)


def _delta6_lhs(p, tol):
    a, b, q, n = p["a"], p["b"], p["q"], p["n"]
    qn = lift(q) ** n
    return eval_phi(make_vwp(a, [b, a * qn / b, _qm(q, n)], q, q), tol)


def _vwp_finite_clear(a, others, q, n):
    r = _root(a)
    return finite_clear([r, -r, *others], q, n)


_register(IdentityEntry(
    "delta_6phi5", "terminating well-poised 6phi5 equal to a Kronecker delta",
    lhs=_delta6_lhs,
    rhs=lambda p: _delta(p["n"], _exactness(p)),
    domain=_domain(
        {"a": cbox(0.2, 1.5), "b": cbox(0.3, 1.5), "n": ibox(0, 8), "q": cbox(0.2, 0.8)},
        constraints=[("denominators away from zero", lambda p: _vwp_finite_clear(
            p["a"], [p["a"] * p["q"] / p["b"], p["b"] * lift(p["q"]) ** (1 - p["n"]),
                     p["a"] * lift(p["q"]) ** (p["n"] + 1)], p["q"], p["n"]))],
        exact={"a": exact_square(), "b": exact_rational(), "n": exact_int(0, 5),
               **_Q_EXACT}),
    exactable=True,
    lhs_text="6W5(a; b, a q^n / b, q^-n; q, q)", rhs_text="delta_{n,0}",
))


def _delta4_lhs(p, tol):
    a, q, n = p["a"], p["q"], p["n"]
    r = _root(a)
    q = lift(q)
    return eval_phi(phi([a, q * r, -q * r, _qm(q, n)], [r, -r, a * q ** (n + 1)], q, q ** n), tol)


_register(IdentityEntry(
    "delta_4phi3", "terminating 4phi3 equal to a Kronecker delta",
    lhs=_delta4_lhs,
    rhs=lambda p: _delta(p["n"], _exactness(p)),
    domain=_domain(
        {"a": cbox(0.2, 1.5), "n": ibox(0, 8), "q": cbox(0.2, 0.8)},
        constraints=[("denominators away from zero", lambda p: _vwp_finite_clear(
            p["a"], [p["a"] * lift(p["q"]) ** (p["n"] + 1)], p["q"], p["n"]))],
        exact={"a": exact_square(), "n": exact_int(0, 5), **_Q_EXACT}),
    exactable=True,
    lhs_text="4phi3(a, q a^1/2, -q a^1/2, q^-n; a^1/2, -a^1/2, a q^{n+1}; q, q^n)",
    rhs_text="delta_{n,0}",
))


def _vwp6_term_lhs(p, tol):
    a, b, c, q, n = p["a"], p["b"], p["c"], p["q"], p["n"]
    z = a * lift(q) ** (n + 1) / (b * c)
    return eval_phi(make_vwp(a, [b, c, _qm(q, n)], q, z), tol)


_register(IdentityEntry(
    "vwp_6phi5_terminating", "terminating very-well-poised 6phi5 sum",
    lhs=_vwp6_term_lhs,
    rhs=lambda p: _fin([p["a"] * p["q"], p["a"] * p["q"] / (p["b"] * p["c"])],
                       [p["a"] * p["q"] / p["b"], p["a"] * p["q"] / p["c"]], p["q"], p["n"]),
    domain=_domain(
        {"a": cbox(0.2, 1.5), "b": cbox(0.3, 1.5), "c": cbox(0.3, 1.5),
         "n": ibox(0, 8), "q": cbox(0.2, 0.8)},
        constraints=[("denominators away from zero", lambda p: _vwp_finite_clear(
            p["a"], [p["a"] * p["q"] / p["b"], p["a"] * p["q"] / p["c"],
                     p["a"] * lift(p["q"]) ** (p["n"] + 1)], p["q"], p["n"]))],
        exact={"a": exact_square(), "b": exact_rational(), "c": exact_rational(),
               "n": exact_int(0, 5), **_Q_EXACT}),
    exactable=True,
    lhs_text="6W5(a; b, c, q^-n; q, a q^{n+1}/bc)",
    rhs_text="(aq, aq/bc;q)_n / (aq/b, aq/c;q)_n",
))


def _vwp6_nonterm_lhs(p, tol):
    a, b, c, d, q = p["a"], p["b"], p["c"], p["d"], p["q"]
    return eval_phi(make_vwp(a, [b, c, d], q, a * q / (b * c * d)), tol)


def _vwp6_nonterm_rhs(p):
    a, b, c, d, q = p["a"], p["b"], p["c"], p["d"], p["q"]
    aq = a * q
    return inf_quotient([aq, aq / (b * c), aq / (b * d), aq / (c * d)],
                        [aq / b, aq / c, aq / d, aq / (b * c * d)], q)


def _vwp6_nonterm_clear(p):
    a, b, c, d, q = p["a"], p["b"], p["c"], p["d"], p["q"]
    r = _root(a)
    return clear_of_poles([r, -r, a * q / b, a * q / c, a * q / d, a * q / (b * c * d)], q)


_register(IdentityEntry(
    "vwp_6phi5_nonterminating", "nonterminating very-well-poised 6phi5 sum",
    lhs=_vwp6_nonterm_lhs, rhs=_vwp6_nonterm_rhs,
    domain=_domain(
        {"a": cbox(0.1, 1.0), "b": cbox(0.3, 1.5), "c": cbox(0.3, 1.5),
         "d": cbox(0.3, 1.5), "q": cbox(0.1, 0.8)},
        constraints=[
            ("|aq/bcd| < 0.9", lambda p: abs(p["a"] * p["q"] / (p["b"] * p["c"] * p["d"])) < 0.9),
            ("denominators away from zero", _vwp6_nonterm_clear),
        ]),
    lhs_text="6W5(a; b, c, d; q, aq/bcd)",
    rhs_text="(aq, aq/bc, aq/bd, aq/cd;q)_inf / (aq/b, aq/c, aq/d, aq/bcd;q)_inf",
))


def _jackson_e(p):
    return p["a"] ** 2 * lift(p["q"]) ** (p["n"] + 1) / (p["b"] * p["c"] * p["d"])


def _jackson_lhs(p, tol):
    a, b, c, d, e, q, n = p["a"], p["b"], p["c"], p["d"], p["e"], p["q"], p["n"]
    return eval_phi(make_vwp(a, [b, c, d, e, _qm(q, n)], q, q), tol)


def _jackson_rhs(p):
    a, b, c, d, q, n = p["a"], p["b"], p["c"], p["d"], p["q"], p["n"]
    aq = a * q
    return _fin([aq, aq / (b * c), aq / (b * d), aq / (c * d)],
                [aq / b, aq / c, aq / d, aq / (b * c * d)], q, n)


_register(IdentityEntry(
    "jackson_8phi7", "terminating very-well-poised 8phi7 sum",
    lhs=_jackson_lhs, rhs=_jackson_rhs,
    domain=_domain(
        {"a": cbox(0.2, 1.5), "b": cbox(0.3, 1.5), "c": cbox(0.3, 1.5), "d": cbox(0.3, 1.5),
         "n": ibox(0, 8), "q": cbox(0.2, 0.8)},
        derived=[("e", _jackson_e)],
        constraints=[("denominators away from zero", lambda p: _vwp_finite_clear(
            p["a"], [p["a"] * p["q"] / x for x in (p["b"], p["c"], p["d"], p["e"])]
            + [p["a"] * lift(p["q"]) ** (p["n"] + 1),
               p["a"] * p["q"] / (p["b"] * p["c"] * p["d"])], p["q"], p["n"]))],
        exact={"a": exact_square(), "b": exact_rational(), "c": exact_rational(),
               "d": exact_rational(), "n": exact_int(0, 5), **_Q_EXACT}),
    exactable=True,
    lhs_text="8W7(a; b, c, d, e, q^-n; q, q) with a^2 q^{n+1} = bcde",
    rhs_text="(aq, aq/bc, aq/bd, aq/cd;q)_n / (aq/b, aq/c, aq/d, aq/bcd;q)_n",
))


def _dixon_lhs(p, tol):
    a, b, c, q = p["a"], p["b"], p["c"], p["q"]
    r = _root(a)
    return eval_phi(phi([a, -q * r, b, c], [-r, a * q / b, a * q / c], q, q * r / (b * c)), tol)


def _dixon_rhs(p):
    a, b, c, q = p["a"], p["b"], p["c"], p["q"]
    r = _root(a)
    return inf_quotient([a * q, a * q / (b * c), q * r / b, q * r / c],
                        [a * q / b, a * q / c, q * r, q * r / (b * c)], q)


def _dixon_clear(p):
    a, b, c, q = p["a"], p["b"], p["c"], p["q"]
    r = _root(a)
    return clear_of_poles([-r, a * q / b, a * q / c, q * r, q * r / (b * c)], q)


_register(IdentityEntry(
    "q_dixon", "q-Dixon sum",
    lhs=_dixon_lhs, rhs=_dixon_rhs,
    domain=_domain(
        {"a": cbox(0.1, 1.5), "b": cbox(0.3, 1.5), "c": cbox(0.3, 1.5), "q": cbox(0.05, 0.8)},
        constraints=[
            ("|q a^1/2 / bc| < 0.9",
             lambda p: abs(p["q"] * _root(p["a"]) / (p["b"] * p["c"])) < 0.9),
            ("denominators away from zero", _dixon_clear),
        ]),
    lhs_text="4phi3(a, -q a^1/2, b, c; -a^1/2, aq/b, aq/c; q, q a^1/2/bc)",
    rhs_text="(aq, aq/bc, q a^1/2/b, q a^1/2/c;q)_inf / (aq/b, aq/c, q a^1/2, q a^1/2/bc;q)_inf",
))


def _rr_rhs(shift: int):
    def rhs(p):
        q = p["q"]
        q5 = q ** 5
        lo = q ** (2 - shift)
        hi = q ** (3 + shift)
        return qpoch_inf_multi([lo, hi, q5], q5) / qpoch_inf(q, q)
    return rhs


_register(IdentityEntry(
    "rogers_ramanujan_1", "first Rogers-Ramanujan identity",
    lhs=lambda p, tol: eval_phi(phi([], [0], p["q"], p["q"]), tol),
    rhs=_rr_rhs(0),
    domain=_domain({"q": cbox(0.05, 0.9)}),
    lhs_text="sum q^{n^2} / (q;q)_n", rhs_text="(q^2, q^3, q^5; q^5)_inf / (q;q)_inf",
))

_register(IdentityEntry(
    "rogers_ramanujan_2", "second Rogers-Ramanujan identity",
    lhs=lambda p, tol: eval_phi(phi([], [0], p["q"], p["q"] ** 2), tol),
    rhs=_rr_rhs(1),
    domain=_domain({"q": cbox(0.05, 0.9)}),
    lhs_text="sum q^{n(n+1)} / (q;q)_n", rhs_text="(q, q^4, q^5; q^5)_inf / (q;q)_inf",
))


def _sears_f(p):
    return p["a"] * p["b"] * p["c"] * p["q"] / p["e"]


def _sears_lhs(p, tol):
    return eval_phi(phi([p["a"], p["b"], p["c"]], [p["e"], p["f"]], p["q"], p["q"]), tol)


def _sears_rhs(p):
    a, b, c, e, f, q = p["a"], p["b"], p["c"], p["e"], p["f"], p["q"]
    first = inf_quotient([q / e, f / a, f / b, f / c], [a * q / e, b * q / e, c * q / e, f], q)
    coeff = inf_quotient([q / e, a, b, c, q * f / e],
                         [e / q, a * q / e, b * q / e, c * q / e, f], q)
    tail = eval_phi(phi([a * q / e, b * q / e, c * q / e], [q * q / e, q * f / e], q, q))
    return first - coeff * tail


def _sears_clear(p):
    a, b, c, e, f, q = p["a"], p["b"], p["c"], p["e"], p["f"], p["q"]
    return clear_of_poles([e, f, a * q / e, b * q / e, c * q / e, e / q,
                           q * q / e, q * f / e], q)


_register(IdentityEntry(
    "sears_nonterminating_3phi2", "nonterminating q-Saalschutz sum",
    lhs=_sears_lhs, rhs=_sears_rhs,
    domain=_domain(
        {"a": cbox(0.1, 1.2), "b": cbox(0.1, 1.2), "c": cbox(0.1, 1.2),
         "e": cbox(0.2, 1.5), "q": cbox(0.1, 0.8)},
        derived=[("f", _sears_f)],
        constraints=[("denominators away from zero", _sears_clear)]),
    lhs_text="3phi2(a, b, c; e, f; q, q) with ef = abcq",
    rhs_text="two infinite-product terms, the second times a 3phi2",
))


def _bailey_f(p):
    return p["q"] * p["a"] ** 2 / (p["b"] * p["c"] * p["d"] * p["e"])


def _bailey_sum_lhs(p, tol):
    a, b, c, d, e, f, q = p["a"], p["b"], p["c"], p["d"], p["e"], p["f"], p["q"]
    first = eval_phi(make_vwp(a, [b, c, d, e, f], q, q), tol)
    coeff = (b / a) * inf_quotient(
        [a * q, c, d, e, f, b * q / a, b * q / c, b * q / d, b * q / e, b * q / f],
        [a * q / b, a * q / c, a * q / d, a * q / e, a * q / f,
         b * c / a, b * d / a, b * e / a, b * f / a, b * b * q / a], q)
    second = eval_phi(make_vwp(b * b / a, [b, b * c / a, b * d / a, b * e / a, b * f / a],
                               q, q), tol)
    return first - coeff * second


def _bailey_sum_rhs(p):
    a, b, c, d, e, f, q = p["a"], p["b"], p["c"], p["d"], p["e"], p["f"], p["q"]
    aq = a * q
    return inf_quotient(
        [aq, b / a, aq / (c * d), aq / (c * e), aq / (c * f),
         aq / (d * e), aq / (d * f), aq / (e * f)],
        [aq / c, aq / d, aq / e, aq / f, b * c / a, b * d / a, b * e / a, b * f / a], q)


def _bailey_sum_clear(p):
    a, b, c, d, e, f, q = p["a"], p["b"], p["c"], p["d"], p["e"], p["f"], p["q"]
    r, s = _root(a), _root(b * b / a)
    dens = [r, -r, s, -s, a * q / b, a * q / c, a * q / d, a * q / e, a * q / f,
            b * c / a, b * d / a, b * e / a, b * f / a, b * b * q / a,
            b * q / c, b * q / d, b * q / e, b * q / f]
    return clear_of_poles(dens, q, margin=0.1)


_register(IdentityEntry(
    "bailey_8phi7_sum", "nonterminating very-well-poised 8phi7 sum (Bailey)",
    lhs=_bailey_sum_lhs, rhs=_bailey_sum_rhs,
    domain=_domain(
        {"a": cbox(0.2, 0.9), "b": cbox(0.2, 0.9), "c": cbox(0.4, 1.2), "d": cbox(0.4, 1.2),
         "e": cbox(0.4, 1.2), "q": cbox(0.1, 0.7)},
        derived=[("f", _bailey_f)],
        constraints=[
            ("0.2 <= |f| <= 2", lambda p: 0.2 <= abs(p["f"]) <= 2.0),
            ("denominators away from zero", _bailey_sum_clear),
        ]),
    lhs_text="8W7(a; b, c, d, e, f; q, q) - (b/a) C 8W7(b^2/a; ...; q, q), qa^2 = bcdef",
    rhs_text="(aq, b/a, aq/cd, aq/ce, aq/cf, aq/de, aq/df, aq/ef;q)_inf / "
             "(aq/c, aq/d, aq/e, aq/f, bc/a, bd/a, be/a, bf/a;q)_inf",
))


# -- public API ----------------------------------------------------------------

def lookup(ident: str) -> IdentityEntry:
    try:
        return REGISTRY[ident]
    except KeyError:
        raise UnknownIdentity(f"unknown identity {ident!r}") from None


def catalog() -> list:
    return [entry.describe() for entry in REGISTRY.values()]


def _prepare(entry: IdentityEntry, params: Mapping) -> dict:
    full = entry.domain.complete(params)
    bad = entry.domain.violations(full)
    if bad:
        raise DomainError(f"{entry.id}: parameters violate: {'; '.join(bad)}")
    return full


def evaluate_both(ident: str, params: Mapping, tol: float = 1e-16):
    """(lhs, rhs) at ``params``; derived parameters are filled in."""
    entry = lookup(ident)
    full = _prepare(entry, params)
    return entry.lhs(full, tol), entry.rhs(full)


def verify(ident: str, params: Mapping, tol: float = PASS_TOL,
           series_tol: float = 1e-16) -> VerificationReport:
    """Compare both sides; problems are recorded in the report, never raised."""
    return verify_entry(lookup(ident), params, tol, series_tol)


def verify_entry(entry: IdentityEntry, params: Mapping, tol: float = PASS_TOL,
                 series_tol: float = 1e-16) -> VerificationReport:
    ident = entry.id
    exact = bool(params) and all(is_exact(v) for v in params.values())
    try:
        full = _prepare(entry, params)
    except DomainError as err:
        return VerificationReport(ident, dict(params), tol=tol, error=f"DomainError: {err}",
                                  mode="rational" if exact else "float")
    return compare(ident, full, lambda: entry.lhs(full, series_tol),
                   lambda: entry.rhs(full), tol=tol, exact=exact)


def sample_params(ident: str, seed: int, count: int, exact: bool = False) -> list:
    """``count`` admissible parameter points drawn from the entry's own stream."""
    entry = lookup(ident)
    rng = make_rng(seed, ident + (":exact" if exact else ""))
    return [entry.domain.sample(rng, exact=exact) for _ in range(count)]


# -- expansion check -----------------------------------------------------------

def sears_expansion_check(v: Sequence, a, b, c, q, n: int,
                          tol: float = 1e-10) -> VerificationReport:
    """Both sides of the double-sum expansion of sum_k (b,c,q^-n)_k/(q,aq/b,aq/c)_k v_k.

    The right side regroups the k-sum into a j-sum of i-sums with the
    coefficients obtained from the q-Saalschutz sum.
    """
    if n < 0 or n > 12:
        raise DomainError("expansion check is limited to 0 <= n <= 12")
    if len(v) < n + 1:
        raise DomainError(f"need at least {n + 1} sequence values")
    a, b, c, q = lift(a), lift(b), lift(c), lift(q)
    v = [lift(x) for x in v]
    qmn = q ** (-n)

    def lhs():
        total = 0
        for k in range(n + 1):
            total += (_fin([b, c, qmn], [q, a * q / b, a * q / c], q, k) * v[k])
        return total

    def rhs():
        total = 0
        w = b * c / (a * q)
        for j in range(n + 1):
            outer = (_fin([a * q / (b * c), a * q ** j, qmn], [q, a * q / b, a * q / c], q, j)
                     * (-1) ** j * q ** (-(j * (j - 1) // 2)))
            inner = 0
            for i in range(n - j + 1):
                inner += (_fin([q ** (j - n), a * q ** (2 * j)], [q, a * q ** j], q, i)
                          * q ** (-i * j) * w ** (i + j) * v[i + j])
            total += outer * inner
        return total

    exact = all(is_exact(x) for x in (a, b, c, q, *v))
    params = {"a": a, "b": b, "c": c, "q": q, "n": n}
    return compare("sears_expansion", params, lhs, rhs, tol=tol, exact=exact)
