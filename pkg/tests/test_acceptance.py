"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are printed with output capture disabled so they appear in a
plain ``pytest -v`` run.
"""

import json
import math
import time
from fractions import Fraction as F

import numpy as np

from qseries.bibasic import BIBASIC, build_inverse_pair, factorization_sides
from qseries.cli import main
from qseries.harness import CATALOGS, TIMESTAMP_KEY
from qseries.identities import verify
from qseries.orthopoly import (
    askey_wilson_orthogonality,
    connection_coeffs,
    genfun_check,
    gram_matrix,
    little_qjacobi,
    little_qjacobi_norm,
)
from qseries.qcalculus import (
    Monomial,
    QIntegralSpec,
    aw_check,
    q_beta_integral_check,
    q_gamma,
    q_integral,
    thomae_integral_check,
)
from qseries.qcore import qpoch_inf
from qseries.series import convergence_region, eval_phi, phi, psi
from qseries.theta import theta, theta_product
from qseries.transforms import RULES, heine_chain, sample_rule_params, verify_transform

BASES = (F(1, 2), F(1, 3), F(2, 3))
EXACT_IDENTITIES = ["q_binomial_terminating", "q_vandermonde_a", "q_vandermonde_b", "q_saalschutz",
                    "delta_6phi5", "delta_4phi3", "vwp_6phi5_terminating", "jackson_8phi7",
                    "product_addition"]


def rel(x, y) -> float:
    return abs(complex(x) - complex(y)) / (1 + abs(complex(y)))


def announce(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[acceptance] criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def _run_cli(capsys, *argv) -> int:
    code = main(list(argv))
    capsys.readouterr()
    return code


def _degree_key(ident: str) -> str:
    return "m" if ident == "q_binomial_terminating" else "n"


def _exact_sweep(catalog: str, ident: str, count: int = 200):
    """All exact samples must pass with zero error; returns (failures, covered (q, n) cells)."""
    cat = CATALOGS[catalog]
    failures, cells = [], set()
    for params in cat.sample(ident, 1, count, exact=True):
        rep = cat.check(ident, params, None)
        if not (rep.passed and rep.rel_err == 0):
            failures.append((ident, params, rep.rel_err, rep.error))
        cells.add((params.get("q"), params.get(_degree_key(ident))))
    return failures, cells


def test_criterion_01_identity_suite(capsys):
    start = time.perf_counter()
    code = main(["verify-all", "--samples", "200", "--tol", "1e-9", "--seed", "1", "--json"])
    report = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - start
    summ = report["summary"]
    ok = (code == 0 and summ["all_passed"] and summ["entries_skipped"] == 0
          and summ["entries"] == len(CATALOGS["identities"].ids())
          and summ["samples_passed"] == 200 * summ["entries"] and elapsed <= 300)
    announce(capsys, 1, ok, f"{summ['samples_passed']} samples passed, {summ['samples_failed']} failed"
             f" over {summ['entries']} identities in {elapsed:.1f}s")


def test_criterion_02_exact_suite(capsys):
    failures, missing = [], []
    want = {(q, n) for q in BASES for n in range(6)}
    for ident in EXACT_IDENTITIES:
        bad, cells = _exact_sweep("identities", ident)
        failures += bad
        if not want <= cells:
            missing.append(ident)
    ok = not failures and not missing
    announce(capsys, 2, ok, f"{len(EXACT_IDENTITIES)} identities exact on every n <= 5, q in {{1/2,1/3,2/3}}"
             f" cell; failures={failures[:2]} uncovered={missing}")


def test_criterion_03_transform_suite(capsys):
    bad = []
    for rule_id, rule in RULES.items():
        tol = 1e-8 if rule_id == "bailey_4term" else 1e-9
        for params in sample_rule_params(rule_id, 1, 100):
            rep = verify_transform(rule_id, params, tol)
            if not rep.passed:
                bad.append((rule_id, rep.rel_err, rep.error))
    worst = 0.0
    rng = np.random.default_rng(3)
    chains = 0
    while chains < 20:
        a, b, c = rng.uniform(0.1, 0.9, 3)
        q, z = rng.uniform(0.1, 0.8), rng.uniform(-0.8, 0.8)
        if abs(a * b * z / c) >= 0.9 or abs(c / b) >= 0.9 or abs(b) >= 0.9:
            continue
        chain = heine_chain(phi([a, b], [c], q, z), 3).evaluate()
        closed = qpoch_inf(a * b * z / c, q) / qpoch_inf(z, q) * eval_phi(phi([c / a, c / b], [c], q, a * b * z / c))
        worst = max(worst, rel(chain, closed))
        chains += 1
    ok = len(RULES) == 12 and not bad and worst <= 1e-10
    announce(capsys, 3, ok, f"12 rules x 100 samples, {len(bad)} failures; heine_chain worst {worst:.1e}")


def test_criterion_04_theta(capsys):
    worst = 0.0
    for j in range(1, 5):
        for q in (0.1, 0.5, 0.8):
            for x in np.linspace(0, math.pi, 32):
                worst = max(worst, rel(theta(j, x, q), theta_product(j, x, q)))
    announce(capsys, 4, worst <= 1e-8, f"series vs product over 384 points, worst {worst:.1e}")


def test_criterion_05_rogers_ramanujan(capsys):
    worst, ok = 0.0, True
    for ident in ("rogers_ramanujan_1", "rogers_ramanujan_2"):
        for q in (0.1, 0.3, 0.5):
            rep = verify(ident, {"q": q}, tol=1e-10)
            ok &= rep.passed
            worst = max(worst, rep.rel_err)
    announce(capsys, 5, ok, f"both identities at q in {{0.1,0.3,0.5}}, worst {worst:.1e}")


def test_criterion_06_q_gamma(capsys):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(200):
        q = rng.uniform(0.05, 0.95)
        z = complex(rng.uniform(0.01, 4.99), rng.uniform(-3, 3))
        worst = max(worst, rel(q_gamma(z + 1, q), (1 - q ** z) / (1 - q) * q_gamma(z, q)))
    gaps = [abs(q_gamma(5, q) - 24) for q in (0.9, 0.99, 0.999)]
    exact = True
    for q in BASES:
        for n in range(9):
            prod = F(1)
            for k in range(1, n + 1):
                prod *= (1 - q ** k) / (1 - q)
            exact &= q_gamma(n + 1, q) == prod
    monotone = gaps[0] > gaps[1] > gaps[2]
    ok = worst <= 1e-12 and monotone and exact
    announce(capsys, 6, ok, f"functional equation worst {worst:.1e}; |G_q(5)-24| = "
             + ", ".join(f"{g:.3g}" for g in gaps) + f"; exact factorials {exact}")


def test_criterion_07_q_integrals(capsys):
    exact = all(q_integral(QIntegralSpec("zero-to-one", Monomial(1), q)) == 1 / (1 + q) for q in BASES)
    rng = np.random.default_rng(7)
    beta_bad, thomae_bad = [], []
    for _ in range(20):
        x, y, q = rng.uniform(0.2, 4), rng.uniform(0.2, 4), rng.uniform(0.1, 0.9)
        rep = q_beta_integral_check(x, y, q, tol=1e-10, reference="series")
        if not rep.passed:
            beta_bad.append((x, y, q, rep.rel_err))
    for _ in range(20):
        a, b = rng.uniform(0.2, 2, 2)
        c = b + rng.uniform(0.3, 2)
        z = rng.uniform(0, 0.8) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        q = rng.uniform(0.2, 0.8)
        rep = thomae_integral_check(a, b, c, z, q, tol=1e-9)
        if not rep.passed:
            thomae_bad.append((a, b, c, z, q, rep.rel_err))
    ok = exact and not beta_bad and not thomae_bad
    announce(capsys, 7, ok, f"exact int t d_q t {exact}; beta failures {len(beta_bad)}/20;"
             f" Thomae failures {len(thomae_bad)}/20")


def test_criterion_08_askey_wilson(capsys):
    rng = np.random.default_rng(8)
    worst_int, bad = 0.0, 0
    for _ in range(20):
        a, b, c, d = rng.uniform(0, 0.6, 4) * np.exp(1j * rng.uniform(0, 2 * math.pi, 4))
        rep = aw_check(a, b, c, d, rng.uniform(0.1, 0.8))
        bad += not rep.passed
        worst_int = max(worst_int, rep.rel_err)
    worst_orth = 0.0
    for params in ((0.4, 0.3, 0.2, 0.1, 0.5), (0.5, -0.3, 0.2 + 0.3j, 0.2 - 0.3j, 0.4)):
        for n in range(5):
            for m in range(5):
                if n != m:
                    rep = askey_wilson_orthogonality(n, m, *params)
                    bad += not rep.passed
                    worst_orth = max(worst_orth, abs(rep.lhs) if rep.lhs is not None else math.inf)
    ok = bad == 0 and worst_int <= 1e-6 and worst_orth <= 1e-6
    announce(capsys, 8, ok, f"20 integral draws worst {worst_int:.1e}; off-diagonal n,m <= 4 worst"
             f" {worst_orth:.1e}")


def test_criterion_09_bibasic(capsys):
    failures, missing = [], []
    want = {(q, n) for q in BASES for n in range(6)}
    for ident in BIBASIC:
        if ident == "bibasic_factorization":
            continue
        bad, cells = _exact_sweep("bibasic", ident)
        failures += bad
        if not want <= cells:
            missing.append(ident)
    pairs = True
    for N in range(1, 9):
        pairs &= build_inverse_pair(F(1, 3), F(2, 7), F(1, 2), F(2, 3), N).identity_errors() == (0, 0)
    fact = 0
    for params in CATALOGS["bibasic"].sample("bibasic_factorization", 9, 20, exact=True):
        lhs, rhs = factorization_sides(params["a"], params["b"], params["c"], params["d"])
        fact += lhs == rhs and isinstance(lhs, F)
    ok = not failures and not missing and pairs and fact == 20
    announce(capsys, 9, ok, f"{len(BIBASIC) - 1} sums exact on every (q, n <= 5) cell, failures"
             f" {len(failures)}; A*B = B*A = I for N <= 8 {pairs}; factorization {fact}/20 exact")


def test_criterion_10_orthopoly(capsys):
    gram_err = 0.0
    for a, b, q in ((0.3, 0.2, 0.5), (0.6, -0.4, 0.7)):
        for size in range(1, 6):
            G = gram_matrix(size, a, b, q)
            norms = np.array([little_qjacobi_norm(n, a, b, q) for n in range(size)])
            gram_err = max(gram_err, np.abs(G - np.diag(norms)).max() / (1 + np.abs(norms).max()))
    rng = np.random.default_rng(10)
    gen_bad = 0
    for _ in range(20):
        t, theta_, q = rng.uniform(-0.8, 0.8), rng.uniform(0, math.pi), rng.uniform(0.1, 0.85)
        gen_bad += not genfun_check("qhermite", t, theta_, q, tol=1e-10).passed
        gen_bad += not genfun_check("qultraspherical", t, theta_, q, {"beta": rng.uniform(-0.9, 0.9)},
                                    tol=1e-10).passed
    conn_err = 0.0
    for _ in range(10):
        a, b, c, d = rng.uniform(0.05, 0.6, 4)
        q = rng.uniform(0.2, 0.8)
        for n in range(4):
            coeffs = connection_coeffs(n, a, b, c, d, q)
            for x in (q, q * q, q ** 3, 0.7, 0.2):
                lhs = little_qjacobi(n, x, c, d, q)
                rhs = sum(ak * little_qjacobi(k, x, a, b, q) for k, ak in enumerate(coeffs))
                conn_err = max(conn_err, rel(lhs, rhs))
    ok = gram_err <= 1e-9 and gen_bad == 0 and conn_err <= 1e-10
    announce(capsys, 10, ok, f"Gram worst {gram_err:.1e}; generating functions failures {gen_bad}/40;"
             f" connection worst {conn_err:.1e}")


def _region(kind, inner=0.0, outer=math.inf):
    return kind, inner, outer


# parameters avoid q^-k values, which would terminate one half of the series
CONVERGENCE_TABLE = [
    # unilateral, |q| < 1
    ("phi r<=s", phi([0.3], [0.5, 0.6], 0.5, 0.1), _region("all-z")),
    ("phi r=s+1", phi([0.3, 0.4], [0.5], 0.5, 0.1), _region("disk", outer=1.0)),
    ("phi r>s+1", phi([0.3, 0.4, 0.2], [0.5], 0.5, 0.1), _region("empty-unless-terminating")),
    # unilateral, |q| > 1: the limiting term ratio is prod(a) z / (prod(b) q)
    ("phi r<=s, |q|>1", phi([0.3], [0.5, 0.6], 2.0, 0.1), _region("disk", outer=2.0 * 0.3 / 0.3)),
    ("phi r=s+1, |q|>1", phi([0.3, 0.4], [0.5], 2.0, 0.1), _region("disk", outer=2.0 * 0.5 / 0.12)),
    ("phi r>s+1, |q|>1", phi([0.3, 0.4, 0.2], [0.5], 2.0, 0.1), _region("disk", outer=2.0 * 0.5 / 0.024)),
    # bilateral, |q| < 1
    ("psi r<s", psi([0.5], [0.15, 0.35], 0.4, 0.5), _region("exterior", inner=0.15 * 0.35 / 0.5)),
    ("psi r=s", psi([0.5], [0.1], 0.4, 0.5), _region("annulus", inner=0.2, outer=1.0)),
    ("psi r>s", psi([0.5, 0.3], [0.1], 0.4, 0.5), _region("empty-unless-terminating")),
    # bilateral, |q| > 1
    ("psi r<s, |q|>1", psi([0.7], [0.15, 0.35], 2.0, 0.5), _region("empty-unless-terminating")),
    ("psi r=s, |q|>1", psi([0.7], [3.0], 2.0, 2.0), _region("annulus", inner=1.0, outer=3.0 / 0.7)),
    ("psi r>s, |q|>1", psi([0.7, 0.3], [0.1], 2.0, 0.1), _region("punctured-disk", outer=0.1 / 0.21)),
]


def test_criterion_11_convergence_classifier(capsys):
    wrong = []
    for label, spec, (kind, inner, outer) in CONVERGENCE_TABLE:
        reg = convergence_region(spec)
        if reg.kind != kind or not math.isclose(reg.inner, inner, abs_tol=1e-12) or not (
                math.isclose(reg.outer, outer, rel_tol=1e-12) or reg.outer == outer):
            wrong.append((label, reg.as_dict()))
    ok = len(CONVERGENCE_TABLE) == 12 and not wrong
    announce(capsys, 11, ok, f"{12 - len(wrong)}/12 regions as expected; mismatches {wrong}")


def test_criterion_12_cli_determinism(capsys, tmp_path):
    texts = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = _run_cli(capsys, "report", "--seed", "42", "--samples", "10", "--catalog", "all",
                        "--format", "json", "--out", str(out))
        data = json.loads(out.read_text())
        data.pop(TIMESTAMP_KEY)
        texts.append((code, json.dumps(data, indent=2)))
    same = texts[0] == texts[1] and texts[0][0] == 0
    forced = _run_cli(capsys, "verify-all", "--tol", "1e-30", "--samples", "3")
    usage = _run_cli(capsys, "eval", "phi([0.3,0.5)")
    ok = same and forced == 1 and usage == 2
    announce(capsys, 12, ok, f"reports identical {same}; forced failure exit {forced}; parse error exit {usage}")
