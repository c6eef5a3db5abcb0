"""Verification records and the comparison routine shared by every checker."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import QSeriesError
from .qcore import PASS_TOL, counting, is_exact


def relative_error(lhs, rhs):
    """|lhs - rhs| / (1 + |rhs|); exact when both sides are Fractions."""
    if is_exact(lhs) and is_exact(rhs):
        return abs(Fraction(lhs) - Fraction(rhs)) / (1 + abs(Fraction(rhs)))
    return abs(complex(lhs) - complex(rhs)) / (1 + abs(complex(rhs)))


def encode_scalar(x):
    """JSON-friendly form of a scalar; exact values keep their rational text."""
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return {"re": float(x), "im": 0.0, "exact": f"{x.numerator}/{x.denominator}"}
    z = complex(x)
    return {"re": _finite(z.real), "im": _finite(z.imag)}


def _finite(v: float):
    return v if math.isfinite(v) else repr(v)


@dataclass
class VerificationReport:
    """Outcome of comparing two independently computed sides."""

    id: str
    params: dict
    lhs: object = None
    rhs: object = None
    abs_err: float = math.inf
    rel_err: float = math.inf
    passed: bool = False
    tol: float = PASS_TOL
    mode: str = "float"
    diagnostics: dict = field(default_factory=dict)
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "params": {k: encode_scalar(v) for k, v in self.params.items()},
            "lhs": encode_scalar(self.lhs),
            "rhs": encode_scalar(self.rhs),
            "abs_err": _finite(float(self.abs_err)),
            "rel_err": _finite(float(self.rel_err)),
            "pass": self.passed,
            "tol": self.tol,
            "mode": self.mode,
            "diagnostics": dict(self.diagnostics),
            "error": self.error,
        }


def compare(ident: str, params: Mapping, lhs_fn: Callable[[], object],
            rhs_fn: Callable[[], object], tol: float = PASS_TOL,
            exact: bool = False) -> VerificationReport:
    """Evaluate both sides and build a report; evaluation errors become failures.

    In exact mode a pass requires the two sides to be equal Fractions.
    """
    report = VerificationReport(ident, dict(params), tol=tol,
                                mode="rational" if exact else "float")
    with counting() as tally:
        try:
            lhs = lhs_fn()
            rhs = rhs_fn()
        except (QSeriesError, ZeroDivisionError, OverflowError) as err:
            report.error = f"{type(err).__name__}: {err}"
            report.diagnostics = tally.as_dict()
            return report
    report.diagnostics = tally.as_dict()
    report.lhs, report.rhs = lhs, rhs
    if exact and not (is_exact(lhs) and is_exact(rhs)):
        report.error = "exact mode produced a non-rational value"
        return report
    rel = relative_error(lhs, rhs)
    if is_exact(lhs) and is_exact(rhs):
        report.abs_err = float(abs(Fraction(lhs) - Fraction(rhs)))
        report.rel_err = float(rel)
        report.passed = rel == 0 if exact else float(rel) <= tol
    else:
        report.abs_err = abs(complex(lhs) - complex(rhs))
        report.rel_err = float(rel)
        report.passed = math.isfinite(report.rel_err) and report.rel_err <= tol
    return report
