"""Parameter domains and deterministic sampling for identity checks.

Sampling uses numpy's PCG64 generator.  Each identity gets its own stream
seeded from ``SeedSequence([seed, crc32(id)])``, so adding an entry never
perturbs the draws of another.
"""

from __future__ import annotations

import cmath
import math
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError

MAX_DRAWS = 20_000
EXACT_BASES = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))


def make_rng(seed: int, ident: str) -> np.random.Generator:
    seq = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, zlib.crc32(ident.encode())])
    return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class Box:
    """Sampling box for one parameter.

    kind ``complex``: modulus uniform in [lo, hi], argument uniform in ``arg``;
    kind ``real``: uniform in [lo, hi] with a random sign when ``signed``;
    kind ``int``: uniform integer in [lo, hi].
    """

    kind: str
    lo: float
    hi: float
    arg: tuple = (0.0, 2 * math.pi)
    signed: bool = False

    def draw(self, rng: np.random.Generator):
        if self.kind == "int":
            return int(rng.integers(int(self.lo), int(self.hi) + 1))
        if self.kind == "real":
            x = float(rng.uniform(self.lo, self.hi))
            if self.signed and rng.random() < 0.5:
                x = -x
            return x
        r = float(rng.uniform(self.lo, self.hi))
        t = float(rng.uniform(*self.arg))
        return complex(r * math.cos(t), r * math.sin(t))

    def describe(self) -> str:
        if self.kind == "int":
            return f"integer in [{int(self.lo)}, {int(self.hi)}]"
        if self.kind == "real":
            sign = "+/-" if self.signed else ""
            return f"real {sign}[{self.lo:g}, {self.hi:g}]"
        return f"complex, modulus in [{self.lo:g}, {self.hi:g}]"


def cbox(lo: float, hi: float) -> Box:
    return Box("complex", lo, hi)


def rbox(lo: float, hi: float, signed: bool = False) -> Box:
    return Box("real", lo, hi, signed=signed)


def ibox(lo: int, hi: int) -> Box:
    return Box("int", lo, hi)


Constraint = tuple  # (description, predicate(params) -> bool)
Derived = tuple     # (name, function(params) -> value)


@dataclass(frozen=True)
class ParamDomain:
    """Boxes for free parameters, derived parameters and checkable constraints.

    ``exact`` maps parameter names to rational samplers ``f(rng)`` used in
    rational mode; derived parameters are recomputed from the exact draws.
    ``exact_post`` may rewrite a rational draw before completion, so that a
    free parameter can be solved for from helper draws (keys starting with
    ``_`` are dropped afterwards).
    """

    boxes: Mapping[str, Box]
    derived: tuple = ()
    constraints: tuple = ()
    exact: Mapping[str, Callable] | None = None
    exact_post: Callable | None = None

    @property
    def free_names(self) -> list:
        return list(self.boxes)

    @property
    def names(self) -> list:
        return list(self.boxes) + [name for name, _ in self.derived]

    def complete(self, params: Mapping) -> dict:
        """Fill in derived parameters; raise DomainError on missing free ones."""
        out = dict(params)
        missing = [k for k in self.boxes if k not in out]
        if missing:
            raise DomainError(f"missing parameters: {', '.join(missing)}")
        for name, fn in self.derived:
            try:
                out[name] = fn(out)
            except ZeroDivisionError as err:
                raise DomainError(f"derived parameter {name} is undefined") from err
        return out

    def violations(self, params: Mapping) -> list:
        bad = []
        for text, pred in self.constraints:
            try:
                ok = pred(params)
            except (ZeroDivisionError, ValueError, OverflowError, DomainError):
                ok = False
            if not ok:
                bad.append(text)
        return bad

    def sample(self, rng: np.random.Generator, exact: bool = False) -> dict:
        if exact and self.exact is None:
            raise DomainError("this entry has no rational sampler")
        for _ in range(MAX_DRAWS):
            if exact:
                raw = {k: f(rng) for k, f in self.exact.items()}
                if self.exact_post is not None:
                    try:
                        raw = self.exact_post(raw)
                    except ZeroDivisionError:
                        continue
                raw = {k: v for k, v in raw.items() if not k.startswith("_")}
            else:
                raw = {k: box.draw(rng) for k, box in self.boxes.items()}
            try:
                params = self.complete(raw)
            except DomainError:
                continue
            if not self.violations(params):
                return params
        raise DomainError("rejection sampling found no admissible point")

    def describe(self) -> dict:
        return {
            "free": {k: b.describe() for k, b in self.boxes.items()},
            "derived": [name for name, _ in self.derived],
            "constraints": [text for text, _ in self.constraints],
        }


# -- predicates --------------------------------------------------------------

def clear_of_poles(values, q, margin: float = 0.05) -> bool:
    """min over n >= 0 of |1 - x q^n| >= margin for every x (|q| < 1)."""
    q = complex(q)
    aq = abs(q)
    for x in values:
        x = complex(x)
        y = x
        for _ in range(2000):
            if abs(1 - y) < margin:
                return False
            if abs(y) < 1 - margin:
                break
            y *= q
            if aq == 0:
                break
    return True


def modulus_below(x, bound: float) -> bool:
    return abs(complex(x)) < bound


# -- rational samplers ---------------------------------------------------------

def exact_base(rng: np.random.Generator) -> Fraction:
    return EXACT_BASES[int(rng.integers(len(EXACT_BASES)))]


def exact_rational(lo: int = 1, hi: int = 9, signed: bool = True) -> Callable:
    def draw(rng: np.random.Generator) -> Fraction:
        num = int(rng.integers(lo, hi + 1))
        den = int(rng.integers(lo, hi + 1))
        x = Fraction(num, den)
        if signed and rng.random() < 0.5:
            x = -x
        return x
    return draw


def exact_square(lo: int = 1, hi: int = 7) -> Callable:
    """Perfect-square rationals, so square roots stay exact."""
    inner = exact_rational(lo, hi, signed=False)

    def draw(rng):
        r = inner(rng)
        return r * r
    return draw


def exact_int(lo: int, hi: int) -> Callable:
    def draw(rng):
        return int(rng.integers(lo, hi + 1))
    return draw


def unit(theta: float) -> complex:
    return cmath.exp(1j * theta)


def finite_clear(values, q, n: int, margin: float = 0.05) -> bool:
    """|1 - x q^k| >= margin for k = 0..n-1 and every x; exact zero test for rationals."""
    for x in values:
        y = x
        for _ in range(max(int(n), 0)):
            if isinstance(y, Fraction) and isinstance(q, Fraction):
                if y == 1:
                    return False
            elif abs(1 - complex(y)) < margin:
                return False
            y = y * q
    return True
