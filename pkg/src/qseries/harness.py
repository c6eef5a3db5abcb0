"""Sampling verification driver shared by the service and the CLI.

Every catalog (identities, transforms, q-integrals, bibasic sums,
orthogonal polynomials) is wrapped in the same small adapter, so one run
can draw samples, verify them and aggregate the results in a fixed order.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Mapping

from . import __version__
from .bibasic import BIBASIC, bibasic_check
from .domains import make_rng
from .evaluator import evaluate_expr
from .errors import ConfigError, DomainError, UnknownIdentity
from .identities import REGISTRY, verify_entry
from .orthopoly import ORTHO_TOLS, ORTHOPOLY, orthopoly_check
from .qcalculus import QINTEGRALS, qintegral_identity_check
from .qcore import PASS_TOL
from .reports import VerificationReport
from .transforms import RULES, verify_transform

__all__ = ["RunConfig", "Catalog", "CATALOGS", "catalog_listing", "find_catalog",
           "run_verification", "verify_one", "decode_params", "report_json", "report_csv", "TIMESTAMP_KEY"]

MODES = ("float", "rational")
TIMESTAMP_KEY = "generated_at"


@dataclass
class RunConfig:
    """What to verify and how; ``tol=None`` means each entry's own default."""

    seed: int = 42
    samples: int = 10
    tol: float | None = None
    mode: str = "float"
    identities: list = field(default_factory=list)
    catalog: str = "identities"
    workers: int = 1

    def validate(self) -> "RunConfig":
        if int(self.samples) != self.samples or self.samples < 1:
            raise ConfigError("samples must be a positive integer")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if self.catalog != "all" and self.catalog not in CATALOGS:
            raise ConfigError(f"unknown catalog {self.catalog!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        return self

    @classmethod
    def from_mapping(cls, data: Mapping) -> "RunConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg = cls(**known)
        cfg.identities = list(cfg.identities or [])
        return cfg.validate()


@dataclass(frozen=True)
class Catalog:
    name: str
    entries: Mapping
    check: Callable[[str, Mapping, float | None], VerificationReport]
    default_tol: Callable[[str], float]

    def ids(self) -> list:
        return list(self.entries)

    def exactable(self, ident: str) -> bool:
        return self.entries[ident].domain.exact is not None

    def sample(self, ident: str, seed: int, count: int, exact: bool) -> list:
        entry = self.entries[ident]
        rng = make_rng(seed, ident + (":exact" if exact else ""))
        return [entry.domain.sample(rng, exact=exact) for _ in range(count)]

    def describe(self) -> list:
        out = []
        for ident, entry in self.entries.items():
            info = entry.describe()
            info["rational_sampler"] = self.exactable(ident)
            info["default_tol"] = self.default_tol(ident)
            out.append(info)
        return out


def _identity_check(ident, params, tol):
    return verify_entry(REGISTRY[ident], params, PASS_TOL if tol is None else tol)


def _qint_check(ident, params, tol):
    return qintegral_identity_check(ident, params, 1e-8 if tol is None else tol)


def _bibasic_check(ident, params, tol):
    return bibasic_check(ident, params, PASS_TOL if tol is None else tol)


CATALOGS: dict[str, Catalog] = {
    "identities": Catalog("identities", REGISTRY, _identity_check, lambda i: PASS_TOL),
    "transforms": Catalog("transforms", RULES, lambda i, p, t: verify_transform(i, p, t),
                          lambda i: RULES[i].tol),
    "qintegrals": Catalog("qintegrals", QINTEGRALS, _qint_check, lambda i: 1e-8),
    "bibasic": Catalog("bibasic", BIBASIC, _bibasic_check, lambda i: PASS_TOL),
    "orthopoly": Catalog("orthopoly", ORTHOPOLY, lambda i, p, t: orthopoly_check(i, p, t),
                         lambda i: ORTHO_TOLS[i]),
}


def find_catalog(ident: str, catalog: str | None = None) -> Catalog:
    """The catalog holding ``ident`` (searched in declaration order when not given)."""
    if catalog is not None and catalog != "all":
        if catalog not in CATALOGS:
            raise ConfigError(f"unknown catalog {catalog!r}")
        if ident not in CATALOGS[catalog].entries:
            raise UnknownIdentity(f"{ident!r} is not in the {catalog} catalog")
        return CATALOGS[catalog]
    for cat in CATALOGS.values():
        if ident in cat.entries:
            return cat
    raise UnknownIdentity(f"unknown identity {ident!r}")


def catalog_listing(name: str) -> list:
    if name not in CATALOGS:
        raise ConfigError(f"unknown catalog {name!r}; choose from {', '.join(CATALOGS)}")
    return CATALOGS[name].describe()


def _selection(cfg: RunConfig) -> list:
    if cfg.identities:
        return [(find_catalog(i, cfg.catalog), i) for i in cfg.identities]
    names = list(CATALOGS) if cfg.catalog == "all" else [cfg.catalog]
    return [(CATALOGS[n], i) for n in names for i in CATALOGS[n].ids()]


def decode_value(value, mode: str = "float"):
    """Parameter value from JSON: a number, an expression string or an encoded scalar."""
    if isinstance(value, bool):
        raise DomainError("parameters must be numeric")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return Fraction(str(value)) if mode == "rational" else value
    if isinstance(value, str):
        return evaluate_expr(value, mode)
    if isinstance(value, Mapping):
        if "exact" in value:
            return Fraction(value["exact"])
        return complex(value.get("re", 0.0), value.get("im", 0.0))
    raise DomainError(f"cannot read parameter value {value!r}")


def decode_params(params: Mapping, mode: str = "float") -> dict:
    return {k: decode_value(v, mode) for k, v in params.items()}


def verify_one(cat: Catalog, ident: str, params: Mapping, tol: float | None) -> dict:
    """Report for a single explicit parameter point."""
    record = cat.check(ident, params, tol).as_dict()
    record["catalog"] = cat.name
    return record


def _run_entry(cat: Catalog, ident: str, cfg: RunConfig) -> dict:
    exact = cfg.mode == "rational"
    tol = cat.default_tol(ident) if cfg.tol is None else cfg.tol
    result = {"catalog": cat.name, "id": ident, "tol": tol, "mode": cfg.mode,
              "samples": [], "passed": 0, "failed": 0, "skipped": False}
    if exact and not cat.exactable(ident):
        result["skipped"] = True
        result["reason"] = "no rational sampler"
        return result
    try:
        points = cat.sample(ident, cfg.seed, cfg.samples, exact)
    except DomainError as err:
        result["failed"] = cfg.samples
        result["error"] = f"DomainError: {err}"
        return result
    for index, params in enumerate(points):
        record = cat.check(ident, params, tol).as_dict()
        record["index"] = index
        result["samples"].append(record)
        result["passed" if record["pass"] else "failed"] += 1
    return result


def run_verification(cfg: RunConfig) -> dict:
    """Aggregate report; entries appear in catalog order regardless of ``workers``."""
    cfg.validate()
    selection = _selection(cfg)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            entries = list(pool.map(lambda item: _run_entry(item[0], item[1], cfg), selection))
    else:
        entries = [_run_entry(cat, ident, cfg) for cat, ident in selection]
    passed = sum(e["passed"] for e in entries)
    failed = sum(e["failed"] for e in entries)
    skipped = sum(1 for e in entries if e["skipped"])
    config = asdict(cfg)
    config.pop("workers")
    return {
        "tool": "qseries",
        "version": __version__,
        TIMESTAMP_KEY: datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config,
        "summary": {"entries": len(entries), "samples_passed": passed,
                    "samples_failed": failed, "entries_skipped": skipped,
                    "all_passed": failed == 0},
        "entries": entries,
    }


def report_json(report: Mapping) -> str:
    return json.dumps(report, indent=2) + "\n"


_CSV_FIELDS = ["catalog", "id", "index", "pass", "rel_err", "abs_err", "tol", "mode", "error",
               "params", "lhs", "rhs"]


def report_csv(report: Mapping) -> str:
    """One row per sample; params, lhs and rhs are embedded as JSON text."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for entry in report["entries"]:
        for s in entry["samples"]:
            writer.writerow({
                "catalog": entry["catalog"], "id": entry["id"], "index": s["index"],
                "pass": s["pass"], "rel_err": s["rel_err"], "abs_err": s["abs_err"],
                "tol": s["tol"], "mode": s["mode"], "error": s["error"] or "",
                "params": json.dumps(s["params"], sort_keys=True),
                "lhs": json.dumps(s["lhs"]), "rhs": json.dumps(s["rhs"]),
            })
    return buf.getvalue()
