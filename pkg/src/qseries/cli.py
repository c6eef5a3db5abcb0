"""Command-line client for the qseries service.

Every subcommand is a request to the HTTP service: in-process through
FastAPI's TestClient by default, or to a running server with ``--url``.

Exit codes: 0 everything passed, 1 a verification or evaluation failed,
2 usage errors (bad flags or config, parse errors, unknown ids).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

import httpx

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
RUN_KEYS = ("seed", "samples", "tol", "mode", "identities", "catalog", "workers")
CATALOG_NAMES = ("identities", "transforms", "qintegrals", "bibasic", "orthopoly")


class UsageError(Exception):
    pass


def make_client(url: str | None):
    if url:
        return httpx.Client(base_url=url, timeout=None)
    with warnings.catch_warnings():
        # starlette flags its httpx-based TestClient as deprecated; it still works
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _run_options(p: argparse.ArgumentParser, catalog: bool = True) -> None:
    p.add_argument("--samples", type=int, help="samples per entry")
    p.add_argument("--tol", type=float, help="pass tolerance (default: each entry's own)")
    p.add_argument("--seed", type=int, help="sampling seed")
    p.add_argument("--mode", choices=("float", "rational"))
    p.add_argument("--config", type=Path, help="JSON file with RunConfig fields; flags override it")
    if catalog:
        p.add_argument("--catalog", choices=CATALOG_NAMES + ("all",))
        p.add_argument("--only", dest="identities", action="append", metavar="ID",
                       help="restrict to this id (repeatable)")
        p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qseries", description=__doc__.splitlines()[0])
    parser.add_argument("--url", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an expression")
    p.add_argument("expr")
    p.add_argument("--mode", choices=("float", "rational"), default="float")
    p.add_argument("--json", action="store_true", help="print the full response")

    p = sub.add_parser("verify", help="verify one identity, rule or check")
    p.add_argument("id")
    _run_options(p, catalog=False)
    p.add_argument("--catalog", choices=CATALOG_NAMES)
    p.add_argument("--params", help="JSON object of parameters; verifies that single point")
    p.add_argument("--json", action="store_true", help="print the full report")

    p = sub.add_parser("verify-all", help="verify every entry of a catalog")
    _run_options(p)
    p.add_argument("--json", action="store_true", help="print the full report")

    p = sub.add_parser("list", help="list catalog entries")
    p.add_argument("--catalog", choices=CATALOG_NAMES, default="identities")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("report", help="run verification and write a report file")
    _run_options(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def run_config(args: argparse.Namespace) -> dict:
    """Config file values overridden by any flag that was given."""
    cfg: dict = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise UsageError(f"cannot read config {args.config}: {err}") from err
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = sorted(set(cfg) - set(RUN_KEYS))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    for key in RUN_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _check(resp) -> dict | str:
    if resp.status_code == 422:
        body = resp.json()
        print(f"error: {body.get('error')}: {body.get('message')}", file=sys.stderr)
        raise _Failed()
    if resp.status_code >= 400:
        body = resp.json()
        raise UsageError(f"{body.get('error')}: {body.get('message')}")
    if resp.headers.get("content-type", "").startswith("text/"):
        return resp.text
    return resp.json()


class _Failed(Exception):
    pass


def _fmt_err(x) -> str:
    return f"{x:.2e}" if isinstance(x, float) else str(x)


def _print_run(report: dict) -> None:
    for entry in report["entries"]:
        if entry["skipped"]:
            print(f"SKIP {entry['catalog']}/{entry['id']}: {entry.get('reason', '')}")
            continue
        errs = [s["rel_err"] for s in entry["samples"] if isinstance(s["rel_err"], float)]
        worst = _fmt_err(max(errs)) if errs else "n/a"
        status = "PASS" if entry["failed"] == 0 else "FAIL"
        total = entry["passed"] + entry["failed"]
        print(f"{status} {entry['catalog']}/{entry['id']}: {entry['passed']}/{total}"
              f" max rel_err {worst} (tol {entry['tol']:g})")
        if entry.get("error"):
            print(f"     {entry['error']}")
        for s in entry["samples"]:
            if not s["pass"] and s["error"]:
                print(f"     sample {s['index']}: {s['error']}")
    summ = report["summary"]
    print(f"{summ['samples_passed']} passed, {summ['samples_failed']} failed, "
          f"{summ['entries_skipped']} entries skipped")


def _exit_for(report: dict) -> int:
    return EXIT_OK if report["summary"]["all_passed"] else EXIT_FAIL


def cmd_eval(client, args) -> int:
    body = _check(client.post("/eval", json={"expr": args.expr, "mode": args.mode}))
    print(json.dumps(body, indent=2) if args.json else body["text"])
    return EXIT_OK


def cmd_verify(client, args) -> int:
    cfg = run_config(args)
    payload = {k: cfg[k] for k in ("seed", "samples", "tol", "mode") if k in cfg}
    payload["id"] = args.id
    if args.catalog:
        payload["catalog"] = args.catalog
    if args.params:
        try:
            payload["params"] = json.loads(args.params)
        except json.JSONDecodeError as err:
            raise UsageError(f"--params is not valid JSON: {err}") from err
    body = _check(client.post("/verify", json=payload))
    if "entries" not in body:
        if args.json:
            print(json.dumps(body, indent=2))
        else:
            print(f"{'PASS' if body['pass'] else 'FAIL'} {body['catalog']}/{body['id']}: "
                  f"rel_err {_fmt_err(body['rel_err'])} (tol {body['tol']:g})")
            if body["error"]:
                print(f"     {body['error']}")
        return EXIT_OK if body["pass"] else EXIT_FAIL
    if args.json:
        print(json.dumps(body, indent=2))
    else:
        _print_run(body)
    return _exit_for(body)


def cmd_verify_all(client, args) -> int:
    body = _check(client.post("/verify-all", json=run_config(args)))
    if args.json:
        print(json.dumps(body, indent=2))
    else:
        _print_run(body)
    return _exit_for(body)


def cmd_list(client, args) -> int:
    body = _check(client.get(f"/catalog/{args.catalog}"))
    if args.json:
        print(json.dumps(body, indent=2))
        return EXIT_OK
    for entry in body["entries"]:
        flag = " [rational]" if entry.get("rational_sampler") else ""
        print(f"{entry['id']:32s} {entry.get('title', '')}{flag}")
    return EXIT_OK


def cmd_report(client, args) -> int:
    resp = client.post("/report", params={"format": args.format}, json=run_config(args))
    body = _check(resp)
    if args.format == "csv":
        args.out.write_text(body)
        failed = any(row["pass"] != "True" for row in csv.DictReader(io.StringIO(body)))
        print(f"wrote {args.out}")
        return EXIT_FAIL if failed else EXIT_OK
    args.out.write_text(json.dumps(body, indent=2) + "\n")
    summ = body["summary"]
    print(f"wrote {args.out}: {summ['samples_passed']} passed, {summ['samples_failed']} failed")
    return _exit_for(body)


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("qseries.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "verify-all": cmd_verify_all,
            "list": cmd_list, "report": cmd_report}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "serve":
        return cmd_serve(args)
    try:
        with make_client(args.url) as client:
            return COMMANDS[args.command](client, args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except _Failed:
        return EXIT_FAIL
    except httpx.TransportError as err:
        print(f"error: cannot reach service: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
