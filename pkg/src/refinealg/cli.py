"""Command line front end; a thin client over the service API.

Exit codes: 0 the workflows are equal (or the command succeeded), 1 they are
not equal, 2 usage or input error, 3 the verdict is conjectural because a
boundary has several sheets. The `REFINEALG_AFF_CAP` environment variable
bounds the oracle's filter-atom enumeration (default 16); with `--server`
the cap of the remote process applies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .client import post

EXIT_EQUAL = 0
EXIT_NOT_EQUAL = 1
EXIT_ERROR = 2
EXIT_CONJECTURAL = 3


class _CliError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _CliError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise _CliError(f"{path}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except FileNotFoundError:
        raise _CliError(f"no such file: {path}") from None


def _request(path: str, payload: dict, server: str | None):
    status, body = post(path, payload, server)
    if status == 200:
        return body
    detail = body.get("error", body) if isinstance(body, dict) else body
    if status == 500:
        raise _CliError(f"internal inconsistency: {detail}")
    raise _CliError(str(detail))


def _print_tables(tag: str, tables: list[dict]) -> None:
    print(f"{tag} tables:")
    for entry in tables:
        print(f"  [{entry['row']},{entry['col']}]")
        for line in entry["cases"]:
            print(f"    {line}")
        if not entry["cases"]:
            print("    (empty)")


def cmd_check(args) -> int:
    payload = {
        "signature": _read_json(args.sig),
        "left": _read_json(args.workflow[0]),
        "right": _read_json(args.workflow[1]),
        "oracle": args.oracle,
    }
    body = _request("/check", payload, args.server)
    suffix = " (conjectural: multi-sheet boundary)" if body["conjectural"] else ""
    print(f"verdict: {body['verdict']}{suffix}")
    _print_tables("left", body["left_tables"])
    _print_tables("right", body["right_tables"])
    if body.get("oracle_agrees") is not None:
        print("oracle: agrees")
    return body["exit_code"]


def cmd_normalize(args) -> int:
    payload = {"signature": _read_json(args.sig), "workflow": _read_json(args.workflow)}
    body = _request("/normalize", payload, args.server)
    canonical = json.dumps(body["normalized"], indent=2, sort_keys=True) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(canonical)
    summary = body["summary"]
    if summary["kind"] == "e":
        print(
            f"normal form layers: {summary['copies_and_discards']} copy/discard, "
            f"{summary['swaps']} swap, {summary['operations']} operation slices"
        )
    else:
        filters = summary["filters"]
        print(f"wide morphism: {summary['wide_slices']} slices")
        print(f"filters ({len(filters)}): {', '.join(filters) if filters else 'none'}")
        print(f"discards: {summary['discards']}, unions: {summary['unions']}")
    return EXIT_EQUAL


def cmd_run(args) -> int:
    payload = {
        "signature": _read_json(args.sig),
        "valuation": _read_json(args.valuation),
        "workflow": _read_json(args.workflow),
        "inputs": [_read_text(p) for p in args.input],
        "threads": args.threads,
    }
    body = _request("/run", payload, args.server)
    os.makedirs(args.output, exist_ok=True)
    for k, sheet in enumerate(body["sheets"], start=1):
        path = os.path.join(args.output, f"sheet_{k}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(sheet)
        print(f"wrote {path}")
    return EXIT_EQUAL


def cmd_export(args) -> int:
    payload = {
        "signature": _read_json(args.sig),
        "workflow": _read_json(args.workflow),
        "format": args.format,
    }
    body = _request("/export", payload, args.server)
    sys.stdout.write(body["content"])
    return EXIT_EQUAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refinealg",
        description="Equivalence checking, normalization, execution and export "
        "of row-wise workflows with facet filters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--server", help="URL of a running service; in-process by default")

    p = sub.add_parser("check", help="decide whether two workflows are equal")
    p.add_argument("--sig", required=True, help="signature JSON file")
    p.add_argument("workflow", nargs=2, help="two workflow JSON files")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check with the independent symbolic oracle")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("normalize", help="write a workflow's canonical normal form")
    p.add_argument("--sig", required=True)
    p.add_argument("workflow")
    p.add_argument("--out", required=True, help="output workflow JSON file")
    common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("run", help="execute a workflow on CSV tables")
    p.add_argument("--sig", required=True)
    p.add_argument("--valuation", required=True, help="valuation JSON file")
    p.add_argument("workflow")
    p.add_argument("--input", action="append", required=True,
                   help="input CSV, one per input sheet (repeatable)")
    p.add_argument("--output", required=True, help="directory for sheet_<k>.csv files")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="row-level parallelism (default: available parallelism)")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("export", help="render a workflow for inspection")
    p.add_argument("--sig", required=True)
    p.add_argument("workflow")
    p.add_argument("--format", choices=("dot", "layered-svg", "text"), default="text")
    common(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
