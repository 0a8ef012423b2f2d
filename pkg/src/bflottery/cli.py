"""Command line front end: ``bf <command>``.

Payload arguments accept a file path, inline JSON (anything starting with
``{`` or ``[``), ``-`` for stdin, or the name of a document stored in the
workspace given by ``--store``.  Machine output is JSON tagged with
``"schema": "bf/1"``; ``--format csv`` flattens it for spreadsheets.
Errors are one line on stderr and a nonzero exit code.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional

from .corpus import EXAMPLES, run_example
from .elicitation import DmResponse, ElicitationSession, SyntheticDm, solve_indices
from .errors import BfError, ValidationError
from .service import DEFAULT_PORT, Api, ApiError, make_server
from .store import WorkspaceStore
from .wire import reference_to_dict

SCHEMA = "bf/1"


def _payload_arg(text: str):
    if text == "-":
        try:
            return json.load(sys.stdin)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"stdin is not valid JSON: {exc}") from exc
    if text.lstrip().startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"inline payload is not valid JSON: {exc}") from exc
    if os.path.exists(text):
        with open(text) as handle:
            try:
                return json.load(handle)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{text} is not valid JSON: {exc}") from exc
    return text  # a stored document name, resolved against --store


def _flatten(doc, prefix: str = "") -> list[tuple[str, object]]:
    rows = []
    if isinstance(doc, dict):
        for key, value in doc.items():
            rows.extend(_flatten(value, f"{prefix}{key}."))
    elif isinstance(doc, (list, tuple)):
        for i, value in enumerate(doc):
            rows.extend(_flatten(value, f"{prefix}{i}."))
    else:
        rows.append((prefix[:-1], doc))
    return rows


def _emit(doc: dict, format_: str) -> None:
    doc = {"schema": SCHEMA, **doc}
    if format_ == "json":
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return
    writer = csv.writer(sys.stdout)
    writer.writerow(["field", "value"])
    for key, value in _flatten(doc):
        writer.writerow([key, "" if value is None else value])


def _api(args) -> Api:
    store = getattr(args, "store", None) or os.environ.get("BF_STORE")
    return Api(WorkspaceStore(store))


def cmd_evaluate(args) -> int:
    payload = {
        "lottery": _payload_arg(args.lottery),
        "assessment": _payload_arg(args.assessment),
        "cross_check": args.cross_check,
    }
    _emit(_api(args).evaluate(payload), args.format)
    return 0


def cmd_compare(args) -> int:
    payload = {
        "a": _payload_arg(args.a),
        "b": _payload_arg(args.b),
        "assessment": _payload_arg(args.assessment),
        "mode": args.mode,
    }
    _emit(_api(args).compare(payload), args.format)
    return 0


def cmd_reduce(args) -> int:
    payload = {"lottery": _payload_arg(args.lottery)}
    _emit(_api(args).reduce(payload), args.format)
    return 0


PROMPT_KEYS = {
    "t": DmResponse.TARGET_PREFERRED,
    "p": DmResponse.PROBE_PREFERRED,
    "i": DmResponse.INCOMPARABLE,
}


def cmd_elicit(args) -> int:
    target = [part.strip() for part in args.target.split(",") if part.strip()]
    session = ElicitationSession(target, args.epsilon)
    synthetic: Optional[SyntheticDm] = None
    if args.answer_u is not None or args.answer_v is not None:
        if args.answer_u is None or args.answer_v is None:
            raise ValidationError("--answer-u and --answer-v go together")
        synthetic = SyntheticDm(args.answer_u, args.answer_v)

    while (query := session.next_query()) is not None:
        if synthetic is not None:
            session.record(query.seq, synthetic.answer(query))
            continue
        names = ",".join(sorted(query.target))
        print(
            f"[{query.seq + 1}/{session.max_queries} max] {{{names}}} versus a "
            f"reference gamble winning with chance {query.probe_u:.4f}",
            file=sys.stderr,
        )
        try:
            raw = input("  prefer (t)arget, (p)robe, (i)ncomparable, or (q)uit? ")
        except EOFError:
            raw = "q"
        raw = raw.strip().lower()
        if raw in ("q", "quit"):
            print("stopped before the brackets closed", file=sys.stderr)
            return 1
        if raw not in PROMPT_KEYS:
            print(f"  not one of t/p/i/q: {raw!r}", file=sys.stderr)
            continue
        try:
            session.record(query.seq, PROMPT_KEYS[raw])
        except BfError as exc:
            print(f"  rejected: {exc}", file=sys.stderr)

    recovered = session.recovered()
    doc = {
        "target": sorted(session.target),
        "epsilon": session.epsilon,
        "recovered": reference_to_dict(recovered),
        "queries_used": len(session.transcript),
    }
    try:
        alpha, beta = solve_indices(recovered)
        doc["indices"] = {"alpha": alpha, "beta": beta}
    except ValidationError:
        doc["indices"] = None
    _emit(doc, args.format)
    return 0


def cmd_serve(args) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValidationError(f"--bind wants host:port, got {args.bind!r}")
    store = args.store or os.environ.get("BF_STORE")
    server = make_server(WorkspaceStore(store), host, int(port_text))
    where = "memory only" if store is None else store
    print(
        f"listening on http://{server.server_address[0]}:{server.server_address[1]} "
        f"(workspace: {where})",
        file=sys.stderr,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def cmd_examples(args) -> int:
    if args.action == "list":
        _emit(
            {
                "examples": [
                    {"name": name, "summary": (fn.__doc__ or "").strip().splitlines()[0]}
                    for name, fn in sorted(EXAMPLES.items())
                ]
            },
            args.format,
        )
        return 0
    result = run_example(args.name, args.n or 0)
    _emit(result, args.format)
    return 0 if result["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bf",
        description="evaluate, compare, and elicit utilities for lotteries "
        "carrying belief-function uncertainty",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, store=True):
        p.add_argument(
            "--format", choices=("json", "csv"), default="json",
            help="output shape (default json)",
        )
        if store:
            p.add_argument(
                "--store", default=None,
                help="workspace file for resolving stored names (or $BF_STORE)",
            )

    p = sub.add_parser("evaluate", help="reduce a lottery against an assessment")
    p.add_argument("--lottery", required=True, help="file, inline JSON, -, or stored name")
    p.add_argument("--assessment", required=True, help="file, inline JSON, -, or stored name")
    p.add_argument(
        "--cross-check", action="store_true",
        help="recompute the reduction by explicit combination and report the gap",
    )
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="rank two lotteries under one assessment")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--assessment", required=True)
    p.add_argument(
        "--mode", choices=("interval", "strong"), default="interval",
        help="interval order (default) or the stricter no-overlap order",
    )
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reduce", help="collapse a compound lottery to a plain one")
    p.add_argument("--lottery", required=True)
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("elicit", help="recover an interval utility by bisection")
    p.add_argument("--target", required=True, help="comma-separated outcome labels")
    p.add_argument("--epsilon", type=float, default=0.005)
    p.add_argument(
        "--answer-u", type=float, default=None,
        help="with --answer-v: answer queries from this scripted attitude",
    )
    p.add_argument("--answer-v", type=float, default=None)
    common(p, store=False)
    p.set_defaults(func=cmd_elicit)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bind", default=f"127.0.0.1:{DEFAULT_PORT}")
    p.add_argument("--store", default=None, help="workspace file (or $BF_STORE)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("examples", help="bundled worked examples with answer keys")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("name", nargs="?", help="example name (for run)")
    p.add_argument("--n", type=int, default=None, help="size knob where supported")
    common(p, store=False)
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "examples" and args.action == "run" and not args.name:
        print("error: examples run needs a name; try 'bf examples list'", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ApiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
