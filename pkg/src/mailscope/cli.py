"""Headless command-line access to the full pipeline.

Exit codes: 0 on success, 1 for usage errors, 2 for data errors; error
messages go to standard error. `--json` output carries the exact payloads
the HTTP service serves, with sorted keys so golden files are
byte-reproducible.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import payloads
from .actions import ActionLog
from .errors import MailscopeError
from .ingest import load_dataset
from .session import Session, replay
from .store import Store

DEFAULT_DATA_DIR = os.environ.get("MAILSCOPE_DATA_DIR", "mailscope_data")


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse's default of 2 is reserved for data errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _dump(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _parse_schema_map(pairs: list[str] | None) -> dict[str, str] | None:
    if not pairs:
        return None
    mapping = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"schema-map entries look like column=field, got {pair!r}")
        column, fieldname = pair.split("=", 1)
        mapping[column] = fieldname
    return mapping


def _load_pool(path: str) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        pool = json.loads(text)
        if isinstance(pool, list):
            return [str(x) for x in pool]
    except json.JSONDecodeError:
        pass
    return [line for line in text.splitlines() if line.strip()]


def _parse_cli_date(value: str, end: bool) -> str:
    if "T" not in value:
        value = value + ("T23:59:59.999999" if end else "T00:00:00")
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.isoformat()


def _add_filter_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--content", action="append", default=[], metavar="WORD")
    parser.add_argument("--subject", action="append", default=[], metavar="WORD")
    parser.add_argument("--correspondent", action="append", default=[], metavar="ADDR")
    parser.add_argument("--from", dest="date_from", metavar="DATE")
    parser.add_argument("--to", dest="date_to", metavar="DATE")


def _apply_filters(session: Session, args) -> None:
    for word in args.content:
        session.add_filter("content", word)
    for word in args.subject:
        session.add_filter("subject", word)
    for addr in args.correspondent:
        session.add_filter("correspondent", addr)
    if args.date_from or args.date_to:
        start = _parse_cli_date(args.date_from or "0001-01-01", end=False)
        end = _parse_cli_date(args.date_to or "9999-12-31", end=True)
        session.add_filter("date_range", {"start": start, "end": end})


def _open_session(store: Store, dataset_id: str, args) -> Session:
    session = Session.create(
        store,
        store.load_tag_store(),
        dataset_id,
        persist=False,
        restarts=getattr(args, "restarts", 10),
    )
    _apply_filters(session, args)
    return session


# --- subcommands -------------------------------------------------------------

def _cmd_ingest(args) -> int:
    store = Store(args.data_dir)
    pool = _load_pool(args.synthesize_bodies) if args.synthesize_bodies else None
    handle = load_dataset(
        args.path,
        args.format,
        store,
        schema_map=_parse_schema_map(args.schema_map),
        label=args.label,
        body_pool=pool,
        seed=args.seed,
    )
    print(handle.dataset_id)
    return 0


def _cmd_query(args) -> int:
    store = Store(args.data_dir)
    session = _open_session(store, args.dataset_id, args)
    results = session.results()
    ids = sorted(results.doc_ids)
    if args.json:
        _dump(
            {
                "fingerprint": results.stack_fingerprint,
                "match_count": len(ids),
                "doc_ids": ids,
            }
        )
    else:
        noun = "match" if len(ids) == 1 else "matches"
        suffix = f": {' '.join(ids)}" if ids else ""
        print(f"{len(ids)} {noun}{suffix}")
    return 0


def _cmd_report(args) -> int:
    store = Store(args.data_dir)
    session = _open_session(store, args.dataset_id, args)
    report = {
        "correspondents": payloads.correspondents_payload(session),
        "timeline": payloads.timeline_payload(session, args.granularity),
        "entities": payloads.entities_payload(session, args.entities),
    }
    if args.json:
        _dump(report)
        return 0
    print("== correspondents ==")
    print(f"{'address':<40} {'sent':>6} {'recv':>6} {'total':>6}")
    for row in report["correspondents"]["correspondents"]:
        print(f"{row['address']:<40} {row['sent']:>6} {row['received']:>6} {row['total']:>6}")
    print()
    print(f"== timeline ({args.granularity}) ==")
    for b in report["timeline"]["bins"]:
        print(f"{b['bucket']:<12} {b['count']:>6}")
    print()
    print(f"== entities (top {args.entities}) ==")
    for e in report["entities"]["entities"]:
        tags = f" [{', '.join(e['tags'])}]" if e["tags"] else ""
        print(f"{e['term']:<24} {e['score']:>10.4f}{tags}")
    return 0


def _cmd_export_graph(args) -> int:
    from .graph import to_dot, to_graphml

    store = Store(args.data_dir)
    session = _open_session(store, args.dataset_id, args)
    text = to_dot(session.graph()) if args.format == "dot" else to_graphml(session.graph())
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"wrote {args.format} graph to {args.out}")
    return 0


def _cmd_cluster(args) -> int:
    store = Store(args.data_dir)
    session = _open_session(store, args.dataset_id, args)
    session.run_clusterize(args.k, args.seed)
    summary = payloads.cluster_payload(session)
    if args.json:
        members = [
            payloads.cluster_members_payload(session, i) for i in range(args.k)
        ]
        _dump({"cluster": summary, "members": members})
        return 0
    for cluster in summary["clusters"]:
        i = cluster["index"]
        ms = payloads.cluster_members_payload(session, i)["members"]
        head = cluster["head"] or "-"
        print(f"cluster {i} (size {cluster['size']}) head={head}: {' '.join(ms)}")
    print(f"objective={summary['objective']:.6f} iterations={summary['iterations']}")
    return 0


def _cmd_replay(args) -> int:
    store = Store(args.data_dir)
    log = ActionLog.from_jsonl(Path(args.log).read_text(encoding="utf-8"))
    session = replay(
        log,
        args.dataset_id,
        store,
        store.load_tag_store(),
        persist=False,
        restarts=args.restarts,
    )
    summary = payloads.session_payload(session)
    summary["undo_depth"] = len(session.graph().deletion_stack)
    summary["clustering_params"] = (
        {"k": session.clustering_params[0], "seed": session.clustering_params[1]}
        if session.clustering_params
        else None
    )
    if args.json:
        _dump(summary)
    else:
        print(f"replayed {len(log.entries)} actions")
        print(f"match_count={summary['match_count']} fingerprint={summary['fingerprint'][:16]}")
        print(f"filters={len(summary['filters'])} undo_depth={summary['undo_depth']}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    app = create_app(
        ServiceConfig(
            data_dir=args.data_dir,
            cluster_doc_cap=args.cluster_doc_cap,
            restarts=args.restarts,
            cors_origins=tuple(args.cors_origin),
        )
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mailscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data-dir", default=DEFAULT_DATA_DIR)

    p = sub.add_parser("ingest", parents=[common], help="parse a corpus file into a new dataset")
    p.add_argument("path")
    p.add_argument("--format", required=True, choices=["mbox", "eml", "csv", "jsonl"])
    p.add_argument("--schema-map", nargs="*", metavar="COL=FIELD")
    p.add_argument("--synthesize-bodies", metavar="POOLFILE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("query", parents=[common], help="evaluate filters and list matches")
    p.add_argument("dataset_id")
    _add_filter_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("report", parents=[common], help="correspondent, timeline, and entity tables")
    p.add_argument("dataset_id")
    _add_filter_flags(p)
    p.add_argument("--entities", type=int, default=10, metavar="K")
    p.add_argument("--granularity", choices=["year", "month", "day"], default="year")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("export-graph", parents=[common], help="write the contact graph to a file")
    p.add_argument("dataset_id")
    _add_filter_flags(p)
    p.add_argument("--format", choices=["dot", "graphml"], default="dot")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export_graph)

    p = sub.add_parser("cluster", parents=[common], help="cluster the filtered emails")
    p.add_argument("dataset_id")
    _add_filter_flags(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("replay", parents=[common], help="re-apply a downloaded action log")
    p.add_argument("dataset_id")
    p.add_argument("--log", required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP analytics service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--cluster-doc-cap", type=int, default=2000)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--cors-origin", action="append", default=["*"])
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 1:
        parser.error("-k must be >= 1")
    if getattr(args, "entities", None) is not None and args.entities < 1:
        parser.error("--entities must be >= 1")
    try:
        return args.func(args)
    except MailscopeError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
