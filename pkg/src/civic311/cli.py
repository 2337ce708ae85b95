"""Command-line interface.

Global options (or CIVIC311_* environment variables) pick the graph
fixture, the alias dictionary directory, the ledger file, the outbox
directory and the output format.  'json' format prints exactly the
documents the HTTP API serves; 'table' prints tab-separated text.

Exit codes: 0 success, 1 for problems with the input or the request,
2 for internal failures such as a corrupt ledger.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import documents
from .diagnostics import ParseError
from .ledger import (
    CorruptLedger,
    FileSink,
    IllegalTransition,
    Ledger,
    Reporter,
    Status,
    StorageFailure,
    UnknownRequest,
)
from .nlq import (
    AliasDictionary,
    ComplaintError,
    MultipleMatches,
    answer_complaint,
    load_default_dictionary,
)
from .ontology import (
    AGENCY_CLASS,
    display_label,
    expand_iri,
    resolve_fixture,
    things,
    validate_store,
)
from .rdf import RDF_TYPE, Term, TripleStore
from .sparql import ResultTable, run_query

ENV_PREFIX = "CIVIC311_"


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(ENV_PREFIX + name, default)


def _read_text(value: str) -> str:
    return sys.stdin.read() if value == "-" else value


def _store(args) -> TripleStore:
    return resolve_fixture(args.fixture)


def _dictionary(args) -> AliasDictionary:
    if args.dictionary:
        return AliasDictionary.from_dir(args.dictionary)
    return load_default_dictionary()


def _ledger(args) -> Ledger:
    return Ledger(args.ledger, FileSink(args.outbox))


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def render_term(store: TripleStore, term: Term) -> str:
    """Literals always quoted; IRIs by label, quoted when multi-word."""
    if not term.is_iri:
        return f"'{term.value}'"
    label = display_label(store, term)
    return f"'{label}'" if any(c.isspace() for c in label) else label


def _print_result_table(store: TripleStore, table: ResultTable) -> None:
    print("\t".join(f"?{c}" for c in table.columns))
    for row in table.rows:
        print("\t".join(render_term(store, cell) for cell in row))


def _print_resolution(store: TripleStore, doc: dict) -> None:
    agency = doc["agency"]
    rows = [
        ("subject", doc["subject"]["label"]),
        ("location", doc["location"]["label"]),
        ("condition", doc["recorded_type"]["label"]),
        ("action", doc["action"]["label"]),
        ("agency", agency["label"]),
        ("email", agency["email"] or "-"),
        ("phone", agency["phone"] or "-"),
    ]
    if doc["note"]:
        rows.append(("note", doc["note"]))
    for key, value in rows:
        print(f"{key}:\t{value}")


def _print_request_row(store: TripleStore, doc: dict) -> None:
    print(
        "\t".join(
            (
                doc["id"],
                doc["status"],
                doc["subject"]["label"],
                doc["location"]["label"],
                doc["agency"]["label"],
                doc["created_at"],
            )
        )
    )


def cmd_query(args) -> int:
    store = _store(args)
    table = run_query(store, _read_text(args.text))
    if args.format == "json":
        _print_json(documents.result_table_document(store, table))
    else:
        _print_result_table(store, table)
    return 0


def cmd_ask(args) -> int:
    store = _store(args)
    dictionary = _dictionary(args)
    text = _read_text(args.text)
    resolution = answer_complaint(store, dictionary, text)
    resolution_doc = documents.resolution_document(store, resolution)
    if not args.report:
        if args.format == "json":
            _print_json(resolution_doc)
        else:
            _print_resolution(store, resolution_doc)
        return 0
    if not args.contact.strip():
        print("error: --report needs --contact so the agency can respond", file=sys.stderr)
        return 1
    ledger = _ledger(args)
    request = ledger.create_request(
        raw_text=text,
        subject=resolution.view.subject.value,
        location=resolution.view.address.value,
        type311=resolution.view.type311.value,
        agency=resolution.view.agency.value,
        action=resolution.view.action.value,
        reporter=Reporter(name=args.name, contact=args.contact),
        notification=documents.build_notification(store, resolution, args.name, args.contact),
    )
    request_doc = documents.request_document(store, request)
    if args.format == "json":
        _print_json({"request": request_doc, "resolution": resolution_doc})
    else:
        _print_resolution(store, resolution_doc)
        print(f"request:\t{request.id} ({request.status.value})")
    return 0


def cmd_validate(args) -> int:
    store = _store(args)
    violations = validate_store(store)
    if args.format == "json":
        _print_json(
            {
                "things": len(things(store)),
                "violations": [documents.violation_document(v) for v in violations],
            }
        )
    else:
        print(f"things:\t{len(things(store))}")
        print(f"violations:\t{len(violations)}")
        for v in violations:
            print(f"  {v}")
    return 1 if violations else 0


def cmd_requests_list(args) -> int:
    store = _store(args)
    ledger = _ledger(args)
    status = Status(args.status) if args.status else None
    rows = ledger.list_requests(
        status=status,
        agency=expand_iri(args.agency) if args.agency else None,
        location=expand_iri(args.location) if args.location else None,
        subject=expand_iri(args.subject) if args.subject else None,
    )
    docs = [documents.request_document(store, r) for r in rows]
    if args.format == "json":
        _print_json({"requests": docs})
    else:
        print("id\tstatus\tsubject\tlocation\tagency\tcreated_at")
        for doc in docs:
            _print_request_row(store, doc)
    return 0


def cmd_requests_show(args) -> int:
    store = _store(args)
    ledger = _ledger(args)
    doc = documents.request_document(store, ledger.get(args.id))
    if args.format == "json":
        _print_json(doc)
    else:
        for key in ("id", "status", "created_at", "raw_text"):
            print(f"{key}:\t{doc[key]}")
        for key in ("subject", "location", "type311", "agency", "action"):
            value = doc[key]
            print(f"{key}:\t{value['label'] if value else '-'}")
        print(f"reporter:\t{doc['reporter']['name'] or '-'} ({doc['reporter']['contact']})")
        print("history:")
        for entry in doc["history"]:
            note = f" {entry['note']}" if entry["note"] else ""
            print(f"  {entry['at']}\t{entry['status']}{note}")
    return 0


def cmd_requests_set_status(args) -> int:
    store = _store(args)
    ledger = _ledger(args)
    try:
        target = Status(args.status)
    except ValueError:
        legal = ", ".join(s.value for s in Status)
        print(f"error: unknown status {args.status!r}; expected one of: {legal}", file=sys.stderr)
        return 1
    request = ledger.set_status(args.id, target, note=args.note)
    doc = documents.request_document(store, request)
    if args.format == "json":
        _print_json(doc)
    else:
        print(f"{request.id}:\t{request.status.value}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import ServiceConfig, create_app

    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --bind must look like HOST:PORT, got {args.bind!r}", file=sys.stderr)
        return 1
    app = create_app(
        ServiceConfig(
            fixture=args.fixture,
            dictionary=args.dictionary,
            ledger_path=args.ledger,
            outbox_dir=args.outbox,
            status_secret=args.status_secret,
        )
    )
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="civic311",
        description="Report civic issues in plain language and track who fixes them.",
    )
    parser.add_argument(
        "--fixture",
        default=_env("FIXTURE", "full"),
        help="packaged graph name (full, replica) or a path to a .ttl file",
    )
    parser.add_argument(
        "--dictionary",
        default=_env("DICTIONARY"),
        help="directory holding aliases.tsv, stopwords.txt and lemma_exceptions.tsv",
    )
    parser.add_argument("--ledger", default=_env("LEDGER", "data/requests.jsonl"))
    parser.add_argument("--outbox", default=_env("OUTBOX", "data/outbox"))
    parser.add_argument("--format", choices=("table", "json"), default=_env("FORMAT", "table"))
    sub = parser.add_subparsers(dest="command", required=True)

    p_query = sub.add_parser("query", help="run a graph query ('-' reads it from stdin)")
    p_query.add_argument("text")
    p_query.set_defaults(func=cmd_query)

    p_ask = sub.add_parser("ask", help="answer a complaint ('-' reads it from stdin)")
    p_ask.add_argument("text")
    p_ask.add_argument("--report", action="store_true", help="also file a service request")
    p_ask.add_argument("--name", default="", help="reporter name")
    p_ask.add_argument("--contact", default="", help="reporter email or phone")
    p_ask.set_defaults(func=cmd_ask)

    p_validate = sub.add_parser("validate", help="integrity-check the graph fixture")
    p_validate.set_defaults(func=cmd_validate)

    p_requests = sub.add_parser("requests", help="inspect and update service requests")
    rsub = p_requests.add_subparsers(dest="requests_command", required=True)

    p_list = rsub.add_parser("list")
    p_list.add_argument("--status", default=None)
    p_list.add_argument("--agency", default=None)
    p_list.add_argument("--location", default=None)
    p_list.add_argument("--subject", default=None)
    p_list.set_defaults(func=cmd_requests_list)

    p_show = rsub.add_parser("show")
    p_show.add_argument("id")
    p_show.set_defaults(func=cmd_requests_show)

    p_set = rsub.add_parser("set-status")
    p_set.add_argument("id")
    p_set.add_argument("status")
    p_set.add_argument("--note", default="")
    p_set.set_defaults(func=cmd_requests_set_status)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--bind", default=_env("BIND", "127.0.0.1:8000"))
    p_serve.add_argument("--status-secret", default=_env("STATUS_SECRET"))
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        for d in e.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return 1
    except (MultipleMatches, StorageFailure, CorruptLedger) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ComplaintError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.candidates:
            names = ", ".join(t.local_name for t in e.candidates)
            print(f"candidates: {names}", file=sys.stderr)
        return 1
    except (UnknownRequest, IllegalTransition) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
