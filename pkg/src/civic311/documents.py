"""JSON document shapes shared by the HTTP API and the CLI.

Every IRI is carried in full with a human-readable label next to it,
so clients never need to split IRIs themselves.  Keys are
lower_snake_case throughout.
"""

from __future__ import annotations

from .ledger import ServiceRequest
from .nlq import Resolution
from .ontology import ContactCard, ServiceEntry, Violation, agency_contact, display_label, service_catalog
from .rdf import Term, TripleStore, iri
from .sparql import ResultTable


def term_ref(store: TripleStore, term: Term) -> dict:
    return {"iri": term.value, "label": display_label(store, term)}


def iri_ref(store: TripleStore, value: str) -> dict:
    """Like term_ref but from a stored IRI string, tolerating junk."""
    try:
        return term_ref(store, iri(value))
    except ValueError:
        return {"iri": value, "label": value}


def cell_document(store: TripleStore, term: Term) -> dict:
    return {"kind": term.kind, "value": term.value, "label": display_label(store, term)}


def contact_document(card: ContactCard) -> dict:
    return {
        "iri": card.agency.value,
        "label": card.label,
        "email": card.email,
        "phone": card.phone,
        "governing_body": card.governing_body,
    }


def result_table_document(store: TripleStore, table: ResultTable) -> dict:
    rows = [
        {col: cell_document(store, cell) for col, cell in zip(table.columns, row)}
        for row in table.rows
    ]
    return {"columns": list(table.columns), "rows": rows}


def service_entry_document(store: TripleStore, entry: ServiceEntry) -> dict:
    return {
        "subject": term_ref(store, entry.subject),
        "type311": term_ref(store, entry.type311),
        "action": term_ref(store, entry.action),
        "agency": contact_document(agency_contact(store, entry.agency)),
        "locations": [term_ref(store, loc) for loc in entry.locations],
    }


def services_document(store: TripleStore) -> dict:
    return {"services": [service_entry_document(store, e) for e in service_catalog(store)]}


def agencies_document(store: TripleStore, agencies) -> dict:
    return {"agencies": [contact_document(agency_contact(store, a)) for a in agencies]}


def resolution_document(store: TripleStore, res: Resolution) -> dict:
    return {
        "text": res.text,
        "subject": term_ref(store, res.slots.subject),
        "location": term_ref(store, res.slots.location),
        "reported_type": term_ref(store, res.slots.type311) if res.slots.type311 else None,
        "thing": term_ref(store, res.view.thing),
        "recorded_type": term_ref(store, res.view.type311),
        "action": term_ref(store, res.view.action),
        "agency": contact_document(res.contact),
        "query": res.query,
        "note": res.note,
    }


def request_document(store: TripleStore, request: ServiceRequest) -> dict:
    return {
        "id": request.id,
        "created_at": request.created_at,
        "raw_text": request.raw_text,
        "subject": iri_ref(store, request.subject),
        "location": iri_ref(store, request.location),
        "type311": iri_ref(store, request.type311) if request.type311 else None,
        "agency": iri_ref(store, request.agency),
        "action": iri_ref(store, request.action),
        "status": request.status.value,
        "reporter": {"name": request.reporter.name, "contact": request.reporter.contact},
        "history": [{"at": h.at, "status": h.status.value, "note": h.note} for h in request.history],
    }


def violation_document(v: Violation) -> dict:
    return {"subject": v.subject.value, "code": v.code, "message": v.message}


def build_notification(store: TripleStore, res: Resolution, reporter_name: str, reporter_contact: str) -> str:
    """Plain-text notice a handling agency receives for a new request."""
    lines = [
        f"To: {res.contact.label} <{res.contact.email or 'no email on file'}>",
        f"Subject: new report: {display_label(store, res.view.subject)}"
        f" at {display_label(store, res.view.address)}",
        "",
        f"Reported issue: {res.text}",
        f"Recorded condition: {display_label(store, res.view.type311)}",
        f"Requested action: {display_label(store, res.view.action)}",
        f"Reported by: {reporter_name or 'anonymous'} ({reporter_contact})",
        "",
    ]
    return "\n".join(lines)
