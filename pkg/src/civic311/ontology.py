"""Vocabulary, fixture loading and integrity checks for the civic graph.

The instance data follows one shape: a reportable thing is linked to
exactly one location, subject, type, remedial action and handling
agency.  Agencies carry contact details as plain literals.  Everything
else (labels, class typing) exists to make query results readable and
the shape checkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .rdf import RDF_TYPE, Term, TripleStore, iri
from .ttl import PrefixMap, parse_document

O3110_NS = "http://ontology.eil.utoronto.ca/open311.owl#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"


def o3110(local: str) -> Term:
    return iri(O3110_NS + local)


THING_CLASS = o3110("Open311Thing")
AGENCY_CLASS = o3110("Agency")
SUBJECT_CLASS = o3110("Subject")
LOCATION_CLASS = o3110("Location")
TYPE_CLASS = o3110("Type311")
ACTION_CLASS = o3110("Action311")

HAS_ADDRESS = o3110("hasAddress")
HAS_SUBJECT = o3110("has311Subject")
HAS_TYPE = o3110("has311Type")
NEEDS_ACTION = o3110("need311Action")
HANDLED_BY = o3110("isHandledBy")
CONTACT_EMAIL = o3110("contactEmail")
CONTACT_PHONE = o3110("contactPhone")
GOVERNING_BODY = o3110("governingBody")
RDFS_LABEL = iri(RDFS_NS + "label")

BASE_PREFIXES = PrefixMap({"O3110": O3110_NS, "rdf": RDF_NS, "rdfs": RDFS_NS})

_THING_PROPS = (HAS_ADDRESS, HAS_SUBJECT, HAS_TYPE, NEEDS_ACTION, HANDLED_BY)
_TARGET_CLASS = {
    HAS_ADDRESS: LOCATION_CLASS,
    HAS_SUBJECT: SUBJECT_CLASS,
    HAS_TYPE: TYPE_CLASS,
    NEEDS_ACTION: ACTION_CLASS,
    HANDLED_BY: AGENCY_CLASS,
}


@dataclass(frozen=True, slots=True)
class Violation:
    """One integrity failure found by validate_store."""

    subject: Term
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject.local_name}: {self.code}: {self.message}"


@dataclass(frozen=True, slots=True)
class ThingView:
    """The five links of one reportable thing, resolved."""

    thing: Term
    address: Term
    subject: Term
    type311: Term
    action: Term
    agency: Term


@dataclass(frozen=True, slots=True)
class ContactCard:
    agency: Term
    label: str
    email: str | None
    phone: str | None
    governing_body: str | None


@dataclass(frozen=True, slots=True)
class ServiceEntry:
    """One row of the service catalog: who fixes what, where, how."""

    subject: Term
    subject_label: str
    type311: Term
    action: Term
    agency: Term
    locations: tuple[Term, ...]


def fixture_path(name: str):
    return resources.files(__package__) / "fixtures" / f"{name}.ttl"


def load_fixture(name: str = "full") -> TripleStore:
    """Load a packaged fixture ('full' or 'replica') into a frozen store."""
    text = fixture_path(name).read_text(encoding="utf-8")
    return load_graph(text)


def load_graph(text: str) -> TripleStore:
    triples, _ = parse_document(text, BASE_PREFIXES)
    store = TripleStore(triples)
    return store.freeze()


def resolve_fixture(spec: str) -> TripleStore:
    """Load a packaged fixture by name, or any .ttl file by path."""
    if spec.endswith(".ttl"):
        return load_graph(Path(spec).read_text(encoding="utf-8"))
    return load_fixture(spec)


def expand_iri(value: str) -> str:
    """Accept either a full IRI or a bare local name in filter values."""
    if "#" in value or "/" in value:
        return value
    return O3110_NS + value


def things(store: TripleStore) -> list[Term]:
    return store.subjects(RDF_TYPE, THING_CLASS)


def display_label(store: TripleStore, term: Term) -> str:
    """rdfs:label when one exists, otherwise the IRI local name."""
    if not term.is_iri:
        return term.value
    labels = store.objects(term, RDFS_LABEL)
    return labels[0].value if labels else term.local_name


def thing_view(store: TripleStore, thing: Term) -> ThingView:
    values = {}
    for prop in _THING_PROPS:
        found = store.objects(thing, prop)
        if len(found) != 1:
            raise ValueError(
                f"{thing.local_name} has {len(found)} values for {prop.local_name}, expected exactly 1"
            )
        values[prop] = found[0]
    return ThingView(
        thing=thing,
        address=values[HAS_ADDRESS],
        subject=values[HAS_SUBJECT],
        type311=values[HAS_TYPE],
        action=values[NEEDS_ACTION],
        agency=values[HANDLED_BY],
    )


def agency_contact(store: TripleStore, agency: Term) -> ContactCard:
    def first(prop: Term) -> str | None:
        found = store.objects(agency, prop)
        return found[0].value if found else None

    return ContactCard(
        agency=agency,
        label=display_label(store, agency),
        email=first(CONTACT_EMAIL),
        phone=first(CONTACT_PHONE),
        governing_body=first(GOVERNING_BODY),
    )


def validate_store(store: TripleStore) -> list[Violation]:
    """Integrity check: every thing fully linked, every target typed,
    every agency reachable by email and phone."""
    out: list[Violation] = []
    for thing in things(store):
        for prop in _THING_PROPS:
            values = store.objects(thing, prop)
            if not values:
                out.append(Violation(thing, "missing_property", f"no value for {prop.local_name}"))
                continue
            if len(values) > 1:
                shown = ", ".join(v.local_name for v in values)
                out.append(Violation(thing, "multiple_values", f"{prop.local_name} has {shown}"))
            want = _TARGET_CLASS[prop]
            for v in values:
                if not v.is_iri:
                    out.append(Violation(thing, "literal_target", f"{prop.local_name} points at a literal"))
                elif want not in store.objects(v, RDF_TYPE):
                    out.append(
                        Violation(thing, "untyped_target", f"{v.local_name} is not typed {want.local_name}")
                    )
    for agency in store.subjects(RDF_TYPE, AGENCY_CLASS):
        for prop in (CONTACT_EMAIL, CONTACT_PHONE):
            if not store.objects(agency, prop):
                out.append(Violation(agency, "missing_contact", f"no value for {prop.local_name}"))
    return out


def service_catalog(store: TripleStore) -> list[ServiceEntry]:
    """Distinct (subject, type, action, agency) combinations with the
    locations each one covers."""
    grouped: dict[tuple[Term, Term, Term, Term], set[Term]] = {}
    for thing in things(store):
        view = thing_view(store, thing)
        key = (view.subject, view.type311, view.action, view.agency)
        grouped.setdefault(key, set()).add(view.address)
    out = []
    for (subject, type311, action, agency), locations in sorted(grouped.items()):
        out.append(
            ServiceEntry(
                subject=subject,
                subject_label=display_label(store, subject),
                type311=type311,
                action=action,
                agency=agency,
                locations=tuple(sorted(locations)),
            )
        )
    return out
