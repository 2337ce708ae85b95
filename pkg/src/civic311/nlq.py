"""From complaint text to an answer: the full language pipeline.

Stages: lowercase and split the text, drop stopwords, reduce each
remaining token to a lemma, then greedily match the longest alias
phrases against a dictionary canonicalized with the same pipeline.
Matched
mentions fill a subject and a location slot; those two slots
instantiate a fixed query template whose single answer row names the
thing, the agency responsible for it and the remedial action.

Every way this can fail is a typed error, never a silent guess:
missing or ambiguous slots, no covering service, conflicting data.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .ontology import BASE_PREFIXES, ContactCard, ThingView, agency_contact, display_label, thing_view
from .rdf import Term, TripleStore, iri
from .sparql import run_query
from .ttl import format_iri

SUBJECT = "subject"
LOCATION = "location"
TYPE = "type311"
CATEGORIES = (SUBJECT, LOCATION, TYPE)


class ComplaintError(Exception):
    """Base for every typed failure of the pipeline."""

    code = "complaint_error"

    def __init__(self, message: str, candidates: tuple[Term, ...] = ()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class MissingSubject(ComplaintError):
    code = "missing_subject"


class MissingLocation(ComplaintError):
    code = "missing_location"


class AmbiguousSubject(ComplaintError):
    code = "ambiguous_subject"


class AmbiguousLocation(ComplaintError):
    code = "ambiguous_location"


class NoMatchingService(ComplaintError):
    code = "no_matching_service"


class MultipleMatches(ComplaintError):
    code = "multiple_matches"


def normalize(text: str) -> list[str]:
    """Lowercase tokens split on any run of non-alphanumerics."""
    tokens: list[str] = []
    current: list[str] = []
    for c in text.lower():
        if c.isalnum():
            current.append(c)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


# Suffix rules tried in order; the first applicable one wins and no
# second rule is applied.  Entries: (suffix, replacement, minimum
# token length, suffix that blocks the rule).
_SUFFIX_RULES = (
    ("ies", "y", 5, ""),
    ("es", "", 5, ""),
    ("s", "", 4, "ss"),
    ("ing", "", 6, ""),
    ("ed", "", 5, ""),
)


def lemmatize(token: str, exceptions: dict[str, str]) -> str:
    """Strip one inflection suffix, exceptions table first."""
    hit = exceptions.get(token)
    if hit is not None:
        return hit
    for suffix, replacement, min_len, blocker in _SUFFIX_RULES:
        if len(token) >= min_len and token.endswith(suffix):
            if blocker and token.endswith(blocker):
                continue
            return token[: len(token) - len(suffix)] + replacement
    return token


@dataclass(frozen=True, slots=True)
class Mention:
    """One alias phrase found in the text.

    start and end index into the canonical (post-stopword) token
    sequence; end is exclusive.
    """

    tokens: tuple[str, ...]
    category: str
    target: Term
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class SlotFill:
    """The slots a complaint must pin down before it can be answered."""

    subject: Term
    location: Term
    type311: Term | None
    mentions: tuple[Mention, ...]
    note: str = ""


class AliasDictionary:
    """Alias phrases mapped to ontology terms, plus the token pipeline.

    The alias table is canonicalized with the same normalize, lemmatize
    and stopword stages applied to complaint text, so surface variation
    on either side cancels out.
    """

    def __init__(
        self,
        aliases: "list[tuple[str, str, str]]",
        stopwords: set[str],
        lemma_exceptions: dict[str, str],
    ):
        self.stopwords = frozenset(stopwords)
        self.lemma_exceptions = dict(lemma_exceptions)
        self._table: dict[tuple[str, ...], tuple[str, Term]] = {}
        self._max_phrase = 1
        for phrase, category, target_iri in aliases:
            if category not in CATEGORIES:
                raise ValueError(f"unknown alias category {category!r} for {phrase!r}")
            key = tuple(self.canonical_tokens(phrase))
            if not key:
                raise ValueError(f"alias {phrase!r} reduces to nothing after canonicalization")
            target = iri(target_iri)
            existing = self._table.get(key)
            if existing is not None and existing != (category, target):
                raise ValueError(f"alias {phrase!r} collides with an entry for {existing[1].value}")
            self._table[key] = (category, target)
            self._max_phrase = max(self._max_phrase, len(key))

    def canonical_tokens(self, text: str) -> list[str]:
        """normalize, drop stopwords (surface forms), then lemmatize."""
        return [
            lemmatize(t, self.lemma_exceptions)
            for t in normalize(text)
            if t not in self.stopwords
        ]

    def known_targets(self, category: str) -> tuple[Term, ...]:
        return tuple(sorted({t for c, t in self._table.values() if c == category}))

    def find_mentions(self, text: str) -> list[Mention]:
        """Greedy longest match, left to right, no overlaps."""
        tokens = self.canonical_tokens(text)
        mentions: list[Mention] = []
        i = 0
        n = len(tokens)
        while i < n:
            for length in range(min(self._max_phrase, n - i), 0, -1):
                key = tuple(tokens[i : i + length])
                hit = self._table.get(key)
                if hit is not None:
                    mentions.append(Mention(key, hit[0], hit[1], i, i + length))
                    i += length
                    break
            else:
                i += 1
        return mentions

    @classmethod
    def from_dir(cls, dirpath) -> "AliasDictionary":
        """Load aliases.tsv with its sibling stopwords.txt and
        lemma_exceptions.tsv from one directory."""
        root = Path(dirpath)
        aliases = _read_alias_rows((root / "aliases.tsv").read_text(encoding="utf-8"))
        stopwords = _read_word_list((root / "stopwords.txt").read_text(encoding="utf-8"))
        exceptions = _read_exception_rows((root / "lemma_exceptions.tsv").read_text(encoding="utf-8"))
        return cls(aliases, stopwords, exceptions)


def _data_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _read_alias_rows(text: str) -> list[tuple[str, str, str]]:
    rows = []
    for line in _data_lines(text):
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"alias row needs 3 tab-separated fields: {line!r}")
        rows.append((parts[0], parts[1], parts[2]))
    return rows


def _read_word_list(text: str) -> set[str]:
    return set(_data_lines(text))


def _read_exception_rows(text: str) -> dict[str, str]:
    out = {}
    for line in _data_lines(text):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"lemma exception row needs 2 tab-separated fields: {line!r}")
        out[parts[0]] = parts[1]
    return out


def load_default_dictionary() -> AliasDictionary:
    return AliasDictionary.from_dir(resources.files(__package__) / "fixtures")


def extract_slots(dictionary: AliasDictionary, text: str) -> SlotFill:
    """Fill subject and location from the text's mentions.

    Zero or several distinct candidates for either slot raise the
    matching typed error; the type slot is advisory and never blocks.
    """
    mentions = tuple(dictionary.find_mentions(text))
    by_category: dict[str, list[Term]] = {c: [] for c in CATEGORIES}
    for m in mentions:
        if m.target not in by_category[m.category]:
            by_category[m.category].append(m.target)

    subjects = by_category[SUBJECT]
    locations = by_category[LOCATION]
    types = by_category[TYPE]
    if not subjects:
        raise MissingSubject("no known subject is mentioned", dictionary.known_targets(SUBJECT))
    if len(subjects) > 1:
        raise AmbiguousSubject("more than one subject is mentioned", tuple(sorted(subjects)))
    if not locations:
        raise MissingLocation("no known location is mentioned", dictionary.known_targets(LOCATION))
    if len(locations) > 1:
        raise AmbiguousLocation("more than one location is mentioned", tuple(sorted(locations)))

    note = ""
    type311 = types[0] if len(types) == 1 else None
    if len(types) > 1:
        note = "several condition types mentioned; using the recorded one"
    return SlotFill(
        subject=subjects[0],
        location=locations[0],
        type311=type311,
        mentions=mentions,
        note=note,
    )


def build_cq1(location: Term, subject: Term) -> str:
    """Who handles this subject at this location, and what do they do."""
    loc = format_iri(location, BASE_PREFIXES)
    subj = format_iri(subject, BASE_PREFIXES)
    return (
        f"PREFIX O3110: <{BASE_PREFIXES.resolve('O3110')}>\n"
        "SELECT * WHERE{\n"
        f"?thing O3110:hasAddress {loc}.\n"
        f"?thing O3110:has311Subject {subj}.\n"
        "?thing O3110:isHandledBy ?authority.\n"
        "?thing O3110:need311Action ?action\n"
        "}\n"
    )


def build_cq2(agency: Term) -> str:
    """What does this agency deal with: every (subject, type) it handles."""
    ag = format_iri(agency, BASE_PREFIXES)
    return (
        f"PREFIX O3110: <{BASE_PREFIXES.resolve('O3110')}>\n"
        "SELECT ?subject ?type\n"
        "WHERE {\n"
        "?thing O3110:has311Subject ?subject.\n"
        "?thing O3110:has311Type ?type.\n"
        f"?thing O3110:isHandledBy {ag}.\n"
        "}\n"
    )


def build_cq3(location: Term) -> str:
    """Who serves this location: every (agency, subject) pair there."""
    loc = format_iri(location, BASE_PREFIXES)
    return (
        f"PREFIX O3110: <{BASE_PREFIXES.resolve('O3110')}>\n"
        "SELECT ?agency ?subject\n"
        "WHERE {\n"
        f"?thing O3110:hasAddress {loc}.\n"
        "?thing O3110:isHandledBy ?agency.\n"
        "?thing O3110:has311Subject ?subject\n"
        "}\n"
    )


def build_cq4(subject: Term) -> str:
    """Where is this subject handled, and by whom."""
    subj = format_iri(subject, BASE_PREFIXES)
    return (
        f"PREFIX O3110: <{BASE_PREFIXES.resolve('O3110')}>\n"
        "SELECT ?agency ?location\n"
        "WHERE {\n"
        "?thing O3110:hasAddress ?location.\n"
        "?thing O3110:isHandledBy ?agency.\n"
        f"?thing O3110:has311Subject {subj}\n"
        "}\n"
    )


@dataclass(frozen=True, slots=True)
class Resolution:
    """A fully answered complaint."""

    text: str
    slots: SlotFill
    query: str
    view: ThingView
    contact: ContactCard
    note: str = ""


def answer_complaint(store: TripleStore, dictionary: AliasDictionary, text: str) -> Resolution:
    """Resolve complaint text to the thing, agency and action for it."""
    slots = extract_slots(dictionary, text)
    query = build_cq1(slots.location, slots.subject)
    table = run_query(store, query)
    if not table.rows:
        raise NoMatchingService(
            f"no service covers {display_label(store, slots.subject)}"
            f" at {display_label(store, slots.location)}"
        )
    things = {row[table.columns.index("thing")] for row in table.rows}
    if len(table.rows) > 1 or len(things) > 1:
        raise MultipleMatches(
            f"{len(table.rows)} services cover {display_label(store, slots.subject)}"
            f" at {display_label(store, slots.location)}; the data needs repair"
        )
    view = thing_view(store, next(iter(things)))
    notes = [slots.note] if slots.note else []
    if slots.type311 is not None and slots.type311 != view.type311:
        notes.append(
            f"reported as {display_label(store, slots.type311)},"
            f" recorded as {display_label(store, view.type311)}"
        )
    return Resolution(
        text=text,
        slots=slots,
        query=query,
        view=view,
        contact=agency_contact(store, view.agency),
        note="; ".join(notes),
    )
