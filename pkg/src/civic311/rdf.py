"""In-memory RDF triple store with three permutation indexes.

Terms are absolute IRIs or plain string literals (no datatypes, language
tags or blank nodes -- the instance data needs none of them).  The store
keeps SPO, POS and OSP orderings so every combination of bound positions
in a pattern is answered from the index whose bound prefix is longest.
Iteration is in lexicographic term order, which keeps all downstream
results deterministic for a fixed store.
"""

from __future__ import annotations

from dataclasses import dataclass

IRI = "iri"
LITERAL = "literal"

# Characters that can never appear in an IRI we store.  Whitespace and
# angle brackets would make the Turtle serialization ambiguous.
_IRI_FORBIDDEN = set('<>"{}|^`\\')


class FrozenStoreError(Exception):
    """Raised on any attempt to mutate a frozen store."""


@dataclass(frozen=True, slots=True, order=True)
class Term:
    """One RDF term: an absolute IRI or a plain string literal."""

    kind: str
    value: str

    def __post_init__(self) -> None:
        if self.kind not in (IRI, LITERAL):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.kind == IRI:
            if not self.value:
                raise ValueError("IRI must be non-empty")
            for c in self.value:
                if c.isspace() or ord(c) < 32 or c in _IRI_FORBIDDEN:
                    raise ValueError(f"illegal character {c!r} in IRI {self.value!r}")

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    @property
    def local_name(self) -> str:
        """Text after the final '#' or '/'; literals return their value."""
        if self.kind == LITERAL:
            return self.value
        for sep in ("#", "/"):
            if sep in self.value:
                return self.value.rsplit(sep, 1)[1]
        return self.value

    def __str__(self) -> str:
        return f"<{self.value}>" if self.kind == IRI else f'"{self.value}"'


def iri(value: str) -> Term:
    return Term(IRI, value)


def literal(value: str) -> Term:
    return Term(LITERAL, value)


RDF_TYPE = iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")


@dataclass(frozen=True, slots=True)
class Var:
    """A pattern variable; surface syntax is '?name', stored without the '?'."""

    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("variable name must be non-empty")

    def __str__(self) -> str:
        return "?" + self.name


PatternTerm = Term | Var


@dataclass(frozen=True, slots=True, order=True)
class Triple:
    """One statement.  Subject and predicate are always IRIs."""

    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if not self.subject.is_iri:
            raise ValueError("triple subject must be an IRI")
        if not self.predicate.is_iri:
            raise ValueError("triple predicate must be an IRI")

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """A triple with any position replaced by a variable.

    A pattern with zero variables is a membership test.
    """

    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def positions(self) -> tuple[PatternTerm, PatternTerm, PatternTerm]:
        return (self.subject, self.predicate, self.object)

    def variables(self) -> list[str]:
        """Variable names in subject, predicate, object order, deduplicated."""
        out: list[str] = []
        for p in self.positions():
            if isinstance(p, Var) and p.name not in out:
                out.append(p.name)
        return out


Binding = dict[str, Term]


def unify(pattern: TriplePattern, t: Triple) -> Binding | None:
    """Bindings making the pattern equal to the triple, or None.

    A variable repeated within the pattern must take the same value at
    every occurrence.
    """
    binding: Binding = {}
    for p, v in zip(pattern.positions(), (t.subject, t.predicate, t.object)):
        if isinstance(p, Var):
            seen = binding.get(p.name)
            if seen is None:
                binding[p.name] = v
            elif seen != v:
                return None
        elif p != v:
            return None
    return binding


class TripleStore:
    """Duplicate-free triple set behind SPO, POS and OSP indexes.

    Build phase is single-writer; after freeze() the store is immutable
    and safe to share between any number of concurrent readers.
    """

    __slots__ = ("_triples", "_spo", "_pos", "_osp", "_frozen")

    def __init__(self, triples: "tuple[Triple, ...] | list[Triple] | set[Triple]" = ()):
        self._triples: set[Triple] = set()
        self._spo: dict[Term, dict[Term, set[Term]]] = {}
        self._pos: dict[Term, dict[Term, set[Term]]] = {}
        self._osp: dict[Term, dict[Term, set[Term]]] = {}
        self._frozen = False
        for t in triples:
            self.insert(t)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self):
        return iter(sorted(self._triples))

    def insert(self, t: Triple) -> bool:
        """Add a triple.  True if inserted, False if it was already present."""
        if self._frozen:
            raise FrozenStoreError("store is frozen; no further inserts")
        if t in self._triples:
            return False
        self._triples.add(t)
        self._spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
        self._pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
        self._osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)
        return True

    def freeze(self) -> "TripleStore":
        """Make the store immutable for the rest of its lifetime."""
        self._frozen = True
        return self

    def objects(self, subject: Term, predicate: Term) -> list[Term]:
        return sorted(self._spo.get(subject, {}).get(predicate, ()))

    def subjects(self, predicate: Term, obj: Term) -> list[Term]:
        return sorted(self._pos.get(predicate, {}).get(obj, ()))

    def match(self, pattern: TriplePattern) -> list[tuple[Triple, Binding]]:
        """All triples unifying with the pattern, with their bindings.

        Candidates come from the index with the longest bound prefix;
        unify() then rejects candidates that violate a repeated variable.
        Result order is deterministic (lexicographic) for a fixed store.
        """
        out = []
        for t in self._candidates(pattern):
            b = unify(pattern, t)
            if b is not None:
                out.append((t, b))
        return out

    def _candidates(self, pattern: TriplePattern) -> list[Triple]:
        s, p, o = pattern.subject, pattern.predicate, pattern.object
        sb = isinstance(s, Term)
        pb = isinstance(p, Term)
        ob = isinstance(o, Term)
        # A literal bound in subject or predicate position can never match.
        if (sb and not s.is_iri) or (pb and not p.is_iri):
            return []
        if sb and pb and ob:
            t = Triple(s, p, o)
            return [t] if t in self._triples else []
        if sb and pb:
            objs = self._spo.get(s, {}).get(p, ())
            return [Triple(s, p, obj) for obj in sorted(objs)]
        if pb and ob:
            subs = self._pos.get(p, {}).get(o, ())
            return [Triple(sub, p, o) for sub in sorted(subs)]
        if ob and sb:
            preds = self._osp.get(o, {}).get(s, ())
            return [Triple(s, pred, o) for pred in sorted(preds)]
        if sb:
            by_pred = self._spo.get(s, {})
            return [Triple(s, pred, obj) for pred in sorted(by_pred) for obj in sorted(by_pred[pred])]
        if pb:
            by_obj = self._pos.get(p, {})
            return [Triple(sub, p, obj) for obj in sorted(by_obj) for sub in sorted(by_obj[obj])]
        if ob:
            by_subj = self._osp.get(o, {})
            return [Triple(sub, pred, o) for sub in sorted(by_subj) for pred in sorted(by_subj[sub])]
        return sorted(self._triples)
