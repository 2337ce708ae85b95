"""Reader and writer for a small Turtle subset.

Supported syntax: @prefix declarations, <absolute IRIs>, prefixed
names, the 'a' keyword, quoted string literals with \\" \\\\ \\n \\r \\t
escapes, ';' predicate lists, ',' object lists and '#' comments.  No
blank nodes, collections, numeric literals, datatypes or language tags.

Parsing is all or nothing: any problem raises ParseError carrying one
positioned diagnostic per offence.  The reader recovers at statement
boundaries so a single bad statement does not mask later ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import ParseDiagnostic, ParseError
from .rdf import RDF_TYPE, Term, Triple, iri, literal

_PNAME_LABEL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")
_PNAME_LOCAL_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_-]*\Z")

# Give up after this many diagnostics; a corrupt file rarely has more
# than a handful of genuine problems past the first.
_MAX_DIAGNOSTICS = 25

_STRING_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


class PrefixMap:
    """Mutable mapping from prefix labels to namespace IRIs."""

    __slots__ = ("_map",)

    def __init__(self, bindings: dict[str, str] | None = None):
        self._map: dict[str, str] = {}
        for label, ns in (bindings or {}).items():
            self.bind(label, ns)

    def bind(self, label: str, namespace: str) -> None:
        if label and not _PNAME_LABEL_RE.match(label):
            raise ValueError(f"illegal prefix label {label!r}")
        iri(namespace)  # reuses IRI character validation
        self._map[label] = namespace

    def resolve(self, label: str, local: str = "") -> str | None:
        ns = self._map.get(label)
        return None if ns is None else ns + local

    def items(self) -> list[tuple[str, str]]:
        return sorted(self._map.items())

    def copy(self) -> "PrefixMap":
        return PrefixMap(dict(self._map))

    def shrink(self, iri_value: str) -> tuple[str, str] | None:
        """Longest-namespace prefixed form of an IRI, or None.

        The remainder must be a writable local name, otherwise the IRI
        cannot be abbreviated without changing its meaning.
        """
        best: tuple[str, str, str] | None = None
        for label, ns in self._map.items():
            if not iri_value.startswith(ns):
                continue
            local = iri_value[len(ns):]
            if local and not _PNAME_LOCAL_RE.match(local):
                continue
            if best is None or len(ns) > len(best[1]) or (len(ns) == len(best[1]) and label < best[0]):
                best = (label, ns, local)
        return (best[0], best[2]) if best else None

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, label: str) -> bool:
        return label in self._map

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrefixMap) and self._map == other._map

    def __repr__(self) -> str:
        return f"PrefixMap({self._map!r})"


@dataclass(frozen=True, slots=True)
class Token:
    type: str  # iriref | pname | word | string | var | punct | directive | eof
    value: object
    line: int
    column: int


class _ScanError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


def _is_name_start(c: str) -> bool:
    return c.isascii() and c.isalpha()


def _is_label_char(c: str) -> bool:
    return bool(c) and c.isascii() and (c.isalnum() or c in "_-")


def _is_local_start(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "_")


class Scanner:
    """Shared lexer for the Turtle reader and the query parser.

    Emits a superset of both token languages; each parser rejects the
    types its grammar has no use for.  Control characters other than
    tab and newline are rejected in every lexical context, so a single
    corrupted byte is reported at exactly its own line and column.
    """

    __slots__ = ("text", "pos", "line", "col")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _advance(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def _error(self, line: int, col: int, message: str) -> None:
        raise _ScanError(ParseDiagnostic(line, col, message))

    def _error_here(self, message: str) -> None:
        self._error(self.line, self.col, message)

    def _reject_control_here(self) -> None:
        # eager check after a name run: a control character is illegal
        # in every context, and reporting it now (instead of letting
        # the parser reject the truncated token at an earlier column)
        # keeps diagnostics pointing at the corrupted byte itself
        c = self._peek()
        if c and ord(c) < 32 and c not in "\t\r\n":
            self._error_here(f"control character {c!r}")

    def _skip_trivia(self) -> None:
        while True:
            c = self._peek()
            if c and c in " \t\r\n":
                self._advance()
            elif c == "#":
                self._advance()
                while True:
                    d = self._peek()
                    if d in ("", "\n"):
                        break
                    if ord(d) < 32 and d not in "\t\r":
                        self._error_here(f"control character {d!r} in comment")
                    self._advance()
            else:
                return

    def next_token(self) -> Token:
        self._skip_trivia()
        line, col = self.line, self.col
        c = self._peek()
        if c == "":
            return Token("eof", "", line, col)
        if c in ".;,{}*":
            self._advance()
            return Token("punct", c, line, col)
        if c == "<":
            return self._scan_iriref()
        if c == '"':
            return self._scan_string()
        if c == "?":
            return self._scan_var()
        if c == "@":
            return self._scan_directive()
        if c == ":" or _is_name_start(c):
            return self._scan_name()
        self._error(line, col, f"unexpected character {c!r}")
        raise AssertionError("unreachable")

    def _scan_iriref(self) -> Token:
        line, col = self.line, self.col
        self._advance()  # <
        chars: list[str] = []
        while True:
            c = self._peek()
            if c in ("", "\n"):
                self._error_here("unterminated IRI")
            if c == ">":
                self._advance()
                break
            if ord(c) < 32 or c in ' <"{}|^`\\':
                self._error_here(f"illegal character {c!r} in IRI")
            chars.append(self._advance())
        value = "".join(chars)
        if ":" not in value:
            self._error(line, col, f"IRI <{value}> is not absolute")
        return Token("iriref", value, line, col)

    def _scan_string(self) -> Token:
        line, col = self.line, self.col
        self._advance()  # "
        chars: list[str] = []
        while True:
            c = self._peek()
            if c in ("", "\n"):
                self._error_here("unterminated string literal")
            if c == '"':
                self._advance()
                return Token("string", "".join(chars), line, col)
            if c == "\\":
                self._advance()
                e = self._peek()
                if e not in _STRING_ESCAPES:
                    self._error_here(f"unsupported escape sequence '\\{e}'")
                chars.append(_STRING_ESCAPES[e])
                self._advance()
            elif ord(c) < 32 and c != "\t":
                self._error_here(f"control character {c!r} in string literal")
            else:
                chars.append(self._advance())

    def _scan_var(self) -> Token:
        line, col = self.line, self.col
        self._advance()  # ?
        c = self._peek()
        if not (_is_name_start(c) or c == "_"):
            self._error_here("expected a variable name after '?'")
        chars = [self._advance()]
        while _is_local_start(self._peek()):
            chars.append(self._advance())
        self._reject_control_here()
        return Token("var", "".join(chars), line, col)

    def _scan_directive(self) -> Token:
        line, col = self.line, self.col
        self._advance()  # @
        chars: list[str] = []
        while _is_name_start(self._peek()):
            chars.append(self._advance())
        self._reject_control_here()
        word = "".join(chars)
        if word != "prefix":
            self._error(line, col, f"unknown directive '@{word}'")
        return Token("directive", "prefix", line, col)

    def _scan_name(self) -> Token:
        line, col = self.line, self.col
        label = ""
        if self._peek() != ":":
            chars = [self._advance()]
            while _is_label_char(self._peek()):
                chars.append(self._advance())
            self._reject_control_here()
            label = "".join(chars)
            if self._peek() != ":":
                return Token("word", label, line, col)
        self._advance()  # :
        local = ""
        if _is_local_start(self._peek()):
            chars = [self._advance()]
            while _is_label_char(self._peek()):
                chars.append(self._advance())
            local = "".join(chars)
        self._reject_control_here()
        return Token("pname", (label, local), line, col)


class _TurtleParser:
    def __init__(self, text: str, base_prefixes: PrefixMap | None):
        self.scanner = Scanner(text)
        self.prefixes = base_prefixes.copy() if base_prefixes else PrefixMap()
        self.triples: list[Triple] = []
        self.diagnostics: list[ParseDiagnostic] = []

    def parse(self) -> None:
        while len(self.diagnostics) < _MAX_DIAGNOSTICS:
            try:
                tok = self.scanner.next_token()
                if tok.type == "eof":
                    return
                if tok.type == "directive":
                    self._prefix_declaration()
                else:
                    self._statement(tok)
            except _ScanError as e:
                self.diagnostics.append(e.diagnostic)
                self._recover()

    def _next(self) -> Token:
        return self.scanner.next_token()

    def _fail(self, tok: Token, message: str) -> None:
        raise _ScanError(ParseDiagnostic(tok.line, tok.column, message))

    def _prefix_declaration(self) -> None:
        tok = self._next()
        if tok.type != "pname" or tok.value[1] != "":
            self._fail(tok, "expected a 'label:' name after @prefix")
        label = tok.value[0]
        tok = self._next()
        if tok.type != "iriref":
            self._fail(tok, "expected a namespace IRI in @prefix")
        namespace = tok.value
        tok = self._next()
        if not (tok.type == "punct" and tok.value == "."):
            self._fail(tok, "expected '.' after @prefix declaration")
        self.prefixes.bind(label, namespace)

    def _statement(self, first: Token) -> None:
        subject = self._resource(first, "subject")
        pending: list[Triple] = []
        verb_tok = self._next()
        while True:
            predicate = self._verb(verb_tok)
            while True:
                obj_tok = self._next()
                pending.append(Triple(subject, predicate, self._object(obj_tok)))
                sep = self._next()
                if not (sep.type == "punct" and sep.value == ","):
                    break
            if sep.type == "punct" and sep.value == ".":
                break
            if sep.type == "punct" and sep.value == ";":
                nxt = self._next()
                # a trailing ';' directly before '.' is tolerated
                if nxt.type == "punct" and nxt.value == ".":
                    break
                verb_tok = nxt
                continue
            self._fail(sep, "expected ',', ';' or '.' after object")
        self.triples.extend(pending)

    def _resource(self, tok: Token, role: str) -> Term:
        if tok.type == "iriref":
            return iri(tok.value)
        if tok.type == "pname":
            return self._resolve(tok)
        if tok.type == "word" and tok.value == "a":
            self._fail(tok, f"'a' is only allowed as a predicate, not as {role}")
        self._fail(tok, f"expected an IRI as {role}")
        raise AssertionError("unreachable")

    def _verb(self, tok: Token) -> Term:
        if tok.type == "word" and tok.value == "a":
            return RDF_TYPE
        return self._resource(tok, "predicate")

    def _object(self, tok: Token) -> Term:
        if tok.type == "string":
            return literal(tok.value)
        return self._resource(tok, "object")

    def _resolve(self, tok: Token) -> Term:
        label, local = tok.value
        value = self.prefixes.resolve(label, local)
        if value is None:
            self._fail(tok, f"unknown prefix '{label}:'")
        return iri(value)

    def _recover(self) -> None:
        """Skip ahead past the next statement terminator."""
        sc = self.scanner
        while True:
            c = sc._peek()
            if c == "":
                return
            sc._advance()
            if c == ".":
                return
            if c == '"':
                while True:
                    d = sc._peek()
                    if d in ("", "\n"):
                        break
                    sc._advance()
                    if d == "\\" and sc._peek() not in ("", "\n"):
                        sc._advance()
                    elif d == '"':
                        break
            elif c == "<":
                # a dot inside <...> is not a statement terminator
                while sc._peek() not in ("", "\n", ">"):
                    sc._advance()
            elif c == "#":
                while sc._peek() not in ("", "\n"):
                    sc._advance()


def parse_document(text: str, base_prefixes: PrefixMap | None = None) -> tuple[list[Triple], PrefixMap]:
    """Parse a document into triples plus the prefix map it declared.

    Raises ParseError with every collected diagnostic if anything in
    the document is malformed; no partial result escapes.
    """
    parser = _TurtleParser(text, base_prefixes)
    parser.parse()
    if parser.diagnostics:
        raise ParseError(parser.diagnostics)
    return parser.triples, parser.prefixes


def parse_file(path) -> tuple[list[Triple], PrefixMap]:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def format_literal(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return f'"{out}"'


def format_iri(term: Term, prefixes: PrefixMap) -> str:
    short = prefixes.shrink(term.value)
    if short is not None:
        return f"{short[0]}:{short[1]}"
    return f"<{term.value}>"


def format_term(term: Term, prefixes: PrefixMap) -> str:
    if term.is_iri:
        return format_iri(term, prefixes)
    return format_literal(term.value)


def serialize(triples, prefixes: PrefixMap | None = None) -> str:
    """Canonical text for a set of triples: sorted, one per line.

    With no prefixes every IRI is written in full.  For any prefix map,
    parse_document(serialize(ts, pm)) yields exactly the same triple
    set for any triples whose literals stay within the escapable
    character repertoire.
    """
    prefixes = prefixes if prefixes is not None else PrefixMap({})
    lines = [f"@prefix {label}: <{ns}> ." for label, ns in prefixes.items()]
    if lines:
        lines.append("")
    for t in sorted(set(triples)):
        pred = "a" if t.predicate == RDF_TYPE else format_iri(t.predicate, prefixes)
        lines.append(f"{format_term(t.subject, prefixes)} {pred} {format_term(t.object, prefixes)} .")
    return "\n".join(lines) + "\n"
