"""Parser and evaluator for a basic-graph-pattern query subset.

Grammar: PREFIX declarations, SELECT with '*' or an explicit variable
list, and a WHERE block of triple patterns separated by '.'.  The '.'
after the final pattern may be left out.  Keywords are matched without
regard to case and 'WHERE{' needs no space before the brace.

Evaluation joins patterns left to right against a frozen TripleStore
and keeps bag semantics: a row appears once per distinct way of
deriving it, so duplicate rows are preserved.  Rows come back sorted,
which makes results reproducible for a fixed store.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import ParseDiagnostic, ParseError
from .rdf import RDF_TYPE, Binding, PatternTerm, Term, TriplePattern, TripleStore, Var, iri, literal
from .ttl import PrefixMap, Scanner, Token, _ScanError, format_term


@dataclass(frozen=True, slots=True)
class QueryAst:
    """A parsed query.  projection None means SELECT *."""

    prefixes: PrefixMap
    projection: tuple[str, ...] | None
    where: tuple[TriplePattern, ...]


@dataclass(frozen=True, slots=True)
class ResultTable:
    """Query solutions as a sorted bag of rows over named columns."""

    columns: tuple[str, ...]
    rows: tuple[tuple[Term, ...], ...]

    def __len__(self) -> int:
        return len(self.rows)


class _QueryParser:
    def __init__(self, text: str):
        self.scanner = Scanner(text)
        self.diagnostics: list[ParseDiagnostic] = []

    def _next(self) -> Token:
        return self.scanner.next_token()

    def _fail(self, tok: Token, message: str) -> None:
        raise _ScanError(ParseDiagnostic(tok.line, tok.column, message))

    def _is_word(self, tok: Token, word: str) -> bool:
        return tok.type == "word" and str(tok.value).lower() == word

    def parse(self) -> QueryAst | None:
        try:
            return self._query()
        except _ScanError as e:
            self.diagnostics.append(e.diagnostic)
            return None

    def _query(self) -> QueryAst | None:
        prefixes = PrefixMap()
        tok = self._next()
        while self._is_word(tok, "prefix"):
            name = self._next()
            if name.type != "pname" or name.value[1] != "":
                self._fail(name, "expected a 'label:' name after PREFIX")
            ns = self._next()
            if ns.type != "iriref":
                self._fail(ns, "expected a namespace IRI after the prefix label")
            prefixes.bind(name.value[0], ns.value)
            tok = self._next()

        if not self._is_word(tok, "select"):
            self._fail(tok, "expected SELECT")
        projection_tokens: list[Token] | None
        tok = self._next()
        if tok.type == "punct" and tok.value == "*":
            projection_tokens = None
            tok = self._next()
        else:
            projection_tokens = []
            while tok.type == "var":
                projection_tokens.append(tok)
                tok = self._next()
            if not projection_tokens:
                self._fail(tok, "expected '*' or at least one ?variable after SELECT")

        if not self._is_word(tok, "where"):
            self._fail(tok, "expected WHERE")
        where_tok = self._next()
        if not (where_tok.type == "punct" and where_tok.value == "{"):
            self._fail(where_tok, "expected '{' after WHERE")

        patterns: list[TriplePattern] = []
        tok = self._next()
        while not (tok.type == "punct" and tok.value == "}"):
            s = self._pattern_term(tok, prefixes, "subject")
            p = self._pattern_term(self._next(), prefixes, "predicate")
            o = self._pattern_term(self._next(), prefixes, "object")
            patterns.append(TriplePattern(s, p, o))
            tok = self._next()
            if tok.type == "punct" and tok.value == ".":
                tok = self._next()
            elif not (tok.type == "punct" and tok.value == "}"):
                self._fail(tok, "expected '.' or '}' after a triple pattern")

        trailer = self._next()
        if trailer.type != "eof":
            self._fail(trailer, "unexpected content after '}'")

        if not patterns:
            self.diagnostics.append(
                ParseDiagnostic(where_tok.line, where_tok.column, "WHERE block contains no triple patterns")
            )
        pattern_vars = {name for pat in patterns for name in pat.variables()}
        projection: tuple[str, ...] | None = None
        if projection_tokens is not None:
            seen: set[str] = set()
            names: list[str] = []
            for vt in projection_tokens:
                name = str(vt.value)
                if name in seen:
                    self.diagnostics.append(
                        ParseDiagnostic(vt.line, vt.column, f"duplicate variable ?{name} in SELECT")
                    )
                    continue
                seen.add(name)
                names.append(name)
                if name not in pattern_vars:
                    self.diagnostics.append(
                        ParseDiagnostic(vt.line, vt.column, f"?{name} is selected but never used in WHERE")
                    )
            projection = tuple(names)
        if self.diagnostics:
            return None
        return QueryAst(prefixes=prefixes, projection=projection, where=tuple(patterns))

    def _pattern_term(self, tok: Token, prefixes: PrefixMap, role: str) -> PatternTerm:
        if tok.type == "var":
            return Var(str(tok.value))
        if tok.type == "iriref":
            return iri(str(tok.value))
        if tok.type == "pname":
            label, local = tok.value
            value = prefixes.resolve(label, local)
            if value is None:
                self._fail(tok, f"unknown prefix '{label}:'")
            return iri(value)
        if tok.type == "word" and tok.value == "a":
            if role != "predicate":
                self._fail(tok, f"'a' is only allowed as a predicate, not as {role}")
            return RDF_TYPE
        if tok.type == "string":
            if role != "object":
                self._fail(tok, f"a literal cannot be used as {role}")
            return literal(str(tok.value))
        self._fail(tok, f"expected a ?variable or an IRI as {role}")
        raise AssertionError("unreachable")


def parse_query(text: str) -> QueryAst:
    """Parse a query, raising ParseError with diagnostics on any flaw."""
    parser = _QueryParser(text)
    ast = parser.parse()
    if parser.diagnostics or ast is None:
        raise ParseError(parser.diagnostics)
    return ast


def substitute(pattern: TriplePattern, binding: Binding) -> TriplePattern:
    """Replace every variable the binding covers with its term."""

    def one(p: PatternTerm) -> PatternTerm:
        if isinstance(p, Var) and p.name in binding:
            return binding[p.name]
        return p

    return TriplePattern(one(pattern.subject), one(pattern.predicate), one(pattern.object))


def _star_columns(patterns: tuple[TriplePattern, ...]) -> tuple[str, ...]:
    cols: list[str] = []
    for pat in patterns:
        for name in pat.variables():
            if name not in cols:
                cols.append(name)
    return tuple(cols)


def evaluate(query: QueryAst, store: TripleStore) -> ResultTable:
    """Join the WHERE patterns left to right and project the columns."""
    if not store.frozen:
        raise ValueError("store must be frozen before evaluation")
    bindings: list[Binding] = [{}]
    for pattern in query.where:
        extended: list[Binding] = []
        for b in bindings:
            grounded = substitute(pattern, b)
            for _, extra in store.match(grounded):
                merged = dict(b)
                merged.update(extra)
                extended.append(merged)
        bindings = extended
        if not bindings:
            break
    columns = query.projection if query.projection is not None else _star_columns(query.where)
    rows = sorted(tuple(b[c] for c in columns) for b in bindings)
    return ResultTable(columns=columns, rows=tuple(rows))


def run_query(store: TripleStore, text: str) -> ResultTable:
    return evaluate(parse_query(text), store)


def format_query(ast: QueryAst, indent: str = "  ") -> str:
    """Canonical text for an AST; parse_query(format_query(q)) == q."""
    lines = [f"PREFIX {label}: <{ns}>" for label, ns in ast.prefixes.items()]
    if ast.projection is None:
        head = "SELECT *"
    else:
        head = "SELECT " + " ".join(f"?{v}" for v in ast.projection)
    lines.append(head)
    lines.append("WHERE {")
    for pat in ast.where:
        parts = []
        for role, p in zip(("subject", "predicate", "object"), pat.positions()):
            if isinstance(p, Var):
                parts.append(f"?{p.name}")
            elif role == "predicate" and p == RDF_TYPE:
                parts.append("a")
            else:
                parts.append(format_term(p, ast.prefixes))
        lines.append(indent + " ".join(parts) + " .")
    lines.append("}")
    return "\n".join(lines) + "\n"
