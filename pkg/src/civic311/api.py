"""HTTP interface: complaint intake, request tracking, raw queries.

All failures share one error envelope:

    {"error": {"http_status": ..., "code": ..., "message": ...,
               "candidates": [...], "diagnostics": [...]}}

candidates appears on slot errors (what the client could have meant),
diagnostics on query parse errors (line, column, message each).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Header
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import __version__, documents
from .diagnostics import ParseError
from .ledger import (
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
    NoMatchingService,
    answer_complaint,
    load_default_dictionary,
)
from .ontology import AGENCY_CLASS, expand_iri, resolve_fixture
from .rdf import RDF_TYPE, TripleStore
from .sparql import run_query

SECRET_HEADER = "X-Agency-Secret"


@dataclass
class ServiceConfig:
    """Everything the service needs to come up.

    status_secret None leaves status updates unguarded, which suits
    local use; set it to require the X-Agency-Secret header.
    """

    fixture: str = "full"
    dictionary: str | None = None
    ledger_path: str | Path = Path("data/requests.jsonl")
    outbox_dir: str | Path = Path("data/outbox")
    status_secret: str | None = None


class ApiFault(Exception):
    def __init__(
        self,
        http_status: int,
        code: str,
        message: str,
        candidates: list[dict] | None = None,
        diagnostics: list[dict] | None = None,
    ):
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message
        self.candidates = candidates
        self.diagnostics = diagnostics


def _error_response(
    http_status: int,
    code: str,
    message: str,
    candidates: list[dict] | None = None,
    diagnostics: list[dict] | None = None,
) -> JSONResponse:
    error: dict = {"http_status": http_status, "code": code, "message": message}
    if candidates is not None:
        error["candidates"] = candidates
    if diagnostics is not None:
        error["diagnostics"] = diagnostics
    return JSONResponse(status_code=http_status, content={"error": error})


def _complaint_fault(store: TripleStore, e: ComplaintError) -> ApiFault:
    candidates = [documents.term_ref(store, t) for t in e.candidates] or None
    if isinstance(e, NoMatchingService):
        http_status = 404
    elif isinstance(e, MultipleMatches):
        http_status = 500
    else:
        http_status = 422
    return ApiFault(http_status, e.code.upper(), str(e), candidates=candidates)


def _parse_fault(e: ParseError) -> ApiFault:
    diagnostics = [
        {"line": d.line, "column": d.column, "message": d.message, "severity": d.severity}
        for d in e.diagnostics
    ]
    return ApiFault(400, "PARSE_ERROR", "the query could not be parsed", diagnostics=diagnostics)


class ComplaintBody(BaseModel):
    description: str
    reporter_name: str = ""
    reporter_contact: str = ""


class QueryBody(BaseModel):
    text: str


class SparqlBody(BaseModel):
    query: str


class StatusBody(BaseModel):
    status: str
    note: str = ""


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = resolve_fixture(config.fixture)
    if config.dictionary:
        dictionary = AliasDictionary.from_dir(config.dictionary)
    else:
        dictionary = load_default_dictionary()
    ledger = Ledger(config.ledger_path, FileSink(config.outbox_dir))

    app = FastAPI(title="civic311", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ApiFault)
    async def fault_handler(_, exc: ApiFault):
        return _error_response(exc.http_status, exc.code, exc.message, exc.candidates, exc.diagnostics)

    @app.exception_handler(RequestValidationError)
    async def body_validation_handler(_, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = f"{first.get('msg', 'invalid request body')} ({where})" if where else "invalid request body"
        return _error_response(400, "INVALID_REQUEST", message)

    @app.exception_handler(StarletteHTTPException)
    async def http_handler(_, exc: StarletteHTTPException):
        code = {404: "NOT_FOUND", 405: "METHOD_NOT_ALLOWED"}.get(exc.status_code, "HTTP_ERROR")
        return _error_response(exc.status_code, code, str(exc.detail))

    def check_secret(provided: str | None) -> None:
        if config.status_secret is None:
            return
        if provided != config.status_secret:
            raise ApiFault(401, "UNAUTHORIZED", f"missing or wrong {SECRET_HEADER} header")

    def resolve(text: str):
        try:
            return answer_complaint(store, dictionary, text)
        except ComplaintError as e:
            raise _complaint_fault(store, e) from e

    def parse_status(value: str) -> Status:
        try:
            return Status(value)
        except ValueError:
            legal = ", ".join(s.value for s in Status)
            raise ApiFault(400, "INVALID_REQUEST", f"unknown status {value!r}; expected one of: {legal}") from None

    @app.get("/services")
    def get_services():
        return documents.services_document(store)

    @app.get("/agencies")
    def get_agencies():
        return documents.agencies_document(store, store.subjects(RDF_TYPE, AGENCY_CLASS))

    @app.post("/query")
    def post_query(body: QueryBody):
        if not body.text.strip():
            raise ApiFault(400, "INVALID_REQUEST", "text must not be empty")
        return documents.resolution_document(store, resolve(body.text))

    @app.post("/sparql")
    def post_sparql(body: SparqlBody):
        try:
            table = run_query(store, body.query)
        except ParseError as e:
            raise _parse_fault(e) from e
        return documents.result_table_document(store, table)

    @app.post("/requests", status_code=201)
    def post_request(body: ComplaintBody):
        if not body.description.strip():
            raise ApiFault(400, "INVALID_REQUEST", "description must not be empty")
        if not body.reporter_contact.strip():
            raise ApiFault(400, "INVALID_REQUEST", "reporter_contact must not be empty")
        res = resolve(body.description)
        notification = documents.build_notification(store, res, body.reporter_name, body.reporter_contact)
        try:
            request = ledger.create_request(
                raw_text=body.description,
                subject=res.view.subject.value,
                location=res.view.address.value,
                type311=res.view.type311.value,
                agency=res.view.agency.value,
                action=res.view.action.value,
                reporter=Reporter(name=body.reporter_name, contact=body.reporter_contact),
                notification=notification,
            )
        except StorageFailure as e:
            raise ApiFault(500, "STORAGE_FAILURE", str(e)) from e
        return {
            "request": documents.request_document(store, request),
            "resolution": documents.resolution_document(store, res),
        }

    @app.get("/requests")
    def get_requests(
        status: str | None = None,
        agency: str | None = None,
        location: str | None = None,
        subject: str | None = None,
    ):
        parsed_status = parse_status(status) if status is not None else None
        rows = ledger.list_requests(
            status=parsed_status,
            agency=expand_iri(agency) if agency else None,
            location=expand_iri(location) if location else None,
            subject=expand_iri(subject) if subject else None,
        )
        return {"requests": [documents.request_document(store, r) for r in rows]}

    @app.get("/requests/{request_id}")
    def get_request(request_id: str):
        try:
            request = ledger.get(request_id)
        except UnknownRequest as e:
            raise ApiFault(404, "UNKNOWN_REQUEST", str(e)) from e
        return documents.request_document(store, request)

    @app.patch("/requests/{request_id}/status")
    def patch_status(
        request_id: str,
        body: StatusBody,
        x_agency_secret: str | None = Header(default=None, alias=SECRET_HEADER),
    ):
        check_secret(x_agency_secret)
        target = parse_status(body.status)
        try:
            request = ledger.set_status(request_id, target, note=body.note)
        except UnknownRequest as e:
            raise ApiFault(404, "UNKNOWN_REQUEST", str(e)) from e
        except IllegalTransition as e:
            raise ApiFault(409, "ILLEGAL_TRANSITION", str(e)) from e
        except StorageFailure as e:
            raise ApiFault(500, "STORAGE_FAILURE", str(e)) from e
        return documents.request_document(store, request)

    return app
