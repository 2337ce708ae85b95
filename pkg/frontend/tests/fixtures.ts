/** Hand-built documents in the exact wire shapes, for unit tests that
 * never touch the server.
 */

import type {
  ContactDocument,
  CreateRequestResponse,
  ErrorEnvelope,
  RequestDocument,
  ResolutionDocument,
  TermRef,
} from "../src/types.js";

const NS = "http://example.org/";

export function ref(name: string, label?: string): TermRef {
  return { iri: NS + name, label: label ?? name };
}

export const GARDENER: ContactDocument = {
  iri: NS + "iiitGardener",
  label: "iiitGardener",
  email: "gardener@iiita.example.edu",
  phone: "+91-532-555-0104",
  governing_body: "IIIT Allahabad",
};

export function sampleRequest(overrides: Partial<RequestDocument> = {}): RequestDocument {
  return {
    id: "SR-0abc12-000001",
    created_at: "2026-08-15T10:00:00.000Z",
    raw_text: "Overgrown Grass near Computer Center III",
    subject: ref("Grass"),
    location: ref("CC3", "ComputerCenter3"),
    type311: ref("Overgrown"),
    agency: ref("iiitGardener"),
    action: ref("Cut"),
    status: "notified",
    reporter: { name: "Pat", contact: "pat@example.edu" },
    history: [
      { at: "2026-08-15T10:00:00.000Z", status: "received", note: "" },
      { at: "2026-08-15T10:00:00.001Z", status: "notified", note: "" },
    ],
    ...overrides,
  };
}

export function sampleResolution(
  overrides: Partial<ResolutionDocument> = {},
): ResolutionDocument {
  return {
    text: "Overgrown Grass near Computer Center III",
    subject: ref("Grass"),
    location: ref("CC3", "ComputerCenter3"),
    reported_type: ref("Overgrown"),
    thing: ref("Thing_Grass_CC3"),
    recorded_type: ref("Overgrown"),
    action: ref("Cut"),
    agency: GARDENER,
    query: "SELECT * WHERE{ ?thing a ?c . }",
    note: "",
    ...overrides,
  };
}

export function sampleResponse(
  overrides: Partial<CreateRequestResponse> = {},
): CreateRequestResponse {
  return { request: sampleRequest(), resolution: sampleResolution(), ...overrides };
}

export const MISSING_SUBJECT: ErrorEnvelope = {
  http_status: 422,
  code: "MISSING_SUBJECT",
  message: "the complaint names no known subject",
  candidates: [ref("Grass"), ref("StreetLight", "Street Light")],
};

export const AMBIGUOUS_SUBJECT: ErrorEnvelope = {
  http_status: 422,
  code: "AMBIGUOUS_SUBJECT",
  message: "the complaint names several subjects",
  candidates: [ref("Grass"), ref("Tree")],
};

export const PARSE_ERROR: ErrorEnvelope = {
  http_status: 400,
  code: "PARSE_ERROR",
  message: "the query could not be parsed",
  diagnostics: [{ line: 1, column: 8, message: "expected SELECT", severity: "error" }],
};

export const ILLEGAL_TRANSITION: ErrorEnvelope = {
  http_status: 409,
  code: "ILLEGAL_TRANSITION",
  message: "cannot move resolved to in_progress; allowed: none",
};

export const UNAUTHORIZED: ErrorEnvelope = {
  http_status: 401,
  code: "UNAUTHORIZED",
  message: "status changes need the agency secret",
};

export const UNKNOWN_REQUEST: ErrorEnvelope = {
  http_status: 404,
  code: "UNKNOWN_REQUEST",
  message: "no request SR-ffffff-000009",
};
