/** JSON document shapes served by the civic311 HTTP API.
 *
 * Every IRI arrives with a display label beside it; the client never
 * splits IRIs or derives labels itself.
 */

export interface TermRef {
  iri: string;
  label: string;
}

export interface ContactDocument {
  iri: string;
  label: string;
  email: string | null;
  phone: string | null;
  governing_body: string | null;
}

export interface CellDocument {
  kind: "iri" | "literal";
  value: string;
  label: string;
}

export interface ResultTableDocument {
  columns: string[];
  rows: Array<Record<string, CellDocument>>;
}

export interface ServiceEntryDocument {
  subject: TermRef;
  type311: TermRef;
  action: TermRef;
  agency: ContactDocument;
  locations: TermRef[];
}

export interface ServicesDocument {
  services: ServiceEntryDocument[];
}

export interface AgenciesDocument {
  agencies: ContactDocument[];
}

export interface ResolutionDocument {
  text: string;
  subject: TermRef;
  location: TermRef;
  reported_type: TermRef | null;
  thing: TermRef;
  recorded_type: TermRef;
  action: TermRef;
  agency: ContactDocument;
  query: string;
  note: string;
}

export interface HistoryEntryDocument {
  at: string;
  status: string;
  note: string;
}

export interface RequestDocument {
  id: string;
  created_at: string;
  raw_text: string;
  subject: TermRef;
  location: TermRef;
  type311: TermRef | null;
  agency: TermRef;
  action: TermRef;
  status: string;
  reporter: { name: string; contact: string };
  history: HistoryEntryDocument[];
}

export interface RequestsDocument {
  requests: RequestDocument[];
}

export interface CreateRequestResponse {
  request: RequestDocument;
  resolution: ResolutionDocument;
}

export interface DiagnosticDocument {
  line: number;
  column: number;
  message: string;
  severity: string;
}

/** The one error envelope every failing route uses. */
export interface ErrorEnvelope {
  http_status: number;
  code: string;
  message: string;
  candidates?: TermRef[];
  diagnostics?: DiagnosticDocument[];
}
