/** Typed client for the civic311 JSON API.
 *
 * Failures split into two kinds the UI renders differently: ApiFailure
 * carries the server's error envelope; NetworkFailure means no
 * envelope ever arrived (connection refused, timeout, bad gateway).
 */

import type {
  AgenciesDocument,
  CreateRequestResponse,
  ErrorEnvelope,
  RequestDocument,
  RequestsDocument,
  ResolutionDocument,
  ResultTableDocument,
  ServicesDocument,
} from "./types.js";

export const SECRET_HEADER = "X-Agency-Secret";

export class ApiFailure extends Error {
  readonly error: ErrorEnvelope;

  constructor(error: ErrorEnvelope) {
    super(`${error.code}: ${error.message}`);
    this.name = "ApiFailure";
    this.error = error;
  }
}

export class NetworkFailure extends Error {
  constructor(cause: unknown) {
    super(`the service could not be reached: ${String(cause)}`);
    this.name = "NetworkFailure";
  }
}

export interface RequestFilter {
  status?: string;
  agency?: string;
  location?: string;
  subject?: string;
}

export class CivicApi {
  constructor(readonly baseUrl: string) {}

  private async send<T>(
    method: string,
    path: string,
    body?: unknown,
    headers?: Record<string, string>,
  ): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers: { "Content-Type": "application/json", ...headers },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new NetworkFailure(cause);
    }
    let document: unknown;
    try {
      document = await response.json();
    } catch (cause) {
      throw new NetworkFailure(cause);
    }
    if (!response.ok) {
      const envelope = (document as { error?: ErrorEnvelope }).error;
      if (envelope === undefined) {
        throw new NetworkFailure(`status ${response.status} without an error envelope`);
      }
      throw new ApiFailure(envelope);
    }
    return document as T;
  }

  getServices(): Promise<ServicesDocument> {
    return this.send("GET", "/services");
  }

  getAgencies(): Promise<AgenciesDocument> {
    return this.send("GET", "/agencies");
  }

  /** Resolve a complaint without filing it. */
  resolveComplaint(text: string): Promise<ResolutionDocument> {
    return this.send("POST", "/query", { text });
  }

  runQuery(query: string): Promise<ResultTableDocument> {
    return this.send("POST", "/sparql", { query });
  }

  createRequest(
    description: string,
    reporterName: string,
    reporterContact: string,
  ): Promise<CreateRequestResponse> {
    return this.send("POST", "/requests", {
      description,
      reporter_name: reporterName,
      reporter_contact: reporterContact,
    });
  }

  listRequests(filter: RequestFilter = {}): Promise<RequestsDocument> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filter)) {
      if (value) params.set(key, value);
    }
    const suffix = params.size > 0 ? `?${params.toString()}` : "";
    return this.send("GET", `/requests${suffix}`);
  }

  getRequest(id: string): Promise<RequestDocument> {
    return this.send("GET", `/requests/${encodeURIComponent(id)}`);
  }

  setStatus(
    id: string,
    status: string,
    note = "",
    secret: string | null = null,
  ): Promise<RequestDocument> {
    const headers = secret === null ? undefined : { [SECRET_HEADER]: secret };
    return this.send(
      "PATCH",
      `/requests/${encodeURIComponent(id)}/status`,
      { status, note },
      headers,
    );
  }
}
