/** Agency board: requests grouped by status, with advance buttons.
 *
 * Groups exist only for statuses the server actually returned, in
 * lifecycle order; each row offers exactly the legal moves out of its
 * server-reported status.  A 409 from a stale button press becomes a
 * refresh-and-retry notice, a 401 a secret prompt.  The secret lives
 * in this state object only, never in storage.
 */

import { ApiFailure, NetworkFailure } from "./api.js";
import { networkEnvelope } from "./form.js";
import { STATUSES, legalTargets, type Status } from "./lifecycle.js";
import type { ErrorEnvelope, RequestDocument, RequestsDocument } from "./types.js";
import type { RequestFilter } from "./api.js";

/** The API calls this view needs; CivicApi satisfies it. */
export interface BoardGateway {
  listRequests(filter: RequestFilter): Promise<RequestsDocument>;
  setStatus(
    id: string,
    status: Status,
    note: string,
    secret: string | null,
  ): Promise<RequestDocument>;
}

export interface BoardRow {
  request: RequestDocument;
  advanceTargets: readonly Status[];
}

export interface BoardGroup {
  status: string;
  rows: BoardRow[];
}

export type BoardNotice =
  | { kind: "conflict"; message: string }
  | { kind: "unauthorized"; message: string }
  | { kind: "error"; error: ErrorEnvelope };

export interface BoardState {
  filter: RequestFilter;
  groups: BoardGroup[];
  secret: string | null;
  notice: BoardNotice | null;
}

export function emptyBoard(filter: RequestFilter = {}): BoardState {
  return { filter, groups: [], secret: null, notice: null };
}

export function groupRequests(requests: RequestDocument[]): BoardGroup[] {
  const byStatus = new Map<string, BoardRow[]>();
  for (const request of requests) {
    const row: BoardRow = { request, advanceTargets: legalTargets(request.status) };
    const rows = byStatus.get(request.status);
    if (rows === undefined) {
      byStatus.set(request.status, [row]);
    } else {
      rows.push(row);
    }
  }
  // lifecycle order first, then anything unrecognized in arrival order
  const ordered: BoardGroup[] = [];
  for (const status of STATUSES) {
    const rows = byStatus.get(status);
    if (rows !== undefined) {
      ordered.push({ status, rows });
      byStatus.delete(status);
    }
  }
  for (const [status, rows] of byStatus) {
    ordered.push({ status, rows });
  }
  return ordered;
}

export async function loadBoard(api: BoardGateway, state: BoardState): Promise<BoardState> {
  try {
    const document = await api.listRequests(state.filter);
    return { ...state, groups: groupRequests(document.requests), notice: null };
  } catch (failure) {
    if (failure instanceof ApiFailure) {
      return { ...state, notice: { kind: "error", error: failure.error } };
    }
    if (failure instanceof NetworkFailure) {
      return { ...state, notice: { kind: "error", error: networkEnvelope(failure) } };
    }
    throw failure;
  }
}

/** Press one advance button; always reload after a conflict so stale
 * rows disappear. */
export async function advanceStatus(
  api: BoardGateway,
  state: BoardState,
  requestId: string,
  target: Status,
  note = "",
): Promise<BoardState> {
  try {
    await api.setStatus(requestId, target, note, state.secret);
  } catch (failure) {
    if (failure instanceof ApiFailure) {
      const error = failure.error;
      if (error.code === "ILLEGAL_TRANSITION") {
        const reloaded = await loadBoard(api, state);
        return {
          ...reloaded,
          notice: {
            kind: "conflict",
            message: `${error.message}; the board has been refreshed, try again`,
          },
        };
      }
      if (error.code === "UNAUTHORIZED") {
        return { ...state, notice: { kind: "unauthorized", message: error.message } };
      }
      return { ...state, notice: { kind: "error", error } };
    }
    if (failure instanceof NetworkFailure) {
      return { ...state, notice: { kind: "error", error: networkEnvelope(failure) } };
    }
    throw failure;
  }
  return loadBoard(api, state);
}
