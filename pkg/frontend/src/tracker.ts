/** Track view: one request by id, status straight from the server.
 *
 * The displayed status is always the status of the last fetched
 * document; the tracker never advances or predicts it locally.
 */

import { ApiFailure, NetworkFailure } from "./api.js";
import { networkEnvelope } from "./form.js";
import type { ErrorEnvelope, RequestDocument } from "./types.js";

/** The one API call this view needs; CivicApi satisfies it. */
export interface TrackerGateway {
  getRequest(id: string): Promise<RequestDocument>;
}

export interface TrackerState {
  idInput: string;
  request: RequestDocument | null;
  error: ErrorEnvelope | null;
  polling: boolean;
}

export function emptyTracker(): TrackerState {
  return { idInput: "", request: null, error: null, polling: false };
}

export async function trackRequest(
  api: TrackerGateway,
  state: TrackerState,
): Promise<TrackerState> {
  const id = state.idInput.trim();
  if (id === "") {
    return { ...state, request: null, error: null, polling: false };
  }
  const polling = { ...state, polling: true };
  try {
    const request = await api.getRequest(id);
    return { ...polling, request, error: null, polling: false };
  } catch (failure) {
    if (failure instanceof ApiFailure) {
      return { ...polling, request: null, error: failure.error, polling: false };
    }
    if (failure instanceof NetworkFailure) {
      return { ...polling, request: null, error: networkEnvelope(failure), polling: false };
    }
    throw failure;
  }
}

export function displayedStatus(state: TrackerState): string | null {
  return state.request === null ? null : state.request.status;
}
