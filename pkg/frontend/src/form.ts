/** Complaint submission as a four-phase machine.
 *
 * idle -> submitting -> resolved | error -> idle, nothing else.  The
 * resolved phase holds the server's response verbatim; the error
 * phase holds the server's envelope, or a synthesized NETWORK one so
 * every failure renders through the same path with a retry
 * affordance.
 */

import { ApiFailure, NetworkFailure } from "./api.js";
import type { CreateRequestResponse, ErrorEnvelope } from "./types.js";

/** The one API call this view needs; CivicApi satisfies it. */
export interface ComplaintGateway {
  createRequest(
    description: string,
    reporterName: string,
    reporterContact: string,
  ): Promise<CreateRequestResponse>;
}

export type FormPhase =
  | { kind: "idle" }
  | { kind: "submitting" }
  | { kind: "resolved"; response: CreateRequestResponse }
  | { kind: "error"; error: ErrorEnvelope };

export interface ComplaintForm {
  description: string;
  reporterName: string;
  reporterContact: string;
  phase: FormPhase;
}

export function emptyForm(): ComplaintForm {
  return { description: "", reporterName: "", reporterContact: "", phase: { kind: "idle" } };
}

export function canSubmit(form: ComplaintForm): boolean {
  return (
    form.phase.kind === "idle" &&
    form.description.trim() !== "" &&
    form.reporterContact.trim() !== ""
  );
}

export function beginSubmit(form: ComplaintForm): ComplaintForm {
  if (!canSubmit(form)) {
    throw new Error(`cannot submit from phase ${form.phase.kind} or with empty fields`);
  }
  return { ...form, phase: { kind: "submitting" } };
}

export function finishResolved(
  form: ComplaintForm,
  response: CreateRequestResponse,
): ComplaintForm {
  if (form.phase.kind !== "submitting") {
    throw new Error(`cannot resolve from phase ${form.phase.kind}`);
  }
  return { ...form, phase: { kind: "resolved", response } };
}

export function finishError(form: ComplaintForm, error: ErrorEnvelope): ComplaintForm {
  if (form.phase.kind !== "submitting") {
    throw new Error(`cannot fail from phase ${form.phase.kind}`);
  }
  return { ...form, phase: { kind: "error", error } };
}

/** Back to editable: legal only once a submission has settled. */
export function reset(form: ComplaintForm): ComplaintForm {
  if (form.phase.kind !== "resolved" && form.phase.kind !== "error") {
    throw new Error(`cannot reset from phase ${form.phase.kind}`);
  }
  return { ...form, phase: { kind: "idle" } };
}

export function networkEnvelope(failure: NetworkFailure): ErrorEnvelope {
  return { http_status: 0, code: "NETWORK", message: failure.message };
}

/** Drive one submission; onState sees every phase in order. */
export async function submitComplaint(
  api: ComplaintGateway,
  form: ComplaintForm,
  onState: (form: ComplaintForm) => void = () => {},
): Promise<ComplaintForm> {
  let current = beginSubmit(form);
  onState(current);
  try {
    const response = await api.createRequest(
      form.description,
      form.reporterName,
      form.reporterContact,
    );
    current = finishResolved(current, response);
  } catch (failure) {
    if (failure instanceof ApiFailure) {
      current = finishError(current, failure.error);
    } else if (failure instanceof NetworkFailure) {
      current = finishError(current, networkEnvelope(failure));
    } else {
      throw failure;
    }
  }
  onState(current);
  return current;
}
