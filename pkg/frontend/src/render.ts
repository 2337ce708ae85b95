/** HTML rendering as pure string functions.
 *
 * No framework: every view is a function of its state, which keeps
 * the whole surface snapshot-testable in node.  All dynamic text goes
 * through esc().  Each API error code renders as its own CSS class so
 * the states stay visually distinct and individually testable.
 */

import type { BoardState } from "./board.js";
import type { ComplaintForm } from "./form.js";
import type { TrackerState } from "./tracker.js";
import type {
  ContactDocument,
  CreateRequestResponse,
  ErrorEnvelope,
  RequestDocument,
  TermRef,
} from "./types.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function contactCard(contact: ContactDocument): string {
  return [
    `<div class="contact-card">`,
    `<strong class="agency-name">${esc(contact.label)}</strong>`,
    `<span class="agency-email">${esc(contact.email ?? "no email on file")}</span>`,
    `<span class="agency-phone">${esc(contact.phone ?? "no phone on file")}</span>`,
    contact.governing_body === null
      ? ""
      : `<span class="agency-governing-body">${esc(contact.governing_body)}</span>`,
    `</div>`,
  ]
    .filter((part) => part !== "")
    .join("\n");
}

export function resolvedCard(response: CreateRequestResponse): string {
  const { request, resolution } = response;
  const note =
    resolution.note === "" ? "" : `<p class="resolution-note">${esc(resolution.note)}</p>`;
  return [
    `<section class="resolved">`,
    `<h2>Request filed</h2>`,
    `<p class="request-id">Tracking id: <code>${esc(request.id)}</code></p>`,
    `<p class="summary">` +
      `${esc(resolution.subject.label)} at ${esc(resolution.location.label)}: ` +
      `recorded as ${esc(resolution.recorded_type.label)}, ` +
      `action ${esc(resolution.action.label)}.</p>`,
    contactCard(resolution.agency),
    note,
    `<p class="status">Status: <span class="status-${esc(request.status)}">${esc(
      request.status,
    )}</span></p>`,
    `</section>`,
  ]
    .filter((part) => part !== "")
    .join("\n");
}

export function candidateChips(candidates: TermRef[]): string {
  const chips = candidates
    .map((c) => `<button class="candidate-chip" data-iri="${esc(c.iri)}">${esc(c.label)}</button>`)
    .join("\n");
  return `<div class="candidates">\n${chips}\n</div>`;
}

/** One distinct rendered state per error code. */
export function errorView(error: ErrorEnvelope): string {
  const code = error.code.toLowerCase();
  const parts = [
    `<section class="error error-${esc(code)}">`,
    `<p class="error-message">${esc(error.message)}</p>`,
  ];
  if (error.candidates !== undefined && error.candidates.length > 0) {
    parts.push(`<p class="error-hint">Did you mean one of these?</p>`);
    parts.push(candidateChips(error.candidates));
  }
  if (error.diagnostics !== undefined && error.diagnostics.length > 0) {
    const items = error.diagnostics
      .map((d) => `<li>${d.line}:${d.column}: ${esc(d.message)}</li>`)
      .join("\n");
    parts.push(`<ul class="diagnostics">\n${items}\n</ul>`);
  }
  if (error.code === "NETWORK") {
    parts.push(`<button class="retry">Retry</button>`);
  }
  parts.push(`</section>`);
  return parts.join("\n");
}

export function formView(form: ComplaintForm): string {
  const busy = form.phase.kind === "submitting";
  const disabled =
    form.phase.kind !== "idle" ||
    form.description.trim() === "" ||
    form.reporterContact.trim() === ""
      ? " disabled"
      : "";
  const result =
    form.phase.kind === "resolved"
      ? resolvedCard(form.phase.response)
      : form.phase.kind === "error"
        ? errorView(form.phase.error)
        : "";
  return [
    `<form class="complaint${busy ? " busy" : ""}">`,
    `<textarea name="description" placeholder="What is the problem, and where?">${esc(
      form.description,
    )}</textarea>`,
    `<input name="reporter_name" placeholder="Your name (optional)" value="${esc(
      form.reporterName,
    )}">`,
    `<input name="reporter_contact" placeholder="Email or phone" value="${esc(
      form.reporterContact,
    )}">`,
    `<button type="submit"${disabled}>${busy ? "Submitting…" : "Report it"}</button>`,
    `</form>`,
    result,
  ]
    .filter((part) => part !== "")
    .join("\n");
}

export function historyList(request: RequestDocument): string {
  const items = request.history
    .map(
      (entry) =>
        `<li><time>${esc(entry.at)}</time> <span class="status-${esc(entry.status)}">${esc(
          entry.status,
        )}</span>${entry.note === "" ? "" : ` — ${esc(entry.note)}`}</li>`,
    )
    .join("\n");
  return `<ol class="history">\n${items}\n</ol>`;
}

export function trackerView(state: TrackerState): string {
  const parts = [
    `<section class="tracker${state.polling ? " polling" : ""}">`,
    `<input name="request_id" placeholder="SR-…" value="${esc(state.idInput)}">`,
    `<button class="track">Track</button>`,
  ];
  if (state.error !== null) {
    parts.push(
      state.error.code === "UNKNOWN_REQUEST"
        ? `<p class="not-found">No request with that id.</p>`
        : errorView(state.error),
    );
  } else if (state.request !== null) {
    const r = state.request;
    parts.push(
      `<dl class="request">`,
      `<dt>Status</dt><dd class="status-${esc(r.status)}">${esc(r.status)}</dd>`,
      `<dt>Issue</dt><dd>${esc(r.subject.label)} at ${esc(r.location.label)}</dd>`,
      `<dt>Handled by</dt><dd>${esc(r.agency.label)}</dd>`,
      `<dt>Action</dt><dd>${esc(r.action.label)}</dd>`,
      `</dl>`,
      historyList(r),
    );
  }
  parts.push(`</section>`);
  return parts.join("\n");
}

export function boardView(state: BoardState): string {
  const parts = [`<section class="board">`];
  if (state.notice !== null) {
    if (state.notice.kind === "conflict") {
      parts.push(`<p class="notice conflict">${esc(state.notice.message)}</p>`);
    } else if (state.notice.kind === "unauthorized") {
      parts.push(
        `<p class="notice unauthorized">${esc(state.notice.message)}</p>`,
        `<input type="password" name="secret" placeholder="Agency secret">`,
      );
    } else {
      parts.push(errorView(state.notice.error));
    }
  }
  for (const group of state.groups) {
    parts.push(`<h3 class="group-status">${esc(group.status)}</h3>`, `<ul class="group">`);
    for (const row of group.rows) {
      const buttons = row.advanceTargets
        .map(
          (target) =>
            `<button class="advance" data-id="${esc(row.request.id)}" data-target="${esc(
              target,
            )}">${esc(target)}</button>`,
        )
        .join(" ");
      parts.push(
        `<li><code>${esc(row.request.id)}</code> ` +
          `${esc(row.request.subject.label)} at ${esc(row.request.location.label)}` +
          `${buttons === "" ? "" : " " + buttons}</li>`,
      );
    }
    parts.push(`</ul>`);
  }
  parts.push(`</section>`);
  return parts.join("\n");
}
