/** The request lifecycle as the server documents it.
 *
 * The table exists so the board can offer advance buttons without a
 * round trip; the server remains the authority and refuses anything
 * illegal with a 409.  An unknown status gets no targets at all: the
 * UI must never invent moves for a state it does not recognize.
 */

export const STATUSES = [
  "received",
  "notified",
  "in_progress",
  "resolved",
  "rejected",
] as const;

export type Status = (typeof STATUSES)[number];

export const LEGAL_TRANSITIONS: Readonly<Record<Status, readonly Status[]>> = {
  received: ["notified"],
  notified: ["in_progress", "rejected"],
  in_progress: ["resolved", "rejected"],
  resolved: [],
  rejected: [],
};

export function isStatus(value: string): value is Status {
  return (STATUSES as readonly string[]).includes(value);
}

export function legalTargets(status: string): readonly Status[] {
  return isStatus(status) ? LEGAL_TRANSITIONS[status] : [];
}

export function isTerminal(status: string): boolean {
  return isStatus(status) && LEGAL_TRANSITIONS[status].length === 0;
}
