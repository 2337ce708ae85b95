/** End-to-end tests against the spawned backend (see server.ts).
 *
 * Everything here goes through CivicApi over real HTTP; no test
 * reaches into the backend's storage or code.  Each scenario files
 * complaints about its own subject so the shared ledger never makes
 * assertions collide.
 */

import { describe, expect, it } from "vitest";
import { ApiFailure, CivicApi } from "../src/api.js";
import { advanceStatus, emptyBoard, loadBoard } from "../src/board.js";
import { emptyForm, submitComplaint } from "../src/form.js";
import { legalTargets } from "../src/lifecycle.js";
import { boardView, errorView, resolvedCard, trackerView } from "../src/render.js";
import { displayedStatus, emptyTracker, trackRequest } from "../src/tracker.js";
import type { CreateRequestResponse } from "../src/types.js";
import { BASE_URL, STATUS_SECRET } from "./config.js";

const api = new CivicApi(BASE_URL);

function complaint(description: string, contact = "reporter@example.edu") {
  return { ...emptyForm(), description, reporterName: "Pat", reporterContact: contact };
}

async function file(description: string): Promise<CreateRequestResponse> {
  const done = await submitComplaint(api, complaint(description));
  if (done.phase.kind !== "resolved") {
    throw new Error(`expected resolved, got ${JSON.stringify(done.phase)}`);
  }
  return done.phase.response;
}

describe("catalog endpoints", () => {
  it("serves the full service catalog", async () => {
    const { services } = await api.getServices();
    expect(services).toHaveLength(8);
    for (const entry of services) {
      expect(entry.locations).toHaveLength(6);
      expect(entry.agency.email).toMatch(/@/);
    }
    const grass = services.find((s) => s.subject.label === "Grass");
    expect(grass?.agency.label).toBe("iiitGardener");
    expect(grass?.action.label).toBe("Cut");
  });

  it("serves the agency directory sorted by label", async () => {
    const { agencies } = await api.getAgencies();
    const labels = agencies.map((a) => a.label);
    expect(labels).toEqual([...labels].sort());
    expect(labels).toContain("iiitGardener");
  });
});

describe("filing a complaint", () => {
  it("resolves the canonical overgrown-grass complaint to the gardener", async () => {
    const response = await file("Overgrown Grass near Computer Center III");
    expect(response.request.status).toBe("notified");
    expect(response.request.id).toMatch(/^SR-[0-9a-f]{6}-\d{6}$/);
    expect(response.resolution.agency.label).toBe("iiitGardener");
    expect(response.resolution.action.label).toBe("Cut");
    expect(response.resolution.recorded_type.label).toBe("Overgrown");

    const html = resolvedCard(response);
    expect(html).toContain(response.request.id);
    expect(html).toContain("iiitGardener");
    expect(html).toContain("Grass at");
  });

  it("renders the server's candidates when the subject is ambiguous", async () => {
    const done = await submitComplaint(
      api,
      complaint("The grass and the tree near the cafeteria look damaged"),
    );
    expect(done.phase.kind).toBe("error");
    if (done.phase.kind !== "error") return;
    expect(done.phase.error.code).toBe("AMBIGUOUS_SUBJECT");
    expect(done.phase.error.candidates?.map((c) => c.label).sort()).toEqual(["Grass", "Tree"]);

    const html = errorView(done.phase.error);
    expect(html).toContain(`class="error error-ambiguous_subject"`);
    expect(html).toContain(">Grass</button>");
    expect(html).toContain(">Tree</button>");
  });

  it("offers every known subject when none is recognized", async () => {
    const done = await submitComplaint(api, complaint("Something smells terrible in the mess"));
    expect(done.phase.kind).toBe("error");
    if (done.phase.kind !== "error") return;
    expect(done.phase.error.code).toBe("MISSING_SUBJECT");
    expect(done.phase.error.candidates).toHaveLength(8);
    expect(errorView(done.phase.error)).toContain("Did you mean one of these?");
  });

  it("asks for a location when the complaint has none", async () => {
    const done = await submitComplaint(api, complaint("The lawn is overgrown"));
    expect(done.phase.kind).toBe("error");
    if (done.phase.kind !== "error") return;
    expect(done.phase.error.code).toBe("MISSING_LOCATION");
    expect(done.phase.error.candidates).toHaveLength(6);
  });

  it("files nothing when resolution fails", async () => {
    const before = (await api.listRequests({ subject: "Smoking" })).requests.length;
    const done = await submitComplaint(api, complaint("People are smoking"));
    expect(done.phase.kind).toBe("error");
    const after = (await api.listRequests({ subject: "Smoking" })).requests.length;
    expect(after).toBe(before);
  });
});

describe("dry-run resolution and raw queries", () => {
  it("answers a complaint without filing it", async () => {
    const resolution = await api.resolveComplaint("Lamp broken at the sports ground");
    expect(resolution.subject.label).toBe("Street Light");
    expect(resolution.agency.label).toBe("iiitElectrician");
    expect(resolution.reported_type?.label).toBe("Damaged");
  });

  it("returns labeled cells for a raw query", async () => {
    const table = await api.runQuery(
      "SELECT ?agency WHERE { ?thing <http://ontology.eil.utoronto.ca/open311.owl#isHandledBy> ?agency . }",
    );
    expect(table.columns).toEqual(["agency"]);
    expect(table.rows.length).toBeGreaterThan(0);
    for (const row of table.rows) {
      expect(row["agency"]?.kind).toBe("iri");
      expect(row["agency"]?.label).not.toBe("");
    }
  });

  it("surfaces positioned diagnostics for a bad query", async () => {
    const failure = await api.runQuery("SELEKT * WHERE { ?s ?p ?o . }").then(
      () => null,
      (f: unknown) => f,
    );
    expect(failure).toBeInstanceOf(ApiFailure);
    if (!(failure instanceof ApiFailure)) return;
    expect(failure.error.code).toBe("PARSE_ERROR");
    const first = failure.error.diagnostics?.[0];
    expect(first?.line).toBe(1);
    expect(first?.column).toBeGreaterThan(0);
    expect(errorView(failure.error)).toContain(`<ul class="diagnostics">`);
  });
});

describe("tracking", () => {
  it("shows a filed request by id with the server's status", async () => {
    const filed = await file("Garbage piling up at the canteen");
    const state = await trackRequest(api, { ...emptyTracker(), idInput: filed.request.id });
    expect(state.error).toBeNull();
    expect(displayedStatus(state)).toBe("notified");

    const html = trackerView(state);
    expect(html).toContain("Waste at");
    expect(html).toContain("iiitSweeper");
    expect(html).toContain(`class="status-notified"`);
  });

  it("renders an unknown id as not-found", async () => {
    const state = await trackRequest(api, { ...emptyTracker(), idInput: "SR-ffffff-999999" });
    expect(state.error?.code).toBe("UNKNOWN_REQUEST");
    expect(trackerView(state)).toContain("No request with that id.");
  });
});

describe("agency board", () => {
  const filter = { subject: "Internet" };

  it("never renders a status the server did not return", async () => {
    await file("The wifi is down in the admin block");
    await file("No internet at the library, I mean the admin block");

    const state = await loadBoard(api, emptyBoard(filter));
    const served = new Set(
      (await api.listRequests(filter)).requests.map((request) => request.status),
    );
    const rendered = [...boardView(state).matchAll(/<h3 class="group-status">([^<]+)<\/h3>/g)].map(
      (m) => m[1],
    );
    expect(rendered.length).toBeGreaterThan(0);
    for (const status of rendered) {
      expect(served.has(status ?? "")).toBe(true);
    }
  });

  it("lists exactly the API's filtered set when filtered to one agency", async () => {
    await file("The weeds at the playground need cutting");
    const byAgency = { agency: "iiitGardener" };
    const state = await loadBoard(api, emptyBoard(byAgency));
    const shown = state.groups
      .flatMap((group) => group.rows)
      .map((row) => row.request.id)
      .sort();
    const served = (await api.listRequests(byAgency)).requests.map((r) => r.id).sort();
    expect(shown.length).toBeGreaterThan(0);
    expect(shown).toEqual(served);
  });

  it("offers only legal moves and applies one with the secret", async () => {
    const filed = await file("Broadband down at the sports ground");
    const board = await loadBoard(api, { ...emptyBoard(filter), secret: STATUS_SECRET });
    const row = board.groups
      .flatMap((group) => group.rows)
      .find((r) => r.request.id === filed.request.id);
    expect(row?.request.status).toBe("notified");
    expect(row?.advanceTargets).toEqual(legalTargets("notified"));

    const advanced = await advanceStatus(api, board, filed.request.id, "in_progress");
    expect(advanced.notice).toBeNull();
    const moved = advanced.groups
      .flatMap((group) => group.rows)
      .find((r) => r.request.id === filed.request.id);
    expect(moved?.request.status).toBe("in_progress");
    expect(moved?.advanceTargets).toEqual(["resolved", "rejected"]);
  });

  it("rejects a status change without the secret", async () => {
    const filed = await file("The lan is down at the residential colony");
    const board = await loadBoard(api, emptyBoard(filter));
    const state = await advanceStatus(api, board, filed.request.id, "in_progress");
    expect(state.notice?.kind).toBe("unauthorized");
    expect(boardView(state)).toContain(`<input type="password" name="secret"`);

    const untouched = await api.getRequest(filed.request.id);
    expect(untouched.status).toBe("notified");
  });

  it("turns a stale button press into a refresh-and-retry notice", async () => {
    const filed = await file("Wifi keeps dropping at the cafeteria");
    const board = await loadBoard(api, { ...emptyBoard(filter), secret: STATUS_SECRET });
    await advanceStatus(api, board, filed.request.id, "in_progress");

    // the board still shows the row as notified; press its old button
    const stale = await advanceStatus(api, board, filed.request.id, "in_progress");
    expect(stale.notice?.kind).toBe("conflict");
    if (stale.notice?.kind === "conflict") {
      expect(stale.notice.message).toContain("the board has been refreshed");
    }
    const row = stale.groups
      .flatMap((group) => group.rows)
      .find((r) => r.request.id === filed.request.id);
    expect(row?.request.status).toBe("in_progress");
  });

  it("walks a request to a terminal status that offers no further moves", async () => {
    const filed = await file("Network outage at boys hostel 4");
    let board = await loadBoard(api, { ...emptyBoard(filter), secret: STATUS_SECRET });
    board = await advanceStatus(api, board, filed.request.id, "in_progress");
    board = await advanceStatus(api, board, filed.request.id, "resolved", "fixed the switch");
    expect(board.notice).toBeNull();

    const done = await api.getRequest(filed.request.id);
    expect(done.status).toBe("resolved");
    expect(done.history.at(-1)?.note).toBe("fixed the switch");
    const row = board.groups
      .flatMap((group) => group.rows)
      .find((r) => r.request.id === filed.request.id);
    expect(row?.advanceTargets).toEqual([]);
    expect(boardView(board)).not.toContain(`data-id="${filed.request.id}"`);
  });
});
