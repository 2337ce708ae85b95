import { describe, expect, it } from "vitest";
import { ApiFailure, NetworkFailure } from "../src/api.js";
import {
  advanceStatus,
  emptyBoard,
  groupRequests,
  loadBoard,
  type BoardGateway,
} from "../src/board.js";
import type { RequestDocument, RequestsDocument } from "../src/types.js";
import { ILLEGAL_TRANSITION, UNAUTHORIZED, sampleRequest } from "./fixtures.js";

function gateway(overrides: Partial<BoardGateway> = {}): BoardGateway {
  return {
    listRequests: () => Promise.resolve({ requests: [] }),
    setStatus: () => Promise.resolve(sampleRequest()),
    ...overrides,
  };
}

function listing(...requests: RequestDocument[]): RequestsDocument {
  return { requests };
}

describe("groupRequests", () => {
  it("renders only statuses the server returned", () => {
    const groups = groupRequests([
      sampleRequest({ id: "SR-a", status: "notified" }),
      sampleRequest({ id: "SR-b", status: "notified" }),
    ]);
    expect(groups.map((g) => g.status)).toEqual(["notified"]);
    expect(groups[0]?.rows.map((r) => r.request.id)).toEqual(["SR-a", "SR-b"]);
  });

  it("orders groups by lifecycle position, not arrival", () => {
    const groups = groupRequests([
      sampleRequest({ id: "SR-a", status: "resolved" }),
      sampleRequest({ id: "SR-b", status: "received" }),
      sampleRequest({ id: "SR-c", status: "in_progress" }),
    ]);
    expect(groups.map((g) => g.status)).toEqual(["received", "in_progress", "resolved"]);
  });

  it("appends a status it does not recognize, with no moves offered", () => {
    const groups = groupRequests([
      sampleRequest({ id: "SR-a", status: "escalated" }),
      sampleRequest({ id: "SR-b", status: "received" }),
    ]);
    expect(groups.map((g) => g.status)).toEqual(["received", "escalated"]);
    const odd = groups.find((g) => g.status === "escalated");
    expect(odd?.rows[0]?.advanceTargets).toEqual([]);
  });

  it("offers exactly the legal moves out of each row's server status", () => {
    const groups = groupRequests([
      sampleRequest({ id: "SR-a", status: "notified" }),
      sampleRequest({ id: "SR-b", status: "resolved" }),
    ]);
    const byStatus = new Map(groups.map((g) => [g.status, g]));
    expect(byStatus.get("notified")?.rows[0]?.advanceTargets).toEqual([
      "in_progress",
      "rejected",
    ]);
    expect(byStatus.get("resolved")?.rows[0]?.advanceTargets).toEqual([]);
  });
});

describe("loadBoard", () => {
  it("replaces the groups and clears any notice", async () => {
    const stale = {
      ...emptyBoard(),
      notice: { kind: "unauthorized" as const, message: "nope" },
    };
    const state = await loadBoard(
      gateway({
        listRequests: () => Promise.resolve(listing(sampleRequest({ status: "received" }))),
      }),
      stale,
    );
    expect(state.groups.map((g) => g.status)).toEqual(["received"]);
    expect(state.notice).toBeNull();
  });

  it("passes its filter through to the API", async () => {
    const seen: unknown[] = [];
    await loadBoard(
      gateway({
        listRequests: (filter) => {
          seen.push(filter);
          return Promise.resolve(listing());
        },
      }),
      emptyBoard({ status: "notified", subject: "Grass" }),
    );
    expect(seen).toEqual([{ status: "notified", subject: "Grass" }]);
  });

  it("keeps the old groups and notices a wire failure", async () => {
    const loaded = await loadBoard(
      gateway({
        listRequests: () => Promise.resolve(listing(sampleRequest({ status: "notified" }))),
      }),
      emptyBoard(),
    );
    const state = await loadBoard(
      gateway({ listRequests: () => Promise.reject(new NetworkFailure("refused")) }),
      loaded,
    );
    expect(state.groups.map((g) => g.status)).toEqual(["notified"]);
    expect(state.notice?.kind).toBe("error");
  });
});

describe("advanceStatus", () => {
  it("sends the secret from board state and reloads on success", async () => {
    const calls: unknown[] = [];
    const state = await advanceStatus(
      gateway({
        setStatus: (id, status, note, secret) => {
          calls.push([id, status, note, secret]);
          return Promise.resolve(sampleRequest({ id, status }));
        },
        listRequests: () => Promise.resolve(listing(sampleRequest({ status: "in_progress" }))),
      }),
      { ...emptyBoard(), secret: "hunter2" },
      "SR-0abc12-000001",
      "in_progress",
    );
    expect(calls).toEqual([["SR-0abc12-000001", "in_progress", "", "hunter2"]]);
    expect(state.groups.map((g) => g.status)).toEqual(["in_progress"]);
    expect(state.notice).toBeNull();
  });

  it("refreshes the board and raises a conflict notice on a stale press", async () => {
    let reloads = 0;
    const state = await advanceStatus(
      gateway({
        setStatus: () => Promise.reject(new ApiFailure(ILLEGAL_TRANSITION)),
        listRequests: () => {
          reloads += 1;
          return Promise.resolve(listing(sampleRequest({ status: "resolved" })));
        },
      }),
      emptyBoard(),
      "SR-0abc12-000001",
      "in_progress",
    );
    expect(reloads).toBe(1);
    expect(state.groups.map((g) => g.status)).toEqual(["resolved"]);
    expect(state.notice?.kind).toBe("conflict");
    if (state.notice?.kind === "conflict") {
      expect(state.notice.message).toContain("the board has been refreshed");
    }
  });

  it("asks for the secret on 401 without touching the groups", async () => {
    let reloads = 0;
    const state = await advanceStatus(
      gateway({
        setStatus: () => Promise.reject(new ApiFailure(UNAUTHORIZED)),
        listRequests: () => {
          reloads += 1;
          return Promise.resolve(listing());
        },
      }),
      emptyBoard(),
      "SR-0abc12-000001",
      "in_progress",
    );
    expect(reloads).toBe(0);
    expect(state.notice?.kind).toBe("unauthorized");
  });

  it("notices any other failure", async () => {
    const state = await advanceStatus(
      gateway({ setStatus: () => Promise.reject(new NetworkFailure("refused")) }),
      emptyBoard(),
      "SR-0abc12-000001",
      "in_progress",
    );
    expect(state.notice?.kind).toBe("error");
    if (state.notice?.kind === "error") {
      expect(state.notice.error.code).toBe("NETWORK");
    }
  });
});
