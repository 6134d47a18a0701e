import { beforeEach, describe, expect, it } from "vitest";

import { ConsoleApi } from "../src/api.js";
import { ConsoleController } from "../src/state.js";
import { FakeServer } from "./fakeServer.js";

let server: FakeServer;
let controller: ConsoleController;

beforeEach(() => {
  server = new FakeServer();
  controller = new ConsoleController(new ConsoleApi("", server.fetch));
});

describe("ConsoleController", () => {
  it("console end-to-end: three turns, trace panel, rating, analytics refresh", async () => {
    // the secondary acceptance flow
    await controller.startSession();
    expect(controller.state.sessionId).toBeTruthy();

    for (const text of ["hello", "tell me something", "ok bye"]) {
      await controller.send(text);
    }
    const messages = controller.state.messages;
    expect(messages).toHaveLength(6);
    expect(messages.map((m) => m.speaker)).toEqual([
      "user", "bot", "user", "bot", "user", "bot",
    ]);

    // view state mirrors the server transcript exactly
    const transcript = await new ConsoleApi("", server.fetch).getTranscript(
      controller.state.sessionId!,
    );
    expect(messages).toEqual(transcript.turns);

    // trace panel data for every bot turn: chosen generator + candidate margins
    for (const turn of messages.filter((m) => m.speaker === "bot")) {
      const trace = controller.traceFor(turn.turn_index);
      expect(trace).not.toBeNull();
      expect(trace!.chosen_generator).toBeTruthy();
      expect(trace!.candidates.some((c) => c.margin !== null)).toBe(true);
      expect(trace!.candidates.some((c) => c.filtered)).toBe(true);
    }

    // submit rating 4 and see analytics reflect the new session after refresh
    const ok = await controller.submitRating(4);
    expect(ok).toBe(true);
    expect(controller.state.rating).toBe(4);

    await controller.refreshAnalytics();
    const analytics = controller.state.analytics!;
    expect(analytics.overall.rated_sessions).toBe(1);
    expect(analytics.overall.rating_histogram["4"]).toBe(1);
    expect(analytics.per_rating["4"].session_count).toBe(1);
    expect(analytics.per_rating["4"].mean_turns).toBe(3);
  });

  it("keeps message order mirroring the server transcript", async () => {
    await controller.startSession();
    await controller.send("a");
    await controller.send("b");
    const indices = controller.state.messages.map((m) => m.turn_index);
    expect(indices).toEqual([0, 1, 2, 3]);
  });

  it("surfaces a banner and new-session option when the session expires", async () => {
    await controller.startSession();
    const sid = controller.state.sessionId!;
    server.expireSession(sid);
    await controller.send("hello?");
    expect(controller.state.banner).toContain("404");
    expect(controller.state.sessionExpired).toBe(true);

    await controller.startSession();
    expect(controller.state.sessionExpired).toBe(false);
    expect(controller.state.banner).toBeNull();
    expect(controller.state.messages).toHaveLength(0);
  });

  it("second rating submit overwrites the first (server semantics)", async () => {
    await controller.startSession();
    await controller.send("hi");
    await controller.submitRating(2);
    await controller.submitRating(5);
    expect(controller.state.rating).toBe(5);
    const transcript = await new ConsoleApi("", server.fetch).getTranscript(
      controller.state.sessionId!,
    );
    expect(transcript.rating).toBe(5);
  });

  it("cancelled rating dialog sends no request", async () => {
    await controller.startSession();
    await controller.send("hi");
    const before = server.requests.filter((r) => r.includes("/rating")).length;
    // cancel path: the dialog simply never calls submitRating
    expect(server.requests.filter((r) => r.includes("/rating")).length).toBe(before);
  });

  it("rejects blank input without a request", async () => {
    await controller.startSession();
    const before = server.requests.length;
    await controller.send("   ");
    expect(server.requests.length).toBe(before);
    expect(controller.state.messages).toHaveLength(0);
  });

  it("notifies subscribers on every state change", async () => {
    let calls = 0;
    controller.subscribe(() => {
      calls += 1;
    });
    await controller.startSession();
    await controller.send("hello");
    expect(calls).toBeGreaterThanOrEqual(3); // start + busy + settle
  });
});
