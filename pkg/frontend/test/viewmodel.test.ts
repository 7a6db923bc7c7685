import { describe, expect, it } from "vitest";

import type { Metrics, Reply } from "../src/types.js";
import {
  initialViewModel,
  onReply,
  onSessionStarted,
  onStartupError,
  onTurnError,
  onUtteranceSent,
  utteranceForClick,
} from "../src/viewmodel.js";

const METRICS: Metrics = {
  total_interactions: 1,
  successful: 1,
  unsuccessful: 0,
  total_time: 2.5,
};

function reply(speech: string, failed = false): Reply {
  return {
    speech,
    screen: { kind: "welcome", text: speech },
    turn_outcome: failed ? "failed" : "answered",
  };
}

describe("view model", () => {
  it("start session appends the onboarding message and screen", () => {
    const vm = onSessionStarted(initialViewModel(), {
      session_id: "abc",
      reply: reply("Welcome!"),
    });
    expect(vm.session_id).toBe("abc");
    expect(vm.chat).toEqual([{ who: "assistant", text: "Welcome!" }]);
    expect(vm.screen).toEqual({ kind: "welcome", text: "Welcome!" });
  });

  it("chat is append-only across a turn", () => {
    let vm = onSessionStarted(initialViewModel(), {
      session_id: "abc",
      reply: reply("Welcome!"),
    });
    const before = vm.chat;
    vm = onUtteranceSent(vm, "Open 1");
    vm = onReply(vm, reply("Here you go."), METRICS);
    expect(vm.chat.slice(0, before.length)).toEqual(before);
    expect(vm.chat.map((e) => e.text)).toEqual([
      "Welcome!",
      "Open 1",
      "Here you go.",
    ]);
    expect(vm.metrics).toEqual(METRICS);
    expect(vm.pending).toBe(false);
  });

  it("screen always reflects the most recent reply", () => {
    let vm = onSessionStarted(initialViewModel(), {
      session_id: "abc",
      reply: reply("First"),
    });
    vm = onUtteranceSent(vm, "hello");
    vm = onReply(vm, reply("Second"), METRICS);
    expect(vm.screen).toEqual({ kind: "welcome", text: "Second" });
  });

  it("failed turns are marked but still appended", () => {
    let vm = onSessionStarted(initialViewModel(), {
      session_id: "abc",
      reply: reply("Welcome!"),
    });
    vm = onUtteranceSent(vm, "Open 9");
    vm = onReply(vm, reply("No such result.", true), METRICS);
    expect(vm.chat.at(-1)).toEqual({
      who: "assistant",
      text: "No such result.",
      failed: true,
    });
  });

  it("turn errors surface as failed assistant messages", () => {
    let vm = onSessionStarted(initialViewModel(), {
      session_id: "abc",
      reply: reply("Welcome!"),
    });
    vm = onUtteranceSent(vm, "hello");
    vm = onTurnError(vm, "Network problem.");
    expect(vm.pending).toBe(false);
    expect(vm.chat.at(-1)?.failed).toBe(true);
  });

  it("startup errors set the banner without touching chat", () => {
    const vm = onStartupError(initialViewModel(), "Cannot reach the service.");
    expect(vm.error).toBe("Cannot reach the service.");
    expect(vm.chat).toEqual([]);
  });

  it("clicks emit exactly the data-utterance payload, never composed text", () => {
    expect(utteranceForClick({ dataset: { utterance: "Open 2" } })).toBe("Open 2");
    expect(
      utteranceForClick({ dataset: { utterance: "No, show me more results" } }),
    ).toBe("No, show me more results");
    expect(utteranceForClick({ dataset: {} })).toBeNull();
    expect(utteranceForClick({})).toBeNull();
  });
});
