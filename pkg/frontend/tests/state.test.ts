import { describe, expect, it } from "vitest";

import {
  displayedWeights,
  hintText,
  initialView,
  onAnswerAccepted,
  onError,
  onQuestion,
  onSessionCreated,
} from "../src/state.js";
import type { Estimate, SessionView } from "../src/types.js";

const disconnected: Estimate = {
  connected: false,
  e_answered: 2,
  weights: null,
  components: [[0, 1], [2], [3]],
  reliability_hint: null,
  extrapolated: false,
};

const connected: Estimate = {
  connected: true,
  e_answered: 4,
  weights: [0.4, 0.3, 0.2, 0.1],
  components: null,
  reliability_hint: {
    class_g6: "C]",
    levels: {},
    mean_d_euc_avg: 0.0761,
    mean_tau_avg: 0.7755,
  },
  extrapolated: false,
};

function session(partial: Partial<SessionView> = {}): SessionView {
  return {
    id: "abc",
    n: 4,
    item_labels: ["a", "b", "c", "d"],
    sequence: { n: 4, kind: "main", steps: [], groups: [], start_level: 4, realized_levels: {} },
    extrapolated: false,
    budget: null,
    answers: [],
    state: "active",
    total: 6,
    answered: 0,
    estimate: disconnected,
    ...partial,
  };
}

describe("session view state", () => {
  it("never shows weights before the service reports connectivity", () => {
    let view = onSessionCreated(initialView(), session());
    expect(displayedWeights(view)).toBeNull();
    view = onAnswerAccepted(view, disconnected, "active");
    expect(displayedWeights(view)).toBeNull();
    view = onAnswerAccepted(view, connected, "active");
    expect(displayedWeights(view)).toEqual([0.4, 0.3, 0.2, 0.1]);
  });

  it("ignores a connected flag with missing weights", () => {
    const view = onAnswerAccepted(
      onSessionCreated(initialView(), session()),
      { ...connected, weights: null },
      "active",
    );
    expect(displayedWeights(view)).toBeNull();
  });

  it("clamps progress so it never exceeds the sequence length", () => {
    let view = onSessionCreated(initialView(), session({ answered: 99, total: 6 }));
    expect(view.answered).toBe(6);
    view = onSessionCreated(initialView(), session({ answered: 5, total: 6 }));
    view = onAnswerAccepted(view, connected, "active");
    view = onAnswerAccepted(view, connected, "active");
    expect(view.answered).toBe(6);
    expect(view.answered).toBeLessThanOrEqual(view.total);
  });

  it("keeps the entered ratio when an answer is rejected", () => {
    let view = onSessionCreated(initialView(), session());
    view = onQuestion(view, { done: false, pair: [0, 1], labels: ["a", "b"] });
    view = { ...view, exactText: "7/3", ratioIndex: 12 };
    view = onError(view, "pair (0, 3) is not allowed", [[0, 1]]);
    expect(view.exactText).toBe("7/3");
    expect(view.ratioIndex).toBe(12);
    expect(view.error).toContain("not allowed");
    expect(view.allowedPairs).toEqual([[0, 1]]);
    expect(view.inFlight).toBe(false);
  });

  it("renders the reliability hint verbatim from the service numbers", () => {
    let view = onSessionCreated(initialView(), session());
    view = onAnswerAccepted(view, connected, "active");
    expect(hintText(view)).toBe(
      "expected error at this point ≈ 0.0761, expected rank agreement ≈ 0.7755",
    );
    expect(hintText(onSessionCreated(initialView(), session()))).toBeNull();
  });

  it("reaches the terminal phase when the sequence completes", () => {
    let view = onSessionCreated(initialView(), session({ answered: 5 }));
    view = onQuestion(view, { done: false, pair: [1, 3], labels: ["b", "d"] });
    view = onAnswerAccepted(view, connected, "complete");
    expect(view.phase).toBe("terminal");
    expect(view.terminalState).toBe("complete");
    expect(view.question).toBeNull();
  });
});
