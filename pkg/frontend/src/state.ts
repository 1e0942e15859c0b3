import { Estimate, NextQuestion, Pair, SessionView } from "./types.js";

// Everything the page renders.  Weights and hints come verbatim from the
// last service response; nothing is computed client-side.

export interface UiSessionView {
  phase: "setup" | "question" | "terminal";
  sessionId: string | null;
  itemLabels: string[];
  answered: number;
  total: number;
  question: { pair: Pair; labels: [string, string] } | null;
  favouring: "left" | "right";
  ratioIndex: number;
  exactText: string;
  inFlight: boolean;
  error: string | null;
  allowedPairs: Pair[] | null;
  lastEstimate: Estimate | null;
  terminalState: "abandoned" | "complete" | null;
  extrapolated: boolean;
}

export function initialView(): UiSessionView {
  return {
    phase: "setup",
    sessionId: null,
    itemLabels: [],
    answered: 0,
    total: 0,
    question: null,
    favouring: "left",
    ratioIndex: 8,
    exactText: "",
    inFlight: false,
    error: null,
    allowedPairs: null,
    lastEstimate: null,
    terminalState: null,
    extrapolated: false,
  };
}

function clampProgress(view: UiSessionView): UiSessionView {
  // progress can never exceed the sequence length, whatever the server said
  return { ...view, answered: Math.min(view.answered, view.total) };
}

export function onSessionCreated(view: UiSessionView, session: SessionView): UiSessionView {
  return clampProgress({
    ...view,
    phase: "question",
    sessionId: session.id,
    itemLabels: session.item_labels,
    answered: session.answered,
    total: session.total,
    lastEstimate: session.estimate,
    extrapolated: session.extrapolated,
    error: null,
    allowedPairs: null,
  });
}

export function onQuestion(view: UiSessionView, next: NextQuestion): UiSessionView {
  if (next.done || !next.pair || !next.labels) {
    return { ...view, phase: "terminal", terminalState: "complete", question: null };
  }
  return {
    ...view,
    phase: "question",
    question: { pair: next.pair, labels: next.labels },
    favouring: "left",
    ratioIndex: 8,
    exactText: "",
  };
}

export function onAnswerAccepted(
  view: UiSessionView,
  estimate: Estimate,
  state: SessionView["state"],
): UiSessionView {
  const answered = view.answered + 1;
  const done = state !== "active";
  return clampProgress({
    ...view,
    answered,
    lastEstimate: estimate,
    error: null,
    allowedPairs: null,
    inFlight: false,
    phase: done ? "terminal" : "question",
    terminalState: done ? (state as "complete" | "abandoned") : null,
    question: done ? null : view.question,
  });
}

export function onAbandoned(view: UiSessionView, estimate: Estimate): UiSessionView {
  return {
    ...view,
    phase: "terminal",
    terminalState: "abandoned",
    lastEstimate: estimate,
    question: null,
    inFlight: false,
    error: null,
  };
}

export function onError(
  view: UiSessionView,
  message: string,
  allowedPairs: Pair[] | null = null,
): UiSessionView {
  // surfaced inline; the entered ratio/exact text is left untouched
  return { ...view, inFlight: false, error: message, allowedPairs };
}

/** The weights the page may render: only a connected estimate has any. */
export function displayedWeights(view: UiSessionView): number[] | null {
  const est = view.lastEstimate;
  if (!est || !est.connected || !est.weights) return null;
  return est.weights;
}

/** Reliability hint shown as plain service-sourced text, or null. */
export function hintText(view: UiSessionView): string | null {
  const hint = view.lastEstimate?.reliability_hint;
  if (!hint) return null;
  return (
    `expected error at this point ≈ ${hint.mean_d_euc_avg.toFixed(4)}, ` +
    `expected rank agreement ≈ ${hint.mean_tau_avg.toFixed(4)}`
  );
}
