import { RATIO_STEPS } from "./ratio.js";
import { UiSessionView, displayedWeights, hintText } from "./state.js";

export interface Handlers {
  onCreate?: (n: number, labels: string[], budget: number | null) => void;
  onRatioChange?: (index: number) => void;
  onFavouringChange?: (side: "left" | "right") => void;
  onExactChange?: (text: string) => void;
  onSubmit?: () => void;
  onAbandon?: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderSetup(doc: Document, handlers: Handlers): HTMLElement {
  const form = el(doc, "form", "setup");
  form.append(el(doc, "h1", undefined, "Pairwise comparison questionnaire"));
  const nInput = el(doc, "input");
  nInput.id = "setup-n";
  nInput.type = "number";
  nInput.min = "2";
  nInput.max = "8";
  nInput.value = "5";
  const labelsInput = el(doc, "input");
  labelsInput.id = "setup-labels";
  labelsInput.placeholder = "labels, comma separated (optional)";
  const budgetInput = el(doc, "input");
  budgetInput.id = "setup-budget";
  budgetInput.type = "number";
  budgetInput.placeholder = "answer budget (optional)";
  const start = el(doc, "button", undefined, "start");
  start.id = "setup-start";
  start.type = "submit";
  form.append(
    labelWrap(doc, "how many items?", nInput),
    labelWrap(doc, "item names", labelsInput),
    labelWrap(doc, "planned number of answers", budgetInput),
    start,
  );
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const labels = labelsInput.value
      .split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    const budget = budgetInput.value ? Number(budgetInput.value) : null;
    handlers.onCreate?.(Number(nInput.value), labels, budget);
  });
  return form;
}

function labelWrap(doc: Document, text: string, input: HTMLElement): HTMLElement {
  const wrap = el(doc, "label", "field", text + " ");
  wrap.append(input);
  return wrap;
}

function renderQuestion(doc: Document, view: UiSessionView, handlers: Handlers): HTMLElement {
  const box = el(doc, "section", "question");
  const q = view.question!;
  box.append(
    el(doc, "h2", "question-title", `${q.labels[0]} vs ${q.labels[1]}`),
    el(doc, "p", "progress", `question ${view.answered + 1} of ${view.total}`),
  );

  const favouring = el(doc, "div", "favouring");
  for (const side of ["left", "right"] as const) {
    const btn = el(doc, "button", view.favouring === side ? "side active" : "side");
    btn.type = "button";
    btn.id = `favour-${side}`;
    btn.textContent = side === "left" ? `${q.labels[0]} is better` : `${q.labels[1]} is better`;
    btn.addEventListener("click", () => handlers.onFavouringChange?.(side));
    favouring.append(btn);
  }
  box.append(favouring);

  const slider = el(doc, "input", "ratio-slider");
  slider.id = "ratio-slider";
  slider.type = "range";
  slider.min = "0";
  slider.max = String(RATIO_STEPS.length - 1);
  slider.step = "1";
  slider.value = String(view.ratioIndex);
  slider.addEventListener("input", () => handlers.onRatioChange?.(Number(slider.value)));
  const ratioLabel = el(doc, "span", "ratio-label", RATIO_STEPS[view.ratioIndex]!.label);
  ratioLabel.id = "ratio-label";
  box.append(labelWrap(doc, "how many times better?", slider), ratioLabel);

  const exact = el(doc, "input", "exact-value");
  exact.id = "exact-value";
  exact.placeholder = "exact value, e.g. 2.5 or 7/3";
  exact.value = view.exactText;
  exact.addEventListener("input", () => handlers.onExactChange?.(exact.value));
  box.append(labelWrap(doc, "or type an exact ratio", exact));

  const submit = el(doc, "button", "submit", "submit answer");
  submit.id = "submit-answer";
  submit.type = "button";
  submit.disabled = view.inFlight; // one in-flight mutation at a time
  submit.addEventListener("click", () => handlers.onSubmit?.());
  box.append(submit);
  return box;
}

function renderEstimate(doc: Document, view: UiSessionView): HTMLElement {
  const box = el(doc, "section", "estimate");
  const weights = displayedWeights(view);
  if (weights === null) {
    const answered = view.lastEstimate?.e_answered ?? 0;
    box.append(
      el(
        doc,
        "p",
        "not-connected",
        answered === 0
          ? "no comparisons yet"
          : "not enough comparisons yet — the answered pairs do not connect every item",
      ),
    );
    const components = view.lastEstimate?.components;
    if (components && components.length) {
      box.append(
        el(
          doc,
          "p",
          "components",
          "connected groups so far: " +
            components
              .map((group) => group.map((i) => view.itemLabels[i] ?? `item ${i + 1}`).join(", "))
              .join(" | "),
        ),
      );
    }
    return box;
  }
  box.append(el(doc, "h3", undefined, "current weight estimate"));
  const bars = el(doc, "div", "bars");
  weights.forEach((w, i) => {
    const row = el(doc, "div", "bar-row");
    const bar = el(doc, "div", "bar");
    bar.style.width = `${Math.round(w * 100)}%`;
    row.append(
      el(doc, "span", "bar-label", view.itemLabels[i] ?? `item ${i + 1}`),
      bar,
      el(doc, "span", "bar-value", w.toFixed(3)),
    );
    bars.append(row);
  });
  box.append(bars);
  const hint = hintText(view);
  if (hint) box.append(el(doc, "p", "hint", hint));
  if (view.extrapolated) {
    box.append(
      el(doc, "p", "extrapolated", "sequence extrapolated beyond the simulated range"),
    );
  }
  return box;
}

export function render(
  doc: Document,
  container: HTMLElement,
  view: UiSessionView,
  handlers: Handlers = {},
): void {
  container.replaceChildren();
  if (view.phase === "setup") {
    container.append(renderSetup(doc, handlers));
    return;
  }
  if (view.phase === "question" && view.question) {
    container.append(renderQuestion(doc, view, handlers));
  }
  if (view.phase === "terminal") {
    const note = el(
      doc,
      "p",
      "terminal",
      view.terminalState === "abandoned"
        ? `stopped after ${view.answered} of ${view.total} answers`
        : `all ${view.total} comparisons answered`,
    );
    note.id = "terminal-note";
    container.append(note);
  }
  container.append(renderEstimate(doc, view));
  if (view.error) {
    const err = el(doc, "p", "error", view.error);
    err.id = "error-box";
    if (view.allowedPairs && view.allowedPairs.length) {
      err.textContent += ` (allowed now: ${view.allowedPairs
        .map(([i, j]) => `${view.itemLabels[i]} vs ${view.itemLabels[j]}`)
        .join("; ")})`;
    }
    container.append(err);
  }
  if (view.phase === "question") {
    const stop = el(doc, "button", "abandon", "stop here and use what I have");
    stop.id = "abandon";
    stop.type = "button";
    stop.addEventListener("click", () => handlers.onAbandon?.());
    container.append(stop);
  }
}
