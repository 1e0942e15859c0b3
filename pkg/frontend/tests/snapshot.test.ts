// @vitest-environment jsdom
//
// Headless snapshots of the main page states, fed from recorded transcripts
// so every rendered number comes from an actual service response.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { render } from "../src/render.js";
import {
  initialView,
  onAbandoned,
  onAnswerAccepted,
  onQuestion,
  onSessionCreated,
} from "../src/state.js";

function loadTranscript(name: string) {
  return JSON.parse(readFileSync(join(process.cwd(), "fixtures", `${name}.json`), "utf8"));
}

function container(): HTMLElement {
  const node = document.createElement("div");
  document.body.replaceChildren(node);
  return node;
}

describe("page snapshots", () => {
  it("setup form", () => {
    const box = container();
    render(document, box, initialView());
    expect(box.innerHTML).toMatchSnapshot();
  });

  it("question before connectivity shows no weight bars", () => {
    const t = loadTranscript("transcript_n4_main");
    let view = onSessionCreated(initialView(), t.create_response);
    view = onQuestion(view, t.exchanges[0].next);
    const box = container();
    render(document, box, view);
    expect(box.querySelectorAll(".bar")).toHaveLength(0);
    expect(box.innerHTML).toMatchSnapshot();
  });

  it("estimate after connectivity renders service-sourced bars and hint", () => {
    const t = loadTranscript("transcript_n4_main");
    let view = onSessionCreated(initialView(), t.create_response);
    for (const ex of t.exchanges.slice(0, 4)) {
      view = onQuestion(view, ex.next);
      view = onAnswerAccepted(view, ex.answer_response.estimate, ex.answer_response.state);
    }
    const est = t.exchanges[3].answer_response.estimate;
    expect(est.connected).toBe(true);
    const box = container();
    render(document, box, view);
    const values = [...box.querySelectorAll(".bar-value")].map((n) => n.textContent);
    expect(values).toEqual(est.weights.map((w: number) => w.toFixed(3)));
    expect(box.querySelector(".hint")?.textContent).toContain("expected error at this point");
    expect(box.innerHTML).toMatchSnapshot();
  });

  it("star sequence terminal view", () => {
    const t = loadTranscript("transcript_n5_star");
    let view = onSessionCreated(initialView(), t.create_response);
    for (const ex of t.exchanges) {
      view = onQuestion(view, ex.next);
      view = onAnswerAccepted(view, ex.answer_response.estimate, ex.answer_response.state);
    }
    const box = container();
    render(document, box, view);
    expect(view.phase).toBe("terminal");
    expect(box.querySelector("#terminal-note")?.textContent).toContain("all 4 comparisons");
    expect(box.innerHTML).toMatchSnapshot();
  });

  it("abandoned-early terminal view lists components, no weights", () => {
    const t = loadTranscript("transcript_n4_abandon1");
    let view = onSessionCreated(initialView(), t.create_response);
    const ex = t.exchanges[0];
    view = onQuestion(view, ex.next);
    view = onAnswerAccepted(view, ex.answer_response.estimate, ex.answer_response.state);
    view = onAbandoned(view, t.abandon_response.estimate);
    const box = container();
    render(document, box, view);
    expect(box.querySelectorAll(".bar")).toHaveLength(0);
    expect(box.querySelector(".not-connected")).not.toBeNull();
    expect(box.innerHTML).toMatchSnapshot();
  });
});
