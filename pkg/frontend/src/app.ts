import { ServiceClient } from "./api.js";
import { RATIO_STEPS, orientedValue, parseExactValue } from "./ratio.js";
import {
  UiSessionView,
  initialView,
  onAbandoned,
  onAnswerAccepted,
  onError,
  onQuestion,
  onSessionCreated,
} from "./state.js";
import { Handlers, render } from "./render.js";
import { ServiceError } from "./types.js";

export class App {
  view: UiSessionView = initialView();

  constructor(
    private doc: Document,
    private container: HTMLElement,
    private client: ServiceClient,
  ) {}

  private update(view: UiSessionView): void {
    this.view = view;
    const handlers: Handlers = {
      onCreate: (n, labels, budget) => void this.create(n, labels, budget),
      onRatioChange: (index) => this.update({ ...this.view, ratioIndex: index, exactText: "" }),
      onFavouringChange: (side) => this.update({ ...this.view, favouring: side }),
      onExactChange: (text) => {
        this.view = { ...this.view, exactText: text }; // keep typed text without re-render
      },
      onSubmit: () => void this.submit(),
      onAbandon: () => void this.abandon(),
    };
    render(this.doc, this.container, this.view, handlers);
  }

  start(): void {
    this.update(initialView());
  }

  async create(n: number, labels: string[], budget: number | null): Promise<void> {
    try {
      const session = await this.client.createSession(
        n,
        labels.length ? labels : undefined,
        budget ?? undefined,
      );
      this.update(onSessionCreated(this.view, session));
      await this.ask();
    } catch (err) {
      this.update(onError(this.view, messageOf(err)));
    }
  }

  private async ask(): Promise<void> {
    const id = this.view.sessionId!;
    const next = await this.client.nextQuestion(id);
    this.update(onQuestion(this.view, next));
  }

  chosenValue(): number | null {
    const exact = parseExactValue(this.view.exactText);
    if (this.view.exactText.trim()) {
      return exact === null ? null : orientedValue(exact, this.view.favouring);
    }
    const step = RATIO_STEPS[this.view.ratioIndex];
    return step ? orientedValue(step.value, this.view.favouring) : null;
  }

  async submit(): Promise<void> {
    if (this.view.inFlight || !this.view.question) return;
    const value = this.chosenValue();
    if (value === null) {
      this.update(onError(this.view, "enter a positive ratio"));
      return;
    }
    this.update({ ...this.view, inFlight: true });
    try {
      const result = await this.client.submitAnswer(
        this.view.sessionId!,
        this.view.question.pair,
        value,
        this.view.answered,
      );
      this.update(onAnswerAccepted(this.view, result.estimate, result.state));
      if (result.state === "active") await this.ask();
    } catch (err) {
      if (err instanceof ServiceError) {
        this.update(onError(this.view, err.body.message, err.body.allowed_pairs ?? null));
      } else {
        this.update(onError(this.view, `network failure, answer not recorded — retry (${messageOf(err)})`));
      }
    }
  }

  async abandon(): Promise<void> {
    if (!this.view.sessionId) return;
    try {
      const result = await this.client.abandon(this.view.sessionId);
      this.update(onAbandoned(this.view, result.estimate));
    } catch (err) {
      this.update(onError(this.view, messageOf(err)));
    }
  }
}

function messageOf(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export function mountApp(doc: Document, container: HTMLElement, baseUrl: string): App {
  const app = new App(doc, container, new ServiceClient(baseUrl));
  app.start();
  return app;
}
