/** Application wiring: form handling, the single in-flight request rule, and
 * re-rendering the transcript after every state change. */

import { ApiClient, ApiError } from "./api";
import { renderTranscript } from "./render";
import {
  beginTurn,
  canSubmit,
  createTranscript,
  failTurn,
  hasPending,
  removeErrorTurn,
  resolveTurn,
  Transcript,
} from "./transcript";

export interface AppElements {
  form: HTMLFormElement;
  input: HTMLInputElement | HTMLTextAreaElement;
  submit: HTMLButtonElement;
  transcript: HTMLElement;
}

export class ChatApp {
  transcript: Transcript = createTranscript();
  private client: ApiClient;
  private els: AppElements;

  constructor(els: AppElements, client: ApiClient) {
    this.els = els;
    this.client = client;
    els.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit(els.input.value);
    });
    els.input.addEventListener("input", () => this.syncControls());
    this.syncControls();
    this.render();
  }

  private syncControls(): void {
    this.els.submit.disabled = !canSubmit(this.transcript, this.els.input.value);
    this.els.input.disabled = hasPending(this.transcript);
  }

  private render(): void {
    renderTranscript(this.els.transcript, this.transcript, {
      onRetry: (index, question) => void this.retry(index, question),
    });
    this.syncControls();
  }

  async submit(text: string): Promise<void> {
    if (!canSubmit(this.transcript, text)) return;
    this.transcript = beginTurn(this.transcript, text);
    this.els.input.value = "";
    this.render();
    try {
      const response = await this.client.ask(text.trim());
      this.transcript = resolveTurn(this.transcript, response);
    } catch (err) {
      const message =
        err instanceof ApiError
          ? `The server could not answer (${err.status}): ${err.message}`
          : "Network error: the server could not be reached.";
      this.transcript = failTurn(this.transcript, message);
    }
    this.render();
  }

  async retry(turnIndex: number, question: string): Promise<void> {
    this.transcript = removeErrorTurn(this.transcript, turnIndex);
    this.render();
    await this.submit(question);
  }
}

export function mountApp(doc: Document, client?: ApiClient): ChatApp {
  const els: AppElements = {
    form: doc.querySelector("#ask-form") as HTMLFormElement,
    input: doc.querySelector("#question-input") as HTMLInputElement,
    submit: doc.querySelector("#submit-button") as HTMLButtonElement,
    transcript: doc.querySelector("#transcript") as HTMLElement,
  };
  return new ChatApp(els, client ?? new ApiClient());
}
