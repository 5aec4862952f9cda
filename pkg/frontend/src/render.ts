/** Pure DOM rendering: the view is a function of the transcript, nothing else.
 * Re-rendering from the same transcript reproduces the same markup. */

import type { AskResponse } from "./api";
import type { Transcript, Turn } from "./transcript";

export interface RenderHandlers {
  onRetry: (turnIndex: number, question: string) => void;
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

function renderBreadcrumb(doc: Document, path: string[]): HTMLElement {
  const nav = el(doc, "nav", "path-breadcrumb");
  nav.setAttribute("aria-label", "retrieval path");
  path.forEach((step, i) => {
    if (i > 0) nav.appendChild(el(doc, "span", "path-separator", " → "));
    nav.appendChild(el(doc, "span", "path-step", step));
  });
  return nav;
}

function renderCypherPanel(doc: Document, cypher: string): HTMLElement {
  const panel = el(doc, "details", "cypher-panel");
  panel.appendChild(el(doc, "summary", undefined, "Cypher query"));
  const code = el(doc, "code", "cypher-text", cypher);
  panel.appendChild(el(doc, "pre")).appendChild(code);
  const copy = el(doc, "button", "copy-cypher", "Copy");
  copy.type = "button";
  copy.addEventListener("click", () => {
    void doc.defaultView?.navigator.clipboard?.writeText(cypher);
  });
  panel.appendChild(copy);
  return panel;
}

function renderContext(doc: Document, response: AskResponse): HTMLElement {
  const list = el(doc, "ul", "context-list");
  for (const item of response.context) {
    const li = el(doc, "li", "context-item");
    li.appendChild(el(doc, "span", `source-badge source-${item.source}`, item.source));
    li.appendChild(el(doc, "span", "context-text", item.text));
    li.appendChild(el(doc, "span", "context-score", item.score.toFixed(3)));
    list.appendChild(li);
  }
  return list;
}

export function renderAnswer(doc: Document, response: AskResponse): HTMLElement {
  const container = el(doc, "div", "answer");
  container.appendChild(el(doc, "p", "answer-bubble", response.answer));
  // transparency parity: whenever a query was executed, it is shown
  if (response.cypher) {
    container.appendChild(renderCypherPanel(doc, response.cypher));
  }
  if (response.context.length > 0) {
    container.appendChild(renderContext(doc, response));
  }
  container.appendChild(renderBreadcrumb(doc, response.path));
  return container;
}

function renderTurn(
  doc: Document,
  turn: Turn,
  index: number,
  handlers: RenderHandlers,
): HTMLElement {
  const section = el(doc, "section", `turn turn-${turn.kind}`);
  section.appendChild(el(doc, "p", "question-bubble", turn.question));
  if (turn.kind === "pending") {
    section.appendChild(el(doc, "p", "pending-indicator", "Thinking..."));
  } else if (turn.kind === "answered") {
    section.appendChild(renderAnswer(doc, turn.response));
  } else {
    section.appendChild(el(doc, "p", "error-message", turn.message));
    const retry = el(doc, "button", "retry-button", "Retry");
    retry.type = "button";
    retry.addEventListener("click", () => handlers.onRetry(index, turn.question));
    section.appendChild(retry);
  }
  return section;
}

export function renderTranscript(
  container: HTMLElement,
  transcript: Transcript,
  handlers: RenderHandlers,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  transcript.turns.forEach((turn, index) => {
    container.appendChild(renderTurn(doc, turn, index, handlers));
  });
}
