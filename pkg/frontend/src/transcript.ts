/** Chat transcript state. Turns are append-only and never reordered; at most
 * one turn may be pending at a time. The view is re-rendered from this state
 * alone, so every mutation returns a fresh transcript object. */

import type { AskResponse } from "./api";

export type Turn =
  | { kind: "pending"; question: string }
  | { kind: "answered"; question: string; response: AskResponse }
  | { kind: "error"; question: string; message: string };

export interface Transcript {
  turns: Turn[];
}

export function createTranscript(): Transcript {
  return { turns: [] };
}

export function hasPending(transcript: Transcript): boolean {
  return transcript.turns.some((t) => t.kind === "pending");
}

/** A question may be submitted only when non-blank and nothing is in flight. */
export function canSubmit(transcript: Transcript, text: string): boolean {
  return text.trim().length > 0 && !hasPending(transcript);
}

export function beginTurn(transcript: Transcript, question: string): Transcript {
  const trimmed = question.trim();
  if (!canSubmit(transcript, trimmed)) {
    throw new Error("cannot submit: blank question or a turn is already pending");
  }
  return { turns: [...transcript.turns, { kind: "pending", question: trimmed }] };
}

function replaceLastPending(transcript: Transcript, turn: Turn): Transcript {
  const index = transcript.turns.findIndex((t) => t.kind === "pending");
  if (index === -1) throw new Error("no pending turn to resolve");
  const turns = transcript.turns.slice();
  turns[index] = turn;
  return { turns };
}

export function resolveTurn(transcript: Transcript, response: AskResponse): Transcript {
  const pending = transcript.turns.find((t) => t.kind === "pending");
  if (!pending) throw new Error("no pending turn to resolve");
  return replaceLastPending(transcript, {
    kind: "answered",
    question: pending.question,
    response,
  });
}

export function failTurn(transcript: Transcript, message: string): Transcript {
  const pending = transcript.turns.find((t) => t.kind === "pending");
  if (!pending) throw new Error("no pending turn to fail");
  return replaceLastPending(transcript, {
    kind: "error",
    question: pending.question,
    message,
  });
}

/** Drop an error turn so its question can be resubmitted. */
export function removeErrorTurn(transcript: Transcript, index: number): Transcript {
  const turn = transcript.turns[index];
  if (!turn || turn.kind !== "error") {
    throw new Error(`turn ${index} is not an error turn`);
  }
  return { turns: transcript.turns.filter((_, i) => i !== index) };
}
