import type { AskResponse } from "../src/api";

export const GOLDEN_QUESTION =
  "What is the percentage of Japan's population in AS2497?";

export const GOLDEN_CYPHER =
  "MATCH (:AS {asn:2497})-[p:POPULATION]-(:Country {country_code:'JP'}) RETURN p.percent";

export function goldenResponse(overrides: Partial<AskResponse> = {}): AskResponse {
  return {
    answer: "52.0 percent of Japan's population is served by AS2497.",
    cypher: GOLDEN_CYPHER,
    context: [{ source: "cypher", text: "p.percent=52.0", score: 1.0 }],
    path: ["text_to_cypher"],
    timings: { retrieve_ms: 1.2, synthesize_ms: 0.8 },
    request_id: "test-request",
    ...overrides,
  };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** fetch stub returning queued responses in order and recording requests. */
export function fetchQueue(responses: (Response | Error)[]) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (input: RequestInfo | URL, init?: RequestInit) => {
    calls.push({ url: String(input), init });
    const next = responses.shift();
    if (!next) throw new Error("fetch queue exhausted");
    if (next instanceof Error) throw next;
    return next;
  };
  return { impl: impl as typeof fetch, calls };
}

export function flushPromises(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
