/** Typed client for the chatiyp HTTP API. */

export interface ContextItem {
  source: "cypher" | "vector";
  text: string;
  score: number;
}

export interface AskResponse {
  answer: string;
  cypher: string | null;
  context: ContextItem[];
  path: string[];
  timings: Record<string, number>;
  request_id: string;
}

export interface AskOptions {
  k?: number;
  min_rows?: number;
  top_n?: number;
}

export interface HealthResponse {
  status: string;
  graph_nodes: number;
  index_entries: number;
  version: string;
}

export class ApiError extends Error {
  status: number;
  stage: string | null;

  constructor(status: number, message: string, stage: string | null = null) {
    super(message);
    this.status = status;
    this.stage = stage;
  }
}

type FetchLike = typeof fetch;

async function readErrorDetail(response: Response): Promise<ApiError> {
  let message = `request failed with status ${response.status}`;
  let stage: string | null = null;
  try {
    const body = await response.json();
    const detail = body?.detail;
    if (typeof detail === "string") {
      message = detail;
    } else if (detail && typeof detail === "object") {
      stage = typeof detail.stage === "string" ? detail.stage : null;
      message = typeof detail.error === "string" ? detail.error : message;
    }
  } catch {
    // body was not JSON; keep the generic message
  }
  return new ApiError(response.status, message, stage);
}

export class ApiClient {
  baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  async ask(question: string, options?: AskOptions): Promise<AskResponse> {
    const body: Record<string, unknown> = { question };
    if (options) body.options = options;
    const response = await this.fetchImpl(`${this.baseUrl}/api/ask`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await readErrorDetail(response);
    return (await response.json()) as AskResponse;
  }

  async health(): Promise<HealthResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/health`);
    if (!response.ok) throw await readErrorDetail(response);
    return (await response.json()) as HealthResponse;
  }

  async schema(): Promise<Record<string, unknown>> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/schema`);
    if (!response.ok) throw await readErrorDetail(response);
    return (await response.json()) as Record<string, unknown>;
  }
}
