// Typed client for the question answering service. The chat page talks to
// exactly three endpoints: POST /v1/ask, POST /v1/pairs, GET /v1/health.

export interface AskRequest {
  question: string;
  state?: string;
  district?: string;
}

export interface Alternative {
  matched_question: string;
  similarity: number;
}

export interface AskResponse {
  source: 'kb' | 'weather' | 'escalate';
  answer: string;
  matched_question: string | null;
  similarity: number | null;
  answer_score: number | null;
  alternatives: Alternative[];
  reason: string | null;
}

export interface PairRequest {
  question: string;
  answer: string;
}

export interface PairResponse {
  status: string;
  pending: number;
}

export interface HealthResponse {
  status: string;
  fingerprint: string;
  entries: number;
  dim: number;
  threshold: number;
  similarity_floor: number;
  pending: number;
}

/** How long a request may stay in flight before the client gives up. */
export const REQUEST_TIMEOUT_MS = 10_000;

/** Raised when the service answers with a non-2xx status. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = 'ApiError';
    this.status = status;
  }
}

async function postJson<T>(path: string, body: unknown, timeoutMs: number): Promise<T> {
  const response = await fetch(path, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
    signal: AbortSignal.timeout(timeoutMs),
  });
  if (!response.ok) {
    throw new ApiError(response.status, `${path} failed with status ${response.status}`);
  }
  return response.json() as Promise<T>;
}

/**
 * Send a question to the service and return its routing decision.
 *
 * State and district are forwarded only when non-empty so the server
 * falls back to its own defaults otherwise.
 */
export function askQuestion(request: AskRequest, timeoutMs: number = REQUEST_TIMEOUT_MS): Promise<AskResponse> {
  const body: AskRequest = { question: request.question };
  if (request.state) {
    body.state = request.state;
  }
  if (request.district) {
    body.district = request.district;
  }
  return postJson<AskResponse>('/v1/ask', body, timeoutMs);
}

/** Queue a reviewed question/answer pair for the next index rebuild. */
export function submitPair(pair: PairRequest, timeoutMs: number = REQUEST_TIMEOUT_MS): Promise<PairResponse> {
  return postJson<PairResponse>('/v1/pairs', pair, timeoutMs);
}

/** Fetch index stats for the footer status line. */
export async function fetchHealth(timeoutMs: number = REQUEST_TIMEOUT_MS): Promise<HealthResponse> {
  const response = await fetch('/v1/health', { signal: AbortSignal.timeout(timeoutMs) });
  if (!response.ok) {
    throw new ApiError(response.status, `/v1/health failed with status ${response.status}`);
  }
  return response.json() as Promise<HealthResponse>;
}
