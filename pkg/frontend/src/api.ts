import type {
  ApiErrorDetail,
  ExpandResponse,
  FeedbackPayload,
  FeedbackResponse,
  QueryPanelState,
  SearchResponse,
  StoredQuery,
} from "./types.js";

/** Service answered with an error envelope. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ApiErrorDetail,
  ) {
    super(detail.message);
    this.name = "ApiError";
  }
}

/** The request never reached the service (offline, refused, aborted). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseEnvelope<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok || body.status === "error") {
    const detail: ApiErrorDetail = body.error ?? {
      code: "unknown",
      message: `unexpected status ${response.status}`,
    };
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(
    path: string,
    payload: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
        signal,
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    return parseEnvelope<T>(response);
  }

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, { method: "GET" });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    return parseEnvelope<T>(response);
  }

  search(
    panel: QueryPanelState,
    k: number,
    signal?: AbortSignal,
  ): Promise<SearchResponse> {
    const payload: Record<string, unknown> = {
      query: panel.query,
      model: panel.model,
      k,
      reuse: panel.reuse,
    };
    if (panel.model === "pnorm") {
      payload.p = panel.p;
    }
    return this.post<SearchResponse>("/api/search", payload, signal);
  }

  feedback(payload: FeedbackPayload): Promise<FeedbackResponse> {
    return this.post<FeedbackResponse>("/api/feedback", payload);
  }

  expand(query: string, mTop: number, kConcepts: number): Promise<ExpandResponse> {
    return this.post<ExpandResponse>("/api/expand", {
      query,
      m_top: mTop,
      k_concepts: kConcepts,
    });
  }

  async queries(): Promise<StoredQuery[]> {
    const body = await this.get<{ status: "ok"; queries: StoredQuery[] }>(
      "/api/queries",
    );
    return body.queries;
  }
}
