import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { ResultRow, SearchResponse } from "../src/types.js";

export interface RecordedCall {
  path: string;
  init?: RequestInit;
  body: unknown;
}

export type RouteHandler = (
  call: RecordedCall,
) => Response | Promise<Response>;

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export function errorResponse(
  status: number,
  code: string,
  message: string,
  extra: Record<string, unknown> = {},
): Response {
  return jsonResponse(
    { status: "error", error: { code, message, ...extra } },
    status,
  );
}

/** Stub transport: records every call and dispatches by path. */
export function stubService(routes: Record<string, RouteHandler>) {
  const calls: RecordedCall[] = [];
  const fetchFn = async (path: string, init?: RequestInit): Promise<Response> => {
    const body =
      typeof init?.body === "string" ? JSON.parse(init.body) : undefined;
    const call: RecordedCall = { path, init, body };
    calls.push(call);
    if (init?.signal?.aborted) {
      throw new DOMException("aborted", "AbortError");
    }
    const handler = routes[path];
    if (handler === undefined) {
      throw new Error(`unstubbed path: ${path}`);
    }
    return handler(call);
  };
  return { calls, fetchFn };
}

export function mountApp(fetchFn: Parameters<typeof stubService>[0] extends never
  ? never
  : (path: string, init?: RequestInit) => Promise<Response>): App {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app")!;
  return new App(root, new ApiClient("", fetchFn));
}

export function searchBody(
  results: ResultRow[],
  queryId = "1",
  reused: SearchResponse["reused_from"] = null,
): SearchResponse {
  return {
    status: "ok",
    model: "pnorm",
    query_id: queryId,
    results,
    reused_from: reused,
  };
}

export function rows(container: HTMLElement = document.body): HTMLElement[] {
  return Array.from(container.querySelectorAll<HTMLElement>(".result-row"));
}

export function clickJudgment(
  row: HTMLElement,
  judgment: "relevant" | "nonrelevant",
): void {
  const button = row.querySelector<HTMLButtonElement>(`.judge-${judgment}`);
  if (button === null) {
    throw new Error("judgment button missing");
  }
  button.click();
}
