import { describe, expect, it, vi } from "vitest";

import {
  clickJudgment,
  errorResponse,
  jsonResponse,
  mountApp,
  rows,
  searchBody,
  stubService,
} from "./support.js";

const THREE_ROWS = [
  { doc_id: "d2", score: 0.91, snippet: "second doc" },
  { doc_id: "d9", score: 0.5, snippet: "ninth doc" },
  { doc_id: "d1", score: 0.25, snippet: "first doc" },
];

describe("search submission", () => {
  it("renders rows in exactly the order the service returned", async () => {
    const { fetchFn } = stubService({
      "/api/search": () => jsonResponse(searchBody(THREE_ROWS)),
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat";
    await app.submitSearch();
    const ids = rows().map((row) => row.dataset.docId);
    expect(ids).toEqual(["d2", "d9", "d1"]);
  });

  it("shows every score verbatim from the payload", async () => {
    const sentinel = [
      { doc_id: "dA", score: 0.123456789, snippet: "x" },
      { doc_id: "dB", score: 7.25, snippet: "y" },
    ];
    const { fetchFn } = stubService({
      "/api/search": () => jsonResponse(searchBody(sentinel)),
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat";
    await app.submitSearch();
    const scores = rows().map(
      (row) => row.querySelector(".result-score")!.textContent,
    );
    expect(scores).toEqual(["0.123456789", "7.25"]);
  });

  it("renders the no-matches state for an empty result set", async () => {
    const { fetchFn } = stubService({
      "/api/search": () => jsonResponse(searchBody([])),
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat";
    await app.submitSearch();
    expect(document.querySelector("#results-box .empty-state")!.textContent).toBe(
      "no matches",
    );
  });

  it("puts the caret under the reported column on a parse error", async () => {
    const { fetchFn } = stubService({
      "/api/search": () =>
        errorResponse(400, "parse_error", "expected a term (column 8)", {
          column: 8,
        }),
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat AND";
    await app.submitSearch();
    const sketch = document.querySelector(".problem-caret")!.textContent!;
    const [queryLine, caretLine] = sketch.split("\n");
    expect(queryLine).toBe("cat AND");
    expect(caretLine).toBe("       ^");
    expect(caretLine!.indexOf("^")).toBe(7); // column 8, 1-based
  });

  it("offers a retry affordance on network failure", async () => {
    let failures = 0;
    const { fetchFn } = stubService({
      "/api/search": () => {
        if (failures++ === 0) {
          throw new TypeError("fetch failed");
        }
        return jsonResponse(searchBody(THREE_ROWS));
      },
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat";
    await app.submitSearch();
    const retry = document.querySelector<HTMLButtonElement>(".retry-button");
    expect(retry).not.toBeNull();
    retry!.click();
    await vi.waitFor(() => expect(rows().length).toBe(3));
  });

  it("shows the reused banner when the service reports a stored query", async () => {
    const { fetchFn } = stubService({
      "/api/search": () =>
        jsonResponse(
          searchBody(THREE_ROWS, "7", {
            id: "3",
            similarity: 1.0,
            results: ["d2"],
          }),
        ),
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat";
    await app.submitSearch();
    const banner = document.querySelector(".reused-banner")!;
    expect(banner.textContent).toContain("3");
    expect(banner.textContent).toContain("1");
  });

  it("keeps judgments across re-renders but resets them on a new search", async () => {
    const { fetchFn } = stubService({
      "/api/search": () => jsonResponse(searchBody(THREE_ROWS)),
    });
    const app = mountApp(fetchFn);
    app.state.panel.query = "cat";
    await app.submitSearch();
    clickJudgment(rows()[0]!, "relevant");
    app.render();
    expect(rows()[0]!.classList.contains("judgment-relevant")).toBe(true);
    await app.submitSearch();
    expect(rows()[0]!.classList.contains("judgment-relevant")).toBe(false);
  });

  it("aborts the in-flight request when a new search is submitted", async () => {
    let resolveFirst: ((response: Response) => void) | null = null;
    let callCount = 0;
    const signals: (AbortSignal | undefined)[] = [];
    const fetchFn = async (
      _path: string,
      init?: RequestInit,
    ): Promise<Response> => {
      callCount += 1;
      signals.push(init?.signal ?? undefined);
      if (callCount === 1) {
        return new Promise<Response>((resolve) => {
          resolveFirst = resolve;
        });
      }
      return jsonResponse(searchBody(THREE_ROWS, "2"));
    };
    const app = mountApp(fetchFn);
    app.state.panel.query = "slow";
    const first = app.submitSearch();
    app.state.panel.query = "fast";
    const second = app.submitSearch();
    expect(signals[0]!.aborted).toBe(true);
    resolveFirst!(jsonResponse(searchBody([], "1")));
    await Promise.all([first, second]);
    // The superseded response never clobbers the newer one.
    expect(rows().length).toBe(3);
  });

  it("sends model, p, and reuse settings with the request", async () => {
    const { calls, fetchFn } = stubService({
      "/api/search": () => jsonResponse(searchBody([])),
    });
    const app = mountApp(fetchFn);
    app.state.panel = {
      query: "cat",
      model: "pnorm",
      p: 3.5,
      reuse: true,
      weights: {},
    };
    await app.submitSearch();
    expect(calls[0]!.body).toMatchObject({
      query: "cat",
      model: "pnorm",
      p: 3.5,
      reuse: true,
    });
  });
});
