import { ApiClient, ApiError, NetworkError } from "./api.js";
import {
  AppState,
  applyExpansion,
  applyFeedbackResponse,
  applySearchResponse,
  canSubmitFeedback,
  clearDiscarded,
  feedbackPayload,
  initialState,
  setJudgment,
  toggleConcept,
} from "./state.js";
import {
  renderDrawer,
  renderExpansion,
  renderProblem,
  renderResults,
  renderReusedBanner,
  renderWarning,
  renderWeightChips,
} from "./render.js";
import type { ExpandCandidate, Judgment, ModelName } from "./types.js";

const PAGE = `
<div class="layout">
  <section class="query-panel">
    <h2>Query</h2>
    <input id="query-input" type="text" placeholder="cat AND (dog:0.5 OR bird)" />
    <div class="query-options">
      <select id="model-select">
        <option value="pnorm">p-norm</option>
        <option value="bim">binary independence</option>
        <option value="inet">inference network</option>
      </select>
      <label class="p-label">p <input id="p-input" type="number" min="1" step="0.5" value="2" /></label>
      <label class="reuse-label"><input id="reuse-toggle" type="checkbox" /> reuse stored queries</label>
    </div>
    <button id="search-button" type="button">search</button>
    <div id="problem-box" hidden></div>
  </section>
  <section class="results-panel">
    <h2>Results</h2>
    <div id="reused-box" hidden></div>
    <div id="warning-box" hidden></div>
    <div id="results-box"></div>
    <button id="feedback-button" type="button" disabled>refine from judgments</button>
  </section>
  <section class="side-panel">
    <h2>Weighted query</h2>
    <div id="chips-box"></div>
    <h2>Expansion</h2>
    <div class="expand-options">
      <label>top docs <input id="mtop-input" type="number" min="2" value="5" /></label>
      <label>concepts <input id="k-input" type="number" min="1" value="5" /></label>
    </div>
    <button id="expand-button" type="button">suggest concepts</button>
    <div id="expansion-box"></div>
  </section>
</div>
<section class="drawer">
  <h2>Stored queries</h2>
  <button id="drawer-refresh" type="button">refresh</button>
  <div id="drawer-box"></div>
</section>
`;

export class App {
  state: AppState = initialState();
  private inFlight: AbortController | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly resultCount: number = 10,
  ) {
    root.innerHTML = PAGE;
    this.queryInput.addEventListener("input", () => {
      this.state.panel.query = this.queryInput.value;
    });
    this.queryInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") void this.submitSearch();
    });
    this.modelSelect.addEventListener("change", () => {
      this.state.panel.model = this.modelSelect.value as ModelName;
    });
    this.pInput.addEventListener("change", () => {
      this.state.panel.p = Number(this.pInput.value) || 2.0;
    });
    this.reuseToggle.addEventListener("change", () => {
      this.state.panel.reuse = this.reuseToggle.checked;
    });
    this.byId("search-button").addEventListener("click", () => {
      void this.submitSearch();
    });
    this.byId("feedback-button").addEventListener("click", () => {
      void this.submitFeedback();
    });
    this.byId("expand-button").addEventListener("click", () => {
      void this.requestExpansion();
    });
    this.byId("drawer-refresh").addEventListener("click", () => {
      void this.refreshDrawer();
    });
    this.render();
  }

  private byId(id: string): HTMLElement {
    const node = this.root.querySelector(`#${id}`);
    if (!(node instanceof HTMLElement)) {
      throw new Error(`missing element #${id}`);
    }
    return node;
  }

  private get queryInput(): HTMLInputElement {
    return this.byId("query-input") as HTMLInputElement;
  }

  private get modelSelect(): HTMLSelectElement {
    return this.byId("model-select") as HTMLSelectElement;
  }

  private get pInput(): HTMLInputElement {
    return this.byId("p-input") as HTMLInputElement;
  }

  private get reuseToggle(): HTMLInputElement {
    return this.byId("reuse-toggle") as HTMLInputElement;
  }

  /** One search at a time: a new submission cancels the previous one. */
  async submitSearch(): Promise<void> {
    if (!this.state.panel.query.trim()) {
      return;
    }
    this.inFlight?.abort();
    const controller = new AbortController();
    this.inFlight = controller;
    this.state = { ...this.state, searching: true };
    try {
      const response = await this.api.search(
        this.state.panel,
        this.resultCount,
        controller.signal,
      );
      if (controller !== this.inFlight) {
        return; // a newer search superseded this one
      }
      this.state = applySearchResponse(this.state, response);
    } catch (error) {
      if (controller !== this.inFlight) {
        return;
      }
      this.state = {
        ...this.state,
        searching: false,
        problem: describeProblem(error),
      };
    } finally {
      if (controller === this.inFlight) {
        this.inFlight = null;
      }
    }
    this.render();
  }

  async submitFeedback(): Promise<void> {
    if (!canSubmitFeedback(this.state)) {
      return;
    }
    try {
      const response = await this.api.feedback(feedbackPayload(this.state));
      this.state = applyFeedbackResponse(this.state, response);
      this.render();
      // The discarded chips were shown struck-through once; the next
      // render drops them.
      this.state = clearDiscarded(this.state);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.state = {
          ...this.state,
          problem: {
            message: "this query is no longer stored; run the search again",
            column: null,
            retryable: false,
          },
        };
      } else {
        this.state = { ...this.state, problem: describeProblem(error) };
      }
      this.render();
    }
  }

  async requestExpansion(): Promise<void> {
    const mTop = Number((this.byId("mtop-input") as HTMLInputElement).value) || 5;
    const kConcepts = Number((this.byId("k-input") as HTMLInputElement).value) || 5;
    if (!this.state.panel.query.trim()) {
      return;
    }
    try {
      const response = await this.api.expand(
        this.state.panel.query,
        mTop,
        kConcepts,
      );
      this.state = applyExpansion(this.state, response.added, response.no_expansion);
      if (!response.no_expansion) {
        this.state.panel.weights = { ...response.query };
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state = {
          ...this.state,
          expansion: [],
          expansionEmpty: false,
          expansionUnavailable: "build an index first",
        };
      } else {
        this.state = { ...this.state, problem: describeProblem(error) };
      }
    }
    this.render();
  }

  async refreshDrawer(): Promise<void> {
    try {
      const stored = await this.api.queries();
      this.state = { ...this.state, stored };
    } catch (error) {
      this.state = { ...this.state, problem: describeProblem(error) };
    }
    this.render();
  }

  judge(docId: string, judgment: Judgment): void {
    this.state = setJudgment(this.state, docId, judgment);
    this.render();
  }

  private onToggleConcept = (candidate: ExpandCandidate): void => {
    this.state = toggleConcept(this.state, candidate);
    this.render();
  };

  render(): void {
    renderResults(this.byId("results-box"), this.state.rows, (docId, judgment) =>
      this.judge(docId, judgment),
    );
    renderWeightChips(
      this.byId("chips-box"),
      this.state.panel.weights,
      this.state.discarded,
    );
    renderExpansion(
      this.byId("expansion-box"),
      this.state.expansion,
      this.state.expansionEmpty,
      this.state.expansionUnavailable,
      this.state.panel.weights,
      this.onToggleConcept,
    );
    renderReusedBanner(this.byId("reused-box"), this.state.reused);
    renderWarning(this.byId("warning-box"), this.state.warning);
    renderProblem(
      this.byId("problem-box"),
      this.state.problem,
      this.state.panel.query,
      () => void this.submitSearch(),
    );
    renderDrawer(this.byId("drawer-box"), this.state.stored);
    const feedbackButton = this.byId("feedback-button") as HTMLButtonElement;
    feedbackButton.disabled = !canSubmitFeedback(this.state);
  }
}

function describeProblem(error: unknown) {
  if (error instanceof ApiError) {
    return {
      message: error.detail.message,
      column: error.detail.column ?? null,
      retryable: false,
    };
  }
  if (error instanceof NetworkError) {
    return { message: error.message, column: null, retryable: true };
  }
  return { message: String(error), column: null, retryable: false };
}
