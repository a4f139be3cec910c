import type {
  ExpandCandidate,
  Judgment,
  ResultRowView,
  ReusedFrom,
  StoredQuery,
} from "./types.js";
import type { QueryProblem } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderResults(
  container: HTMLElement,
  rows: ResultRowView[],
  onJudge: (docId: string, judgment: Judgment) => void,
): void {
  container.textContent = "";
  if (rows.length === 0) {
    container.appendChild(el("p", "empty-state", "no matches"));
    return;
  }
  const list = el("ol", "result-list");
  for (const row of rows) {
    const item = el("li", `result-row judgment-${row.judgment}`);
    item.dataset.docId = row.doc_id;
    const head = el("div", "result-head");
    head.appendChild(el("span", "result-doc", row.doc_id));
    head.appendChild(el("span", "result-score", String(row.score)));
    item.appendChild(head);
    item.appendChild(el("p", "result-snippet", row.snippet));
    const controls = el("div", "judgment-buttons");
    for (const judgment of ["relevant", "nonrelevant"] as const) {
      const button = el(
        "button",
        `judge-${judgment}${row.judgment === judgment ? " active" : ""}`,
        judgment === "relevant" ? "relevant" : "not relevant",
      );
      button.type = "button";
      button.addEventListener("click", () => onJudge(row.doc_id, judgment));
      controls.appendChild(button);
    }
    item.appendChild(controls);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderWeightChips(
  container: HTMLElement,
  weights: Record<string, number>,
  discarded: string[],
): void {
  container.textContent = "";
  for (const [term, weight] of Object.entries(weights)) {
    const chip = el("span", "chip weight-chip");
    chip.dataset.term = term;
    chip.appendChild(el("span", "chip-term", term));
    chip.appendChild(el("span", "chip-weight", String(weight)));
    container.appendChild(chip);
  }
  for (const term of discarded) {
    const chip = el("span", "chip weight-chip discarded");
    chip.dataset.term = term;
    const label = el("s", "chip-term", term);
    chip.appendChild(label);
    container.appendChild(chip);
  }
}

export function renderExpansion(
  container: HTMLElement,
  candidates: ExpandCandidate[],
  noExpansion: boolean,
  unavailable: string | null,
  active: Record<string, number>,
  onToggle: (candidate: ExpandCandidate) => void,
): void {
  container.textContent = "";
  if (unavailable !== null) {
    container.appendChild(el("p", "empty-state", unavailable));
    return;
  }
  if (noExpansion) {
    container.appendChild(
      el("p", "empty-state", "nothing to expand: the query matched no documents"),
    );
    return;
  }
  if (candidates.length === 0) {
    return;
  }
  const maxBelief = candidates[0]!.belief || 1;
  for (const candidate of candidates) {
    const chip = el(
      "button",
      `chip concept-chip${candidate.concept in active ? " active" : ""}`,
    );
    chip.type = "button";
    chip.dataset.concept = candidate.concept;
    chip.dataset.belief = String(candidate.belief);
    chip.appendChild(el("span", "chip-term", candidate.concept));
    chip.appendChild(el("span", "chip-belief", String(candidate.belief)));
    const bar = el("span", "belief-bar");
    bar.style.width = `${Math.max(2, Math.round((candidate.belief / maxBelief) * 100))}%`;
    chip.appendChild(bar);
    chip.addEventListener("click", () => onToggle(candidate));
    container.appendChild(chip);
  }
}

export function renderReusedBanner(
  container: HTMLElement,
  reused: ReusedFrom | null,
): void {
  container.textContent = "";
  if (reused === null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  container.appendChild(
    el(
      "p",
      "reused-banner",
      `reusing stored query ${reused.id} (similarity ${reused.similarity})`,
    ),
  );
}

export function renderProblem(
  container: HTMLElement,
  problem: QueryProblem | null,
  query: string,
  onRetry: () => void,
): void {
  container.textContent = "";
  if (problem === null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  container.appendChild(el("p", "problem-message", problem.message));
  if (problem.column !== null) {
    const sketch = el("pre", "problem-caret");
    sketch.textContent = `${query}\n${" ".repeat(problem.column - 1)}^`;
    container.appendChild(sketch);
  }
  if (problem.retryable) {
    const retry = el("button", "retry-button", "retry");
    retry.type = "button";
    retry.addEventListener("click", onRetry);
    container.appendChild(retry);
  }
}

export function renderWarning(container: HTMLElement, warning: string | null): void {
  container.textContent = "";
  container.hidden = warning === null;
  if (warning !== null) {
    container.appendChild(el("p", "warning-banner", warning));
  }
}

export function renderDrawer(container: HTMLElement, stored: StoredQuery[]): void {
  container.textContent = "";
  if (stored.length === 0) {
    container.appendChild(el("p", "empty-state", "no stored queries yet"));
    return;
  }
  const list = el("ul", "stored-list");
  for (const entry of stored) {
    const item = el("li", "stored-query");
    item.dataset.queryId = entry.id;
    const terms = Object.entries(entry.vector)
      .map(([term, weight]) => `${term}:${weight}`)
      .join(" ");
    item.appendChild(el("span", "stored-id", `#${entry.id}`));
    item.appendChild(el("span", "stored-vector", terms));
    item.appendChild(
      el("span", "stored-results", `${entry.results.length} results`),
    );
    list.appendChild(item);
  }
  container.appendChild(list);
}
