import type {
  ExpandCandidate,
  FeedbackPayload,
  FeedbackResponse,
  Judgment,
  QueryPanelState,
  ResultRowView,
  ReusedFrom,
  SearchResponse,
  StoredQuery,
} from "./types.js";

/** Inline problem shown under the query box. */
export interface QueryProblem {
  message: string;
  column: number | null;
  retryable: boolean;
}

export interface AppState {
  panel: QueryPanelState;
  queryId: string | null;
  rows: ResultRowView[];
  reused: ReusedFrom | null;
  expansion: ExpandCandidate[];
  expansionEmpty: boolean;
  expansionUnavailable: string | null;
  /** Terms dropped by the last refinement; struck through once, then gone. */
  discarded: string[];
  warning: string | null;
  problem: QueryProblem | null;
  stored: StoredQuery[];
  searching: boolean;
}

export function initialState(): AppState {
  return {
    panel: { query: "", model: "pnorm", p: 2.0, reuse: false, weights: {} },
    queryId: null,
    rows: [],
    reused: null,
    expansion: [],
    expansionEmpty: false,
    expansionUnavailable: null,
    discarded: [],
    warning: null,
    problem: null,
    stored: [],
    searching: false,
  };
}

/** New search: rows arrive in server order and all judgments reset. */
export function applySearchResponse(
  state: AppState,
  response: SearchResponse,
): AppState {
  return {
    ...state,
    queryId: response.query_id,
    rows: response.results.map((row) => ({ ...row, judgment: "unjudged" })),
    reused: response.reused_from,
    discarded: [],
    warning: null,
    problem: null,
    searching: false,
  };
}

export function setJudgment(
  state: AppState,
  docId: string,
  judgment: Judgment,
): AppState {
  return {
    ...state,
    rows: state.rows.map((row) =>
      row.doc_id === docId
        ? { ...row, judgment: row.judgment === judgment ? "unjudged" : judgment }
        : row,
    ),
  };
}

export function judgedDocIds(state: AppState): {
  relevant: string[];
  nonrelevant: string[];
} {
  return {
    relevant: state.rows
      .filter((row) => row.judgment === "relevant")
      .map((row) => row.doc_id),
    nonrelevant: state.rows
      .filter((row) => row.judgment === "nonrelevant")
      .map((row) => row.doc_id),
  };
}

export function canSubmitFeedback(state: AppState): boolean {
  const judged = judgedDocIds(state);
  return (
    state.queryId !== null &&
    judged.relevant.length + judged.nonrelevant.length > 0
  );
}

export function feedbackPayload(state: AppState): FeedbackPayload {
  if (state.queryId === null) {
    throw new Error("no query to refine");
  }
  const judged = judgedDocIds(state);
  return {
    query_id: state.queryId,
    relevant: judged.relevant,
    nonrelevant: judged.nonrelevant,
    x: 1.0,
    y: null,
    z: null,
  };
}

/** Refinement: chip weights come from the response verbatim; terms that
 * vanished are remembered once for the strike-through pass. */
export function applyFeedbackResponse(
  state: AppState,
  response: FeedbackResponse,
): AppState {
  const remaining = new Set(Object.keys(response.weights));
  const discarded = Object.keys(state.panel.weights).filter(
    (term) => !remaining.has(term),
  );
  return {
    ...state,
    panel: { ...state.panel, weights: { ...response.weights } },
    queryId: response.query_id ?? state.queryId,
    rows: response.results.map((row) => ({ ...row, judgment: "unjudged" })),
    discarded,
    warning: response.warning,
    problem: null,
  };
}

/** The strike-through pass is over; discarded chips disappear. */
export function clearDiscarded(state: AppState): AppState {
  return { ...state, discarded: [] };
}

export function applyExpansion(
  state: AppState,
  added: ExpandCandidate[],
  noExpansion: boolean,
): AppState {
  return {
    ...state,
    expansion: added,
    expansionEmpty: noExpansion,
    expansionUnavailable: null,
  };
}

/** Toggle a suggested concept into or out of the weighted query, using the
 * weight the service assigned to it. */
export function toggleConcept(
  state: AppState,
  candidate: ExpandCandidate,
): AppState {
  const weights = { ...state.panel.weights };
  if (candidate.concept in weights) {
    delete weights[candidate.concept];
  } else {
    weights[candidate.concept] = candidate.weight;
  }
  return { ...state, panel: { ...state.panel, weights } };
}
