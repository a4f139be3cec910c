export type Judgment = "unjudged" | "relevant" | "nonrelevant";

export type ModelName = "pnorm" | "bim" | "inet";

export interface ResultRow {
  doc_id: string;
  score: number;
  snippet: string;
}

export interface ResultRowView extends ResultRow {
  judgment: Judgment;
}

export interface ReusedFrom {
  id: string;
  similarity: number;
  results: string[];
}

export interface SearchResponse {
  status: "ok";
  model: ModelName;
  query_id: string;
  results: ResultRow[];
  reused_from: ReusedFrom | null;
}

export interface FeedbackResponse {
  status: "ok";
  query_id: string | null;
  weights: Record<string, number>;
  results: ResultRow[];
  warning: string | null;
}

export interface ExpandCandidate {
  concept: string;
  belief: number;
  cooccurrence: number;
  weight: number;
}

export interface ExpandResponse {
  status: "ok";
  no_expansion: boolean;
  query: Record<string, number>;
  added: ExpandCandidate[];
}

export interface StoredQuery {
  id: string;
  created_at: number;
  vector: Record<string, number>;
  results: string[];
}

export interface ApiErrorDetail {
  code: string;
  message: string;
  column?: number;
}

export interface FeedbackPayload {
  query_id: string;
  relevant: string[];
  nonrelevant: string[];
  x: number;
  y: number | null;
  z: number | null;
}

export interface QueryPanelState {
  query: string;
  model: ModelName;
  p: number;
  reuse: boolean;
  /** Weighted query exactly as last reported by the service. */
  weights: Record<string, number>;
}
