// Payload shapes served by the session API.

export interface DataPayload {
  revision: number;
  normalized: boolean;
  attributes: string[];
  case_ids: number[];
  cases: number[][];
  labels: string[];
  remaining_ids: number[];
  axis_order: string[];
  hidden_classes: string[];
}

export interface ScorerJson {
  coefficients: number[];
  threshold: number;
  top_class: string;
  bottom_class: string;
  provenance: string;
}

export interface ScoresPayload {
  revision: number;
  scorer: ScorerJson;
  scorer_identity: string;
  threshold: number;
  case_ids: number[];
  scores: number[];
  case_c: number | null;
  case_d: number | null;
}

export interface IntervalJson {
  a: number;
  b: number;
  case_c: number | null;
  case_d: number | null;
  empty: boolean;
  one_sided: boolean;
  spans_all: boolean;
}

export interface HyperblockJson {
  attributes: string[];
  lo: number[];
  hi: number[];
  role: string;
  provenance: string;
}

export interface EnvelopeStripJson {
  upper: [number, number][];
  lower: [number, number][];
}

export interface EnvelopeJson {
  axis_order: string[];
  strips: EnvelopeStripJson[];
}

export interface OverlapPayload {
  revision: number;
  scorer_identity: string;
  interval: IntervalJson;
  hyperblock: HyperblockJson | null;
  envelope: EnvelopeJson | null;
}

export interface RuleJson {
  kind?: "interval" | "block";
  attribute?: number;
  attribute_name?: string;
  lo?: number;
  hi?: number;
  constraints?: { attribute: number; attribute_name: string; lo: number; hi: number }[];
  label: string;
  iteration: number;
  coverage: number;
  class_share: number;
  dataset_share: number;
}

export interface ActionDiff {
  revision: number;
  rules_added?: RuleJson[];
  cases_removed?: number[];
  remaining?: number;
  candidates?: RuleJson[];
  [key: string]: unknown;
}

export interface StatePayload {
  session_id: string;
  revision: number;
  normalized: boolean;
  n_cases: number;
  remaining_ids: number[];
  rules: RuleJson[];
  pending: RuleJson[];
  axis_order: string[];
  hidden_classes: string[];
  iteration: number;
  finalized: boolean;
}
