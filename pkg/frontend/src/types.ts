// Wire types of the indikit HTTP API. The console renders these as
// received; indicator values are never recomputed client-side.

export type Severity = "good" | "warning" | "bad";
export type Mode = "gauge" | "text" | "histogram";
export type Tier = "index" | "model" | "indicator";

export interface ServiceEntry {
  tier: Tier;
  id: string;
  label: string;
  unit: string;
}

export interface Interpretation {
  label: string;
  severity: Severity;
}

export interface GaugeBand {
  lo: number;
  hi: number;
  severity: Severity;
  label: string;
}

export interface GaugePayload {
  indicator_id: string;
  value: number;
  min: number;
  max: number;
  clamped: boolean;
  bands: GaugeBand[];
  unit: string;
  interpretation: Interpretation | null;
}

export interface TextPayload {
  indicator_id: string;
  value: number;
  unit: string;
  interpretation: Interpretation | null;
}

export interface HistogramPoint {
  period: string;
  value: number;
}

export interface HistogramPayload {
  indicator_id: string;
  unit: string;
  series: HistogramPoint[];
}

export type Descriptor =
  | { mode: "gauge"; payload: GaugePayload }
  | { mode: "text"; payload: TextPayload }
  | { mode: "histogram"; payload: HistogramPayload };

export interface IndicatorReport {
  indicator_id: string;
  period: string;
  value: number;
  unit: string;
  interpretation: Interpretation | null;
  descriptor: Descriptor;
  intermediates: Record<string, number>;
}

export type ApiErrorCode =
  | "duplicate_id"
  | "unknown_dependency"
  | "cycle"
  | "unknown_id"
  | "missing_value"
  | "evaluation_error"
  | "bad_request";

export interface ApiErrorBody {
  code: ApiErrorCode;
  message: string;
  ids: string[];
}

export interface BatchEntry {
  indicator_id: string;
  status: "ok" | ApiErrorCode;
  report?: IndicatorReport;
  error?: ApiErrorBody;
}

export interface AnomalyRecord {
  seq: number;
  source: string;
  original_msg_id: number;
  category: "validation" | "evaluation" | "protocol";
  detail: string;
  timestamp: string;
}

export interface IndexDefinitionDoc {
  id: string;
  label: string;
  unit: string;
  description?: string;
}

export interface RuleDoc {
  op: "lt" | "le" | "gt" | "ge" | "eq";
  threshold: number;
  label: string;
  severity: Severity;
}

export interface ModelEntryDoc {
  id: string;
  label: string;
  expression: string;
  unit: string;
}

export interface IndicatorEntryDoc extends ModelEntryDoc {
  default_mode: Mode;
  rules: RuleDoc[];
}
