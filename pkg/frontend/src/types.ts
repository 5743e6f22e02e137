// Shared types mirroring the annotation service's JSON contracts.

// Fixed sentiment label order — must match the service's enums exactly.
export const SENTIMENT_LABELS = [
  "optimistic",
  "thankful",
  "empathetic",
  "pessimistic",
  "anxious",
  "sad",
  "annoyed",
  "denial",
  "official_report",
  "joking",
] as const;

export type SentimentLabel = (typeof SENTIMENT_LABELS)[number];

export const HINDUPHOBIC = "hinduphobic";
export const POSITIVE_NEUTRAL = "positive_neutral";
export const BINARY_LABELS = [HINDUPHOBIC, POSITIVE_NEUTRAL] as const;

export type BinaryLabel = (typeof BINARY_LABELS)[number];

export type DecisionAction = "confirm" | "override" | "skip";

export interface TaskView {
  post_id: string;
  text: string;
  country: string;
  month: string;
  proposed_binary: BinaryLabel | null;
  proposed_confidence: number | null;
  proposed_sentiments: string[];
  status: string;
  binary: string | null;
  sentiments: string[];
  binary_choices?: string[];
  sentiment_choices?: string[];
}

export interface Decision {
  action: DecisionAction;
  binary?: string | null;
  sentiments?: string[];
  decided_by?: string;
}

export interface Stats {
  total: number;
  decided: number;
  confirmed: number;
  overridden: number;
  skipped: number;
  agreement: number | null;
  override_counts: Record<string, number>;
}
