// Payload shapes of the elicitation service API, mirrored verbatim.

export type Pair = [number, number];

export interface ReliabilityHint {
  class_g6: string;
  levels: Record<
    string,
    { mean_d_euc: number; sd_d_euc: number; mean_tau: number; sd_tau: number; n_samples: number }
  >;
  mean_d_euc_avg: number;
  mean_tau_avg: number;
}

export interface Estimate {
  connected: boolean;
  e_answered: number;
  weights: number[] | null;
  components: number[][] | null;
  reliability_hint: ReliabilityHint | null;
  extrapolated: boolean;
}

export interface SequenceView {
  n: number;
  kind: string;
  steps: Pair[];
  groups: number[];
  start_level: number;
  realized_levels: Record<string, string>;
}

export interface SessionView {
  id: string;
  n: number;
  item_labels: string[];
  sequence: SequenceView;
  extrapolated: boolean;
  budget: number | null;
  answers: [Pair, number][];
  state: "active" | "abandoned" | "complete";
  total: number;
  answered: number;
  estimate: Estimate;
}

export interface NextQuestion {
  done: boolean;
  pair?: Pair;
  labels?: [string, string];
  step?: number;
  total?: number;
}

export interface AnswerResult {
  state: SessionView["state"];
  estimate: Estimate;
}

export interface ApiError {
  code: string;
  message: string;
  allowed_pairs?: Pair[];
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(body.message);
  }
}
