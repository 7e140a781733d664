/** Wire types mirroring the causal-econ service documents. */

export type PolarityName = 'positive' | 'negative';
export type OutcomeName = 'increase' | 'decrease' | 'no_effect' | 'indeterminate';
export type OrientationName = 'forward' | 'backward';
export type LoopPolarityName = 'reinforcing' | 'balancing';

export interface VariableDoc {
  id: string;
  label: string;
  symbol: string | null;
  group: string | null;
}

export interface EdgeDoc {
  from: string;
  to: string;
  polarity: PolarityName;
}

export interface DiagramDoc {
  name: string;
  variables: VariableDoc[];
  edges: EdgeDoc[];
}

export interface SkeletonDoc {
  name: string;
  variables: VariableDoc[];
  links: [string, string][];
}

export interface WitnessPathDoc {
  sign: PolarityName;
  variables: string[];
  edges: EdgeDoc[];
}

export interface VerdictDoc {
  target: string;
  outcome: OutcomeName;
  witness_paths: WitnessPathDoc[];
}

export interface AnswerDoc {
  pair: [string, string];
  orientation: OrientationName | null;
  polarity: PolarityName | null;
}

export interface SheetDoc {
  student: string;
  skeleton: string;
  answers: AnswerDoc[];
  loop_claim: LoopPolarityName | null;
}

export interface LinkMarkDoc {
  pair: [string, string];
  answered: boolean;
  direction_correct: boolean;
  polarity_correct: boolean;
}

export interface ScoreDoc {
  student: string;
  total_links: number;
  direction_correct: number;
  polarity_correct: number;
  direction_pct: number;
  polarity_pct: number;
  direction_display: string;
  polarity_display: string;
  loop_claim_correct: boolean | null;
  links?: LinkMarkDoc[];
}

export interface TraceRowDoc {
  round: number;
  label: string;
  amount: number;
  contribution: number;
  cumulative: number;
}

export interface TraceDoc {
  kind: 'government_purchases' | 'tax';
  mpc: number;
  delta: number;
  rows: TraceRowDoc[];
  closed_form_total: number;
  multiplier: number;
}

export interface ErrorDoc {
  code: string;
  message: string;
  span?: { line: number; column: number; length: number };
}

/** Sort an id pair the way the service stores links. */
export function sortedPair(a: string, b: string): [string, string] {
  return a <= b ? [a, b] : [b, a];
}

export function pairKey(pair: [string, string]): string {
  return `${pair[0]}--${pair[1]}`;
}
