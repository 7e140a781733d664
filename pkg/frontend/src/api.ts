/** Typed client for the causal-econ HTTP service.
 *
 * Every number or verdict the UI shows comes from these calls; the client
 * never post-processes beyond JSON decoding.
 */

import type {
  DiagramDoc,
  ErrorDoc,
  OutcomeName,
  ScoreDoc,
  SheetDoc,
  SkeletonDoc,
  TraceDoc,
  VerdictDoc,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ShockRequest {
  diagram: string | DiagramDoc;
  variable: string;
  direction: 'up' | 'down';
  target?: string;
  freeze?: string[];
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string = '',
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const error = (body ?? {}) as Partial<ErrorDoc>;
      throw new ApiError(
        response.status,
        error.code ?? 'http-error',
        error.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }

  async listDiagrams(): Promise<string[]> {
    const body = await this.request<{ diagrams: string[] }>('/diagrams');
    return body.diagrams;
  }

  getDiagram(name: string): Promise<DiagramDoc> {
    return this.request(`/diagrams/${encodeURIComponent(name)}`);
  }

  getSkeleton(name: string): Promise<SkeletonDoc> {
    return this.request(`/skeletons/${encodeURIComponent(name)}`);
  }

  /** Single-target what-if query. */
  propagate(query: ShockRequest & { target: string }): Promise<VerdictDoc> {
    return this.post('/propagate', {
      diagram: query.diagram,
      shock: { var: query.variable, dir: query.direction },
      target: query.target,
      freeze: query.freeze ?? [],
    });
  }

  /** Whole-diagram what-if query: verdict per variable id. */
  async propagateAll(query: ShockRequest): Promise<Record<string, VerdictDoc>> {
    const body = await this.post<{ verdicts: Record<string, VerdictDoc> }>('/propagate', {
      diagram: query.diagram,
      shock: { var: query.variable, dir: query.direction },
      freeze: query.freeze ?? [],
    });
    return body.verdicts;
  }

  grade(reference: string | DiagramDoc, sheet: SheetDoc): Promise<ScoreDoc> {
    return this.post('/grade', { reference, sheet });
  }

  multiplierTrace(
    kind: 'g' | 't',
    mpc: number,
    delta = 1,
    rounds = 5,
  ): Promise<TraceDoc> {
    const params = new URLSearchParams({
      kind,
      mpc: String(mpc),
      delta: String(delta),
      rounds: String(rounds),
    });
    return this.request(`/multiplier?${params}`);
  }

  submit(sheet: SheetDoc, timestamp?: string): Promise<{ timestamp: string }> {
    const payload: Record<string, unknown> = { sheet };
    if (timestamp !== undefined) {
      payload.timestamp = timestamp;
    }
    return this.post('/submissions', payload);
  }

  /** A student's most recent stored sheet, or null when none exists. */
  async latestSubmission(
    skeleton: string,
    student: string,
  ): Promise<{ sheet: SheetDoc; timestamp: string } | null> {
    const params = new URLSearchParams({ skeleton, student });
    try {
      return await this.request(`/submissions/latest?${params}`);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        return null;
      }
      throw error;
    }
  }
}

export function outcomeGlyph(outcome: OutcomeName): string {
  switch (outcome) {
    case 'increase':
      return '↑';
    case 'decrease':
      return '↓';
    case 'indeterminate':
      return '?';
    case 'no_effect':
      return '–';
  }
}
