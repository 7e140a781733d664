import { describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import type { SheetDoc } from '../src/types.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('fetches skeletons from the right path', async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ name: 'multiplier', variables: [], links: [] }));
    const client = new ApiClient('http://svc', fetchMock);
    await client.getSkeleton('multiplier');
    expect(fetchMock).toHaveBeenCalledWith('http://svc/skeletons/multiplier', undefined);
  });

  it('posts propagate queries in the service wire shape', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse({ target: 'y', outcome: 'increase', witness_paths: [] }),
    );
    const client = new ApiClient('', fetchMock);
    const verdict = await client.propagate({
      diagram: 'multiplier',
      variable: 'g',
      direction: 'up',
      target: 'y',
      freeze: ['t'],
    });
    expect(verdict.outcome).toBe('increase');
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe('/propagate');
    expect(JSON.parse(String(init?.body))).toEqual({
      diagram: 'multiplier',
      shock: { var: 'g', dir: 'up' },
      target: 'y',
      freeze: ['t'],
    });
  });

  it('unwraps propagate-all verdict maps', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse({ verdicts: { y: { target: 'y', outcome: 'increase', witness_paths: [] } } }),
    );
    const client = new ApiClient('', fetchMock);
    const verdicts = await client.propagateAll({
      diagram: 'multiplier',
      variable: 'g',
      direction: 'up',
    });
    expect(verdicts.y?.outcome).toBe('increase');
  });

  it('builds multiplier query strings', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse({ kind: 'g', mpc: 0.8, delta: 1, rows: [], closed_form_total: 5, multiplier: 5 }),
    );
    const client = new ApiClient('', fetchMock);
    await client.multiplierTrace('g', 0.8, 100, 3);
    expect(String(fetchMock.mock.calls[0]![0])).toBe('/multiplier?kind=g&mpc=0.8&delta=100&rounds=3');
  });

  it('wraps grade and submit payloads', async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ timestamp: 't' }, 201));
    const client = new ApiClient('', fetchMock);
    const sheet: SheetDoc = { student: 'Ada', skeleton: 'multiplier', answers: [], loop_claim: null };
    await client.submit(sheet, '2026-01-01T00:00:00+00:00');
    const body = JSON.parse(String(fetchMock.mock.calls[0]![1]?.body));
    expect(body.sheet.student).toBe('Ada');
    expect(body.timestamp).toBe('2026-01-01T00:00:00+00:00');
  });

  it('turns service error documents into ApiError', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse({ code: 'unknown-diagram', message: "no diagram named 'ghost'" }, 404),
    );
    const client = new ApiClient('', fetchMock);
    const failure = await client.getDiagram('ghost').catch((e: unknown) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(404);
    expect((failure as ApiError).code).toBe('unknown-diagram');
    expect((failure as ApiError).message).toContain('ghost');
  });

  it('copes with non-JSON error bodies', async () => {
    const fetchMock = vi.fn(async () => new Response('boom', { status: 500 }));
    const client = new ApiClient('', fetchMock);
    const failure = await client.listDiagrams().catch((e: unknown) => e);
    expect((failure as ApiError).code).toBe('http-error');
  });
});

describe('latestSubmission', () => {
  it('returns the stored sheet when one exists', async () => {
    const stored = {
      skeleton: 'multiplier',
      student: 'Ada',
      timestamp: '2026-03-01T09:00:00+00:00',
      sheet: { student: 'Ada', skeleton: 'multiplier', answers: [], loop_claim: null },
    };
    const fetchMock = vi.fn(async () => jsonResponse(stored));
    const client = new ApiClient('', fetchMock);
    const result = await client.latestSubmission('multiplier', 'Ada');
    expect(result?.sheet.student).toBe('Ada');
    expect(String(fetchMock.mock.calls[0]![0])).toBe(
      '/submissions/latest?skeleton=multiplier&student=Ada',
    );
  });

  it('maps 404 to null instead of throwing', async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse({ code: 'unknown-diagram', message: 'none' }, 404),
    );
    const client = new ApiClient('', fetchMock);
    expect(await client.latestSubmission('multiplier', 'Nobody')).toBeNull();
  });
});
