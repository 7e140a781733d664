/** View checks against recorded service responses.
 *
 * The canned documents in canned_responses.json are verbatim captures from
 * the live service, so every number or verdict asserted here is
 * service-originated: the test compares markup to response fields.
 */

import { describe, expect, it } from 'vitest';

import {
  renderErrorBanner,
  renderExercise,
  renderMultiplier,
  renderScoreBadge,
  renderWhatIf,
} from '../src/render.js';
import { ExerciseSession } from '../src/session.js';
import type {
  DiagramDoc,
  ScoreDoc,
  SkeletonDoc,
  TraceDoc,
  VerdictDoc,
} from '../src/types.js';
import canned from './canned_responses.json';

const skeleton = canned.multiplier_skeleton as SkeletonDoc;
const nationalIncome = canned.national_income_diagram as DiagramDoc;
const perfectScore = canned.perfect_grade as ScoreDoc;
const traceG = canned.trace_g_08 as TraceDoc;

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe('exercise view', () => {
  it('renders the multiplier skeleton with 8 links', () => {
    const session = new ExerciseSession(skeleton);
    const html = renderExercise(session);
    expect(count(html, 'class="skeleton-link"')).toBe(8);
    expect(count(html, 'class="link-row"')).toBe(8);
    expect(html).toContain('multiplier skeleton (8 links)');
    // every variable is drawn
    for (const variable of skeleton.variables) {
      expect(html).toContain(`data-variable="${variable.id}"`);
    }
  });

  it('renders toggle state for a partially answered sheet', () => {
    const session = new ExerciseSession(skeleton);
    session.cycleOrientation(['g', 'pe']);
    session.cyclePolarity(['g', 'pe']);
    session.cyclePolarity(['t', 'y_minus_t']);
    session.cyclePolarity(['t', 'y_minus_t']);
    const html = renderExercise(session);
    expect(html).toContain('g → pe');
    expect(html).toContain('>−</button>');
    expect(count(html, '>blank</button>')).toBe(7);
  });

  it('shows the graded overlay with service display strings after submit', () => {
    const session = new ExerciseSession(skeleton);
    session.beginSubmit();
    session.completeSubmit(perfectScore);
    const html = renderExercise(session);
    // the badge text equals the response fields, character for character
    expect(html).toContain(
      `<span class="direction-score" data-field="direction_display">${perfectScore.direction_display}</span>`,
    );
    expect(html).toContain(
      `<span class="polarity-score" data-field="polarity_display">${perfectScore.polarity_display}</span>`,
    );
    expect(perfectScore.direction_display).toBe('100.00%');
    expect(perfectScore.polarity_display).toBe('100.00%');
    // per-link marks come straight from the response's links array
    expect(count(html, 'class="mark correct"')).toBe(16);
    expect(count(html, 'class="mark incorrect"')).toBe(0);
    // controls are frozen in review
    expect(count(html, 'disabled')).toBeGreaterThanOrEqual(16);
  });

  it('marks wrong links incorrect when the service says so', () => {
    const session = new ExerciseSession(skeleton);
    session.beginSubmit();
    const oneWrong: ScoreDoc = {
      ...perfectScore,
      direction_correct: 7,
      direction_display: '87.50%',
      links: perfectScore.links!.map((mark, index) =>
        index === 0 ? { ...mark, direction_correct: false } : mark,
      ),
    };
    session.completeSubmit(oneWrong);
    const html = renderExercise(session);
    expect(count(html, 'class="mark incorrect"')).toBe(1);
    expect(html).toContain('87.50%');
  });

  it('renders the score badge loop result', () => {
    expect(renderScoreBadge(perfectScore)).toContain('loop claim correct');
    expect(renderScoreBadge({ ...perfectScore, loop_claim_correct: null })).not.toContain(
      'loop claim',
    );
  });
});

describe('what-if view', () => {
  it('colors the Q1 verdicts exactly as the propagate response says', () => {
    const verdicts = (canned.q1_verdicts as { verdicts: Record<string, VerdictDoc> }).verdicts;
    const html = renderWhatIf(nationalIncome, verdicts, 'technology', ['capital', 'labor']);
    expect(verdicts.consumption?.outcome).toBe('increase');
    for (const [id, verdict] of Object.entries(verdicts)) {
      expect(html).toContain(`outcome-${verdict.outcome}`);
      const nodeMarkup = html
        .split(`data-variable="${id}"`)[0]!
        .split('<g class="')
        .pop()!;
      expect(nodeMarkup).toContain(`outcome-${verdict.outcome}`);
    }
    // shocked and frozen variables are visually tagged
    expect(html).toMatch(/class="variable[^"]*shocked[^"]*"[^>]*data-variable="technology"/);
    expect(html).toMatch(/class="variable[^"]*frozen[^"]*"[^>]*data-variable="capital"/);
  });

  it('colors Q2 and Q3 target verdicts from the responses', () => {
    for (const [key, shocked, target] of [
      ['q2_verdicts', 'government_purchases', 'interest_rate'],
      ['q3_verdicts', 'interest_rate', 'private_savings'],
    ] as const) {
      const verdicts = (canned[key] as { verdicts: Record<string, VerdictDoc> }).verdicts;
      expect(verdicts[target]?.outcome).toBe('increase');
      const html = renderWhatIf(nationalIncome, verdicts, shocked, []);
      expect(html).toMatch(
        new RegExp(`class="variable[^"]*outcome-increase[^"]*"[^>]*data-variable="${target}"`),
      );
    }
  });

  it('highlights witness-path edges', () => {
    const verdicts = (canned.q2_verdicts as { verdicts: Record<string, VerdictDoc> }).verdicts;
    const html = renderWhatIf(nationalIncome, verdicts, 'government_purchases', []);
    expect(html).toMatch(
      /class="edge[^"]*witness[^"]*"[^>]*data-edge="government_purchases->public_savings"/,
    );
    // an edge outside every witness path stays plain
    expect(html).toMatch(/class="edge polarity-positive"[^>]*data-edge="capital->output"/);
  });

  it('renders all variables uncolored before any shock', () => {
    const html = renderWhatIf(nationalIncome, null, null, []);
    expect(html).not.toContain('outcome-');
    expect(count(html, 'data-variable=')) .toBe(2 * nationalIncome.variables.length); // node + freeze box
  });
});

describe('multiplier view', () => {
  it('renders the trace rows and totals from the response', () => {
    const html = renderMultiplier(traceG, [{ mpc: 0.8, multiplier: traceG.multiplier }]);
    expect(count(html, '<tr><td>')).toBe(traceG.rows.length);
    expect(html).toContain(String(traceG.closed_form_total));
    expect(html).toContain(`data-field="multiplier">${traceG.multiplier}</span>`);
    expect(html).toContain(traceG.rows[0]!.label);
  });

  it('draws the multiplier curve once two points exist', () => {
    const none = renderMultiplier(traceG, [{ mpc: 0.8, multiplier: 5 }]);
    expect(none).not.toContain('multiplier-curve');
    const curve = renderMultiplier(traceG, [
      { mpc: 0, multiplier: 1 },
      { mpc: 0.5, multiplier: 2 },
      { mpc: 0.8, multiplier: 5 },
    ]);
    expect(curve).toContain('multiplier-curve');
    expect(curve).toContain('<polyline');
  });
});

describe('error banner', () => {
  it('escapes the message and carries the code', () => {
    const html = renderErrorBanner('fixture-not-found', 'no skeleton named <ghost>');
    expect(html).toContain('data-code="fixture-not-found"');
    expect(html).toContain('&lt;ghost&gt;');
  });
});
