/** Pure view functions: state in, HTML/SVG strings out.
 *
 * Rendering never computes a verdict, score, or statistic; every number or
 * mark in the markup is copied from a service response document.
 */

import { outcomeGlyph } from './api.js';
import { circleLayout, type Layout } from './layout.js';
import type { ExerciseSession } from './session.js';
import type {
  DiagramDoc,
  LinkMarkDoc,
  ScoreDoc,
  SkeletonDoc,
  TraceDoc,
  VerdictDoc,
} from './types.js';
import { pairKey } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function nodeCircle(id: string, label: string, point: { x: number; y: number }, cls: string, glyph = ''): string {
  const title = glyph ? `${label} ${glyph}` : label;
  return (
    `<g class="${cls}" data-variable="${escapeHtml(id)}">` +
    `<circle cx="${point.x}" cy="${point.y}" r="26"></circle>` +
    `<text x="${point.x}" y="${point.y + 44}" text-anchor="middle">${escapeHtml(title)}</text>` +
    `</g>`
  );
}

function skeletonSvg(skeleton: SkeletonDoc, layout: Layout): string {
  const parts: string[] = [
    `<svg viewBox="0 0 ${layout.width} ${layout.height}" class="graph skeleton-graph" role="img">`,
  ];
  for (const [a, b] of skeleton.links) {
    const pa = layout.positions.get(a);
    const pb = layout.positions.get(b);
    if (!pa || !pb) continue;
    parts.push(
      `<line class="skeleton-link" data-link="${pairKey([a, b])}" ` +
        `x1="${pa.x}" y1="${pa.y}" x2="${pb.x}" y2="${pb.y}"></line>`,
    );
  }
  for (const variable of skeleton.variables) {
    const point = layout.positions.get(variable.id);
    if (!point) continue;
    parts.push(nodeCircle(variable.id, variable.label, point, 'variable'));
  }
  parts.push('</svg>');
  return parts.join('');
}

function orientationLabel(answer: { pair: [string, string]; orientation: string | null }): string {
  if (answer.orientation === 'forward') return `${answer.pair[0]} → ${answer.pair[1]}`;
  if (answer.orientation === 'backward') return `${answer.pair[1]} → ${answer.pair[0]}`;
  return 'blank';
}

function polarityLabel(polarity: string | null): string {
  if (polarity === 'positive') return '+';
  if (polarity === 'negative') return '−';
  return '?';
}

function markGlyph(ok: boolean): string {
  return ok ? '✓' : '✗';
}

/** The skeleton-completion exercise: picture, per-link controls, loop claim.
 *
 * While reviewing, each link row carries the service's correct/incorrect
 * marks and the score badge shows the service's display percentages.
 */
export interface ExerciseViewOptions {
  /** Instructor walkthrough mode: allow revealing one correct link at a
   * time. Off by default so graded runs stay unassisted. */
  reveal?: boolean;
}

export function renderExercise(session: ExerciseSession, options: ExerciseViewOptions = {}): string {
  const skeleton = session.skeleton;
  const layout = circleLayout(skeleton.variables.map((v) => v.id));
  const reviewing = session.phase === 'reviewing';
  const marksByPair = new Map<string, LinkMarkDoc>();
  if (reviewing && session.score?.links) {
    for (const mark of session.score.links) {
      marksByPair.set(pairKey(mark.pair), mark);
    }
  }

  const rows = session.answers.map((answer) => {
    const key = pairKey(answer.pair);
    const mark = marksByPair.get(key);
    const markCells = mark
      ? `<td class="mark ${mark.direction_correct ? 'correct' : 'incorrect'}">${markGlyph(mark.direction_correct)}</td>` +
        `<td class="mark ${mark.polarity_correct ? 'correct' : 'incorrect'}">${markGlyph(mark.polarity_correct)}</td>`
      : '';
    const disabled = session.phase === 'answering' ? '' : ' disabled';
    return (
      `<tr class="link-row" data-link="${key}">` +
      `<td class="link-name">${escapeHtml(answer.pair[0])} — ${escapeHtml(answer.pair[1])}</td>` +
      `<td><button data-action="orientation" data-link="${key}"${disabled}>` +
      `${escapeHtml(orientationLabel(answer))}</button></td>` +
      `<td><button data-action="polarity" data-link="${key}"${disabled}>` +
      `${polarityLabel(answer.polarity)}</button></td>` +
      markCells +
      `</tr>`
    );
  });

  const loopChoices = (['reinforcing', 'balancing'] as const)
    .map((claim) => {
      const selected = session.loopClaim === claim ? ' class="selected"' : '';
      const disabled = session.phase === 'answering' ? '' : ' disabled';
      return `<button data-action="loop-claim" data-claim="${claim}"${selected}${disabled}>${claim}</button>`;
    })
    .join(' ');

  const badge = reviewing && session.score ? renderScoreBadge(session.score) : '';
  const submit =
    session.phase === 'answering'
      ? '<button data-action="submit" class="submit">Submit answers</button>'
      : '';
  const reveal =
    options.reveal && session.phase === 'answering'
      ? '<button data-action="reveal" class="reveal">Reveal one correct link</button>'
      : '';

  return (
    `<section class="exercise" data-phase="${session.phase}">` +
    `<h2>${escapeHtml(skeleton.name)} skeleton (${skeleton.links.length} links)</h2>` +
    skeletonSvg(skeleton, layout) +
    `<table class="answers"><tbody>${rows.join('')}</tbody></table>` +
    `<div class="loop-claim">Feedback loop: ${loopChoices}</div>` +
    badge +
    submit +
    reveal +
    `</section>`
  );
}

/** Score badge: percentages verbatim from the grade response. */
export function renderScoreBadge(score: ScoreDoc): string {
  const loop =
    score.loop_claim_correct === null
      ? ''
      : `<span class="loop-result">loop claim ${score.loop_claim_correct ? 'correct' : 'incorrect'}</span>`;
  return (
    `<div class="score-badge">` +
    `<span class="direction-score" data-field="direction_display">${escapeHtml(score.direction_display)}</span>` +
    ` directions (${score.direction_correct}/${score.total_links}), ` +
    `<span class="polarity-score" data-field="polarity_display">${escapeHtml(score.polarity_display)}</span>` +
    ` polarities (${score.polarity_correct}/${score.total_links}) ` +
    loop +
    `</div>`
  );
}

function arrowLine(
  from: { x: number; y: number },
  to: { x: number; y: number },
  cls: string,
  label: string,
  attrs = '',
): string {
  // pull endpoints in so arrowheads sit on the node boundary
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const len = Math.hypot(dx, dy) || 1;
  const pad = 30;
  const x1 = from.x + (dx / len) * pad;
  const y1 = from.y + (dy / len) * pad;
  const x2 = to.x - (dx / len) * pad;
  const y2 = to.y - (dy / len) * pad;
  const mx = (x1 + x2) / 2;
  const my = (y1 + y2) / 2;
  return (
    `<g class="${cls}"${attrs}>` +
    `<line x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" marker-end="url(#arrowhead)"></line>` +
    `<text x="${mx}" y="${my - 6}" text-anchor="middle">${escapeHtml(label)}</text>` +
    `</g>`
  );
}

/** What-if view: every variable colored by its service verdict, witness
 * edges highlighted, and each node clickable to chain the next shock. */
export function renderWhatIf(
  diagram: DiagramDoc,
  verdicts: Record<string, VerdictDoc> | null,
  shocked: string | null,
  frozen: string[],
): string {
  const layout = circleLayout(diagram.variables.map((v) => v.id));
  const witness = new Set<string>();
  if (verdicts) {
    for (const verdict of Object.values(verdicts)) {
      for (const path of verdict.witness_paths) {
        for (const edge of path.edges) {
          witness.add(`${edge.from}->${edge.to}`);
        }
      }
    }
  }

  const parts: string[] = [
    `<svg viewBox="0 0 720 520" class="graph whatif-graph" role="img">`,
    '<defs><marker id="arrowhead" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto">' +
      '<path d="M0,0 L8,4 L0,8 z"></path></marker></defs>',
  ];
  for (const edge of diagram.edges) {
    const pa = layout.positions.get(edge.from);
    const pb = layout.positions.get(edge.to);
    if (!pa || !pb) continue;
    const isWitness = witness.has(`${edge.from}->${edge.to}`);
    const cls = `edge polarity-${edge.polarity}${isWitness ? ' witness' : ''}`;
    parts.push(
      arrowLine(pa, pb, cls, edge.polarity === 'positive' ? '+' : '−',
        ` data-edge="${edge.from}->${edge.to}"`),
    );
  }
  for (const variable of diagram.variables) {
    const point = layout.positions.get(variable.id);
    if (!point) continue;
    const verdict = verdicts?.[variable.id];
    const classes = ['variable'];
    let glyph = '';
    if (verdict) {
      classes.push(`outcome-${verdict.outcome}`);
      glyph = outcomeGlyph(verdict.outcome);
    }
    if (variable.id === shocked) classes.push('shocked');
    if (frozen.includes(variable.id)) classes.push('frozen');
    parts.push(nodeCircle(variable.id, variable.label, point, classes.join(' '), glyph));
  }
  parts.push('</svg>');

  const freezeBoxes = diagram.variables
    .map((v) => {
      const checked = frozen.includes(v.id) ? ' checked' : '';
      return (
        `<label><input type="checkbox" data-action="freeze" data-variable="${escapeHtml(v.id)}"${checked}>` +
        `${escapeHtml(v.label)}</label>`
      );
    })
    .join(' ');

  return (
    `<section class="whatif">` +
    `<h2>What happens if… (${escapeHtml(diagram.name)})</h2>` +
    `<p class="hint">Click a variable to shock it; use the toggle for direction.</p>` +
    `<div class="shock-direction">` +
    `<button data-action="shock-direction" data-direction="up">shock ↑</button>` +
    `<button data-action="shock-direction" data-direction="down">shock ↓</button>` +
    `</div>` +
    parts.join('') +
    `<fieldset class="freeze-set"><legend>Held constant</legend>${freezeBoxes}</fieldset>` +
    `</section>`
  );
}

/** Multiplier playground: the trace table for one MPC plus the multiplier
 * curve accumulated from previous service responses. */
export function renderMultiplier(
  trace: TraceDoc | null,
  curve: { mpc: number; multiplier: number }[],
): string {
  let table = '';
  if (trace) {
    const rows = trace.rows
      .map(
        (row) =>
          `<tr><td>${row.round}</td><td>${escapeHtml(row.label)}</td>` +
          `<td class="amount">${row.amount}</td><td class="cumulative">${row.cumulative}</td></tr>`,
      )
      .join('');
    table =
      `<table class="trace"><thead><tr><th>round</th><th></th><th>change</th><th>cumulative</th></tr></thead>` +
      `<tbody>${rows}</tbody></table>` +
      `<p class="closed-form">Closed form total <span data-field="closed_form_total">${trace.closed_form_total}</span>, ` +
      `multiplier <span data-field="multiplier">${trace.multiplier}</span></p>`;
  }

  const points = curve
    .slice()
    .sort((a, b) => a.mpc - b.mpc)
    .map((p) => `${Math.round(40 + p.mpc * 600)},${Math.round(260 - (p.multiplier - 1) * 25)}`)
    .join(' ');
  const chart =
    curve.length > 1
      ? `<svg viewBox="0 0 680 280" class="multiplier-curve" role="img">` +
        `<polyline points="${points}"></polyline></svg>`
      : '';

  const mpc = trace?.mpc ?? 0.5;
  return (
    `<section class="multiplier">` +
    `<h2>Multiplier playground</h2>` +
    `<label>MPC <input type="range" min="0" max="0.9" step="0.05" value="${mpc}" data-action="mpc-slider"></label>` +
    `<span class="mpc-value">${mpc}</span>` +
    table +
    chart +
    `</section>`
  );
}

export function renderErrorBanner(code: string, message: string): string {
  return (
    `<div class="error-banner" data-code="${escapeHtml(code)}">` +
    `${escapeHtml(message)}</div>`
  );
}

export function renderEmptyNotice(name: string): string {
  return `<div class="empty-notice">Skeleton ${escapeHtml(name)} has no links to complete.</div>`;
}
