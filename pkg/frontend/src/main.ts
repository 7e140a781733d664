/** Browser entry point: wires the rendered views to the service. */

import { ApiClient, ApiError } from './api.js';
import {
  renderEmptyNotice,
  renderErrorBanner,
  renderExercise,
  renderMultiplier,
  renderWhatIf,
} from './render.js';
import { ExerciseSession } from './session.js';
import type { DiagramDoc, TraceDoc, VerdictDoc } from './types.js';
import { sortedPair } from './types.js';

const api = new ApiClient('');

interface WhatIfState {
  diagram: DiagramDoc | null;
  verdicts: Record<string, VerdictDoc> | null;
  shocked: string | null;
  direction: 'up' | 'down';
  frozen: string[];
}

interface AppState {
  tab: 'exercise' | 'whatif' | 'multiplier';
  session: ExerciseSession | null;
  student: string;
  whatif: WhatIfState;
  trace: TraceDoc | null;
  curve: { mpc: number; multiplier: number }[];
  banner: string;
  reveal: boolean;
}

const state: AppState = {
  tab: 'exercise',
  session: null,
  student: 'Anonymous',
  whatif: { diagram: null, verdicts: null, shocked: null, direction: 'up', frozen: [] },
  trace: null,
  curve: [],
  banner: '',
  reveal: false,
};

function root(): HTMLElement {
  const el = document.getElementById('app');
  if (!el) throw new Error('missing #app container');
  return el;
}

function render(): void {
  const parts: string[] = [state.banner];
  parts.push(
    `<nav class="tabs">` +
      (['exercise', 'whatif', 'multiplier'] as const)
        .map(
          (tab) =>
            `<button data-action="tab" data-tab="${tab}"` +
            `${state.tab === tab ? ' class="active"' : ''}>${tab}</button>`,
        )
        .join('') +
      `</nav>`,
  );
  if (state.tab === 'exercise') {
    if (state.session) {
      parts.push(
        state.session.skeleton.links.length
          ? renderExercise(state.session, { reveal: state.reveal })
          : renderEmptyNotice(state.session.skeleton.name),
      );
    }
  } else if (state.tab === 'whatif') {
    if (state.whatif.diagram) {
      parts.push(
        renderWhatIf(
          state.whatif.diagram,
          state.whatif.verdicts,
          state.whatif.shocked,
          state.whatif.frozen,
        ),
      );
    }
  } else {
    parts.push(renderMultiplier(state.trace, state.curve));
  }
  root().innerHTML = parts.join('\n');
}

function showError(error: unknown): void {
  if (error instanceof ApiError) {
    state.banner = renderErrorBanner(error.code, error.message);
  } else {
    state.banner = renderErrorBanner('error', String(error));
  }
  render();
}

async function loadExercise(name: string): Promise<void> {
  try {
    state.banner = '';
    const skeleton = await api.getSkeleton(name);
    const stored = await api.latestSubmission(name, state.student);
    if (stored) {
      // reproduce the post-submit overlay exactly as it was shown
      const score = await api.grade(name, stored.sheet);
      state.session = ExerciseSession.restore(skeleton, stored.sheet, score);
    } else {
      state.session = new ExerciseSession(skeleton);
    }
    render();
  } catch (error) {
    showError(error);
  }
}

async function revealOneLink(): Promise<void> {
  const session = state.session;
  if (!session || session.phase !== 'answering') return;
  try {
    const reference = await api.getDiagram(session.skeleton.name);
    const blank = session.answers.find((a) => a.orientation === null && a.polarity === null);
    if (!blank) return;
    const edge = reference.edges.find(
      (e) =>
        (e.from === blank.pair[0] && e.to === blank.pair[1]) ||
        (e.from === blank.pair[1] && e.to === blank.pair[0]),
    );
    if (edge) {
      session.applyReveal(edge);
      render();
    }
  } catch (error) {
    showError(error);
  }
}

async function submitSession(): Promise<void> {
  const session = state.session;
  if (!session || session.phase !== 'answering') return;
  const sheet = session.toSheetDoc(state.student);
  session.beginSubmit();
  render();
  try {
    await api.submit(sheet);
    const score = await api.grade(session.skeleton.name, sheet);
    session.completeSubmit(score);
    state.banner = '';
  } catch (error) {
    session.failSubmit();
    showError(error);
    return;
  }
  render();
}

async function loadWhatIf(name: string): Promise<void> {
  try {
    state.banner = '';
    state.whatif.diagram = await api.getDiagram(name);
    state.whatif.verdicts = null;
    state.whatif.shocked = null;
    state.whatif.frozen = [];
    render();
  } catch (error) {
    showError(error);
  }
}

async function shock(variable: string): Promise<void> {
  const { diagram, direction, frozen } = state.whatif;
  if (!diagram || frozen.includes(variable)) return;
  try {
    state.whatif.shocked = variable;
    state.whatif.verdicts = await api.propagateAll({
      diagram: diagram.name,
      variable,
      direction,
      freeze: frozen,
    });
    state.banner = '';
    render();
  } catch (error) {
    showError(error);
  }
}

async function updateMpc(mpc: number): Promise<void> {
  try {
    const trace = await api.multiplierTrace('g', mpc, 1, 8);
    state.trace = trace;
    if (!state.curve.some((p) => p.mpc === mpc)) {
      state.curve.push({ mpc, multiplier: trace.multiplier });
    }
    state.banner = '';
    render();
  } catch (error) {
    showError(error);
  }
}

function onClick(event: Event): void {
  const target = (event.target as HTMLElement).closest<HTMLElement>('[data-action], .variable');
  if (!target) return;
  const action = target.dataset.action;
  const session = state.session;
  if (action === 'tab') {
    state.tab = target.dataset.tab as AppState['tab'];
    render();
    if (state.tab === 'whatif' && !state.whatif.diagram) {
      void loadWhatIf('national_income_subset');
    }
    if (state.tab === 'multiplier' && !state.trace) {
      void updateMpc(0.5);
    }
    return;
  }
  if (action === 'orientation' && session) {
    const [a, b] = (target.dataset.link ?? '').split('--');
    if (a && b) session.cycleOrientation(sortedPair(a, b));
    render();
  } else if (action === 'polarity' && session) {
    const [a, b] = (target.dataset.link ?? '').split('--');
    if (a && b) session.cyclePolarity(sortedPair(a, b));
    render();
  } else if (action === 'loop-claim' && session) {
    const claim = target.dataset.claim as 'reinforcing' | 'balancing';
    session.setLoopClaim(session.loopClaim === claim ? null : claim);
    render();
  } else if (action === 'submit') {
    void submitSession();
  } else if (action === 'reveal') {
    void revealOneLink();
  } else if (action === 'shock-direction') {
    state.whatif.direction = target.dataset.direction as 'up' | 'down';
    if (state.whatif.shocked) void shock(state.whatif.shocked);
    else render();
  } else if (target.classList.contains('variable') && state.tab === 'whatif') {
    const variable = target.dataset.variable;
    if (variable) void shock(variable);
  }
}

function onChange(event: Event): void {
  const target = event.target as HTMLInputElement;
  if (target.dataset.action === 'freeze') {
    const variable = target.dataset.variable;
    if (!variable) return;
    const frozen = new Set(state.whatif.frozen);
    if (target.checked) frozen.add(variable);
    else frozen.delete(variable);
    state.whatif.frozen = [...frozen].sort();
    if (state.whatif.shocked && !frozen.has(state.whatif.shocked)) {
      void shock(state.whatif.shocked);
    } else {
      render();
    }
  } else if (target.dataset.action === 'mpc-slider') {
    void updateMpc(Number(target.value));
  }
}

export function start(): void {
  const container = root();
  container.addEventListener('click', onClick);
  container.addEventListener('change', onChange);
  const params = new URLSearchParams(window.location.search);
  state.student = params.get('student') ?? 'Anonymous';
  state.reveal = params.get('reveal') === '1';
  void loadExercise(params.get('skeleton') ?? 'multiplier');
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  start();
}
