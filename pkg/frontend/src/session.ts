/** Exercise session state: one student completing one causal skeleton.
 *
 * The link list always mirrors the loaded skeleton exactly. While the phase
 * is 'answering' the student may toggle each link's direction and sign and
 * claim the loop polarity; once submitted the session is read-only and the
 * grading overlay (phase 'reviewing') is driven entirely by the service's
 * score document.
 */

import type {
  LoopPolarityName,
  OrientationName,
  PolarityName,
  ScoreDoc,
  SheetDoc,
  SkeletonDoc,
} from './types.js';
import { pairKey } from './types.js';

export type Phase = 'answering' | 'submitted' | 'reviewing';

export interface WorkingAnswer {
  pair: [string, string];
  orientation: OrientationName | null;
  polarity: PolarityName | null;
}

const ORIENTATION_CYCLE: (OrientationName | null)[] = [null, 'forward', 'backward'];
const POLARITY_CYCLE: (PolarityName | null)[] = [null, 'positive', 'negative'];

function cycled<T>(values: readonly T[], current: T): T {
  const index = values.indexOf(current);
  const next = values[(index + 1) % values.length];
  return next as T;
}

export class ExerciseSession {
  readonly skeleton: SkeletonDoc;
  private readonly working = new Map<string, WorkingAnswer>();
  private loopClaimValue: LoopPolarityName | null = null;
  private phaseValue: Phase = 'answering';
  private scoreValue: ScoreDoc | null = null;

  constructor(skeleton: SkeletonDoc) {
    this.skeleton = skeleton;
    for (const [a, b] of skeleton.links) {
      const pair: [string, string] = [a, b];
      this.working.set(pairKey(pair), { pair, orientation: null, polarity: null });
    }
  }

  get phase(): Phase {
    return this.phaseValue;
  }

  get loopClaim(): LoopPolarityName | null {
    return this.loopClaimValue;
  }

  get score(): ScoreDoc | null {
    return this.scoreValue;
  }

  /** Working answers in skeleton link order. */
  get answers(): WorkingAnswer[] {
    return this.skeleton.links.map((link) => {
      const answer = this.working.get(pairKey(link));
      if (!answer) {
        throw new Error(`session lost track of link ${pairKey(link)}`);
      }
      return answer;
    });
  }

  answerFor(pair: [string, string]): WorkingAnswer | undefined {
    return this.working.get(pairKey(pair));
  }

  private mutable(): void {
    if (this.phaseValue !== 'answering') {
      throw new Error(`session is ${this.phaseValue} and read-only`);
    }
  }

  private workingAnswer(pair: [string, string]): WorkingAnswer {
    const answer = this.working.get(pairKey(pair));
    if (!answer) {
      throw new Error(`${pairKey(pair)} is not a link of skeleton ${this.skeleton.name}`);
    }
    return answer;
  }

  /** Toggle a link's direction claim: blank -> forward -> backward -> blank. */
  cycleOrientation(pair: [string, string]): void {
    this.mutable();
    const answer = this.workingAnswer(pair);
    answer.orientation = cycled(ORIENTATION_CYCLE, answer.orientation);
  }

  /** Toggle a link's sign claim: blank -> + -> - -> blank. */
  cyclePolarity(pair: [string, string]): void {
    this.mutable();
    const answer = this.workingAnswer(pair);
    answer.polarity = cycled(POLARITY_CYCLE, answer.polarity);
  }

  setLoopClaim(claim: LoopPolarityName | null): void {
    this.mutable();
    this.loopClaimValue = claim;
  }

  /** The sheet document the service grades and stores. */
  toSheetDoc(student: string): SheetDoc {
    return {
      student,
      skeleton: this.skeleton.name,
      answers: this.answers.map((answer) => ({
        pair: answer.pair,
        orientation: answer.orientation,
        polarity: answer.polarity,
      })),
      loop_claim: this.loopClaimValue,
    };
  }

  /** answering -> submitted, freezing the working answers. */
  beginSubmit(): void {
    this.mutable();
    this.phaseValue = 'submitted';
  }

  /** submitted -> reviewing once the service's score arrives. */
  completeSubmit(score: ScoreDoc): void {
    if (this.phaseValue !== 'submitted') {
      throw new Error(`cannot record a score while ${this.phaseValue}`);
    }
    this.scoreValue = score;
    this.phaseValue = 'reviewing';
  }

  /** submitted -> answering when the submission failed; answers survive. */
  failSubmit(): void {
    if (this.phaseValue !== 'submitted') {
      throw new Error(`cannot roll back while ${this.phaseValue}`);
    }
    this.phaseValue = 'answering';
  }

  /** Fill one link from a reference edge (instructor reveal mode). */
  applyReveal(edge: { from: string; to: string; polarity: PolarityName }): void {
    this.mutable();
    const pair: [string, string] = edge.from <= edge.to ? [edge.from, edge.to] : [edge.to, edge.from];
    const answer = this.workingAnswer(pair);
    answer.orientation = edge.from === pair[0] ? 'forward' : 'backward';
    answer.polarity = edge.polarity;
  }

  /** Rebuild a session from a stored sheet plus its grade, as after a page
   * reload: the overlay must come out identical to the one shown at submit
   * time. */
  static restore(skeleton: SkeletonDoc, sheet: SheetDoc, score: ScoreDoc): ExerciseSession {
    const session = new ExerciseSession(skeleton);
    for (const answer of sheet.answers) {
      const working = session.workingAnswer([answer.pair[0], answer.pair[1]]);
      working.orientation = answer.orientation;
      working.polarity = answer.polarity;
    }
    session.loopClaimValue = sheet.loop_claim;
    session.phaseValue = 'submitted';
    session.completeSubmit(score);
    return session;
  }
}
