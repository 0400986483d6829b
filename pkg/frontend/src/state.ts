/** Single UI state store; all updates flow through one place. */

export type Step = "glyph" | "rhythm" | "stroke";
export type RhythmMetric = "pressure" | "speed";

const STEP_ORDER: Step[] = ["glyph", "rhythm", "stroke"];

export interface ViewState {
  teacherId: string | null;
  studentId: string | null;
  step: Step;
  selectedStroke: number;
  strokeCount: number;
  timelineTMs: number;
  overlayOffset: { dx: number; dy: number };
  boxToggles: { structural: boolean; form: boolean };
  hoverPos: number | null; // arc position under the cursor, if any
  rhythmMetric: RhythmMetric;
}

export function initialState(): ViewState {
  return {
    teacherId: null,
    studentId: null,
    step: "glyph",
    selectedStroke: 0,
    strokeCount: 0,
    timelineTMs: 0,
    overlayOffset: { dx: 0, dy: 0 },
    boxToggles: { structural: false, form: false },
    hoverPos: null,
    rhythmMetric: "pressure",
  };
}

export function stepIndex(step: Step): number {
  return STEP_ORDER.indexOf(step);
}

export class Store {
  private state: ViewState = initialState();
  private listeners: Array<(s: ViewState) => void> = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(fn: (s: ViewState) => void): void {
    this.listeners.push(fn);
  }

  update(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Forward navigation is sequential; going back to any earlier step is free.
      Selection state survives every transition. */
  goToStep(target: Step): boolean {
    const from = stepIndex(this.state.step);
    const to = stepIndex(target);
    if (to > from + 1) return false;
    this.update({ step: target });
    return true;
  }

  selectStroke(index: number): void {
    const max = Math.max(0, this.state.strokeCount - 1);
    this.update({ selectedStroke: Math.min(Math.max(index, 0), max) });
  }

  selectPair(teacherId: string, studentId: string, strokeCount: number): void {
    this.update({
      teacherId,
      studentId,
      strokeCount,
      selectedStroke: Math.min(this.state.selectedStroke, Math.max(0, strokeCount - 1)),
      overlayOffset: { dx: 0, dy: 0 },
      timelineTMs: 0,
    });
  }
}
