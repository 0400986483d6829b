/** Step 1: character shape comparison over the practice grid. */

import { formBoundaryLines, mizigeLines, structuralBoundaryPath } from "../geom.js";
import type { ViewState } from "../state.js";
import type { BoxDoc, ReportDoc, SessionDoc, StrokeDoc } from "../types.js";

const INK_WIDTH = 9;

function inkPaths(strokes: StrokeDoc[], cls: string): string {
  return strokes
    .map((s) => {
      const d = s.skeleton.map((p, i) => `${i ? "L" : "M"} ${p.x} ${p.y}`).join(" ");
      return `<path class="${cls}" d="${d}" fill="none" stroke-width="${INK_WIDTH}" stroke-linecap="round" stroke-linejoin="round"/>`;
    })
    .join("");
}

function gridSvg(size: number): string {
  return mizigeLines(size)
    .map((l) => `<line class="mizige" x1="${l.x1}" y1="${l.y1}" x2="${l.x2}" y2="${l.y2}"/>`)
    .join("");
}

function boundaries(box: BoxDoc, toggles: { structural: boolean; form: boolean }): string {
  let out = "";
  if (toggles.structural) {
    out += `<path class="boundary-structural" d="${structuralBoundaryPath(box)}" fill="none"/>`;
  }
  if (toggles.form) {
    out += formBoundaryLines(box)
      .map((l) => `<line class="boundary-form" x1="${l.x1}" y1="${l.y1}" x2="${l.x2}" y2="${l.y2}"/>`)
      .join("");
  }
  return out;
}

export function renderGlyphView(
  teacher: SessionDoc,
  student: SessionDoc,
  report: ReportDoc,
  state: ViewState,
): string {
  const size = report.glyph.mizige.size;
  const { dx, dy } = state.overlayOffset;
  const teacherPane = `
    <svg class="pane" viewBox="0 0 ${size} ${size}" data-pane="teacher">
      ${gridSvg(size)}
      ${inkPaths(teacher.strokes, "ink-teacher")}
      ${boundaries(report.glyph.teacher_box, state.boxToggles)}
      <g id="overlay-glyph" transform="translate(${dx} ${dy})">
        ${inkPaths(student.strokes, "ink-overlay")}
      </g>
    </svg>`;
  const studentPane = `
    <svg class="pane" viewBox="0 0 ${size} ${size}" data-pane="student">
      ${gridSvg(size)}
      ${inkPaths(student.strokes, "ink-student")}
      ${boundaries(report.glyph.student_box, state.boxToggles)}
    </svg>`;
  return `
    <div class="panes">
      <figure>${teacherPane}<figcaption>teacher (drag the red copy to align)</figcaption></figure>
      <figure>${studentPane}<figcaption>student</figcaption></figure>
    </div>`;
}
