/** Step 3: single-stroke detail — rotation arrows, tilt, pressure/speed, progress. */

import { PRESSURE_RAMP, SPEED_RAMP, saturationColor, tierColor } from "../color.js";
import {
  displayAnchorDeg,
  nearestIndexByArc,
  snapToSample,
  subsampleIndices,
  tiltSegment,
} from "../geom.js";
import type { ViewState } from "../state.js";
import type { ReportPair, SessionDoc, StrokeDoc } from "../types.js";

const MAX_ARROWS = 20;
const ARROW_LEN = 16;
const TILT_MAX_LEN = 22;
const CHART_W = 420;
const CHART_H = 150;
const PAD = 8;

function inkPane(
  session: SessionDoc,
  stroke: StrokeDoc,
  anchorDeg: number,
  state: ViewState,
): string {
  const pts = stroke.skeleton;
  const path = pts.map((p, i) => `${i ? "L" : "M"} ${p.x} ${p.y}`).join(" ");
  const parts: string[] = [
    `<path class="detail-ink" d="${path}" fill="none" stroke-width="8" stroke-linecap="round"/>`,
  ];
  for (const i of subsampleIndices(pts.length, MAX_ARROWS)) {
    const p = pts[i];
    const angle = anchorDeg + p.rotation_deg;
    parts.push(
      `<g class="rotation-arrow" transform="translate(${p.x} ${p.y}) rotate(${angle})">` +
        `<line x1="0" y1="0" x2="${ARROW_LEN}" y2="0"/>` +
        `<path d="M ${ARROW_LEN} 0 l -5 -3 l 0 6 Z"/></g>`,
    );
    const seg = tiltSegment(p, TILT_MAX_LEN);
    parts.push(
      `<line class="tilt-seg" x1="${seg.x1}" y1="${seg.y1}" x2="${seg.x2}" y2="${seg.y2}"/>`,
    );
  }
  if (state.hoverPos !== null && pts.length > 0) {
    const p = pts[nearestIndexByArc(pts, state.hoverPos)];
    parts.push(`<circle class="hover-dot" cx="${p.x}" cy="${p.y}" r="5"/>`);
  }
  const w = session.canvas.w;
  const h = session.canvas.h;
  return `
    <figure>
      <svg class="pane" viewBox="0 0 ${w} ${h}" data-pane="${session.role}-detail">${parts.join("")}</svg>
      <figcaption>${session.role}</figcaption>
    </figure>`;
}

function chartX(pos: number): number {
  return PAD + pos * (CHART_W - 2 * PAD);
}

function chartY(v: number, lo: number, hi: number): number {
  const u = hi > lo ? (v - lo) / (hi - lo) : 0.5;
  return CHART_H - PAD - u * (CHART_H - 2 * PAD);
}

function scatter(values: number[], lo: number, hi: number, cls: string): string {
  const n = values.length;
  return values
    .map((v, i) => `<circle class="${cls}" cx="${chartX(i / (n - 1))}" cy="${chartY(v, lo, hi)}" r="2.4"/>`)
    .join("");
}

function polyline(values: number[], lo: number, hi: number, cls: string): string {
  const n = values.length;
  const d = values.map((v, i) => `${chartX(i / (n - 1))},${chartY(v, lo, hi)}`).join(" ");
  return `<polyline class="${cls}" points="${d}" fill="none"/>`;
}

function pressureChart(pair: ReportPair, state: ViewState): string {
  const all = pair.pressure.teacher.concat(pair.pressure.student);
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const n = pair.pressure.teacher.length;
  const parts = [
    scatter(pair.pressure.teacher, lo, hi, "series-teacher"),
    scatter(pair.pressure.student, lo, hi, "series-student"),
  ];
  // where the student diverges most from the teacher
  parts.push(
    `<line class="argmax-marker" x1="${chartX(pair.pressure.argmax_pos)}" y1="${PAD}" ` +
      `x2="${chartX(pair.pressure.argmax_pos)}" y2="${CHART_H - PAD}"/>`,
  );
  if (state.hoverPos !== null) {
    const snap = snapToSample(state.hoverPos, n);
    parts.push(
      `<line class="hover-guide" x1="${chartX(snap.pos)}" y1="${PAD}" ` +
        `x2="${chartX(snap.pos)}" y2="${CHART_H - PAD}"/>`,
    );
  }
  return `<svg id="pressure-chart" viewBox="0 0 ${CHART_W} ${CHART_H}">${parts.join("")}</svg>`;
}

function speedChart(pair: ReportPair): string {
  const all = pair.speed.teacher.concat(pair.speed.student);
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  return `<svg id="speed-chart" viewBox="0 0 ${CHART_W} ${CHART_H}">
    ${polyline(pair.speed.teacher, lo, hi, "series-teacher")}
    ${polyline(pair.speed.student, lo, hi, "series-student")}
  </svg>`;
}

function progressRow(arc: number[], gridMs: number, y: number, hue: number, pxPerMs: number): string {
  return arc
    .map((a, i) => {
      const x = PAD + i * gridMs * pxPerMs;
      return `<circle class="progress-dot" cx="${x}" cy="${y}" r="3.2" fill="${saturationColor(hue, i, arc.length)}" data-arc="${a}"/>`;
    })
    .join("");
}

function progressChart(pair: ReportPair): string {
  const tRow = pair.progress.teacher;
  const sRow = pair.progress.student;
  const maxMs = Math.max(
    (tRow.arc.length - 1) * tRow.grid_ms,
    (sRow.arc.length - 1) * sRow.grid_ms,
    1,
  );
  const pxPerMs = (CHART_W - 2 * PAD) / maxMs;
  return `<svg id="progress-chart" viewBox="0 0 ${CHART_W} 70">
    <g id="progress-teacher">${progressRow(tRow.arc, tRow.grid_ms, 22, 0, pxPerMs)}</g>
    <g id="progress-student">${progressRow(sRow.arc, sRow.grid_ms, 48, 220, pxPerMs)}</g>
  </svg>`;
}

export function renderStrokeView(
  teacher: SessionDoc,
  student: SessionDoc,
  pairs: ReportPair[],
  state: ViewState,
): string {
  const i = state.selectedStroke;
  const pair = pairs[i];
  const tStroke = teacher.strokes[i];
  const sStroke = student.strokes[i];
  if (!pair || !tStroke || !sStroke) {
    return `<p class="notice">no stroke ${i} in both sessions</p>`;
  }
  if (tStroke.skeleton.length < 2 || sStroke.skeleton.length < 2) {
    return `<p class="notice">stroke ${i} is degenerate (a single captured point); charts unavailable</p>`;
  }
  const anchor = displayAnchorDeg(teacher.strokes[0]);
  const selector = teacher.strokes
    .filter((s) => s.index < pairs.length)
    .map(
      (s) =>
        `<button class="stroke-pick${s.index === i ? " active" : ""}" data-stroke="${s.index}">${s.index + 1}</button>`,
    )
    .join("");
  return `
    <div class="stroke-controls">strokes: ${selector}</div>
    <div class="panes">
      ${inkPane(teacher, tStroke, anchor, state)}
      ${inkPane(student, sStroke, anchor, state)}
    </div>
    <div class="charts">
      <figure>${pressureChart(pair, state)}<figcaption>finger pressure (tiers ${pair.tiers.pressure_scale.n})</figcaption></figure>
      <figure>${speedChart(pair)}<figcaption>speed along the stroke</figcaption></figure>
      <figure>${progressChart(pair)}<figcaption>writing progress (shared clock)</figcaption></figure>
    </div>`;
}
