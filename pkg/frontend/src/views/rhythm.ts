/** Step 2: whole-character rhythm — tier-colored skeletons plus frame scrub. */

import { frameUrl } from "../api.js";
import { PRESSURE_RAMP, SPEED_RAMP, tierColor } from "../color.js";
import { frameIndexForTime, nearestIndexByTime, sessionDurationMs } from "../geom.js";
import type { RhythmMetric, ViewState } from "../state.js";
import type { SessionDoc, SkeletonPoint } from "../types.js";

function allPoints(session: SessionDoc): SkeletonPoint[] {
  return session.strokes.flatMap((s) => s.skeleton);
}

function colored(session: SessionDoc, metric: RhythmMetric): string {
  const ramp = metric === "pressure" ? PRESSURE_RAMP : SPEED_RAMP;
  const parts: string[] = [];
  for (const stroke of session.strokes) {
    const pts = stroke.skeleton;
    for (let i = 1; i < pts.length; i++) {
      const tier = metric === "pressure" ? pts[i].pressure_tier : pts[i].speed_tier;
      parts.push(
        `<line class="rhythm-seg" x1="${pts[i - 1].x}" y1="${pts[i - 1].y}" ` +
          `x2="${pts[i].x}" y2="${pts[i].y}" stroke="${tierColor(tier, ramp)}" ` +
          `stroke-width="7" stroke-linecap="round"/>`,
      );
    }
    if (pts.length === 1) {
      const tier = metric === "pressure" ? pts[0].pressure_tier : pts[0].speed_tier;
      parts.push(
        `<circle class="rhythm-seg" cx="${pts[0].x}" cy="${pts[0].y}" r="4" fill="${tierColor(tier, ramp)}"/>`,
      );
    }
  }
  return parts.join("");
}

function pane(session: SessionDoc, state: ViewState): string {
  const pts = allPoints(session);
  const marker = pts[nearestIndexByTime(pts, state.timelineTMs)];
  const n = frameIndexForTime(state.timelineTMs, sessionDurationMs(session.strokes), session.frame_count);
  const w = session.canvas.w;
  const h = session.canvas.h;
  return `
    <figure>
      <svg class="pane" viewBox="0 0 ${w} ${h}" data-pane="${session.role}">
        ${colored(session, state.rhythmMetric)}
        <circle class="time-marker" cx="${marker.x}" cy="${marker.y}" r="6"/>
      </svg>
      <div class="frame-slot">
        <img class="frame-img" data-session="${session.id}" src="${frameUrl(session.id, n)}" alt="frame ${n}"/>
      </div>
      <figcaption>${session.role}</figcaption>
    </figure>`;
}

export function renderRhythmView(teacher: SessionDoc, student: SessionDoc, state: ViewState): string {
  const maxT = Math.max(sessionDurationMs(teacher.strokes), sessionDurationMs(student.strokes));
  return `
    <div class="rhythm-controls">
      <label><input type="radio" name="metric" value="pressure" ${state.rhythmMetric === "pressure" ? "checked" : ""}/> pressure</label>
      <label><input type="radio" name="metric" value="speed" ${state.rhythmMetric === "speed" ? "checked" : ""}/> speed</label>
      <input id="timeline" type="range" min="0" max="${maxT}" step="10" value="${state.timelineTMs}"/>
      <span class="timeline-label">${state.timelineTMs} ms</span>
    </div>
    <div class="panes">
      ${pane(teacher, state)}
      ${pane(student, state)}
    </div>`;
}
