import { describe, expect, it } from "vitest";

import { PRESSURE_RAMP, SPEED_RAMP } from "../src/color.js";
import { nearestIndexByArc, snapToSample } from "../src/geom.js";
import { initialState, type ViewState } from "../src/state.js";
import type { ReportDoc, SessionDoc } from "../src/types.js";
import { renderGlyphView } from "../src/views/glyph.js";
import { renderRhythmView } from "../src/views/rhythm.js";
import { renderStrokeView } from "../src/views/stroke.js";
import reportJson from "./fixtures/report.json";
import studentJson from "./fixtures/session_student.json";
import teacherJson from "./fixtures/session_teacher.json";

const teacher = teacherJson as unknown as SessionDoc;
const student = studentJson as unknown as SessionDoc;
const report = reportJson as unknown as ReportDoc;

function state(over: Partial<ViewState> = {}): ViewState {
  return { ...initialState(), teacherId: "teacher", studentId: "student", strokeCount: 3, ...over };
}

describe("glyph view", () => {
  it("renders both panes over the grid with no boundaries by default", () => {
    const html = renderGlyphView(teacher, student, report, state());
    expect(html).toContain('data-pane="teacher"');
    expect(html).toContain('data-pane="student"');
    expect((html.match(/class="mizige"/g) ?? []).length).toBe(16); // 8 lines x 2 panes
    expect(html).not.toContain("boundary-structural");
    expect(html).not.toContain("boundary-form");
  });

  it("draws the toggled boundaries from the report boxes", () => {
    const html = renderGlyphView(
      teacher, student, report, state({ boxToggles: { structural: true, form: true } }),
    );
    expect((html.match(/boundary-structural/g) ?? []).length).toBe(2);
    const box = report.glyph.teacher_box;
    expect(html).toContain(`M ${box.top.x} ${box.top.y}`);
  });

  it("applies and resets the drag overlay transform", () => {
    const dragged = renderGlyphView(
      teacher, student, report, state({ overlayOffset: { dx: 12, dy: -7 } }),
    );
    expect(dragged).toContain('transform="translate(12 -7)"');
    const reset = renderGlyphView(teacher, student, report, state());
    expect(reset).toContain('transform="translate(0 0)"');
  });
});

describe("rhythm view", () => {
  it("colors segments by pressure tier and re-encodes to speed without new data", () => {
    const pressureHtml = renderRhythmView(teacher, student, state());
    const speedHtml = renderRhythmView(teacher, student, state({ rhythmMetric: "speed" }));
    expect(PRESSURE_RAMP.some((c) => pressureHtml.includes(c))).toBe(true);
    expect(SPEED_RAMP.some((c) => speedHtml.includes(c))).toBe(true);
    // same session objects in, different encodings out
    expect(pressureHtml).not.toBe(speedHtml);
  });

  it("places the time marker on the first point at t=0", () => {
    const html = renderRhythmView(teacher, student, state({ timelineTMs: 0 }));
    const first = teacher.strokes[0].skeleton[0];
    expect(html).toContain(`<circle class="time-marker" cx="${first.x}" cy="${first.y}"`);
    expect(html).toContain("/api/sessions/teacher/frames/0");
  });

  it("requests the last frame at the end of the timeline", () => {
    const end = Math.max(...teacher.strokes.map((s) => s.contact.end_ms));
    const html = renderRhythmView(teacher, student, state({ timelineTMs: end }));
    expect(html).toContain(`/api/sessions/teacher/frames/${teacher.frame_count - 1}`);
  });
});

describe("stroke view", () => {
  it("draws at most 20 rotation arrows and tilt segments per pane", () => {
    const html = renderStrokeView(teacher, student, report.pairs, state());
    const arrows = (html.match(/rotation-arrow/g) ?? []).length;
    expect(arrows).toBeGreaterThan(0);
    expect(arrows).toBeLessThanOrEqual(40); // two panes
    expect(html).toContain("tilt-seg");
    expect(html).toContain("argmax-marker");
  });

  it("hover shows the red dot on the skeleton point nearest the sampled position", () => {
    const hover = 0.403;
    const html = renderStrokeView(teacher, student, report.pairs, state({ hoverPos: hover }));
    const snapped = snapToSample(hover, report.pairs[0].pressure.teacher.length);
    const pts = teacher.strokes[0].skeleton;
    const expected = pts[nearestIndexByArc(pts, hover)];
    expect(html).toContain(`<circle class="hover-dot" cx="${expected.x}" cy="${expected.y}"`);
    // the dot's arc position sits within one resample cell of the hover
    expect(Math.abs(expected.arc_pos - snapped.pos)).toBeLessThanOrEqual(1 / 99 + 0.02);
    // guide line present and dots appear in both panes
    expect(html).toContain("hover-guide");
    expect((html.match(/hover-dot/g) ?? []).length).toBe(2);
  });

  it("no hover, no dot", () => {
    const html = renderStrokeView(teacher, student, report.pairs, state());
    expect(html).not.toContain("hover-dot");
  });

  it("progress rows reflect the duration ratio on the shared grid", () => {
    const html = renderStrokeView(teacher, student, report.pairs, state({ selectedStroke: 1 }));
    const pair = report.pairs[1];
    const tDots = (html.match(/progress-dot/g) ?? []).length;
    expect(tDots).toBe(pair.progress.teacher.arc.length + pair.progress.student.arc.length);
    // student stroke 1 is scripted slower than the teacher's
    expect(pair.progress.student.arc.length).toBeGreaterThan(pair.progress.teacher.arc.length);
  });

  it("self-comparison series overlap everywhere", () => {
    const selfPairs = report.pairs.map((p) => ({
      ...p,
      pressure: { ...p.pressure, student: p.pressure.teacher, diff: p.pressure.teacher.map(() => 0) },
    }));
    const html = renderStrokeView(teacher, teacher, selfPairs, state());
    expect(html).toContain("series-teacher");
    expect(html).toContain("series-student");
  });

  it("reports a notice for out-of-range strokes", () => {
    const html = renderStrokeView(teacher, student, report.pairs, state({ selectedStroke: 9 }));
    expect(html).toContain("notice");
  });
});
