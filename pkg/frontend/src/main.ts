/** Bootstrap and DOM wiring: fetch, render the active step, route events. */

import { getComparison, getSession, listSessions } from "./api.js";
import { Store, stepIndex, type Step } from "./state.js";
import type { ReportDoc, SessionDoc, SessionSummary } from "./types.js";
import { renderGlyphView } from "./views/glyph.js";
import { renderRhythmView } from "./views/rhythm.js";
import { renderStrokeView } from "./views/stroke.js";

const STEPS: Step[] = ["glyph", "rhythm", "stroke"];

interface Loaded {
  teacher: SessionDoc;
  student: SessionDoc;
  report: ReportDoc;
}

const store = new Store();
let loaded: Loaded | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function render(): void {
  const state = store.get();
  const view = el<HTMLDivElement>("view");
  for (const step of STEPS) {
    const tab = el<HTMLButtonElement>(`tab-${step}`);
    tab.classList.toggle("active", step === state.step);
    tab.disabled = stepIndex(step) > stepIndex(state.step) + 1 || !loaded;
  }
  if (!loaded) {
    view.innerHTML = `<p class="notice">select a teacher and a student session to begin</p>`;
    return;
  }
  const { teacher, student, report } = loaded;
  if (state.step === "glyph") {
    view.innerHTML = renderGlyphView(teacher, student, report, state);
    wireGlyph();
  } else if (state.step === "rhythm") {
    view.innerHTML = renderRhythmView(teacher, student, state);
    wireRhythm();
  } else {
    view.innerHTML = renderStrokeView(teacher, student, report.pairs, state);
    wireStroke();
  }
}

function wireGlyph(): void {
  const overlay = document.getElementById("overlay-glyph");
  const pane = document.querySelector<SVGSVGElement>('svg[data-pane="teacher"]');
  if (!overlay || !pane) return;
  let dragging = false;
  let last: { x: number; y: number } | null = null;
  const scale = () => {
    const vb = pane.viewBox.baseVal;
    const rect = pane.getBoundingClientRect();
    return rect.width > 0 ? vb.width / rect.width : 1;
  };
  pane.addEventListener("pointerdown", (ev) => {
    dragging = true;
    last = { x: ev.clientX, y: ev.clientY };
    pane.setPointerCapture(ev.pointerId);
  });
  pane.addEventListener("pointermove", (ev) => {
    if (!dragging || !last) return;
    const k = scale();
    const { dx, dy } = store.get().overlayOffset;
    store.update({
      overlayOffset: { dx: dx + (ev.clientX - last.x) * k, dy: dy + (ev.clientY - last.y) * k },
    });
    last = { x: ev.clientX, y: ev.clientY };
  });
  pane.addEventListener("pointerup", () => {
    dragging = false;
    last = null;
  });
  el<HTMLButtonElement>("reset-overlay").onclick = () =>
    store.update({ overlayOffset: { dx: 0, dy: 0 } });
  el<HTMLInputElement>("toggle-structural").onchange = (ev) =>
    store.update({
      boxToggles: { ...store.get().boxToggles, structural: (ev.target as HTMLInputElement).checked },
    });
  el<HTMLInputElement>("toggle-form").onchange = (ev) =>
    store.update({
      boxToggles: { ...store.get().boxToggles, form: (ev.target as HTMLInputElement).checked },
    });
}

function wireRhythm(): void {
  const timeline = document.getElementById("timeline") as HTMLInputElement | null;
  if (timeline) {
    timeline.oninput = () => store.update({ timelineTMs: Number(timeline.value) });
  }
  for (const radio of document.querySelectorAll<HTMLInputElement>('input[name="metric"]')) {
    radio.onchange = () => {
      // pure client-side re-encode: tiers are already in the payload
      if (radio.checked) store.update({ rhythmMetric: radio.value as "pressure" | "speed" });
    };
  }
  for (const img of document.querySelectorAll<HTMLImageElement>("img.frame-img")) {
    img.onerror = () => {
      const slot = img.parentElement;
      if (slot) slot.innerHTML = `<div class="frame-missing">frames not retained</div>`;
    };
  }
}

function wireStroke(): void {
  for (const btn of document.querySelectorAll<HTMLButtonElement>("button.stroke-pick")) {
    btn.onclick = () => store.selectStroke(Number(btn.dataset.stroke));
  }
  const chart = document.getElementById("pressure-chart");
  if (chart) {
    chart.addEventListener("mousemove", (ev) => {
      const rect = (chart as unknown as SVGSVGElement).getBoundingClientRect();
      const pos = (ev.clientX - rect.left) / Math.max(rect.width, 1);
      store.update({ hoverPos: Math.min(Math.max(pos, 0), 1) });
    });
    chart.addEventListener("mouseleave", () => store.update({ hoverPos: null }));
  }
}

async function loadPair(): Promise<void> {
  const state = store.get();
  if (!state.teacherId || !state.studentId) return;
  const [teacher, student, report] = await Promise.all([
    getSession(state.teacherId),
    getSession(state.studentId),
    getComparison(state.teacherId, state.studentId),
  ]);
  loaded = { teacher, student, report };
  store.update({ strokeCount: report.pairs.length });
}

function fillSelect(select: HTMLSelectElement, sessions: SessionSummary[], role: string): void {
  const options = sessions
    .filter((s) => s.role === role)
    .map((s) => `<option value="${s.id}">${s.id} (${s.character_label || "?"})</option>`);
  select.innerHTML = `<option value="">choose ${role}</option>` + options.join("");
}

async function boot(): Promise<void> {
  store.subscribe(render);
  const sessions = await listSessions();
  const teacherSel = el<HTMLSelectElement>("teacher-select");
  const studentSel = el<HTMLSelectElement>("student-select");
  fillSelect(teacherSel, sessions, "teacher");
  fillSelect(studentSel, sessions, "student");

  const onPick = async () => {
    if (!teacherSel.value || !studentSel.value) return;
    store.selectPair(teacherSel.value, studentSel.value, 0);
    await loadPair();
  };
  teacherSel.onchange = onPick;
  studentSel.onchange = onPick;

  for (const step of STEPS) {
    el<HTMLButtonElement>(`tab-${step}`).onclick = () => store.goToStep(step);
  }
  render();
}

if (typeof document !== "undefined" && document.getElementById("view")) {
  boot().catch((err) => {
    el<HTMLDivElement>("view").innerHTML = `<p class="notice">failed to load: ${err}</p>`;
  });
}
