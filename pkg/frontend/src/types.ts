/** Wire types for the session/report documents served by the API. */

export interface SessionSummary {
  id: string;
  role: "teacher" | "student";
  character_label: string;
  stroke_count: number;
}

export interface TiltVec {
  dx: number;
  dy: number;
}

export interface SkeletonPoint {
  x: number;
  y: number;
  t_ms: number;
  speed_px_s: number;
  pressure_raw: number;
  pressure_tier: number;
  speed_tier: number;
  tilt: TiltVec;
  rotation_deg: number;
  arc_pos: number;
}

export interface StrokeDoc {
  index: number;
  contact: { start_ms: number; end_ms: number };
  skeleton: SkeletonPoint[];
  pixel_count: number;
}

export interface SessionDoc {
  schema_version: string;
  id: string;
  role: string;
  character_label: string;
  canvas: { w: number; h: number };
  frame_count: number;
  config_fingerprint: string;
  glyph_mask: string;
  strokes: StrokeDoc[];
}

export interface XY {
  x: number;
  y: number;
}

export interface BoxDoc {
  top: XY;
  bottom: XY;
  left: XY;
  right: XY;
  rect: { x0: number; y0: number; x1: number; y1: number };
}

export interface ScaleDoc {
  lo: number;
  hi: number;
  n: number;
}

export interface ProgressDoc {
  grid_ms: number;
  arc: number[];
}

export interface ReportPair {
  index: number;
  pressure: {
    teacher: number[];
    student: number[];
    diff: number[];
    max_abs_diff: number;
    argmax_pos: number;
  };
  speed: { teacher: number[]; student: number[] };
  progress: { teacher: ProgressDoc; student: ProgressDoc };
  tiers: { pressure_scale: ScaleDoc; speed_scale: ScaleDoc };
}

export interface ReportDoc {
  teacher_id: string;
  student_id: string;
  stroke_count: number;
  mismatch: { role: string; index: number }[];
  pairs: ReportPair[];
  glyph: {
    teacher_box: BoxDoc;
    student_box: BoxDoc;
    mizige: { size: number };
  };
}
