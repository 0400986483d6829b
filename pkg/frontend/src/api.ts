/** Thin typed wrappers over the four server endpoints. */

import type { ReportDoc, SessionDoc, SessionSummary } from "./types.js";

async function getJson<T>(url: string): Promise<T> {
  const res = await fetch(url);
  if (!res.ok) {
    let detail = `${res.status}`;
    try {
      detail = ((await res.json()) as { error?: string }).error ?? detail;
    } catch {
      /* non-JSON error body */
    }
    throw new Error(`GET ${url}: ${detail}`);
  }
  return (await res.json()) as T;
}

export function listSessions(): Promise<SessionSummary[]> {
  return getJson("/api/sessions");
}

export function getSession(id: string): Promise<SessionDoc> {
  return getJson(`/api/sessions/${encodeURIComponent(id)}`);
}

export function getComparison(teacherId: string, studentId: string): Promise<ReportDoc> {
  const params = new URLSearchParams({ teacher: teacherId, student: studentId });
  return getJson(`/api/compare?${params}`);
}

export function frameUrl(id: string, n: number): string {
  return `/api/sessions/${encodeURIComponent(id)}/frames/${n}`;
}
