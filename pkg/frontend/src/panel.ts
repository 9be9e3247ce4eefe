/**
 * Side-by-side pair view models: file lists, raw/normalized toggle, and
 * aligned comparison rows for the two repositories under review.
 */

import type { LabelHistoryEntry, PairDetail, RepoPanel } from "./api.js";

export type ViewMode = "raw" | "normalized";

export type CompareRow = {
  line: number;
  left: string;
  right: string;
  same: boolean;
};

export const toggleMode = (mode: ViewMode): ViewMode =>
  mode === "raw" ? "normalized" : "raw";

export const formatBytes = (n: number): string => {
  if (n < 1024) return `${n} B`;
  if (n < 1024 * 1024) return `${(n / 1024).toFixed(1)} KiB`;
  return `${(n / (1024 * 1024)).toFixed(1)} MiB`;
};

export const fileSummary = (panel: RepoPanel): string => {
  const total = panel.files.reduce((acc, f) => acc + f.bytes, 0);
  return `${panel.files.length} files, ${formatBytes(total)}`;
};

/**
 * Align two texts line by line for the side-by-side view. Capped so a
 * pathological normalized stream cannot hang the renderer.
 */
export const compareRows = (left: string, right: string, limit = 5000): CompareRow[] => {
  const leftLines = left.split("\n");
  const rightLines = right.split("\n");
  const max = Math.min(Math.max(leftLines.length, rightLines.length), limit);
  const rows: CompareRow[] = [];
  for (let i = 0; i < max; i++) {
    const l = leftLines[i] ?? "";
    const r = rightLines[i] ?? "";
    rows.push({ line: i + 1, left: l, right: r, same: l === r });
  }
  return rows;
};

export const scoreLine = (detail: PairDetail): string => {
  const parts = Object.entries(detail.scores)
    .sort(([m1], [m2]) => (m1 < m2 ? -1 : 1))
    .map(([metric, s]) => `${metric} ${s.score.toFixed(1)}`);
  return parts.length ? parts.join(" · ") : "no scores";
};

/** Newest-first label history for the history drawer. */
export const sortHistory = (history: LabelHistoryEntry[]): LabelHistoryEntry[] =>
  [...history].sort((a, b) => b.timestamp - a.timestamp);
