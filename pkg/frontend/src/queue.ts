/**
 * Review queue model: orders strata and renders their progress badges.
 *
 * Counts come straight from GET /plan; the only client-side arithmetic is
 * presentation (badge text, done flags), never statistics.
 */

import type { PlanSummary, StratumSummary } from "./api.js";

export type QueueRow = {
  key: string;
  metric: string;
  group: string;
  bucketLabel: string;
  bucketLo: number;
  labeled: number;
  sampled: number;
  badge: string;
  done: boolean;
};

export const bucketLabel = (lo: number, hi: number): string =>
  `${Math.round(lo)}–${Math.round(hi)}`;

export const stratumKey = (s: Pick<StratumSummary, "metric" | "group" | "bucket_lo">): string =>
  `${s.metric}/${s.group}/${s.bucket_lo}`;

export const progressBadge = (labeled: number, sampled: number): string =>
  `${labeled}/${sampled}`;

/**
 * Flatten the plan into display rows. High buckets first within each
 * (group, metric) panel: reviewers work down from the strongest signals.
 */
export const buildQueue = (plan: PlanSummary): QueueRow[] => {
  const rows = plan.strata.map((s) => ({
    key: stratumKey(s),
    metric: s.metric,
    group: s.group,
    bucketLabel: bucketLabel(s.bucket_lo, s.bucket_hi),
    bucketLo: s.bucket_lo,
    labeled: s.labeled,
    sampled: s.sampled,
    badge: progressBadge(s.labeled, s.sampled),
    done: s.sampled > 0 && s.labeled >= s.sampled
  }));
  rows.sort((a, b) => {
    if (a.group !== b.group) return a.group < b.group ? -1 : 1;
    if (a.metric !== b.metric) return a.metric < b.metric ? -1 : 1;
    return b.bucketLo - a.bucketLo;
  });
  return rows;
};

/** Recompute one row's badge after a label lands, leaving the rest alone. */
export const bumpRow = (rows: QueueRow[], key: string, labeled: number): QueueRow[] =>
  rows.map((row) =>
    row.key === key
      ? {
          ...row,
          labeled,
          badge: progressBadge(labeled, row.sampled),
          done: row.sampled > 0 && labeled >= row.sampled
        }
      : row
  );

export const totalProgress = (rows: QueueRow[]): { labeled: number; sampled: number } =>
  rows.reduce(
    (acc, row) => ({ labeled: acc.labeled + row.labeled, sampled: acc.sampled + row.sampled }),
    { labeled: 0, sampled: 0 }
  );
