/**
 * Calibration panel formatting. The proportions and interval bounds are
 * produced server-side; this module only renders them.
 */

import type { CalibrationRow } from "./api.js";
import { bucketLabel } from "./queue.js";

export type CalibrationCell = {
  metric: string;
  group: string;
  bucket: string;
  totalPairs: number;
  counts: string;
  estimate: string;
};

const fmt2 = (x: number): string => x.toFixed(2);

export const formatEstimate = (row: CalibrationRow): string => {
  if (row.proportion === null || row.ci_lo === null || row.ci_hi === null) {
    return "—";
  }
  return `${fmt2(row.proportion)} (${fmt2(row.ci_lo)}–${fmt2(row.ci_hi)})`;
};

export const toCells = (rows: CalibrationRow[]): CalibrationCell[] =>
  rows.map((row) => ({
    metric: row.metric,
    group: row.group,
    bucket: bucketLabel(row.bucket_lo, row.bucket_hi),
    totalPairs: row.total_pairs,
    counts: `${row.clones}/${row.sampled}`,
    estimate: formatEstimate(row)
  }));

export const findRow = (
  rows: CalibrationRow[],
  metric: string,
  group: string,
  bucketLo: number
): CalibrationRow | undefined =>
  rows.find(
    (r) => r.metric === metric && r.group === group && r.bucket_lo === bucketLo
  );
