/**
 * Typed client for the cloneaudit review API.
 *
 * The UI is a pure consumer of these endpoints; every statistic shown in
 * the browser (counts, proportions, confidence intervals) comes from the
 * server as-is and is never recomputed client-side.
 */

export type StratumSummary = {
  metric: string;
  group: string;
  bucket_lo: number;
  bucket_hi: number;
  total_pairs: number;
  sampled: number;
  labeled: number;
};

export type PlanSummary = {
  seed: number;
  per_bucket: number;
  strata: StratumSummary[];
};

export type PairListing = {
  pair_id: string;
  a: string;
  b: string;
  scores: Record<string, { score: number; group: string }>;
  label: string | null;
};

export type RepoFile = { path: string; bytes: number };

export type RepoPanel = {
  repo_id: string;
  ecosystem: string;
  developer_key: string;
  source_url: string;
  display_name: string;
  primary_language: string;
  files: RepoFile[];
  normalized: string;
};

export type LabelHistoryEntry = {
  label: string;
  annotator: string;
  metric: string;
  timestamp: number;
};

export type PairDetail = {
  pair_id: string;
  a: RepoPanel;
  b: RepoPanel;
  scores: Record<string, { score: number; group: string }>;
  label_history: LabelHistoryEntry[];
};

export type CalibrationRow = {
  metric: string;
  group: string;
  bucket_lo: number;
  bucket_hi: number;
  total_pairs: number;
  sampled: number;
  clones: number;
  proportion: number | null;
  ci_lo: number | null;
  ci_hi: number | null;
};

export type LabelSubmission = {
  metric: string;
  group: string;
  bucket_lo: number;
  label: "clone" | "non-clone";
  annotator: string;
  rubric_notes: string[];
};

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (typeof body.detail === "string") detail = body.detail;
      else if (body.detail) detail = JSON.stringify(body.detail);
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ReviewClient {
  constructor(private base: string = "") {}

  getPlan(): Promise<PlanSummary> {
    return request<PlanSummary>(`${this.base}/plan`);
  }

  getPairs(metric: string, group: string, bucketLo: number): Promise<{ pairs: PairListing[] }> {
    const params = new URLSearchParams({
      metric,
      group,
      bucket: String(bucketLo)
    });
    return request(`${this.base}/pairs?${params}`);
  }

  getPair(pairId: string): Promise<PairDetail> {
    return request(`${this.base}/pair/${encodeURIComponent(pairId)}`);
  }

  getFile(pairId: string, repo: string, path: string): Promise<{ content: string }> {
    const params = new URLSearchParams({ repo, path });
    return request(`${this.base}/pair/${encodeURIComponent(pairId)}/file?${params}`);
  }

  submitLabel(pairId: string, body: LabelSubmission): Promise<{ status: string }> {
    return request(`${this.base}/pair/${encodeURIComponent(pairId)}/label`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body)
    });
  }

  getCalibration(): Promise<{ rows: CalibrationRow[] }> {
    return request(`${this.base}/calibration`);
  }

  getRubric(): Promise<{ steps: string[] }> {
    return request(`${this.base}/rubric`);
  }
}
