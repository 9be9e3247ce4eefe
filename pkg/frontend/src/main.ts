/**
 * Review UI entry point: wires the queue, pair view, rubric checklist,
 * label form, and calibration panel to the HTTP API.
 */

import { ApiError, ReviewClient } from "./api.js";
import type { PairDetail, PairListing, QueueSelection } from "./types.js";
import { buildQueue, stratumKey, totalProgress } from "./queue.js";
import type { QueueRow } from "./queue.js";
import { allChecked, collectNotes, initRubric, resetRubric, toggleStep, setNote } from "./rubric.js";
import type { RubricStep } from "./rubric.js";
import { compareRows, fileSummary, scoreLine, sortHistory, toggleMode } from "./panel.js";
import type { ViewMode } from "./panel.js";
import { toCells } from "./calibration.js";

const client = new ReviewClient("");

type AppState = {
  rows: QueueRow[];
  selection: QueueSelection | null;
  pairs: PairListing[];
  detail: PairDetail | null;
  rubric: RubricStep[];
  mode: ViewMode;
};

const state: AppState = {
  rows: [],
  selection: null,
  pairs: [],
  detail: null,
  rubric: [],
  mode: "raw"
};

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
};

const setStatus = (message: string): void => {
  el("status").textContent = message;
};

const renderQueue = (): void => {
  const list = el("queue");
  list.replaceChildren();
  for (const row of state.rows) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.textContent = `${row.group} / ${row.metric} / ${row.bucketLabel}`;
    button.addEventListener("click", () => {
      void selectStratum(row);
    });
    const badge = document.createElement("span");
    badge.className = row.done ? "badge done" : "badge";
    badge.textContent = row.badge;
    item.append(button, badge);
    if (
      state.selection &&
      stratumKey({
        metric: state.selection.metric,
        group: state.selection.group,
        bucket_lo: state.selection.bucketLo
      }) === row.key
    ) {
      item.className = "active";
    }
    list.append(item);
  }
  const total = totalProgress(state.rows);
  el("overall").textContent = `${total.labeled}/${total.sampled} labeled`;
};

const renderPairs = (): void => {
  const list = el("pairs");
  list.replaceChildren();
  for (const pair of state.pairs) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.textContent = pair.pair_id;
    button.addEventListener("click", () => {
      void openPair(pair.pair_id);
    });
    const mark = document.createElement("span");
    mark.className = "badge";
    mark.textContent = pair.label ?? "unlabeled";
    item.append(button, mark);
    list.append(item);
  }
};

const renderRepoPanel = (side: "a" | "b"): void => {
  if (!state.detail) return;
  const panel = state.detail[side];
  el(`${side}-title`).textContent = `${panel.display_name} (${panel.developer_key})`;
  el(`${side}-meta`).textContent =
    `${panel.ecosystem} · ${panel.primary_language} · ${fileSummary(panel)}`;
  const files = el(`${side}-files`);
  files.replaceChildren();
  for (const file of panel.files) {
    const item = document.createElement("li");
    const link = document.createElement("button");
    link.textContent = file.path;
    link.addEventListener("click", () => {
      void showFile(side, file.path);
    });
    item.append(link);
    files.append(item);
  }
};

const renderCompare = async (): Promise<void> => {
  if (!state.detail) return;
  let left = state.detail.a.normalized;
  let right = state.detail.b.normalized;
  if (state.mode === "raw") {
    const firstA = state.detail.a.files[0]?.path;
    const firstB = state.detail.b.files[0]?.path;
    left = firstA ? (await client.getFile(state.detail.pair_id, state.detail.a.repo_id, firstA)).content : "";
    right = firstB ? (await client.getFile(state.detail.pair_id, state.detail.b.repo_id, firstB)).content : "";
  }
  const body = el("compare-body");
  body.replaceChildren();
  for (const row of compareRows(left, right)) {
    const tr = document.createElement("tr");
    tr.className = row.same ? "same" : "diff";
    const num = document.createElement("td");
    num.textContent = String(row.line);
    const l = document.createElement("td");
    l.textContent = row.left;
    const r = document.createElement("td");
    r.textContent = row.right;
    tr.append(num, l, r);
    body.append(tr);
  }
  el("mode-toggle").textContent = state.mode === "raw" ? "show normalized" : "show raw";
};

const showFile = async (side: "a" | "b", path: string): Promise<void> => {
  if (!state.detail) return;
  const repo = state.detail[side].repo_id;
  const file = await client.getFile(state.detail.pair_id, repo, path);
  const target = el(side === "a" ? "compare-left-only" : "compare-right-only");
  target.textContent = file.content;
};

const renderHistory = (): void => {
  if (!state.detail) return;
  const list = el("history");
  list.replaceChildren();
  for (const entry of sortHistory(state.detail.label_history)) {
    const item = document.createElement("li");
    const when = new Date(entry.timestamp * 1000).toISOString();
    item.textContent = `${entry.label} — ${entry.annotator} (${entry.metric}, ${when})`;
    list.append(item);
  }
};

const renderRubric = (): void => {
  const list = el("rubric");
  list.replaceChildren();
  for (const step of state.rubric) {
    const item = document.createElement("li");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = step.checked;
    box.addEventListener("change", () => {
      state.rubric = toggleStep(state.rubric, step.index);
      renderRubric();
    });
    const text = document.createElement("span");
    text.textContent = step.text;
    const note = document.createElement("input");
    note.type = "text";
    note.placeholder = "note";
    note.value = step.note;
    note.addEventListener("change", () => {
      state.rubric = setNote(state.rubric, step.index, note.value);
    });
    item.append(box, text, note);
    list.append(item);
  }
  const submit = el("submit-clone") as HTMLButtonElement;
  const submitNon = el("submit-non-clone") as HTMLButtonElement;
  submit.disabled = submitNon.disabled = !allChecked(state.rubric) || !state.detail;
};

const refreshCalibration = async (): Promise<void> => {
  const { rows } = await client.getCalibration();
  const body = el("calibration-body");
  body.replaceChildren();
  for (const cell of toCells(rows)) {
    const tr = document.createElement("tr");
    for (const value of [cell.group, cell.metric, cell.bucket, String(cell.totalPairs), cell.counts, cell.estimate]) {
      const td = document.createElement("td");
      td.textContent = value;
      tr.append(td);
    }
    body.append(tr);
  }
};

const refreshPlan = async (): Promise<void> => {
  const plan = await client.getPlan();
  state.rows = buildQueue(plan);
  renderQueue();
};

const selectStratum = async (row: QueueRow): Promise<void> => {
  state.selection = { metric: row.metric, group: row.group, bucketLo: row.bucketLo };
  const { pairs } = await client.getPairs(row.metric, row.group, row.bucketLo);
  state.pairs = pairs;
  renderQueue();
  renderPairs();
};

const openPair = async (pairId: string): Promise<void> => {
  state.detail = await client.getPair(pairId);
  state.rubric = resetRubric(state.rubric);
  el("pair-title").textContent = `${pairId} — ${scoreLine(state.detail)}`;
  renderRepoPanel("a");
  renderRepoPanel("b");
  renderHistory();
  renderRubric();
  await renderCompare();
};

const submitLabel = async (label: "clone" | "non-clone"): Promise<void> => {
  if (!state.detail || !state.selection) return;
  const annotator = (el("annotator") as HTMLInputElement).value.trim();
  if (!annotator) {
    setStatus("enter an annotator id before submitting");
    return;
  }
  try {
    await client.submitLabel(state.detail.pair_id, {
      metric: state.selection.metric,
      group: state.selection.group,
      bucket_lo: state.selection.bucketLo,
      label,
      annotator,
      rubric_notes: collectNotes(state.rubric)
    });
  } catch (err) {
    setStatus(err instanceof ApiError ? err.message : String(err));
    return;
  }
  setStatus(`recorded ${label} for ${state.detail.pair_id}`);
  await refreshPlan();
  const sel = state.selection;
  const { pairs } = await client.getPairs(sel.metric, sel.group, sel.bucketLo);
  state.pairs = pairs;
  renderPairs();
  state.detail = await client.getPair(state.detail.pair_id);
  renderHistory();
  await refreshCalibration();
};

const boot = async (): Promise<void> => {
  try {
    const rubric = await client.getRubric();
    state.rubric = initRubric(rubric.steps);
    renderRubric();
    await refreshPlan();
    await refreshCalibration();
    setStatus("ready");
  } catch (err) {
    setStatus(err instanceof ApiError ? err.message : String(err));
  }
  el("mode-toggle").addEventListener("click", () => {
    state.mode = toggleMode(state.mode);
    void renderCompare();
  });
  el("submit-clone").addEventListener("click", () => void submitLabel("clone"));
  el("submit-non-clone").addEventListener("click", () => void submitLabel("non-clone"));
};

if (typeof document !== "undefined") {
  void boot();
}
