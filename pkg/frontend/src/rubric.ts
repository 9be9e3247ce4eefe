/**
 * Six-step verification rubric checklist.
 *
 * Step text is served by GET /rubric; this module only tracks which steps
 * the annotator has worked through and collects per-step notes for the
 * label submission.
 */

export type RubricStep = {
  index: number;
  text: string;
  checked: boolean;
  note: string;
};

export const initRubric = (steps: string[]): RubricStep[] =>
  steps.map((text, index) => ({ index, text, checked: false, note: "" }));

export const toggleStep = (steps: RubricStep[], index: number): RubricStep[] =>
  steps.map((s) => (s.index === index ? { ...s, checked: !s.checked } : s));

export const setNote = (steps: RubricStep[], index: number, note: string): RubricStep[] =>
  steps.map((s) => (s.index === index ? { ...s, note } : s));

export const allChecked = (steps: RubricStep[]): boolean =>
  steps.length > 0 && steps.every((s) => s.checked);

/** Non-empty notes, prefixed with their step number, for rubric_notes. */
export const collectNotes = (steps: RubricStep[]): string[] =>
  steps
    .filter((s) => s.note.trim() !== "")
    .map((s) => `step ${s.index + 1}: ${s.note.trim()}`);

export const resetRubric = (steps: RubricStep[]): RubricStep[] =>
  steps.map((s) => ({ ...s, checked: false, note: "" }));
