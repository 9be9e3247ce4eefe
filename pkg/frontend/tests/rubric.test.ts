import { describe, expect, it } from "vitest";

import { allChecked, collectNotes, initRubric, resetRubric, setNote, toggleStep } from "../src/rubric.js";

const steps = ["Compare structure", "Inspect core files", "Discount boilerplate"];

describe("rubric checklist", () => {
  it("starts unchecked with empty notes", () => {
    const rubric = initRubric(steps);
    expect(rubric).toHaveLength(3);
    expect(rubric.every((s) => !s.checked && s.note === "")).toBe(true);
    expect(allChecked(rubric)).toBe(false);
  });

  it("toggles a single step", () => {
    let rubric = initRubric(steps);
    rubric = toggleStep(rubric, 1);
    expect(rubric.map((s) => s.checked)).toEqual([false, true, false]);
    rubric = toggleStep(rubric, 1);
    expect(rubric.map((s) => s.checked)).toEqual([false, false, false]);
  });

  it("requires every step for allChecked", () => {
    let rubric = initRubric(steps);
    for (const step of rubric) rubric = toggleStep(rubric, step.index);
    expect(allChecked(rubric)).toBe(true);
    expect(allChecked([])).toBe(false);
  });

  it("collects only non-empty notes with step numbers", () => {
    let rubric = initRubric(steps);
    rubric = setNote(rubric, 0, "  same layout  ");
    rubric = setNote(rubric, 2, "");
    expect(collectNotes(rubric)).toEqual(["step 1: same layout"]);
  });

  it("reset clears checks and notes but keeps text", () => {
    let rubric = initRubric(steps);
    rubric = toggleStep(setNote(rubric, 0, "x"), 0);
    rubric = resetRubric(rubric);
    expect(rubric[0]).toEqual({ index: 0, text: steps[0], checked: false, note: "" });
  });
});
