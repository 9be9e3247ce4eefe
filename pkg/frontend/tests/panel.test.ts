import { describe, expect, it } from "vitest";

import type { PairDetail, RepoPanel } from "../src/api.js";
import { compareRows, fileSummary, formatBytes, scoreLine, sortHistory, toggleMode } from "../src/panel.js";

const panel: RepoPanel = {
  repo_id: "r1",
  ecosystem: "MCP",
  developer_key: "alice",
  source_url: "https://example.com/r1",
  display_name: "r1",
  primary_language: "Python",
  files: [
    { path: "a.py", bytes: 512 },
    { path: "b.py", bytes: 1536 }
  ],
  normalized: "x y z"
};

describe("compareRows", () => {
  it("aligns lines and flags differences", () => {
    const rows = compareRows("a\nb\nc", "a\nB");
    expect(rows).toHaveLength(3);
    expect(rows.map((r) => r.same)).toEqual([true, false, false]);
    expect(rows[2]).toEqual({ line: 3, left: "c", right: "", same: false });
  });

  it("caps row count at the limit", () => {
    const long = Array.from({ length: 100 }, (_, i) => `l${i}`).join("\n");
    expect(compareRows(long, "", 10)).toHaveLength(10);
  });
});

describe("formatting", () => {
  it("formats byte sizes", () => {
    expect(formatBytes(100)).toBe("100 B");
    expect(formatBytes(2048)).toBe("2.0 KiB");
    expect(formatBytes(3 * 1024 * 1024)).toBe("3.0 MiB");
  });

  it("summarizes repo files", () => {
    expect(fileSummary(panel)).toBe("2 files, 2.0 KiB");
  });

  it("renders scores in metric order", () => {
    const detail = {
      pair_id: "r1~r2",
      a: panel,
      b: panel,
      scores: {
        jaccard: { score: 86.8132, group: "mcp-mcp" },
        ctph: { score: 93, group: "mcp-mcp" }
      },
      label_history: []
    } as PairDetail;
    expect(scoreLine(detail)).toBe("ctph 93.0 · jaccard 86.8");
  });

  it("toggles between raw and normalized", () => {
    expect(toggleMode("raw")).toBe("normalized");
    expect(toggleMode("normalized")).toBe("raw");
  });
});

describe("sortHistory", () => {
  it("orders newest first without mutating input", () => {
    const history = [
      { label: "clone", annotator: "r1", metric: "jaccard", timestamp: 1 },
      { label: "non-clone", annotator: "r2", metric: "jaccard", timestamp: 5 }
    ];
    const sorted = sortHistory(history);
    expect(sorted.map((h) => h.timestamp)).toEqual([5, 1]);
    expect(history.map((h) => h.timestamp)).toEqual([1, 5]);
  });
});
