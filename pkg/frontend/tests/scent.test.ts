import { describe, expect, it } from "vitest";

import { matchesFilter, scentBins } from "../src/scent.js";

interface Row {
  kind: string;
  label: string;
}

const ROWS: Row[] = [
  { kind: "place", label: "Antwerp" },
  { kind: "place", label: "Bruges" },
  { kind: "place", label: "Brussels" },
  { kind: "person", label: "Albrecht Dürer" },
  { kind: "travel", label: "Journey to Antwerp" },
];

describe("scented search", () => {
  it("filter is case-insensitive substring on labels", () => {
    expect(matchesFilter("Albrecht Dürer", "dür")).toBe(true);
    expect(matchesFilter("Albrecht Dürer", "DÜRER")).toBe(true);
    expect(matchesFilter("Albrecht Dürer", "bosch")).toBe(false);
    expect(matchesFilter("anything", "")).toBe(true);
  });

  it("bins the matching records by kind, descending count then label", () => {
    const bins = scentBins(ROWS, (r) => r.kind, (r) => r.label);
    expect(bins.map((b) => [b.label, b.count])).toEqual([
      ["place", 3],
      ["person", 1],
      ["travel", 1],
    ]);
    expect(bins[0]!.fraction).toBeCloseTo(3 / 5, 12);
  });

  it("the scent follows the filter", () => {
    const bins = scentBins(ROWS, (r) => r.kind, (r) => r.label, "antwerp");
    expect(bins.map((b) => [b.label, b.count])).toEqual([
      ["place", 1],
      ["travel", 1],
    ]);
    expect(scentBins(ROWS, (r) => r.kind, (r) => r.label, "zzz")).toEqual([]);
  });
});
