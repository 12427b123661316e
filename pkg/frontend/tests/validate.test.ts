import { describe, expect, it } from "vitest";

import { validateStory } from "../src/validate.js";
import { SCHEMA_VERSION } from "../src/types.js";
import type { Slide, StoryDocument, VisualizationPanel } from "../src/types.js";

function panel(eventIds: string[] = []): VisualizationPanel {
  return {
    kind: "map",
    entity_ids: [],
    event_ids: eventIds,
    coloring: "event_kind",
    clustered: true,
    glyph: "donut",
    settings: {},
  };
}

function slide(overrides: Partial<Slide> = {}): Slide {
  return {
    id: "s1",
    layout: "VIZ_ONLY",
    viz: [],
    panes: [],
    children: [],
    focus_event_ids: [],
    camera: null,
    ...overrides,
  };
}

function doc(slides: Slide[], schemaVersion = SCHEMA_VERSION): StoryDocument {
  return {
    id: "story-1",
    title: "corpus",
    schema_version: schemaVersion,
    collection_ref: null,
    slides,
    version: 1,
  };
}

// the same eight invalid shapes the backend validation corpus uses
const CASES: [string, StoryDocument, string][] = [
  ["E_VIZ_COUNT", doc([slide({ viz: [panel(), panel()] })]), "/slides/0"],
  [
    "E_PANE_COUNT",
    doc([slide({ layout: "VIZ_CENTER_TWO_PANES", panes: [[], [], []] })]),
    "/slides/0",
  ],
  ["E_LAYOUT_SLOT", doc([slide({ layout: "CONTENT_ONLY", viz: [panel()] })]), "/slides/0"],
  [
    "E_DANGLING_EVENT",
    doc([slide({ viz: [panel(["ev1"])], focus_event_ids: ["ev1", "ghost"] })]),
    "/slides/0",
  ],
  [
    "E_NEST_DEPTH",
    doc([
      slide({
        children: [
          slide({ id: "s2", children: [slide({ id: "s3", layout: "CONTENT_ONLY" })] }),
        ],
      }),
    ]),
    "/slides/0/children/0/children/0",
  ],
  [
    "E_QUIZ_NO_CORRECT",
    doc([
      slide({
        layout: "CONTENT_ONLY",
        panes: [[{ kind: "quiz", question: "?", options: ["a", "b"], correct: [], settings: {} }]],
      }),
    ]),
    "/slides/0/panes/0/chunks/0",
  ],
  ["E_SCHEMA_VERSION", doc([], "intavia-story/9"), "/"],
  [
    "E_DUP_SLIDE_ID",
    doc([slide({ id: "dup" }), slide({ id: "dup", layout: "CONTENT_ONLY" })]),
    "/slides/1",
  ],
];

describe("client validation mirror", () => {
  it("accepts a valid document", () => {
    expect(validateStory(doc([slide({ viz: [panel(["e1"])] })]))).toEqual([]);
  });

  it.each(CASES)("flags %s at its path", (code, story, path) => {
    const violations = validateStory(story);
    expect(violations.map((v) => [v.code, v.path])).toEqual([[code, path]]);
  });
});
