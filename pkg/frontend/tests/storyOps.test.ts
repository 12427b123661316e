import { describe, expect, it } from "vitest";

import * as ops from "../src/storyOps.js";
import { validateStory } from "../src/validate.js";
import { SCHEMA_VERSION } from "../src/types.js";
import type { StoryDocument, VisualizationPanel } from "../src/types.js";

function freshStory(): StoryDocument {
  return {
    id: "story-test",
    title: "t",
    schema_version: SCHEMA_VERSION,
    collection_ref: null,
    slides: [],
    version: 1,
  };
}

function mapPanel(eventIds: string[]): VisualizationPanel {
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

describe("slide operations", () => {
  it("adds slides at an index and rejects bad input", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const first = ops.addSlide(doc, "VIZ_ONLY", 0, ids);
    ops.addSlide(doc, "CONTENT_ONLY", 1, ids);
    expect(doc.slides.map((s) => s.id)[0]).toBe(first.id);
    expect(() => ops.addSlide(doc, "VIZ_ONLY", 5, ids)).toThrowError(/index/);
    expect(() => ops.addSlide(doc, "FANCY", 0, ids)).toThrowError(/unknown layout/);
    expect(validateStory(doc)).toEqual([]);
  });

  it("duplicates with fresh ids and equal content", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const original = ops.addSlide(doc, "SPLIT_VIZ_LEFT", 0, ids);
    ops.addContentChunk(doc, original.id, 0, { kind: "text", markup: "x", settings: {} });
    ops.addNestedSlide(doc, original.id, "CONTENT_ONLY", ids);
    const clone = ops.duplicateSlide(doc, original.id, ids);
    expect(doc.slides[1]).toBe(clone);
    expect(clone.id).not.toBe(original.id);
    expect(clone.children[0]!.id).not.toBe(original.children[0]!.id);
    expect(clone.panes).toEqual(original.panes);
    expect(validateStory(doc)).toEqual([]);
  });

  it("moves slides stably and bounds the index", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const a = ops.addSlide(doc, "VIZ_ONLY", 0, ids);
    const b = ops.addSlide(doc, "VIZ_ONLY", 1, ids);
    const c = ops.addSlide(doc, "VIZ_ONLY", 2, ids);
    ops.moveSlide(doc, c.id, 0);
    expect(doc.slides.map((s) => s.id)).toEqual([c.id, a.id, b.id]);
    expect(() => ops.moveSlide(doc, a.id, 9)).toThrowError(/index/);
  });

  it("caps nesting at one drill-down level", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const top = ops.addSlide(doc, "VIZ_ONLY", 0, ids);
    const child = ops.addNestedSlide(doc, top.id, "CONTENT_ONLY", ids);
    expect(() => ops.addNestedSlide(doc, child.id, "CONTENT_ONLY", ids)).toThrowError(
      /nested/,
    );
  });

  it("rejects layout changes that would orphan content", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const slide = ops.addSlide(doc, "VIZ_CENTER_TWO_PANES", 0, ids);
    ops.addContentChunk(doc, slide.id, 0, { kind: "text", markup: "a", settings: {} });
    ops.addContentChunk(doc, slide.id, 1, { kind: "text", markup: "b", settings: {} });
    expect(() => ops.setLayout(doc, slide.id, "VIZ_ONLY")).toThrowError(/cannot hold/);
    expect(slide.layout).toBe("VIZ_CENTER_TWO_PANES");
    ops.setLayout(doc, slide.id, "VIZ_CENTER_TWO_PANES");
  });

  it("enforces quiz invariants on insert", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const slide = ops.addSlide(doc, "CONTENT_ONLY", 0, ids);
    expect(() =>
      ops.addContentChunk(doc, slide.id, 0, {
        kind: "quiz",
        question: "?",
        options: ["a", "b"],
        correct: [],
        settings: {},
      }),
    ).toThrowError(/no correct/);
    expect(doc.slides[0]!.panes).toEqual([]);
  });

  it("attach replaces the panel and prunes stale focus", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const slide = ops.addSlide(doc, "VIZ_ONLY", 0, ids);
    ops.attachVisualization(doc, slide.id, mapPanel(["e1", "e2"]));
    ops.setFocusEvents(doc, slide.id, ["e1"], { center: { lon: 0, lat: 0 }, zoom: 5 });
    ops.attachVisualization(doc, slide.id, mapPanel(["e2"]));
    expect(slide.focus_event_ids).toEqual([]);
    expect(slide.camera).toBeNull();
    expect(validateStory(doc)).toEqual([]);
  });

  it("attach checks the reference universe", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const slide = ops.addSlide(doc, "VIZ_ONLY", 0, ids);
    expect(() =>
      ops.attachVisualization(doc, slide.id, mapPanel(["ghost"]), {
        eventIds: new Set(["e1"]),
      }),
    ).toThrowError(/ghost/);
    expect(slide.viz).toEqual([]);
  });

  it("focus requires a map panel and panel membership", () => {
    const doc = freshStory();
    const ids = ops.seededIds();
    const slide = ops.addSlide(doc, "VIZ_ONLY", 0, ids);
    expect(() =>
      ops.setFocusEvents(doc, slide.id, ["e1"], { center: { lon: 0, lat: 0 }, zoom: 1 }),
    ).toThrowError(/no map/);
    ops.attachVisualization(doc, slide.id, mapPanel(["e1"]));
    expect(() =>
      ops.setFocusEvents(doc, slide.id, ["zzz"], { center: { lon: 0, lat: 0 }, zoom: 1 }),
    ).toThrowError(/zzz/);
    const camera = { center: { lon: 4.4, lat: 51.2 }, zoom: 16 };
    ops.setFocusEvents(doc, slide.id, ["e1"], camera);
    expect(slide.camera).toEqual(camera);
    ops.setFocusEvents(doc, slide.id, [], null);
    expect(slide.focus_event_ids).toEqual([]);
    expect(slide.camera).toBeNull();
  });

  it("seeded id factories are deterministic", () => {
    const a = ops.seededIds(5);
    const b = ops.seededIds(5);
    expect([a("slide"), a("slide")]).toEqual([b("slide"), b("slide")]);
  });
});
