import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { CreatorController } from "../src/creator.js";
import { seededIds } from "../src/storyOps.js";
import { validateStory } from "../src/validate.js";
import { SCHEMA_VERSION } from "../src/types.js";
import type { StoryDocument } from "../src/types.js";

function freshStory(): StoryDocument {
  return {
    id: "story-x",
    title: "draft",
    schema_version: SCHEMA_VERSION,
    collection_ref: null,
    slides: [],
    version: 1,
  };
}

function trackingApi(): { api: ApiClient; calls: string[] } {
  const calls: string[] = [];
  const api = new ApiClient("http://test", async (input, init) => {
    calls.push(`${init?.method ?? "GET"} ${input}`);
    return new Response(JSON.stringify({ center: { lon: 0, lat: 0 }, zoom: 16 }), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  });
  return { api, calls };
}

describe("gesture handling", () => {
  it("one completed gesture issues exactly one operation", () => {
    const { api } = trackingApi();
    const creator = new CreatorController(api, freshStory(), { idFactory: seededIds() });
    const a = creator.addSlide("VIZ_ONLY");
    creator.addSlide("CONTENT_ONLY");
    const before = creator.opLog.length;

    creator.beginDrag({ kind: "thumbnail", slideId: a.id });
    const op = creator.completeDrag({ kind: "flow-position", index: 1 });
    expect(op).toBe("move_slide");
    expect(creator.opLog.length).toBe(before + 1);
    expect(creator.state.doc.slides[1]!.id).toBe(a.id);
  });

  it("dropping an event onto a viz slot attaches or extends the panel", () => {
    const { api } = trackingApi();
    const creator = new CreatorController(api, freshStory(), { idFactory: seededIds() });
    const slide = creator.addSlide("VIZ_ONLY");

    creator.beginDrag({ kind: "event", id: "ev08" });
    expect(creator.completeDrag({ kind: "viz", slideId: slide.id })).toBe(
      "attach_visualization",
    );
    expect(slide.viz[0]?.event_ids).toEqual(["ev08"]);

    creator.beginDrag({ kind: "event", id: "ev01" });
    creator.completeDrag({ kind: "viz", slideId: slide.id });
    expect(slide.viz).toHaveLength(1);
    expect(slide.viz[0]?.event_ids).toEqual(["ev01", "ev08"]);
    expect(validateStory(creator.state.doc)).toEqual([]);
  });

  it("invalid drop targets are rejected with no mutation and no API call", async () => {
    const { api, calls } = trackingApi();
    const creator = new CreatorController(api, freshStory(), { idFactory: seededIds() });
    const slide = creator.addSlide("CONTENT_ONLY"); // no viz slot
    const snapshot = JSON.stringify(creator.state.doc);
    const opsBefore = creator.opLog.length;

    creator.beginDrag({ kind: "event", id: "ev08" });
    expect(creator.canDrop({ kind: "event", id: "ev08" }, { kind: "viz", slideId: slide.id }))
      .toBe(false);
    expect(creator.completeDrag({ kind: "viz", slideId: slide.id })).toBeNull();

    creator.beginDrag({ kind: "chunk", chunk: { kind: "text", markup: "x", settings: {} } });
    expect(
      creator.completeDrag({ kind: "pane", slideId: slide.id, paneIndex: 5 }),
    ).toBeNull();

    expect(JSON.stringify(creator.state.doc)).toBe(snapshot);
    expect(creator.opLog.length).toBe(opsBefore);
    expect(calls).toEqual([]);
  });

  it("save is offered only for valid dirty documents", () => {
    const { api } = trackingApi();
    const creator = new CreatorController(api, freshStory(), { idFactory: seededIds() });
    expect(creator.saveable).toBe(false); // clean
    creator.addSlide("VIZ_ONLY");
    expect(creator.saveable).toBe(true);
  });

  it("version conflicts flip the controller into reload state", async () => {
    const conflictApi = new ApiClient("http://test", async (input, init) => {
      if (init?.method === "PUT") {
        return new Response(
          JSON.stringify({ status: 409, code: "VersionConflict", message: "stale" }),
          { status: 409, headers: { "Content-Type": "application/json" } },
        );
      }
      return new Response("{}", { status: 200 });
    });
    const creator = new CreatorController(conflictApi, freshStory(), {
      idFactory: seededIds(),
    });
    creator.addSlide("VIZ_ONLY");
    await expect(creator.save()).rejects.toMatchObject({ code: "VersionConflict" });
    expect(creator.state.conflict).toBe(true);
  });

  it("UI-reachable mutations equal the editing operation set", () => {
    const { api } = trackingApi();
    const creator = new CreatorController(api, freshStory(), { idFactory: seededIds() });
    const slide = creator.addSlide("SPLIT_VIZ_LEFT");
    creator.addNestedSlide(slide.id, "CONTENT_ONLY");
    creator.duplicateSlide(slide.id);
    creator.setLayout(slide.id, "SPLIT_VIZ_RIGHT");
    creator.addQuiz(slide.id, 0, {
      kind: "quiz",
      question: "?",
      options: ["a", "b"],
      correct: [1],
      settings: {},
    });
    creator.beginDrag({ kind: "event", id: "ev08" });
    creator.completeDrag({ kind: "viz", slideId: slide.id });
    creator.beginDrag({ kind: "thumbnail", slideId: slide.id });
    creator.completeDrag({ kind: "flow-position", index: 0 });
    creator.deleteSlide(creator.state.doc.slides[1]!.id);

    const reachable = new Set(creator.opLog);
    expect(reachable).toEqual(
      new Set([
        "add_slide",
        "add_nested_slide",
        "duplicate_slide",
        "set_layout",
        "add_content_chunk",
        "attach_visualization",
        "move_slide",
        "delete_slide",
      ]),
    );
    expect(validateStory(creator.state.doc)).toEqual([]);
  });
});
