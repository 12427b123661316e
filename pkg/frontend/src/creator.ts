/** Story creator view state and gesture handling.
 *
 * Every completed gesture maps to exactly one editing operation on the
 * working document; invalid drops are rejected before any mutation. Saving
 * is compare-and-set against the last server version, and a conflict puts
 * the controller into a reload-prompt state instead of losing work.
 */

import { ApiClient, ApiError } from "./api.js";
import { DEFAULT_FIT_PADDING_PX } from "./config.js";
import { LAYOUTS } from "./layouts.js";
import * as ops from "./storyOps.js";
import type { IdFactory } from "./storyOps.js";
import { isValid, validateStory } from "./validate.js";
import type {
  CameraState,
  Chunk,
  StoryDocument,
  Violation,
  VisualizationPanel,
} from "./types.js";

export type DragPayload =
  | { kind: "entity"; id: string }
  | { kind: "event"; id: string }
  | { kind: "chunk"; chunk: Chunk }
  | { kind: "thumbnail"; slideId: string };

export type DropTarget =
  | { kind: "viz"; slideId: string }
  | { kind: "pane"; slideId: string; paneIndex: number }
  | { kind: "flow-position"; index: number };

export interface CreatorViewState {
  doc: StoryDocument;
  selectedSlideId: string | null;
  drag: { payload: DragPayload; hover: DropTarget | null } | null;
  dirtyOps: number;
  lastSavedVersion: number;
  conflict: boolean;
  violations: Violation[];
  /** Case-insensitive label filter for the data panel (scented search). */
  dataFilter: string;
}

export class CreatorController {
  state: CreatorViewState;
  readonly opLog: string[] = [];
  private readonly newId: IdFactory;
  private universe: ops.ReferenceUniverse = {};

  constructor(
    private readonly api: ApiClient,
    doc: StoryDocument,
    options: { idFactory?: IdFactory } = {},
  ) {
    this.newId = options.idFactory ?? ops.randomIds();
    this.state = {
      doc,
      selectedSlideId: doc.slides[0]?.id ?? null,
      drag: null,
      dirtyOps: 0,
      lastSavedVersion: doc.version,
      conflict: false,
      violations: [],
      dataFilter: "",
    };
  }

  setDataFilter(filter: string): void {
    this.state.dataFilter = filter;
  }

  /** Restrict panel references to the story's collection when it has one. */
  async loadReferenceUniverse(): Promise<void> {
    const ref = this.state.doc.collection_ref;
    if (!ref) return;
    const resolved = await this.api.resolveCollection(ref);
    this.universe = {
      eventIds: new Set(resolved.events.map((e) => e.id)),
      entityIds: new Set(resolved.entities.map((e) => e.id)),
    };
  }

  /** Save is offered only while the working document passes the mirror rules. */
  get saveable(): boolean {
    return this.state.dirtyOps > 0 && isValid(this.state.doc);
  }

  private applied(name: string): void {
    this.opLog.push(name);
    this.state.dirtyOps += 1;
    this.state.violations = validateStory(this.state.doc);
  }

  // --- direct editing actions (buttons, menus) ------------------------

  addSlide(layout: string, index = this.state.doc.slides.length) {
    const slide = ops.addSlide(this.state.doc, layout, index, this.newId);
    this.state.selectedSlideId = slide.id;
    this.applied("add_slide");
    return slide;
  }

  addNestedSlide(parentId: string, layout: string) {
    const child = ops.addNestedSlide(this.state.doc, parentId, layout, this.newId);
    this.applied("add_nested_slide");
    return child;
  }

  duplicateSlide(slideId: string) {
    const clone = ops.duplicateSlide(this.state.doc, slideId, this.newId);
    this.applied("duplicate_slide");
    return clone;
  }

  deleteSlide(slideId: string) {
    ops.deleteSlide(this.state.doc, slideId);
    if (this.state.selectedSlideId === slideId) this.state.selectedSlideId = null;
    this.applied("delete_slide");
  }

  setLayout(slideId: string, layout: string) {
    ops.setLayout(this.state.doc, slideId, layout);
    this.applied("set_layout");
  }

  addQuiz(slideId: string, paneIndex: number, chunk: Chunk) {
    ops.addContentChunk(this.state.doc, slideId, paneIndex, chunk);
    this.applied("add_content_chunk");
  }

  async setFocusEvents(slideId: string, eventIds: string[]) {
    let camera: CameraState | null = null;
    if (eventIds.length > 0) {
      // camera fitted at the authoring default viewport, mirrored server-side
      camera = await this.api.fitCamera({
        event_ids: [...eventIds].sort(),
        padding: DEFAULT_FIT_PADDING_PX,
      });
    }
    ops.setFocusEvents(this.state.doc, slideId, eventIds, camera);
    this.applied("set_focus_events");
    return camera;
  }

  // --- drag and drop -----------------------------------------------------

  beginDrag(payload: DragPayload): void {
    this.state.drag = { payload, hover: null };
  }

  hover(target: DropTarget | null): void {
    if (this.state.drag) this.state.drag.hover = target;
  }

  /** A drop is accepted only when it can complete as one valid operation. */
  canDrop(payload: DragPayload, target: DropTarget): boolean {
    try {
      const slide =
        target.kind === "flow-position"
          ? null
          : ops.findSlide(this.state.doc, target.slideId).slide;
      switch (payload.kind) {
        case "entity":
        case "event":
          return (
            target.kind === "viz" &&
            slide !== null &&
            LAYOUTS[slide.layout].viz_slots > 0 &&
            this.inUniverse(payload)
          );
        case "chunk":
          return (
            target.kind === "pane" &&
            slide !== null &&
            target.paneIndex < LAYOUTS[slide.layout].pane_slots
          );
        case "thumbnail":
          return (
            target.kind === "flow-position" &&
            target.index >= 0 &&
            target.index < this.state.doc.slides.length
          );
      }
    } catch {
      return false;
    }
  }

  private inUniverse(payload: { kind: "entity" | "event"; id: string }): boolean {
    if (payload.kind === "event") {
      return this.universe.eventIds ? this.universe.eventIds.has(payload.id) : true;
    }
    return this.universe.entityIds ? this.universe.entityIds.has(payload.id) : true;
  }

  /**
   * Complete the active drag. Returns the name of the single operation
   * issued, or null when the drop was rejected (no mutation, no API call).
   */
  completeDrag(target: DropTarget): string | null {
    const drag = this.state.drag;
    this.state.drag = null;
    if (!drag || !this.canDrop(drag.payload, target)) return null;
    const payload = drag.payload;

    if (payload.kind === "thumbnail" && target.kind === "flow-position") {
      ops.moveSlide(this.state.doc, payload.slideId, target.index);
      this.applied("move_slide");
      return "move_slide";
    }
    if (payload.kind === "chunk" && target.kind === "pane") {
      ops.addContentChunk(this.state.doc, target.slideId, target.paneIndex, payload.chunk);
      this.applied("add_content_chunk");
      return "add_content_chunk";
    }
    if ((payload.kind === "entity" || payload.kind === "event") && target.kind === "viz") {
      const { slide } = ops.findSlide(this.state.doc, target.slideId);
      const existing = slide.viz[0];
      const panel: VisualizationPanel = existing
        ? structuredClone(existing)
        : {
            kind: "map",
            entity_ids: [],
            event_ids: [],
            coloring: "event_kind",
            clustered: true,
            glyph: "donut",
            settings: {},
          };
      if (payload.kind === "entity") {
        panel.entity_ids = [...new Set([...panel.entity_ids, payload.id])].sort();
      } else {
        panel.event_ids = [...new Set([...panel.event_ids, payload.id])].sort();
      }
      ops.attachVisualization(this.state.doc, target.slideId, panel, this.universe);
      this.applied("attach_visualization");
      return "attach_visualization";
    }
    return null;
  }

  // --- persistence --------------------------------------------------------

  async save(): Promise<number> {
    try {
      const version = await this.api.saveStory(this.state.doc, this.state.lastSavedVersion);
      this.state.doc.version = version;
      this.state.lastSavedVersion = version;
      this.state.dirtyOps = 0;
      this.state.conflict = false;
      return version;
    } catch (error) {
      if (error instanceof ApiError && error.code === "VersionConflict") {
        this.state.conflict = true; // surface a reload prompt
      }
      throw error;
    }
  }

  async reloadFromServer(): Promise<void> {
    const { doc, version } = await this.api.getStory(this.state.doc.id);
    this.state.doc = doc;
    this.state.lastSavedVersion = version;
    this.state.dirtyOps = 0;
    this.state.conflict = false;
    this.state.violations = [];
  }
}
