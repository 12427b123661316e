/** Client-side story editing operations.
 *
 * Mirrors the backend editor semantics on the wire-format document: every
 * operation either succeeds (leaving a valid document) or throws without
 * mutating anything. The server re-validates on save and owns the version
 * counter, so these ops do not touch `version`.
 */

import { LAYOUTS } from "./layouts.js";
import type {
  CameraState,
  Chunk,
  LayoutId,
  Slide,
  StoryDocument,
  VisualizationPanel,
} from "./types.js";

export class OpError extends Error {
  constructor(
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "OpError";
  }
}

export type IdFactory = (prefix: string) => string;

/** Deterministic id factory for scripted sessions and tests. */
export function seededIds(seed = 0): IdFactory {
  let counter = seed;
  return (prefix) => `${prefix}-${(counter++).toString(36).padStart(8, "0")}`;
}

export function randomIds(): IdFactory {
  return (prefix) =>
    `${prefix}-${Math.random().toString(16).slice(2, 10)}${Math.random()
      .toString(16)
      .slice(2, 6)}`;
}

interface Located {
  slide: Slide;
  siblings: Slide[];
  parent: Slide | null;
}

export function* walkSlides(
  doc: StoryDocument,
): Generator<{ slide: Slide; parent: Slide | null; depth: number }> {
  function* visit(
    slides: Slide[],
    parent: Slide | null,
    depth: number,
  ): Generator<{ slide: Slide; parent: Slide | null; depth: number }> {
    for (const slide of slides) {
      yield { slide, parent, depth };
      yield* visit(slide.children, slide, depth + 1);
    }
  }
  yield* visit(doc.slides, null, 0);
}

export function findSlide(doc: StoryDocument, slideId: string): Located {
  for (const { slide, parent } of walkSlides(doc)) {
    if (slide.id === slideId) {
      return { slide, parent, siblings: parent ? parent.children : doc.slides };
    }
  }
  throw new OpError("NotFound", `slide ${slideId} not found`);
}

function emptySlide(layout: LayoutId, id: string): Slide {
  return {
    id,
    layout,
    viz: [],
    panes: [],
    children: [],
    focus_event_ids: [],
    camera: null,
  };
}

function requireLayout(layout: string): LayoutId {
  if (!(layout in LAYOUTS)) {
    throw new OpError("UnknownLayout", `unknown layout ${layout}`);
  }
  return layout as LayoutId;
}

export function addSlide(
  doc: StoryDocument,
  layout: string,
  index: number,
  newId: IdFactory,
): Slide {
  const layoutId = requireLayout(layout);
  if (index < 0 || index > doc.slides.length) {
    throw new OpError("BadIndex", `index ${index} outside [0, ${doc.slides.length}]`);
  }
  const slide = emptySlide(layoutId, newId("slide"));
  doc.slides.splice(index, 0, slide);
  return slide;
}

export function addNestedSlide(
  doc: StoryDocument,
  parentId: string,
  layout: string,
  newId: IdFactory,
): Slide {
  const layoutId = requireLayout(layout);
  const { slide: parent, parent: grandparent } = findSlide(doc, parentId);
  if (grandparent !== null) {
    throw new OpError("E_NEST_DEPTH", `slide ${parentId} is itself nested`);
  }
  const child = emptySlide(layoutId, newId("slide"));
  parent.children.push(child);
  return child;
}

export function duplicateSlide(doc: StoryDocument, slideId: string, newId: IdFactory): Slide {
  const { slide, siblings } = findSlide(doc, slideId);
  const clone: Slide = structuredClone(slide);
  clone.id = newId("slide");
  for (const child of clone.children) child.id = newId("slide");
  siblings.splice(siblings.indexOf(slide) + 1, 0, clone);
  return clone;
}

export function deleteSlide(doc: StoryDocument, slideId: string): void {
  const { slide, siblings } = findSlide(doc, slideId);
  siblings.splice(siblings.indexOf(slide), 1);
}

export function moveSlide(doc: StoryDocument, slideId: string, newIndex: number): void {
  const { slide, siblings } = findSlide(doc, slideId);
  if (newIndex < 0 || newIndex >= siblings.length) {
    throw new OpError("BadIndex", `index ${newIndex} outside [0, ${siblings.length - 1}]`);
  }
  siblings.splice(siblings.indexOf(slide), 1);
  siblings.splice(newIndex, 0, slide);
}

export function setLayout(doc: StoryDocument, slideId: string, layout: string): void {
  const layoutId = requireLayout(layout);
  const { slide } = findSlide(doc, slideId);
  const template = LAYOUTS[layoutId];
  const overflow: string[] = [];
  if (slide.viz.length > template.viz_slots) overflow.push(`${slide.viz.length} visualization(s)`);
  if (slide.panes.length > template.pane_slots) overflow.push(`${slide.panes.length} pane(s)`);
  if (overflow.length > 0) {
    throw new OpError(
      "E_LAYOUT_SLOT",
      `layout ${layoutId} cannot hold existing content: ${overflow.join(", ")}`,
    );
  }
  slide.layout = layoutId;
}

export function addContentChunk(
  doc: StoryDocument,
  slideId: string,
  paneIndex: number,
  chunk: Chunk,
): void {
  const { slide } = findSlide(doc, slideId);
  const template = LAYOUTS[slide.layout];
  if (paneIndex < 0 || paneIndex >= template.pane_slots) {
    throw new OpError(
      "BadIndex",
      `pane index ${paneIndex} invalid for layout ${slide.layout}`,
    );
  }
  if (chunk.kind === "quiz") {
    if (chunk.correct.length === 0) {
      throw new OpError("E_QUIZ_NO_CORRECT", "quiz has no correct option");
    }
    if (chunk.options.length < 2) {
      throw new OpError("InvariantViolation", "quiz needs at least two options");
    }
    if (!chunk.correct.every((i) => i >= 0 && i < chunk.options.length)) {
      throw new OpError("InvariantViolation", "quiz correct indices out of range");
    }
  }
  if (chunk.kind === "html_container" && chunk.sandbox !== true) {
    throw new OpError("InvariantViolation", "html chunks are always sandboxed");
  }
  while (slide.panes.length <= paneIndex) slide.panes.push([]);
  slide.panes[paneIndex]!.push(chunk);
}

export interface ReferenceUniverse {
  eventIds?: Set<string>;
  entityIds?: Set<string>;
}

export function attachVisualization(
  doc: StoryDocument,
  slideId: string,
  panel: VisualizationPanel,
  universe: ReferenceUniverse = {},
): void {
  const { slide } = findSlide(doc, slideId);
  const template = LAYOUTS[slide.layout];
  if (template.viz_slots < 1) {
    throw new OpError("E_LAYOUT_SLOT", `layout ${slide.layout} has no visualization slot`);
  }
  if (universe.eventIds) {
    const dangling = panel.event_ids.filter((id) => !universe.eventIds!.has(id)).sort();
    if (dangling.length > 0) {
      throw new OpError(
        "E_DANGLING_EVENT",
        `panel events ${dangling.join(", ")} are not in the story's collection`,
      );
    }
  }
  if (universe.entityIds) {
    const dangling = panel.entity_ids.filter((id) => !universe.entityIds!.has(id)).sort();
    if (dangling.length > 0) {
      throw new OpError(
        "E_DANGLING_EVENT",
        `panel entities ${dangling.join(", ")} are not in the story's collection`,
      );
    }
  }
  const panelEvents = new Set(panel.event_ids);
  const keptFocus = slide.focus_event_ids.filter((id) => panelEvents.has(id));
  const focusChanged = keptFocus.length !== slide.focus_event_ids.length;
  slide.viz = [panel];
  slide.focus_event_ids = keptFocus.sort();
  if (focusChanged || panel.kind !== "map" || keptFocus.length === 0) {
    // camera is recomputed by the next focus op; a stale one would lie
    slide.camera = null;
    if (panel.kind !== "map") slide.focus_event_ids = [];
  }
}

/** Store a focus selection with its camera (fetched via the fit endpoint). */
export function setFocusEvents(
  doc: StoryDocument,
  slideId: string,
  eventIds: string[],
  camera: CameraState | null,
): void {
  const { slide } = findSlide(doc, slideId);
  const panel = slide.viz[0];
  if (!panel || panel.kind !== "map") {
    throw new OpError("NoVisualization", `slide ${slideId} has no map visualization`);
  }
  const allowed = new Set(panel.event_ids);
  const dangling = eventIds.filter((id) => !allowed.has(id)).sort();
  if (dangling.length > 0) {
    throw new OpError(
      "E_DANGLING_EVENT",
      `focus events ${dangling.join(", ")} are not in the slide's visualization`,
    );
  }
  if (eventIds.length === 0) {
    slide.focus_event_ids = [];
    slide.camera = null;
    return;
  }
  if (camera === null) {
    throw new OpError("NoCoordinates", "a non-empty focus needs a fitted camera");
  }
  slide.focus_event_ids = [...new Set(eventIds)].sort();
  slide.camera = camera;
}
