/** DOM rendering for the creator and viewer.
 *
 * Renders are full re-renders from controller state; controllers stay
 * DOM-free so the behavior is testable without a browser. The map region
 * draws abstract dot/donut glyphs positioned by local mercator math; no
 * tiles are fetched.
 */

import { answerQuiz } from "./quiz.js";
import { project } from "./mercator.js";
import { LAYOUTS } from "./layouts.js";
import { matchesFilter, scentBins } from "./scent.js";
import type { CreatorController, DropTarget } from "./creator.js";
import type { ViewerController } from "./viewer.js";
import type {
  CameraState,
  Chunk,
  EntityRecord,
  EventRecord,
  QuizChunk,
  Slide,
} from "./types.js";

export interface StoryData {
  entities: Map<string, EntityRecord>;
  events: Map<string, EventRecord>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

// --- content chunks ---------------------------------------------------

export function renderChunk(doc: Document, chunk: Chunk): HTMLElement {
  switch (chunk.kind) {
    case "text": {
      const node = el(doc, "div", "chunk chunk-text");
      node.textContent = chunk.markup;
      return node;
    }
    case "image": {
      const wrapper = el(doc, "figure", "chunk chunk-image");
      const img = el(doc, "img");
      img.src = chunk.media.url;
      img.alt = chunk.media.alt_text ?? "";
      img.onerror = () => {
        const fallback = el(doc, "div", "media-fallback", chunk.media.alt_text ?? "media unavailable");
        wrapper.replaceChildren(fallback);
      };
      wrapper.appendChild(img);
      if (chunk.media.caption) {
        wrapper.appendChild(el(doc, "figcaption", undefined, chunk.media.caption));
      }
      return wrapper;
    }
    case "video": {
      const wrapper = el(doc, "figure", "chunk chunk-video");
      const video = el(doc, "video");
      video.src = chunk.media.url;
      video.controls = true;
      video.onerror = () => {
        const fallback = el(doc, "div", "media-fallback", chunk.media.alt_text ?? "media unavailable");
        wrapper.replaceChildren(fallback);
      };
      wrapper.appendChild(video);
      if (chunk.media.caption) {
        wrapper.appendChild(el(doc, "figcaption", undefined, chunk.media.caption));
      }
      return wrapper;
    }
    case "quiz":
      return renderQuiz(doc, chunk);
    case "html_container": {
      const frame = el(doc, "iframe", "html-frame");
      // empty sandbox: no scripts, no same-origin access
      frame.setAttribute("sandbox", "");
      frame.srcdoc = chunk.markup;
      return frame;
    }
  }
}

function renderQuiz(doc: Document, chunk: QuizChunk): HTMLElement {
  const container = el(doc, "div", "chunk quiz");
  container.appendChild(el(doc, "p", "question", chunk.question));
  const selected = new Set<number>(); // resets whenever the slide re-renders
  const optionNodes: HTMLElement[] = [];
  chunk.options.forEach((option, index) => {
    const label = el(doc, "label", "option");
    label.dataset.feedback = "neutral";
    const box = el(doc, "input");
    box.type = "checkbox";
    box.onchange = () => {
      if (box.checked) selected.add(index);
      else selected.delete(index);
    };
    label.appendChild(box);
    label.appendChild(doc.createTextNode(option));
    optionNodes.push(label);
    container.appendChild(label);
  });
  const check = el(doc, "button", "check", "Check answer");
  const verdict = el(doc, "p", "verdict", "");
  check.onclick = () => {
    const feedback = answerQuiz(chunk, selected);
    feedback.perOption.forEach((state, index) => {
      optionNodes[index]!.dataset.feedback = state;
    });
    verdict.textContent = feedback.correct ? "Correct!" : "Not quite, try again.";
    verdict.dataset.correct = String(feedback.correct);
  };
  container.appendChild(check);
  container.appendChild(verdict);
  return container;
}

// --- map region -------------------------------------------------------

export function renderMapDots(
  doc: Document,
  region: HTMLElement,
  slide: Slide,
  data: StoryData,
  camera: CameraState,
  viewport: { width: number; height: number },
): void {
  const panel = slide.viz[0];
  if (!panel) return;
  const center = project(camera.center.lon, camera.center.lat, camera.zoom);
  const focus = new Set(slide.focus_event_ids);
  for (const eventId of panel.event_ids) {
    const event = data.events.get(eventId);
    const place = event?.place ? data.entities.get(event.place) : undefined;
    if (!place?.coordinates) continue;
    const world = project(place.coordinates.lon, place.coordinates.lat, camera.zoom);
    const dot = el(doc, "div", "map-dot");
    dot.dataset.eventId = eventId;
    dot.dataset.focused = String(focus.has(eventId));
    const size = focus.has(eventId) ? 14 : 9;
    dot.style.width = `${size}px`;
    dot.style.height = `${size}px`;
    dot.style.background = focus.has(eventId) ? "#9a6a3f" : "#46608a";
    dot.style.left = `${viewport.width / 2 + (world.x - center.x)}px`;
    dot.style.top = `${viewport.height / 2 + (world.y - center.y)}px`;
    dot.title = event?.label ?? eventId;
    region.appendChild(dot);
  }
}

// --- viewer ----------------------------------------------------------

export function renderViewer(
  root: HTMLElement,
  controller: ViewerController,
  data: StoryData,
): void {
  const doc = root.ownerDocument;
  const state = controller.state;
  const slide = controller.currentSlide();
  root.replaceChildren();

  const container = el(doc, "div", "viewer");
  container.dataset.mode = state.layoutMode;
  root.appendChild(container);

  const vizRegion = el(doc, "section", "viz-region");
  const contentRegion = el(doc, "section", "content-region");
  contentRegion.dataset.expanded = String(state.panelExpanded);
  container.appendChild(vizRegion);
  container.appendChild(contentRegion);

  if (slide) {
    const camera = state.camera ?? slide.camera;
    if (slide.viz[0]?.kind === "map" && camera) {
      renderMapDots(doc, vizRegion, slide, data, camera, state.viewport);
    }
    for (const pane of slide.panes) {
      const paneNode = el(doc, "div", "pane");
      for (const chunk of pane) paneNode.appendChild(renderChunk(doc, chunk));
      contentRegion.appendChild(paneNode);
    }
  }

  const transport = el(doc, "nav", "transport");
  const prev = el(doc, "button", "prev", "‹ Previous");
  prev.onclick = () => void controller.previous().then(() => renderViewer(root, controller, data));
  const next = el(doc, "button", "next", "Next ›");
  next.onclick = () => void controller.next().then(() => renderViewer(root, controller, data));
  transport.appendChild(prev);
  transport.appendChild(next);
  if (slide && state.cursor.child === null && slide.children.length > 0) {
    const drill = el(doc, "button", "drill", "Explore details ↓");
    drill.onclick = () =>
      void controller.enterChildren().then(() => renderViewer(root, controller, data));
    transport.appendChild(drill);
  }
  vizRegion.appendChild(transport);

  const toggle = el(doc, "button", "panel-toggle",
    state.panelExpanded ? "Collapse" : "Expand");
  toggle.onclick = () => {
    controller.togglePanel();
    renderViewer(root, controller, data);
  };
  contentRegion.prepend(toggle);
}

// --- creator -----------------------------------------------------------

export function renderCreator(
  root: HTMLElement,
  controller: CreatorController,
  data: StoryData,
  onChange: () => void = () => {},
): void {
  const doc = root.ownerDocument;
  const state = controller.state;
  root.replaceChildren();

  const container = el(doc, "div", "creator");
  root.appendChild(container);

  const rerender = () => {
    renderCreator(root, controller, data, onChange);
    onChange();
  };

  // 1. data panel: scented search over draggable entities and events
  const dataPanel = el(doc, "aside", "data-panel");
  dataPanel.appendChild(el(doc, "h2", undefined, "Data"));
  const search = el(doc, "input", "data-filter");
  search.type = "search";
  search.placeholder = "Filter by name";
  search.value = state.dataFilter;
  search.oninput = () => {
    controller.setDataFilter(search.value);
    rerender();
  };
  dataPanel.appendChild(search);
  const scents = el(doc, "div", "scent-bars");
  const records = [...data.entities.values(), ...data.events.values()];
  for (const bin of scentBins(records, (r) => r.kind, (r) => r.label, state.dataFilter)) {
    const row = el(doc, "div", "scent");
    row.dataset.bin = bin.label;
    const bar = el(doc, "span", "bar");
    bar.style.display = "inline-block";
    bar.style.height = "0.6em";
    bar.style.background = "#9a6a3f";
    bar.style.width = `${Math.round(bin.fraction * 100)}px`;
    row.appendChild(bar);
    row.appendChild(el(doc, "span", "scent-label", ` ${bin.label} (${bin.count})`));
    scents.appendChild(row);
  }
  dataPanel.appendChild(scents);
  for (const entity of data.entities.values()) {
    if (!matchesFilter(entity.label, state.dataFilter)) continue;
    const item = el(doc, "div", "draggable entity", entity.label);
    item.draggable = true;
    item.ondragstart = () => controller.beginDrag({ kind: "entity", id: entity.id });
    dataPanel.appendChild(item);
  }
  for (const event of data.events.values()) {
    if (!matchesFilter(event.label, state.dataFilter)) continue;
    const item = el(doc, "div", "draggable event", event.label);
    item.draggable = true;
    item.ondragstart = () => controller.beginDrag({ kind: "event", id: event.id });
    dataPanel.appendChild(item);
  }
  container.appendChild(dataPanel);

  // 2. slide editor grid for the selected slide
  const editorRegion = el(doc, "main", "slide-editor");
  if (state.conflict) {
    const banner = el(doc, "div", "conflict-banner",
      "This story changed on the server. Reload to continue editing.");
    const reload = el(doc, "button", undefined, "Reload");
    reload.onclick = () => void controller.reloadFromServer().then(rerender);
    banner.appendChild(reload);
    editorRegion.appendChild(banner);
  }
  const selected = state.doc.slides
    .flatMap((s) => [s, ...s.children])
    .find((s) => s.id === state.selectedSlideId);
  if (selected) {
    const template = LAYOUTS[selected.layout];
    const grid = el(doc, "div", "slide-grid");
    grid.style.gridTemplateAreas = template.grid
      .map((row) => `"${row.join(" ")}"`)
      .join(" ");
    const wireDrop = (area: HTMLElement, target: DropTarget) => {
      area.ondragover = (event) => {
        event.preventDefault();
        controller.hover(target);
        const payload = controller.state.drag?.payload;
        area.classList.toggle("drop-ok", !!payload && controller.canDrop(payload, target));
        area.classList.toggle("drop-no", !!payload && !controller.canDrop(payload, target));
      };
      area.ondrop = () => {
        const op = controller.completeDrag(target);
        if (op) rerender();
        else area.classList.remove("drop-ok", "drop-no");
      };
    };
    for (const row of template.grid) {
      for (const areaName of new Set(row)) {
        const area = el(doc, "div", `area area-${areaName}`);
        area.style.gridArea = areaName;
        if (areaName === "viz") {
          area.dataset.slot = "viz";
          const panel = selected.viz[0];
          area.appendChild(
            el(doc, "p", undefined, panel
              ? `${panel.kind} · ${panel.event_ids.length} events`
              : "Drop entities or events here"),
          );
          wireDrop(area, { kind: "viz", slideId: selected.id });
        } else {
          const paneIndex = Number(areaName.replace("pane", ""));
          area.dataset.slot = `pane${paneIndex}`;
          for (const chunk of selected.panes[paneIndex] ?? []) {
            area.appendChild(renderChunk(doc, chunk));
          }
          wireDrop(area, { kind: "pane", slideId: selected.id, paneIndex });
        }
        grid.appendChild(area);
      }
    }
    editorRegion.appendChild(grid);
  } else {
    editorRegion.appendChild(el(doc, "p", undefined, "Select or add a slide."));
  }
  container.appendChild(editorRegion);

  // 3. story flow panel: thumbnails with reorder/duplicate/delete
  const flow = el(doc, "nav", "story-flow");
  flow.appendChild(el(doc, "h2", undefined, "Story flow"));
  state.doc.slides.forEach((slide, index) => {
    const thumb = el(doc, "div", "thumb");
    if (slide.id === state.selectedSlideId) thumb.classList.add("selected");
    thumb.draggable = true;
    thumb.dataset.slideId = slide.id;
    thumb.appendChild(el(doc, "span", undefined, `${index + 1}. ${slide.layout}`));
    thumb.ondragstart = () => controller.beginDrag({ kind: "thumbnail", slideId: slide.id });
    thumb.ondragover = (event) => {
      event.preventDefault();
      controller.hover({ kind: "flow-position", index });
    };
    thumb.ondrop = () => {
      const op = controller.completeDrag({ kind: "flow-position", index });
      if (op) rerender();
    };
    thumb.onclick = () => {
      controller.state.selectedSlideId = slide.id;
      rerender();
    };
    const controls = el(doc, "div", "controls");
    const duplicate = el(doc, "button", "duplicate", "⧉");
    duplicate.title = "Duplicate slide";
    duplicate.onclick = (event) => {
      event.stopPropagation();
      controller.duplicateSlide(slide.id);
      rerender();
    };
    const remove = el(doc, "button", "delete", "✕");
    remove.title = "Delete slide";
    remove.onclick = (event) => {
      event.stopPropagation();
      controller.deleteSlide(slide.id);
      rerender();
    };
    controls.appendChild(duplicate);
    controls.appendChild(remove);
    thumb.appendChild(controls);
    flow.appendChild(thumb);
  });
  const save = el(doc, "button", "save", "Save");
  save.disabled = !controller.saveable;
  save.onclick = () => void controller.save().then(rerender, rerender);
  flow.appendChild(save);
  container.appendChild(flow);
}
