/** Browser entry point: route to the overview, creator or viewer. */

import { ApiClient } from "./api.js";
import { CreatorController } from "./creator.js";
import { renderCreator, renderViewer, StoryData } from "./render.js";
import { creatorPath, parseRoute, viewerPath } from "./routes.js";
import { injectStyles } from "./styles.js";
import { ViewerController } from "./viewer.js";
import type { EntityRecord, EventRecord, StoryDocument } from "./types.js";

const API_BASE = (window as { STORYATLAS_API?: string }).STORYATLAS_API ?? "";

async function loadStoryData(api: ApiClient, story: StoryDocument): Promise<StoryData> {
  const entities = new Map<string, EntityRecord>();
  const events = new Map<string, EventRecord>();
  if (story.collection_ref) {
    const resolved = await api.resolveCollection(story.collection_ref);
    for (const entity of resolved.entities) entities.set(entity.id, entity);
    for (const event of resolved.events) events.set(event.id, event);
    for (const event of resolved.events) {
      if (event.place && !entities.has(event.place)) {
        entities.set(event.place, await api.getEntity(event.place));
      }
    }
  }
  return { entities, events };
}

async function showOverview(api: ApiClient, root: HTMLElement): Promise<void> {
  const stories = await api.listStories();
  root.replaceChildren();
  const list = document.createElement("ul");
  for (const summary of stories) {
    const item = document.createElement("li");
    const view = document.createElement("a");
    view.href = `#${viewerPath(summary.story_id, 0, null)}`;
    view.textContent = summary.title || summary.story_id;
    const edit = document.createElement("a");
    edit.href = `#${creatorPath(summary.story_id)}`;
    edit.textContent = " (edit)";
    item.appendChild(view);
    item.appendChild(edit);
    list.appendChild(item);
  }
  root.appendChild(list);
}

async function showViewer(
  api: ApiClient,
  root: HTMLElement,
  storyId: string,
  top: number,
  child: number | null,
): Promise<void> {
  const { doc } = await api.getStory(storyId);
  const data = await loadStoryData(api, doc);
  const controller = new ViewerController(api, doc, {
    width: window.innerWidth,
    height: window.innerHeight,
  });
  await controller.goTo(top, child);
  const rerender = () => renderViewer(root, controller, data);

  window.addEventListener("resize", () => {
    controller.resize(window.innerWidth, window.innerHeight);
    rerender();
  });
  window.addEventListener("keydown", (event) => {
    void controller.handleKey(event.key).then(() => {
      const cursor = controller.state.cursor;
      history.replaceState(null, "", `#${viewerPath(storyId, cursor.top, cursor.child)}`);
      rerender();
    });
  });
  const animate = () => {
    if (controller.state.animation) {
      controller.tick();
      rerender();
    }
    requestAnimationFrame(animate);
  };
  requestAnimationFrame(animate);
  rerender();
}

async function showCreator(api: ApiClient, root: HTMLElement, storyId: string): Promise<void> {
  const { doc } = await api.getStory(storyId);
  const controller = new CreatorController(api, doc);
  await controller.loadReferenceUniverse();
  const data = await loadStoryData(api, doc);
  renderCreator(root, controller, data);
}

async function route(): Promise<void> {
  const api = new ApiClient(API_BASE);
  const root = document.getElementById("app");
  if (!root) return;
  injectStyles(document);
  const parsed = parseRoute(window.location.hash || "/");
  if (parsed.kind === "viewer") {
    await showViewer(api, root, parsed.storyId, parsed.top, parsed.child);
  } else if (parsed.kind === "creator") {
    await showCreator(api, root, parsed.storyId);
  } else {
    await showOverview(api, root);
  }
}

window.addEventListener("hashchange", () => void route());
void route();
