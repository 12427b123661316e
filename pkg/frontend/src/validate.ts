/** Client-side mirror of the document validation rules.
 *
 * Used for instant feedback during editing; the server stays authoritative
 * and re-validates on save.
 */

import { LAYOUTS } from "./layouts.js";
import { SCHEMA_VERSION } from "./types.js";
import type { QuizChunk, Slide, StoryDocument, Violation } from "./types.js";

const MAX_PANES = 2;
const MAX_DEPTH = 2;

function quizMessage(chunk: QuizChunk): string | null {
  if (chunk.options.length < 2) return "quiz needs at least two options";
  if (chunk.correct.length === 0) return "quiz has no correct option";
  if (!chunk.correct.every((i) => i >= 0 && i < chunk.options.length)) {
    return "quiz correct indices out of range";
  }
  return null;
}

export function validateStory(story: StoryDocument): Violation[] {
  const violations: Violation[] = [];
  if (story.schema_version !== SCHEMA_VERSION) {
    violations.push({
      code: "E_SCHEMA_VERSION",
      path: "/",
      message: `expected schema_version ${SCHEMA_VERSION}, got ${story.schema_version}`,
    });
  }

  const seen = new Set<string>();

  const visit = (slide: Slide, path: string, depth: number) => {
    const local: Violation[] = [];
    if (seen.has(slide.id)) {
      local.push({ code: "E_DUP_SLIDE_ID", path, message: `duplicate slide id ${slide.id}` });
    }
    seen.add(slide.id);

    if (depth >= MAX_DEPTH) {
      local.push({
        code: "E_NEST_DEPTH",
        path,
        message: `slide nested at depth ${depth + 1}, maximum is ${MAX_DEPTH}`,
      });
    }

    const layout = LAYOUTS[slide.layout];
    if (!layout) {
      local.push({ code: "E_LAYOUT_SLOT", path, message: `unknown layout ${slide.layout}` });
    }
    if (slide.viz.length > 1) {
      local.push({
        code: "E_VIZ_COUNT",
        path,
        message: `${slide.viz.length} visualizations on one slide, maximum is 1`,
      });
    } else if (layout && slide.viz.length > layout.viz_slots) {
      local.push({
        code: "E_LAYOUT_SLOT",
        path,
        message: `layout ${layout.id} has no visualization slot`,
      });
    }
    if (slide.panes.length > MAX_PANES) {
      local.push({
        code: "E_PANE_COUNT",
        path,
        message: `${slide.panes.length} content panes on one slide, maximum is ${MAX_PANES}`,
      });
    } else if (layout && slide.panes.length > layout.pane_slots) {
      local.push({
        code: "E_LAYOUT_SLOT",
        path,
        message: `layout ${layout.id} allows ${layout.pane_slots} pane(s), slide has ${slide.panes.length}`,
      });
    }

    const panelEvents = new Set(slide.viz[0]?.event_ids ?? []);
    const dangling = slide.focus_event_ids.filter((id) => !panelEvents.has(id)).sort();
    if (dangling.length > 0) {
      local.push({
        code: "E_DANGLING_EVENT",
        path,
        message: `focus events ${dangling.join(", ")} are not in the slide's visualization`,
      });
    }

    local.sort((a, b) => a.code.localeCompare(b.code));
    violations.push(...local);

    slide.panes.forEach((pane, p) => {
      pane.forEach((chunk, c) => {
        if (chunk.kind === "quiz") {
          const message = quizMessage(chunk);
          if (message) {
            violations.push({
              code: "E_QUIZ_NO_CORRECT",
              path: `${path}/panes/${p}/chunks/${c}`,
              message,
            });
          }
        }
      });
    });

    slide.children.forEach((child, i) => visit(child, `${path}/children/${i}`, depth + 1));
  };

  story.slides.forEach((slide, i) => visit(slide, `/slides/${i}`, 0));
  return violations;
}

export function isValid(story: StoryDocument): boolean {
  return validateStory(story).length === 0;
}
