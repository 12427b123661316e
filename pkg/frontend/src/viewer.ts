/** Story viewer state: cursor, responsive layout mode, focus transitions.
 *
 * Viewing never mutates the story document; all presentation state lives
 * here. Slides advance linearly over the top level; a slide's nested
 * children are entered through the drill-down control and exiting resumes
 * at the next top-level slide.
 */

import { ApiClient } from "./api.js";
import { BREAKPOINT_PX, DEFAULT_FIT_PADDING_PX, FOCUS_ANIMATION_MS } from "./config.js";
import {
  CameraAnimation,
  cameraAt,
  isFinished,
  startAnimation,
} from "./camera.js";
import type { CameraState, Slide, StoryDocument } from "./types.js";

export type LayoutMode = "desktop" | "mobile";

export interface ViewerCursor {
  top: number;
  child: number | null;
}

export interface ViewerViewState {
  story: StoryDocument;
  cursor: ViewerCursor;
  layoutMode: LayoutMode;
  /** Mobile-only: whether the content panel is expanded over the viz. */
  panelExpanded: boolean;
  viewport: { width: number; height: number };
  camera: CameraState | null;
  animation: CameraAnimation | null;
}

export function layoutModeFor(width: number): LayoutMode {
  return width >= BREAKPOINT_PX ? "desktop" : "mobile";
}

export class ViewerController {
  state: ViewerViewState;
  private clock: () => number;

  constructor(
    private readonly api: ApiClient,
    story: StoryDocument,
    viewport: { width: number; height: number },
    options: { clock?: () => number } = {},
  ) {
    this.clock = options.clock ?? (() => Date.now());
    this.state = {
      story,
      cursor: { top: 0, child: null },
      layoutMode: layoutModeFor(viewport.width),
      panelExpanded: false,
      viewport,
      camera: null,
      animation: null,
    };
  }

  currentSlide(): Slide | null {
    const top = this.state.story.slides[this.state.cursor.top];
    if (!top) return null;
    if (this.state.cursor.child === null) return top;
    return top.children[this.state.cursor.child] ?? null;
  }

  resize(width: number, height: number): void {
    this.state.viewport = { width, height };
    const mode = layoutModeFor(width);
    if (mode !== this.state.layoutMode) {
      this.state.layoutMode = mode;
      this.state.panelExpanded = false;
    }
  }

  togglePanel(): void {
    if (this.state.layoutMode === "mobile") {
      this.state.panelExpanded = !this.state.panelExpanded;
    }
  }

  // --- navigation --------------------------------------------------------

  async next(): Promise<void> {
    const { story, cursor } = this.state;
    const top = story.slides[cursor.top];
    if (!top) return;
    if (cursor.child !== null) {
      if (cursor.child + 1 < top.children.length) {
        cursor.child += 1;
      } else {
        // leaving the drill-down resumes at the next top-level slide
        cursor.child = null;
        cursor.top = Math.min(cursor.top + 1, story.slides.length - 1);
      }
    } else if (cursor.top + 1 < story.slides.length) {
      cursor.top += 1;
    }
    await this.enteredSlide();
  }

  async previous(): Promise<void> {
    const { cursor } = this.state;
    if (cursor.child !== null) {
      cursor.child = cursor.child > 0 ? cursor.child - 1 : null;
    } else if (cursor.top > 0) {
      cursor.top -= 1;
    }
    await this.enteredSlide();
  }

  async enterChildren(): Promise<boolean> {
    const top = this.state.story.slides[this.state.cursor.top];
    if (!top || this.state.cursor.child !== null || top.children.length === 0) {
      return false;
    }
    this.state.cursor.child = 0;
    await this.enteredSlide();
    return true;
  }

  async goTo(top: number, child: number | null = null): Promise<void> {
    const slides = this.state.story.slides;
    if (top < 0 || top >= slides.length) return;
    if (child !== null && (child < 0 || child >= (slides[top]?.children.length ?? 0))) {
      child = null;
    }
    this.state.cursor = { top, child };
    await this.enteredSlide();
  }

  async handleKey(key: string): Promise<void> {
    if (key === "ArrowRight") await this.next();
    else if (key === "ArrowLeft") await this.previous();
    else if (key === "ArrowDown") await this.enterChildren();
  }

  // --- focus transition -------------------------------------------------

  /**
   * On entering a slide with focused events, refit the stored camera to the
   * actual viewport and animate toward it.
   */
  private async enteredSlide(): Promise<void> {
    this.state.panelExpanded = false;
    const slide = this.currentSlide();
    if (!slide) return;
    const panel = slide.viz[0];
    if (!panel || panel.kind !== "map" || slide.focus_event_ids.length === 0) {
      this.state.animation = null;
      return;
    }
    const target = await this.api.fitCamera({
      event_ids: [...slide.focus_event_ids].sort(),
      viewport: this.state.viewport,
      padding: DEFAULT_FIT_PADDING_PX,
    });
    const from = this.state.camera ?? slide.camera ?? target;
    this.state.animation = startAnimation(from, target, this.clock(), FOCUS_ANIMATION_MS);
  }

  /** Advance the running animation; returns the camera to render. */
  tick(now = this.clock()): CameraState | null {
    const animation = this.state.animation;
    if (!animation) return this.state.camera;
    this.state.camera = cameraAt(animation, now);
    if (isFinished(animation, now)) {
      this.state.camera = animation.to;
      this.state.animation = null;
    }
    return this.state.camera;
  }

  /** Run the current animation to completion (used by tests and reduced motion). */
  settle(): CameraState | null {
    const animation = this.state.animation;
    if (animation) {
      this.state.camera = animation.to;
      this.state.animation = null;
    }
    return this.state.camera;
  }
}
