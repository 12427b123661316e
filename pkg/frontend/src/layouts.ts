/** Slide layout registry mirrored from the backend (also served at /api/layouts). */

import type { LayoutId, LayoutTemplate } from "./types.js";

export const LAYOUTS: Record<LayoutId, LayoutTemplate> = {
  VIZ_ONLY: { id: "VIZ_ONLY", viz_slots: 1, pane_slots: 0, grid: [["viz"]] },
  CONTENT_ONLY: { id: "CONTENT_ONLY", viz_slots: 0, pane_slots: 1, grid: [["pane0"]] },
  SPLIT_VIZ_LEFT: {
    id: "SPLIT_VIZ_LEFT",
    viz_slots: 1,
    pane_slots: 1,
    grid: [["viz", "pane0"]],
  },
  SPLIT_VIZ_RIGHT: {
    id: "SPLIT_VIZ_RIGHT",
    viz_slots: 1,
    pane_slots: 1,
    grid: [["pane0", "viz"]],
  },
  VIZ_TOP_CONTENT_BOTTOM: {
    id: "VIZ_TOP_CONTENT_BOTTOM",
    viz_slots: 1,
    pane_slots: 1,
    grid: [["viz"], ["pane0"]],
  },
  VIZ_CENTER_TWO_PANES: {
    id: "VIZ_CENTER_TWO_PANES",
    viz_slots: 1,
    pane_slots: 2,
    grid: [["pane0", "viz", "pane1"]],
  },
};

export const LAYOUT_IDS = Object.keys(LAYOUTS) as LayoutId[];
