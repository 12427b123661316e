/** Tunable UI constants. */

/** Viewport width (px) at and above which the desktop layout is active. */
export const BREAKPOINT_PX = 768;

/** Duration of the camera focus transition when entering a slide. */
export const FOCUS_ANIMATION_MS = 1000;

/** Camera fitting defaults mirrored from the authoring backend. */
export const DEFAULT_FIT_PADDING_PX = 40;
