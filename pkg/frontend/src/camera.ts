/** Camera transition state for focus animations. */

import type { CameraState } from "./types.js";

export interface CameraAnimation {
  from: CameraState;
  to: CameraState;
  startedAt: number;
  durationMs: number;
}

/** Symmetric ease-in-out (quadratic), clamped to [0, 1]. */
export function easeInOut(t: number): number {
  const clamped = Math.min(1, Math.max(0, t));
  return clamped < 0.5 ? 2 * clamped * clamped : 1 - (-2 * clamped + 2) ** 2 / 2;
}

export function startAnimation(
  from: CameraState,
  to: CameraState,
  now: number,
  durationMs: number,
): CameraAnimation {
  return { from, to, startedAt: now, durationMs };
}

export function cameraAt(animation: CameraAnimation, now: number): CameraState {
  const progress =
    animation.durationMs <= 0 ? 1 : (now - animation.startedAt) / animation.durationMs;
  const eased = easeInOut(progress);
  const { from, to } = animation;
  return {
    center: {
      lon: from.center.lon + (to.center.lon - from.center.lon) * eased,
      lat: from.center.lat + (to.center.lat - from.center.lat) * eased,
    },
    zoom: from.zoom + (to.zoom - from.zoom) * eased,
  };
}

export function isFinished(animation: CameraAnimation, now: number): boolean {
  return now - animation.startedAt >= animation.durationMs;
}
