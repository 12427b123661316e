/** Web-mercator math for positioning map dots and checking containment. */

export const TILE_SIZE = 256;
export const Z_MAX = 16;
export const LAT_CLAMP = 85.0511;

export function worldSize(zoom: number): number {
  return TILE_SIZE * 2 ** zoom;
}

export function project(lon: number, lat: number, zoom: number): { x: number; y: number } {
  const size = worldSize(zoom);
  const phi = (lat * Math.PI) / 180;
  return {
    x: ((lon + 180) / 360) * size,
    y: ((1 - Math.log(Math.tan(phi) + 1 / Math.cos(phi)) / Math.PI) / 2) * size,
  };
}

export function unproject(x: number, y: number, zoom: number): { lon: number; lat: number } {
  const size = worldSize(zoom);
  const k = Math.PI * (1 - (2 * y) / size);
  return {
    lon: (x / size) * 360 - 180,
    lat: (Math.atan(Math.sinh(k)) * 180) / Math.PI,
  };
}

/** True when a point sits inside the padded viewport around a camera. */
export function containedInViewport(
  point: { lon: number; lat: number },
  camera: { center: { lon: number; lat: number }; zoom: number },
  viewport: { width: number; height: number },
  padding: number,
  slack = 1e-6,
): boolean {
  const center = project(camera.center.lon, camera.center.lat, camera.zoom);
  const p = project(point.lon, point.lat, camera.zoom);
  return (
    Math.abs(p.x - center.x) <= viewport.width / 2 - padding + slack &&
    Math.abs(p.y - center.y) <= viewport.height / 2 - padding + slack
  );
}
