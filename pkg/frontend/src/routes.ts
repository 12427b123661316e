/** Deep-linkable viewer routes: /story/{id}/{slide_index}[.{child_index}] */

export interface ViewerRoute {
  kind: "viewer";
  storyId: string;
  top: number;
  child: number | null;
}

export interface CreatorRoute {
  kind: "creator";
  storyId: string;
}

export interface OverviewRoute {
  kind: "overview";
}

export type Route = ViewerRoute | CreatorRoute | OverviewRoute;

export function parseRoute(path: string): Route {
  const parts = path.replace(/^#?\/?/, "").split("/").filter(Boolean);
  if (parts[0] === "story" && parts[1]) {
    const storyId = decodeURIComponent(parts[1]);
    const raw = parts[2] ?? "0";
    const [topRaw, childRaw] = raw.split(".");
    const top = Number.parseInt(topRaw ?? "0", 10);
    const child = childRaw !== undefined ? Number.parseInt(childRaw, 10) : null;
    return {
      kind: "viewer",
      storyId,
      top: Number.isFinite(top) && top >= 0 ? top : 0,
      child: child !== null && Number.isFinite(child) && child >= 0 ? child : null,
    };
  }
  if (parts[0] === "edit" && parts[1]) {
    return { kind: "creator", storyId: decodeURIComponent(parts[1]) };
  }
  return { kind: "overview" };
}

export function viewerPath(storyId: string, top: number, child: number | null): string {
  const index = child === null ? String(top) : `${top}.${child}`;
  return `/story/${encodeURIComponent(storyId)}/${index}`;
}

export function creatorPath(storyId: string): string {
  return `/edit/${encodeURIComponent(storyId)}`;
}
