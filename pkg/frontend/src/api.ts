/** Typed client for the storyatlas HTTP API. */

import type {
  CameraState,
  EntityRecord,
  EventRecord,
  LayoutTemplate,
  StoryDocument,
  StorySummary,
  Violation,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly violations: Violation[] = [],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface SearchConstraints {
  name_contains?: string;
  kinds?: string[];
  attribute_equals?: [string, string][];
  active_between?: { start: { value: string }; end?: { value: string } };
  related_place?: string;
}

export interface ResultPage {
  items: { id: string; label: string; kind: string }[];
  total: number;
  offset: number;
  limit: number;
}

export interface CollectionRecord {
  id: string;
  label: string;
  entity_ids: string[];
  event_ids: string[];
  created_at: string;
  provenance_note?: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(
    method: string,
    path: string,
    body?: unknown,
    headers?: Record<string, string>,
  ): Promise<Response> {
    const init: RequestInit = { method, headers: { ...headers } };
    if (body !== undefined) {
      init.body = typeof body === "string" ? body : JSON.stringify(body);
      (init.headers as Record<string, string>)["Content-Type"] = "application/json";
    }
    const response = await this.fetchImpl(`${this.baseUrl}/api${path}`, init);
    if (!response.ok) {
      let code = `HTTP_${response.status}`;
      let message = response.statusText;
      let violations: Violation[] = [];
      try {
        const payload = await response.json();
        code = payload.code ?? code;
        message = payload.message ?? message;
        violations = payload.violations ?? [];
      } catch {
        // non-JSON error body; keep status text
      }
      throw new ApiError(response.status, code, message, violations);
    }
    return response;
  }

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    return (await this.request(method, path, body)).json() as Promise<T>;
  }

  // entities & search
  searchEntities(constraints: SearchConstraints, offset = 0, limit = 50): Promise<ResultPage> {
    return this.json("POST", `/entities/search?offset=${offset}&limit=${limit}`, constraints);
  }

  getEntity(id: string): Promise<EntityRecord> {
    return this.json("GET", `/entities/${encodeURIComponent(id)}`);
  }

  entityEvents(id: string): Promise<EventRecord[]> {
    return this.json("GET", `/entities/${encodeURIComponent(id)}/events`);
  }

  facet(facet: string, constraints: SearchConstraints = {}, term?: string) {
    const params = new URLSearchParams({ constraints: JSON.stringify(constraints) });
    if (term) params.set("term", term);
    return this.json<{ facet: string; bins: { label: string; count: number }[] }>(
      "GET",
      `/facets/${facet}?${params}`,
    );
  }

  // collections
  listCollections(): Promise<CollectionRecord[]> {
    return this.json("GET", "/collections");
  }

  createCollection(label: string, entityIds: string[], eventIds: string[]) {
    return this.json<CollectionRecord>("POST", "/collections", {
      label,
      entity_ids: entityIds,
      event_ids: eventIds,
    });
  }

  resolveCollection(id: string) {
    return this.json<{ entities: EntityRecord[]; events: EventRecord[] }>(
      "GET",
      `/collections/${encodeURIComponent(id)}/resolve`,
    );
  }

  // stories
  listStories(): Promise<StorySummary[]> {
    return this.json("GET", "/stories");
  }

  layouts(): Promise<LayoutTemplate[]> {
    return this.json("GET", "/layouts");
  }

  createStory(title: string, collectionRef: string | null): Promise<StoryDocument> {
    return this.json("POST", "/stories", { title, collection_ref: collectionRef });
  }

  async getStory(id: string): Promise<{ doc: StoryDocument; version: number }> {
    const response = await this.request("GET", `/stories/${encodeURIComponent(id)}`);
    const doc = (await response.json()) as StoryDocument;
    return { doc, version: Number(response.headers.get("etag") ?? doc.version) };
  }

  async saveStory(doc: StoryDocument, expectedVersion: number): Promise<number> {
    const response = await this.request(
      "PUT",
      `/stories/${encodeURIComponent(doc.id)}`,
      doc,
      { "If-Match": String(expectedVersion) },
    );
    const result = (await response.json()) as { version: number };
    return result.version;
  }

  deleteStory(id: string): Promise<Response> {
    return this.request("DELETE", `/stories/${encodeURIComponent(id)}`);
  }

  async exportStory(id: string): Promise<string> {
    const response = await this.request("GET", `/stories/${encodeURIComponent(id)}/export`);
    return response.text();
  }

  importStory(data: string, idPolicy: "keep" | "remap" = "keep"): Promise<StoryDocument> {
    return this.json("POST", `/stories/import?id_policy=${idPolicy}`, data);
  }

  // pure viz computations
  fitCamera(options: {
    event_ids?: string[];
    points?: { lon: number; lat: number }[];
    viewport?: { width: number; height: number };
    padding?: number;
  }): Promise<CameraState> {
    return this.json("POST", "/viz/fit-camera", options);
  }

  cluster(points: { id: string; lon: number; lat: number; category?: string }[],
          zoom: number, radiusPx: number) {
    return this.json<{ clusters: unknown[] }>("POST", "/viz/cluster", {
      points,
      zoom,
      radius_px: radiusPx,
    });
  }

  timelineLayout(options: { event_ids?: string[]; width?: number; margin?: number }): Promise<{
    placements: { id: string; x: number; lane: number }[];
    undated: string[];
  }> {
    return this.json("POST", "/viz/timeline-layout", options);
  }
}
