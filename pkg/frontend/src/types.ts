/** Wire types shared with the storyatlas HTTP API. */

export type LayoutId =
  | "VIZ_ONLY"
  | "CONTENT_ONLY"
  | "SPLIT_VIZ_LEFT"
  | "SPLIT_VIZ_RIGHT"
  | "VIZ_TOP_CONTENT_BOTTOM"
  | "VIZ_CENTER_TWO_PANES";

export interface LayoutTemplate {
  id: LayoutId;
  viz_slots: 0 | 1;
  pane_slots: 0 | 1 | 2;
  grid: string[][];
}

export interface CameraState {
  center: { lon: number; lat: number };
  zoom: number;
}

export type ColoringMode = "entity_identity" | "event_kind" | "temporal";

export interface VisualizationPanel {
  kind: "map" | "timeline";
  entity_ids: string[];
  event_ids: string[];
  coloring: ColoringMode;
  clustered: boolean;
  glyph: "donut" | "dot";
  settings: Record<string, string | number | boolean>;
}

export interface MediaResource {
  url: string;
  media_kind: "image" | "video" | "audio" | "document";
  caption?: string;
  alt_text?: string;
}

export interface TextChunk {
  kind: "text";
  markup: string;
  settings: Record<string, string | number | boolean>;
}

export interface ImageChunk {
  kind: "image";
  media: MediaResource;
  settings: Record<string, string | number | boolean>;
}

export interface VideoChunk {
  kind: "video";
  media: MediaResource;
  settings: Record<string, string | number | boolean>;
}

export interface QuizChunk {
  kind: "quiz";
  question: string;
  options: string[];
  correct: number[];
  settings: Record<string, string | number | boolean>;
}

export interface HtmlChunk {
  kind: "html_container";
  markup: string;
  sandbox: true;
  settings: Record<string, string | number | boolean>;
}

export type Chunk = TextChunk | ImageChunk | VideoChunk | QuizChunk | HtmlChunk;

export interface Slide {
  id: string;
  layout: LayoutId;
  viz: VisualizationPanel[];
  panes: Chunk[][];
  children: Slide[];
  focus_event_ids: string[];
  camera: CameraState | null;
}

export interface StoryDocument {
  id: string;
  title: string;
  schema_version: string;
  collection_ref: string | null;
  slides: Slide[];
  version: number;
}

export interface StorySummary {
  story_id: string;
  title: string;
  updated_at: string;
  slide_count: number;
  version: number;
}

export interface EntityRecord {
  id: string;
  kind: string;
  label: string;
  description?: string;
  attributes: Record<string, string[]>;
  coordinates?: { lon: number; lat: number };
  media: MediaResource[];
  provenance: string;
}

export interface EventRecord {
  id: string;
  label: string;
  kind: string;
  span?: {
    start: { value: string; precision: string };
    end?: { value: string; precision: string };
  };
  place?: string;
  participants: { entity: string; role: string }[];
  provenance: string;
}

export interface Violation {
  code: string;
  path: string;
  message: string;
}

export const SCHEMA_VERSION = "intavia-story/1";
