"""Slide-based story documents: editing, validation, canonical export/import.

A story is a shallow tree of slides (one nesting level for drill-downs),
each slide holding at most one visualization panel and up to two content
panes. Editing operations either succeed and leave a valid document or
fail without mutating anything; export produces byte-stable canonical JSON
that re-imports to a structurally equal document.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

from .canonical import canonical_bytes
from .errors import (
    BadIndex,
    DanglingEventError,
    InvalidConstraint,
    InvalidStory,
    InvariantViolation,
    LayoutSlotError,
    MalformedDocument,
    NestDepthError,
    NoCoordinates,
    NotFound,
    NoVisualization,
    QuizNoCorrectError,
    SchemaVersionError,
    UnknownLayout,
)
from .models import MediaResource, media_from_dict
from .store import EntityEventStore, new_id
from .viz import CameraState, fit_camera

SCHEMA_VERSION = "intavia-story/1"
MAX_PANES = 2
MAX_DEPTH = 2  # top-level slides plus one child level
DEFAULT_VIEWPORT = (800.0, 600.0)
DEFAULT_PADDING = 40.0

VIOLATION_CODES = (
    "E_VIZ_COUNT",
    "E_PANE_COUNT",
    "E_LAYOUT_SLOT",
    "E_DANGLING_EVENT",
    "E_NEST_DEPTH",
    "E_QUIZ_NO_CORRECT",
    "E_SCHEMA_VERSION",
    "E_DUP_SLIDE_ID",
)

VIZ_KINDS = ("map", "timeline")
GLYPHS = ("donut", "dot")
COLORINGS = ("entity_identity", "event_kind", "temporal")

# panel settings known per visualization kind; values must be scalars
PANEL_SETTINGS = {
    "map": {"cluster_radius", "initial_zoom"},
    "timeline": {"cluster_radius", "lane_height"},
}

_SCALAR = (str, int, float, bool)


@dataclass(frozen=True)
class LayoutTemplate:
    """Slot declaration plus grid geometry for one slide layout."""

    id: str
    viz_slots: int
    pane_slots: int
    grid: tuple[tuple[str, ...], ...]  # rows of area names

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "viz_slots": self.viz_slots,
            "pane_slots": self.pane_slots,
            "grid": [list(row) for row in self.grid],
        }


LAYOUTS: dict[str, LayoutTemplate] = {
    t.id: t
    for t in (
        LayoutTemplate("VIZ_ONLY", 1, 0, (("viz",),)),
        LayoutTemplate("CONTENT_ONLY", 0, 1, (("pane0",),)),
        LayoutTemplate("SPLIT_VIZ_LEFT", 1, 1, (("viz", "pane0"),)),
        LayoutTemplate("SPLIT_VIZ_RIGHT", 1, 1, (("pane0", "viz"),)),
        LayoutTemplate("VIZ_TOP_CONTENT_BOTTOM", 1, 1, (("viz",), ("pane0",))),
        LayoutTemplate("VIZ_CENTER_TWO_PANES", 1, 2, (("pane0", "viz", "pane1"),)),
    )
}


def _check_settings(settings: dict, *, where: str):
    for key, value in settings.items():
        if not isinstance(key, str):
            raise InvariantViolation(f"{where}: setting keys must be strings")
        if not isinstance(value, _SCALAR):
            raise InvariantViolation(f"{where}: setting {key!r} must be a scalar")


# --- content chunks ----------------------------------------------------


@dataclass
class TextChunk:
    markup: str
    settings: dict = field(default_factory=dict)
    kind = "text"

    def __post_init__(self):
        _check_settings(self.settings, where="text chunk")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "markup": self.markup, "settings": dict(self.settings)}


@dataclass
class ImageChunk:
    media: MediaResource
    settings: dict = field(default_factory=dict)
    kind = "image"

    def __post_init__(self):
        _check_settings(self.settings, where="image chunk")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "media": self.media.to_dict(), "settings": dict(self.settings)}


@dataclass
class VideoChunk:
    media: MediaResource
    settings: dict = field(default_factory=dict)
    kind = "video"

    def __post_init__(self):
        _check_settings(self.settings, where="video chunk")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "media": self.media.to_dict(), "settings": dict(self.settings)}


@dataclass
class QuizChunk:
    """Multiple-choice quiz; invariants are enforced by ops and validation,
    not at construction, so invalid documents stay representable."""

    question: str
    options: tuple[str, ...]
    correct: frozenset[int]
    settings: dict = field(default_factory=dict)
    kind = "quiz"

    def __post_init__(self):
        _check_settings(self.settings, where="quiz chunk")

    def invariant_message(self) -> str | None:
        if len(self.options) < 2:
            return "quiz needs at least two options"
        if not self.correct:
            return "quiz has no correct option"
        if not all(0 <= i < len(self.options) for i in self.correct):
            return "quiz correct indices out of range"
        return None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "question": self.question,
            "options": list(self.options),
            "correct": sorted(self.correct),
            "settings": dict(self.settings),
        }


@dataclass
class HtmlChunk:
    """Raw markup container; always sandbox-flagged, rendering is a viewer concern."""

    markup: str
    settings: dict = field(default_factory=dict)
    sandbox: bool = True
    kind = "html_container"

    def __post_init__(self):
        self.sandbox = True
        _check_settings(self.settings, where="html chunk")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "markup": self.markup,
            "sandbox": True,
            "settings": dict(self.settings),
        }


Chunk = TextChunk | ImageChunk | VideoChunk | QuizChunk | HtmlChunk


def chunk_from_dict(raw, *, where: str = "chunk") -> Chunk:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object")
    kind = raw.get("kind")
    settings = raw.get("settings") or {}
    if not isinstance(settings, dict):
        raise MalformedDocument(f"{where}: settings must be an object")
    try:
        if kind == "text":
            return TextChunk(markup=str(raw.get("markup", "")), settings=dict(settings))
        if kind in ("image", "video"):
            media = media_from_dict(raw.get("media"), where=f"{where}.media")
            cls = ImageChunk if kind == "image" else VideoChunk
            return cls(media=media, settings=dict(settings))
        if kind == "quiz":
            options = raw.get("options")
            correct = raw.get("correct")
            if not isinstance(options, list) or not all(isinstance(o, str) for o in options):
                raise MalformedDocument(f"{where}: quiz options must be a list of strings")
            if not isinstance(correct, list) or not all(isinstance(i, int) for i in correct):
                raise MalformedDocument(f"{where}: quiz correct must be a list of indices")
            return QuizChunk(
                question=str(raw.get("question", "")),
                options=tuple(options),
                correct=frozenset(correct),
                settings=dict(settings),
            )
        if kind == "html_container":
            return HtmlChunk(markup=str(raw.get("markup", "")), settings=dict(settings))
    except InvariantViolation as exc:
        raise MalformedDocument(f"{where}: {exc.message}") from exc
    raise MalformedDocument(f"{where}: unknown chunk kind {kind!r}")


# --- visualization panel -------------------------------------------------


@dataclass
class VisualizationPanel:
    kind: str
    entity_ids: set[str] = field(default_factory=set)
    event_ids: set[str] = field(default_factory=set)
    coloring: str = "event_kind"
    clustered: bool = True
    glyph: str = "donut"
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in VIZ_KINDS:
            raise InvariantViolation(f"unknown visualization kind {self.kind!r}")
        if self.coloring not in COLORINGS:
            raise InvariantViolation(f"unknown coloring mode {self.coloring!r}")
        if self.glyph not in GLYPHS:
            raise InvariantViolation(f"unknown glyph {self.glyph!r}")
        _check_settings(self.settings, where=f"{self.kind} panel")
        unknown = set(self.settings) - PANEL_SETTINGS[self.kind]
        if unknown:
            raise InvariantViolation(
                f"settings {sorted(unknown)} not valid for a {self.kind} panel"
            )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "entity_ids": sorted(self.entity_ids),
            "event_ids": sorted(self.event_ids),
            "coloring": self.coloring,
            "clustered": self.clustered,
            "glyph": self.glyph,
            "settings": dict(self.settings),
        }


def panel_from_dict(raw, *, where: str = "viz") -> VisualizationPanel:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object")
    allowed = {"kind", "entity_ids", "event_ids", "coloring", "clustered", "glyph", "settings"}
    unknown = set(raw) - allowed
    if unknown:
        raise MalformedDocument(f"{where}: unknown fields {sorted(unknown)}")
    for key in ("entity_ids", "event_ids"):
        ids = raw.get(key, [])
        if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
            raise MalformedDocument(f"{where}.{key}: expected a list of id strings")
    try:
        return VisualizationPanel(
            kind=raw.get("kind"),
            entity_ids=set(raw.get("entity_ids", [])),
            event_ids=set(raw.get("event_ids", [])),
            coloring=raw.get("coloring", "event_kind"),
            clustered=bool(raw.get("clustered", True)),
            glyph=raw.get("glyph", "donut"),
            settings=dict(raw.get("settings") or {}),
        )
    except InvariantViolation as exc:
        raise MalformedDocument(f"{where}: {exc.message}") from exc


# --- slides and documents -------------------------------------------------


@dataclass
class Slide:
    id: str
    layout: str
    viz_panels: list[VisualizationPanel] = field(default_factory=list)
    panes: list[list[Chunk]] = field(default_factory=list)
    children: list[Slide] = field(default_factory=list)
    focus_event_ids: set[str] = field(default_factory=set)
    camera: CameraState | None = None

    @property
    def viz(self) -> VisualizationPanel | None:
        return self.viz_panels[0] if self.viz_panels else None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "layout": self.layout,
            "viz": [p.to_dict() for p in self.viz_panels],
            "panes": [[c.to_dict() for c in pane] for pane in self.panes],
            "children": [s.to_dict() for s in self.children],
            "focus_event_ids": sorted(self.focus_event_ids),
            "camera": self.camera.to_dict() if self.camera else None,
        }


@dataclass
class StoryDocument:
    id: str
    title: str
    collection_ref: str | None = None
    slides: list[Slide] = field(default_factory=list)
    version: int = 1
    schema_version: str = SCHEMA_VERSION

    def walk(self):
        """Yield (slide, path, parent, depth) in document (pre-)order."""

        def visit(slides, prefix, parent, depth):
            for i, slide in enumerate(slides):
                path = f"{prefix}/{i}"
                yield slide, path, parent, depth
                yield from visit(slide.children, f"{path}/children", slide, depth + 1)

        yield from visit(self.slides, "/slides", None, 0)

    def find_slide(self, slide_id: str) -> tuple[Slide, list[Slide], Slide | None]:
        """Locate a slide, its sibling list and its parent (None if top-level)."""
        for slide, _, parent, _ in self.walk():
            if slide.id == slide_id:
                siblings = parent.children if parent is not None else self.slides
                return slide, siblings, parent
        raise NotFound(f"slide {slide_id!r} not found")

    def slide_count(self) -> int:
        return sum(1 for _ in self.walk())

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "schema_version": self.schema_version,
            "collection_ref": self.collection_ref,
            "slides": [s.to_dict() for s in self.slides],
            "version": self.version,
        }


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "path": self.path, "message": self.message}


# --- validation -------------------------------------------------------------


def validate_story(story: StoryDocument) -> list[Violation]:
    """Exhaustive structural check; an empty result means the story is valid.

    Violations are reported in document order, ties broken by code.
    """
    violations: list[Violation] = []
    if story.schema_version != SCHEMA_VERSION:
        violations.append(
            Violation(
                "E_SCHEMA_VERSION", "/",
                f"expected schema_version {SCHEMA_VERSION!r}, got {story.schema_version!r}",
            )
        )

    seen_ids: set[str] = set()
    for slide, path, _, depth in story.walk():
        slide_violations: list[Violation] = []
        if slide.id in seen_ids:
            slide_violations.append(
                Violation("E_DUP_SLIDE_ID", path, f"duplicate slide id {slide.id!r}")
            )
        seen_ids.add(slide.id)

        if depth >= MAX_DEPTH:
            slide_violations.append(
                Violation(
                    "E_NEST_DEPTH", path,
                    f"slide nested at depth {depth + 1}, maximum is {MAX_DEPTH}",
                )
            )

        layout = LAYOUTS.get(slide.layout)
        if layout is None:
            slide_violations.append(
                Violation("E_LAYOUT_SLOT", path, f"unknown layout {slide.layout!r}")
            )
        if len(slide.viz_panels) > 1:
            slide_violations.append(
                Violation(
                    "E_VIZ_COUNT", path,
                    f"{len(slide.viz_panels)} visualizations on one slide, maximum is 1",
                )
            )
        elif layout is not None and len(slide.viz_panels) > layout.viz_slots:
            slide_violations.append(
                Violation(
                    "E_LAYOUT_SLOT", path,
                    f"layout {layout.id} has no visualization slot",
                )
            )
        if len(slide.panes) > MAX_PANES:
            slide_violations.append(
                Violation(
                    "E_PANE_COUNT", path,
                    f"{len(slide.panes)} content panes on one slide, maximum is {MAX_PANES}",
                )
            )
        elif layout is not None and len(slide.panes) > layout.pane_slots:
            slide_violations.append(
                Violation(
                    "E_LAYOUT_SLOT", path,
                    f"layout {layout.id} allows {layout.pane_slots} pane(s), "
                    f"slide has {len(slide.panes)}",
                )
            )

        panel_events = slide.viz.event_ids if slide.viz else set()
        dangling = sorted(slide.focus_event_ids - panel_events)
        if dangling:
            slide_violations.append(
                Violation(
                    "E_DANGLING_EVENT", path,
                    f"focus events {dangling} are not in the slide's visualization",
                )
            )

        violations.extend(sorted(slide_violations, key=lambda v: v.code))

        for p, pane in enumerate(slide.panes):
            for c, chunk in enumerate(pane):
                if isinstance(chunk, QuizChunk):
                    message = chunk.invariant_message()
                    if message:
                        violations.append(
                            Violation("E_QUIZ_NO_CORRECT", f"{path}/panes/{p}/chunks/{c}", message)
                        )
    return violations


# --- canonical export / import ----------------------------------------------


def export_story(story: StoryDocument) -> bytes:
    """Canonical byte-stable serialization (sorted keys, no whitespace)."""
    violations = validate_story(story)
    if violations:
        raise InvalidStory(
            f"story has {len(violations)} violation(s)", violations=violations
        )
    return canonical_bytes(story.to_dict())


def _camera_from_dict(raw, *, where: str) -> CameraState | None:
    if raw is None:
        return None
    if not isinstance(raw, dict) or not isinstance(raw.get("center"), dict):
        raise MalformedDocument(f"{where}: bad camera")
    center = raw["center"]
    try:
        return CameraState(
            lon=float(center["lon"]), lat=float(center["lat"]), zoom=float(raw["zoom"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"{where}: bad camera: {exc}") from exc


_SLIDE_FIELDS = {"id", "layout", "viz", "panes", "children", "focus_event_ids", "camera"}
_STORY_FIELDS = {"id", "title", "schema_version", "collection_ref", "slides", "version"}


def slide_from_dict(raw, *, where: str = "slide") -> Slide:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object")
    unknown = set(raw) - _SLIDE_FIELDS
    if unknown:
        raise MalformedDocument(f"{where}: unknown fields {sorted(unknown)}")
    slide_id = raw.get("id")
    layout = raw.get("layout")
    if not isinstance(slide_id, str) or not slide_id:
        raise MalformedDocument(f"{where}: missing slide id")
    if not isinstance(layout, str):
        raise MalformedDocument(f"{where}: missing layout")
    if layout not in LAYOUTS:
        raise UnknownLayout(f"{where}: unknown layout {layout!r}")
    viz_raw = raw.get("viz", [])
    panes_raw = raw.get("panes", [])
    children_raw = raw.get("children", [])
    focus_raw = raw.get("focus_event_ids", [])
    if not all(isinstance(x, list) for x in (viz_raw, panes_raw, children_raw, focus_raw)):
        raise MalformedDocument(f"{where}: viz, panes, children and focus_event_ids must be arrays")
    panes = []
    for p, pane in enumerate(panes_raw):
        if not isinstance(pane, list):
            raise MalformedDocument(f"{where}.panes[{p}]: expected an array of chunks")
        panes.append(
            [chunk_from_dict(c, where=f"{where}.panes[{p}][{i}]") for i, c in enumerate(pane)]
        )
    return Slide(
        id=slide_id,
        layout=layout,
        viz_panels=[panel_from_dict(v, where=f"{where}.viz[{i}]") for i, v in enumerate(viz_raw)],
        panes=panes,
        children=[
            slide_from_dict(c, where=f"{where}.children[{i}]")
            for i, c in enumerate(children_raw)
        ],
        focus_event_ids=set(focus_raw),
        camera=_camera_from_dict(raw.get("camera"), where=where),
    )


def story_from_dict(raw) -> StoryDocument:
    if not isinstance(raw, dict):
        raise MalformedDocument("story document must be a JSON object")
    unknown = set(raw) - _STORY_FIELDS
    if unknown:
        raise MalformedDocument(f"story: unknown fields {sorted(unknown)}")
    story_id = raw.get("id")
    title = raw.get("title")
    version = raw.get("version", 1)
    if not isinstance(story_id, str) or not story_id:
        raise MalformedDocument("story: missing id")
    if not isinstance(title, str):
        raise MalformedDocument("story: missing title")
    if not isinstance(version, int) or version < 1:
        raise MalformedDocument(f"story: bad version {version!r}")
    slides_raw = raw.get("slides", [])
    if not isinstance(slides_raw, list):
        raise MalformedDocument("story: slides must be an array")
    collection_ref = raw.get("collection_ref")
    if collection_ref is not None and not isinstance(collection_ref, str):
        raise MalformedDocument("story: collection_ref must be an id string")
    return StoryDocument(
        id=story_id,
        title=title,
        collection_ref=collection_ref,
        slides=[slide_from_dict(s, where=f"slides[{i}]") for i, s in enumerate(slides_raw)],
        version=version,
        schema_version=raw.get("schema_version", ""),
    )


def import_story(data: bytes | str, id_policy: str = "keep") -> StoryDocument:
    """Parse exported bytes back into a document.

    ``keep`` preserves all ids; ``remap`` regenerates the story and slide
    ids while preserving structure.
    """
    if id_policy not in ("keep", "remap"):
        raise InvalidConstraint(f"unknown id policy {id_policy!r}")
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"story bytes are not UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"story bytes are not valid JSON: {exc}") from exc
    if isinstance(raw, dict) and raw.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"expected schema_version {SCHEMA_VERSION!r}, got {raw.get('schema_version')!r}"
        )
    story = story_from_dict(raw)
    violations = validate_story(story)
    if violations:
        raise InvalidStory(
            f"imported story has {len(violations)} violation(s)", violations=violations
        )
    if id_policy == "remap":
        story.id = new_id("story")
        for slide, _, _, _ in story.walk():
            slide.id = new_id("slide")
    return story


# --- editing ------------------------------------------------------------------


class StoryEditor:
    """Editing operations over story documents.

    Needs the store to resolve collections and event places; every
    operation bumps the document version, including no-op moves, so
    optimistic concurrency stays uniform.
    """

    def __init__(self, store: EntityEventStore, id_factory=new_id):
        self._store = store
        self._new_id = id_factory

    def _bump(self, story: StoryDocument):
        story.version += 1

    def create_story(self, title: str, collection_ref: str | None = None) -> StoryDocument:
        if collection_ref is not None:
            self._store.get_collection(collection_ref)  # NotFound propagates
        return StoryDocument(
            id=self._new_id("story"), title=title, collection_ref=collection_ref
        )

    def add_slide(self, story: StoryDocument, layout: str, index: int) -> Slide:
        if layout not in LAYOUTS:
            raise UnknownLayout(f"unknown layout {layout!r}")
        if not 0 <= index <= len(story.slides):
            raise BadIndex(f"index {index} outside [0, {len(story.slides)}]")
        slide = Slide(id=self._new_id("slide"), layout=layout)
        story.slides.insert(index, slide)
        self._bump(story)
        return slide

    def add_nested_slide(self, story: StoryDocument, parent_id: str, layout: str) -> Slide:
        if layout not in LAYOUTS:
            raise UnknownLayout(f"unknown layout {layout!r}")
        parent, _, grandparent = story.find_slide(parent_id)
        if grandparent is not None:
            raise NestDepthError(
                f"slide {parent_id!r} is itself nested; drill-downs are one level deep"
            )
        child = Slide(id=self._new_id("slide"), layout=layout)
        parent.children.append(child)
        self._bump(story)
        return child

    def duplicate_slide(self, story: StoryDocument, slide_id: str) -> Slide:
        original, siblings, _ = story.find_slide(slide_id)
        clone = copy.deepcopy(original)
        clone.id = self._new_id("slide")
        for child in clone.children:
            child.id = self._new_id("slide")
        siblings.insert(siblings.index(original) + 1, clone)
        self._bump(story)
        return clone

    def delete_slide(self, story: StoryDocument, slide_id: str) -> None:
        slide, siblings, _ = story.find_slide(slide_id)
        siblings.remove(slide)
        self._bump(story)

    def move_slide(self, story: StoryDocument, slide_id: str, new_index: int) -> None:
        slide, siblings, _ = story.find_slide(slide_id)
        if not 0 <= new_index < len(siblings):
            raise BadIndex(f"index {new_index} outside [0, {len(siblings) - 1}]")
        siblings.remove(slide)
        siblings.insert(new_index, slide)
        self._bump(story)

    def set_layout(self, story: StoryDocument, slide_id: str, layout: str) -> None:
        if layout not in LAYOUTS:
            raise UnknownLayout(f"unknown layout {layout!r}")
        slide, _, _ = story.find_slide(slide_id)
        template = LAYOUTS[layout]
        overflow = []
        if len(slide.viz_panels) > template.viz_slots:
            overflow.append(f"{len(slide.viz_panels)} visualization(s)")
        if len(slide.panes) > template.pane_slots:
            overflow.append(f"{len(slide.panes)} pane(s)")
        if overflow:
            raise LayoutSlotError(
                f"layout {layout} cannot hold existing content: {', '.join(overflow)}"
            )
        slide.layout = layout
        self._bump(story)

    def add_content_chunk(
        self, story: StoryDocument, slide_id: str, pane_index: int, chunk: Chunk
    ) -> None:
        slide, _, _ = story.find_slide(slide_id)
        template = LAYOUTS[slide.layout]
        if not 0 <= pane_index < template.pane_slots:
            raise BadIndex(
                f"pane index {pane_index} invalid for layout {slide.layout} "
                f"with {template.pane_slots} pane slot(s)"
            )
        if isinstance(chunk, QuizChunk):
            message = chunk.invariant_message()
            if message == "quiz has no correct option":
                raise QuizNoCorrectError(message)
            if message:
                raise InvariantViolation(message)
        while len(slide.panes) <= pane_index:
            slide.panes.append([])
        slide.panes[pane_index].append(chunk)
        self._bump(story)

    def _event_universe(self, story: StoryDocument) -> set[str] | None:
        """Event ids a panel may reference; None means check the whole store."""
        if story.collection_ref is None:
            return None
        return set(self._store.get_collection(story.collection_ref).event_ids)

    def _entity_universe(self, story: StoryDocument) -> set[str] | None:
        if story.collection_ref is None:
            return None
        return set(self._store.get_collection(story.collection_ref).entity_ids)

    def attach_visualization(
        self, story: StoryDocument, slide_id: str, panel: VisualizationPanel
    ) -> None:
        slide, _, _ = story.find_slide(slide_id)
        template = LAYOUTS[slide.layout]
        if template.viz_slots < 1:
            raise LayoutSlotError(f"layout {slide.layout} has no visualization slot")
        events = self._event_universe(story)
        if events is not None:
            dangling = sorted(e for e in panel.event_ids if e not in events)
        else:
            dangling = sorted(e for e in panel.event_ids if not self._store.has_event(e))
        if dangling:
            raise DanglingEventError(
                f"panel events {dangling} are not in the story's collection"
            )
        entities = self._entity_universe(story)
        if entities is not None:
            dangling_entities = sorted(e for e in panel.entity_ids if e not in entities)
        else:
            dangling_entities = sorted(
                e for e in panel.entity_ids if not self._store.has_entity(e)
            )
        if dangling_entities:
            raise DanglingEventError(
                f"panel entities {dangling_entities} are not in the story's collection"
            )
        new_focus = slide.focus_event_ids & panel.event_ids
        camera = slide.camera
        if new_focus != slide.focus_event_ids or panel.kind != "map":
            camera = self._camera_for(new_focus) if new_focus and panel.kind == "map" else None
        slide.viz_panels = [panel]
        slide.focus_event_ids = new_focus
        slide.camera = camera
        self._bump(story)

    def _camera_for(self, event_ids: set[str]) -> CameraState:
        points = []
        missing = []
        for event_id in sorted(event_ids):
            event = self._store.get_event(event_id)
            place = (
                self._store.get_entity(event.place) if event.place is not None else None
            )
            if place is None or place.coordinates is None:
                missing.append(event_id)
            else:
                points.append(place.coordinates)
        if missing:
            raise NoCoordinates(
                f"focused events {missing} have no place coordinates"
            )
        return fit_camera(points, DEFAULT_VIEWPORT, DEFAULT_PADDING)

    def set_focus_events(
        self, story: StoryDocument, slide_id: str, event_ids
    ) -> CameraState | None:
        slide, _, _ = story.find_slide(slide_id)
        panel = slide.viz
        if panel is None or panel.kind != "map":
            raise NoVisualization(f"slide {slide_id!r} has no map visualization")
        focus = set(event_ids)
        dangling = sorted(focus - panel.event_ids)
        if dangling:
            raise DanglingEventError(
                f"focus events {dangling} are not in the slide's visualization"
            )
        if not focus:
            slide.focus_event_ids = set()
            slide.camera = None
            self._bump(story)
            return None
        camera = self._camera_for(focus)
        slide.focus_event_ids = focus
        slide.camera = camera
        self._bump(story)
        return camera
