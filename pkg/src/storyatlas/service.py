"""HTTP facade and file-backed story persistence.

One process serves the store, query engine, viz computations and story
engine. Stories persist as canonical JSON, one file per story id, written
atomically (temp file + rename) so a crash between saves never leaves a
file that fails import. Datasets load read-only at startup.
"""

from __future__ import annotations

import os
import re
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import viz
from .dates import CalendarDate, TimeSpan, parse_calendar_date
from .errors import (
    DuplicateId,
    InvalidConstraint,
    MalformedDocument,
    NotFound,
    StorageCorrupt,
    StoryAtlasError,
    VersionConflict,
)
from .models import entity_from_dict, event_from_dict
from .query import QueryEngine, constraints_from_dict
from .store import EntityEventStore, new_id
from .story import (
    DEFAULT_PADDING,
    DEFAULT_VIEWPORT,
    LAYOUTS,
    StoryDocument,
    StoryEditor,
    export_story,
    import_story,
    story_from_dict,
    validate_story,
)

_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class ServiceConfig:
    persist_dir: Path
    data_paths: tuple[Path, ...] = ()
    allow_origin: str | None = None
    lenient_ingest: bool = False


@dataclass(frozen=True)
class StorySummary:
    story_id: str
    title: str
    updated_at: str
    slide_count: int
    version: int

    def to_dict(self) -> dict:
        return {
            "story_id": self.story_id,
            "title": self.title,
            "updated_at": self.updated_at,
            "slide_count": self.slide_count,
            "version": self.version,
        }


def _iso(mtime_ns: int) -> str:
    return datetime.fromtimestamp(mtime_ns / 1e9, tz=timezone.utc).isoformat()


class StoryRepository:
    """One canonical story file per story id under the persist directory."""

    def __init__(self, persist_dir: Path):
        self._dir = Path(persist_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._versions: dict[str, int] = {}
        self._mtimes: dict[str, int] = {}
        self._corrupt: set[str] = set()
        for path in sorted(self._dir.glob("*.json")):
            story_id = path.stem
            try:
                story = import_story(path.read_bytes())
                if story.id != story_id:
                    raise MalformedDocument(
                        f"file {path.name} contains story id {story.id!r}"
                    )
            except StoryAtlasError:
                self._corrupt.add(story_id)
                continue
            self._versions[story_id] = story.version
            self._mtimes[story_id] = path.stat().st_mtime_ns

    def _path(self, story_id: str) -> Path:
        if not _SAFE_ID.match(story_id) or ".." in story_id:
            raise MalformedDocument(f"story id {story_id!r} is not filename-safe")
        return self._dir / f"{story_id}.json"

    def _write(self, story_id: str, data: bytes):
        path = self._path(story_id)
        tmp = path.with_name(f".{story_id}.{uuid.uuid4().hex}.tmp")
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        self._mtimes[story_id] = path.stat().st_mtime_ns
        self._corrupt.discard(story_id)

    def list(self) -> list[StorySummary]:
        with self._lock:
            summaries = []
            mtimes = dict(self._mtimes)
            for story_id in list(self._versions):
                try:
                    story, _, version = self.load(story_id)
                except StorageCorrupt:
                    continue  # unreadable entries surface on direct access only
                summaries.append(
                    StorySummary(
                        story_id=story_id,
                        title=story.title,
                        updated_at=_iso(mtimes[story_id]),
                        slide_count=len(story.slides),
                        version=version,
                    )
                )
            return sorted(summaries, key=lambda s: (-mtimes[s.story_id], s.story_id))

    def load(self, story_id: str) -> tuple[StoryDocument, bytes, int]:
        with self._lock:
            if story_id in self._corrupt:
                raise StorageCorrupt(f"stored story {story_id!r} fails import")
            if story_id not in self._versions:
                raise NotFound(f"story {story_id!r} not found")
            data = self._path(story_id).read_bytes()
            try:
                story = import_story(data)
            except StoryAtlasError as exc:
                self._corrupt.add(story_id)
                self._versions.pop(story_id, None)
                raise StorageCorrupt(
                    f"stored story {story_id!r} fails import: {exc.message}"
                ) from exc
            return story, data, story.version

    def save(self, story: StoryDocument, expected_version: int) -> int:
        """Compare-and-set save; ``expected_version`` 0 means creating."""
        with self._lock:
            current = self._versions.get(story.id, 0)
            if story.id in self._corrupt:
                raise StorageCorrupt(f"stored story {story.id!r} fails import")
            if expected_version != current:
                raise VersionConflict(
                    f"story {story.id!r} is at version {current}, "
                    f"save expected {expected_version}"
                )
            story.version = current + 1
            data = export_story(story)  # validates; InvalidStory propagates
            self._write(story.id, data)
            self._versions[story.id] = story.version
            return story.version

    def save_imported(self, story: StoryDocument) -> int:
        """Persist an imported story verbatim; the id must be unused."""
        with self._lock:
            if story.id in self._versions or story.id in self._corrupt:
                raise DuplicateId(f"story {story.id!r} already exists")
            data = export_story(story)
            self._write(story.id, data)
            self._versions[story.id] = story.version
            return story.version

    def delete(self, story_id: str) -> None:
        with self._lock:
            if story_id not in self._versions and story_id not in self._corrupt:
                raise NotFound(f"story {story_id!r} not found")
            path = self._path(story_id)
            if path.exists():
                path.unlink()
            self._versions.pop(story_id, None)
            self._mtimes.pop(story_id, None)
            self._corrupt.discard(story_id)


class Service:
    """Wires the store, query engine, story editor and repository together."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = EntityEventStore()
        mode = "lenient" if config.lenient_ingest else "strict"
        self.ingest_reports = []
        for path in config.data_paths:
            data = Path(path).read_bytes()  # missing file: startup failure
            self.ingest_reports.append(self.store.ingest_dataset(data, mode=mode))
        self.engine = QueryEngine(self.store)
        self.editor = StoryEditor(self.store)
        self.repository = StoryRepository(config.persist_dir)


async def _json_body(request: Request):
    try:
        return await request.json()
    except Exception as exc:
        raise MalformedDocument(f"request body is not valid JSON: {exc}") from exc


def _span_from_params(from_value: str | None, to_value: str | None) -> TimeSpan | None:
    if from_value is None and to_value is None:
        return None
    try:
        start = (
            parse_calendar_date({"value": from_value}, where="from")
            if from_value is not None
            else CalendarDate(1)
        )
        end = (
            parse_calendar_date({"value": to_value}, where="to")
            if to_value is not None
            else CalendarDate(9999)
        )
        return TimeSpan(start, end)
    except MalformedDocument as exc:
        raise InvalidConstraint(exc.message) from exc


def _expected_version(request: Request, body: dict) -> int:
    header = request.headers.get("if-match")
    if header is not None:
        try:
            return int(header.strip().strip('"'))
        except ValueError as exc:
            raise VersionConflict(f"bad If-Match header {header!r}") from exc
    version = body.get("version")
    if isinstance(version, int):
        return version
    raise VersionConflict("save requires an If-Match header or embedded version")


def _parse_point_date(raw, *, where: str):
    if raw is None:
        return None
    if not isinstance(raw, str):
        raise InvalidConstraint(f"{where}: date must be a string or null")
    try:
        return parse_calendar_date({"value": raw}, where=where).earliest_day()
    except MalformedDocument as exc:
        raise InvalidConstraint(exc.message) from exc


def create_app(config: ServiceConfig) -> FastAPI:
    service = Service(config)
    app = FastAPI(title="storyatlas", version="0.1.0")
    app.state.service = service

    if config.allow_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.allow_origin],
            allow_methods=["*"],
            allow_headers=["*"],
            expose_headers=["ETag"],
        )

    @app.exception_handler(StoryAtlasError)
    async def handle_domain_error(request: Request, exc: StoryAtlasError):
        body = {
            "status": exc.http_status,
            "code": exc.code,
            "message": exc.message,
            "path": exc.path or str(request.url.path),
        }
        violations = getattr(exc, "violations", None)
        if violations:
            body["violations"] = [v.to_dict() for v in violations]
        errors = getattr(exc, "errors", None)
        if errors:
            body["errors"] = [e.to_dict() for e in errors]
        return JSONResponse(status_code=exc.http_status, content=body)

    store, engine, editor, repo = (
        service.store, service.engine, service.editor, service.repository,
    )

    # --- entities and search -------------------------------------------

    @app.get("/api/entities")
    async def list_entities(offset: int = 0, limit: int = 50):
        page = engine.search_entities(constraints_from_dict(None), offset, limit)
        return page.to_dict()

    @app.post("/api/entities/search")
    async def search_entities(request: Request, offset: int = 0, limit: int = 50):
        constraints = constraints_from_dict(await _json_body(request))
        return engine.search_entities(constraints, offset, limit).to_dict()

    @app.get("/api/entities/{entity_id}")
    async def get_entity(entity_id: str):
        return store.get_entity(entity_id).to_dict()

    @app.get("/api/entities/{entity_id}/events")
    async def entity_events(request: Request, entity_id: str, kind: str | None = None,
                            to: str | None = None):
        # "from" is a Python keyword; read it straight off the query string
        span = _span_from_params(request.query_params.get("from"), to)
        events = store.list_events(entity_id, kind_filter=kind, time_filter=span)
        return [e.to_dict() for e in events]

    @app.get("/api/entities/{entity_id}/related")
    async def related(entity_id: str):
        return [r.to_dict() for r in engine.related_entities(entity_id)]

    @app.post("/api/entities", status_code=201)
    async def upsert_entity(request: Request):
        raw = await _json_body(request)
        if isinstance(raw, dict) and not raw.get("id"):
            raw = {**raw, "id": new_id("ent")}
        entity = entity_from_dict(raw, strict=True, provenance="local")
        return store.upsert_local_entity(entity).to_dict()

    @app.post("/api/events", status_code=201)
    async def upsert_event(request: Request):
        raw = await _json_body(request)
        if isinstance(raw, dict) and not raw.get("id"):
            raw = {**raw, "id": new_id("ev")}
        event = event_from_dict(raw, strict=True, provenance="local")
        return store.upsert_local_event(event).to_dict()

    # --- facets -----------------------------------------------------------

    @app.get("/api/facets/{facet}")
    async def facet_histogram(facet: str, constraints: str | None = None,
                              term: str | None = None):
        parsed = None
        if constraints:
            try:
                import json as _json

                parsed = _json.loads(constraints)
            except ValueError as exc:
                raise InvalidConstraint(f"constraints must be JSON: {exc}") from exc
        c = constraints_from_dict(parsed)
        return engine.facet_histogram(c, facet, attribute_term=term).to_dict()

    # --- collections ---------------------------------------------------------

    @app.get("/api/collections")
    async def list_collections():
        return [c.to_dict() for c in store.list_collections()]

    @app.post("/api/collections", status_code=201)
    async def create_collection(request: Request):
        raw = await _json_body(request)
        if not isinstance(raw, dict) or not isinstance(raw.get("label"), str):
            raise MalformedDocument("collection requires a label")
        collection = store.create_collection(
            raw["label"],
            raw.get("entity_ids") or [],
            raw.get("event_ids") or [],
            provenance_note=raw.get("provenance_note"),
        )
        return collection.to_dict()

    @app.get("/api/collections/{collection_id}")
    async def get_collection(collection_id: str):
        return store.get_collection(collection_id).to_dict()

    @app.get("/api/collections/{collection_id}/resolve")
    async def resolve_collection(collection_id: str):
        entities, events = store.resolve_collection(collection_id)
        return {
            "entities": [e.to_dict() for e in entities],
            "events": [e.to_dict() for e in events],
        }

    # --- stories ---------------------------------------------------------------

    @app.get("/api/layouts")
    async def list_layouts():
        return [LAYOUTS[k].to_dict() for k in sorted(LAYOUTS)]

    @app.get("/api/stories")
    async def list_stories():
        return [s.to_dict() for s in repo.list()]

    @app.post("/api/stories", status_code=201)
    async def create_story(request: Request, response: Response):
        raw = await _json_body(request)
        if not isinstance(raw, dict):
            raise MalformedDocument("expected an object with a title")
        story = editor.create_story(
            str(raw.get("title", "")), raw.get("collection_ref")
        )
        version = repo.save(story, expected_version=0)
        response.headers["ETag"] = str(version)
        return story.to_dict()

    @app.get("/api/stories/{story_id}")
    async def get_story(story_id: str, response: Response):
        story, _, version = repo.load(story_id)
        response.headers["ETag"] = str(version)
        return story.to_dict()

    @app.put("/api/stories/{story_id}")
    async def save_story(story_id: str, request: Request, response: Response):
        raw = await _json_body(request)
        story = story_from_dict(raw)
        if story.id != story_id:
            raise MalformedDocument(
                f"document id {story.id!r} does not match URL id {story_id!r}"
            )
        expected = _expected_version(request, raw)
        version = repo.save(story, expected_version=expected)
        response.headers["ETag"] = str(version)
        return {"story_id": story_id, "version": version}

    @app.delete("/api/stories/{story_id}", status_code=204)
    async def delete_story(story_id: str):
        repo.delete(story_id)
        return Response(status_code=204)

    @app.get("/api/stories/{story_id}/export")
    async def export(story_id: str):
        _, data, _ = repo.load(story_id)
        return Response(content=data, media_type="application/json")

    @app.post("/api/stories/import", status_code=201)
    async def import_endpoint(request: Request, id_policy: str = "keep"):
        data = await request.body()
        story = import_story(data, id_policy=id_policy)
        repo.save_imported(story)
        return story.to_dict()

    @app.post("/api/stories/validate")
    async def validate_endpoint(request: Request):
        story = story_from_dict(await _json_body(request))
        return {"violations": [v.to_dict() for v in validate_story(story)]}

    # --- pure viz computations ----------------------------------------------

    @app.post("/api/viz/cluster")
    async def cluster(request: Request):
        raw = await _json_body(request)
        points = []
        for i, p in enumerate(raw.get("points") or []):
            if not isinstance(p, dict):
                raise MalformedDocument(f"points[{i}]: expected an object")
            points.append(
                (p.get("id"), p.get("lon"), p.get("lat"), p.get("category", ""))
            )
        clusters = viz.cluster_points(
            points, float(raw.get("zoom", 0)), float(raw.get("radius_px", 40))
        )
        out = []
        for c in clusters:
            item = c.to_dict()
            item["donut"] = [s.to_dict() for s in viz.donut_segments(c.counts_by_category)]
            out.append(item)
        return {"clusters": out}

    def _resolve_event_points(event_ids) -> list[tuple[float, float]]:
        points = []
        missing = []
        for event_id in event_ids:
            event = store.get_event(event_id)
            place = store.get_entity(event.place) if event.place else None
            if place is None or place.coordinates is None:
                missing.append(event_id)
            else:
                points.append(place.coordinates)
        if missing:
            from .errors import NoCoordinates

            raise NoCoordinates(f"events {missing} have no place coordinates")
        return points

    @app.post("/api/viz/fit-camera")
    async def fit_camera_endpoint(request: Request):
        raw = await _json_body(request)
        if raw.get("event_ids") is not None:
            points = _resolve_event_points(raw["event_ids"])
        else:
            points = [
                (p.get("lon"), p.get("lat")) for p in (raw.get("points") or [])
            ]
        viewport_raw = raw.get("viewport") or {}
        viewport = (
            float(viewport_raw.get("width", DEFAULT_VIEWPORT[0])),
            float(viewport_raw.get("height", DEFAULT_VIEWPORT[1])),
        )
        padding = float(raw.get("padding", DEFAULT_PADDING))
        return viz.fit_camera(points, viewport, padding).to_dict()

    @app.post("/api/viz/timeline-layout")
    async def timeline_endpoint(request: Request):
        raw = await _json_body(request)
        rows = []
        if raw.get("event_ids") is not None:
            for event_id in raw["event_ids"]:
                event = store.get_event(event_id)
                rows.append(
                    (event.id, event.participants[0].entity, event.start_day())
                )
        else:
            for i, e in enumerate(raw.get("events") or []):
                if not isinstance(e, dict):
                    raise MalformedDocument(f"events[{i}]: expected an object")
                rows.append(
                    (
                        e.get("id"),
                        e.get("entity"),
                        _parse_point_date(e.get("date"), where=f"events[{i}].date"),
                    )
                )
        layout = viz.timeline_layout(
            rows,
            float(raw.get("width", 1000)),
            float(raw.get("margin", 50)),
            float(raw.get("cluster_radius", 12)),
        )
        return layout.to_dict()

    return app
