"""Entity/event store with ingest, local curation overlays and collections.

The store keeps two layers per record id: the imported base and an optional
local overlay. Reads always see the overlay when present; re-ingesting the
original dataset never clobbers local edits. All operations run under one
lock, so readers never observe a partially applied ingest.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import replace

from .dates import TimeSpan
from .errors import (
    DuplicateId,
    IntegrityError,
    InvariantViolation,
    MalformedDocument,
    NotFound,
)
from .models import (
    Collection,
    Entity,
    Event,
    IngestError,
    IngestReport,
    Term,
    entity_from_dict,
    event_from_dict,
    term_from_dict,
)

_TOP_LEVEL_FIELDS = {"vocabularies", "entities", "events"}

# error code -> exception class raised in strict mode
_STRICT_RAISE = {
    "malformed_record": MalformedDocument,
    "invariant_violation": MalformedDocument,
    "duplicate_id": DuplicateId,
    "dangling_reference": IntegrityError,
}


def new_id(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


class EntityEventStore:
    """In-memory store of entities, events, vocabulary terms and collections."""

    def __init__(self):
        self._lock = threading.RLock()
        self._base_entities: dict[str, Entity] = {}
        self._base_events: dict[str, Event] = {}
        self._local_entities: dict[str, Entity] = {}
        self._local_events: dict[str, Event] = {}
        self._terms: dict[str, Term] = {}
        self._collections: dict[str, Collection] = {}
        self._revision = 0
        self._event_index_rev = -1
        self._events_by_entity: dict[str, list[str]] = {}

    @property
    def revision(self) -> int:
        return self._revision

    # --- ingest --------------------------------------------------------

    def ingest_dataset(self, document: bytes | str, mode: str = "strict") -> IngestReport:
        if mode not in ("strict", "lenient"):
            raise ValueError(f"unknown ingest mode {mode!r}")
        strict = mode == "strict"

        if isinstance(document, bytes):
            try:
                document = document.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise MalformedDocument(f"document is not UTF-8: {exc}") from exc
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"document is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise MalformedDocument("document must be a JSON object")

        errors: list[IngestError] = []
        unknown_top = set(doc) - _TOP_LEVEL_FIELDS
        if unknown_top and strict:
            errors.append(
                IngestError("$", "malformed_record", f"unknown fields {sorted(unknown_top)}")
            )
        for key in _TOP_LEVEL_FIELDS:
            if key in doc and not isinstance(doc[key], list):
                raise MalformedDocument(f"{key} must be an array")

        with self._lock:
            staged_terms: dict[str, Term] = {}
            staged_entities: dict[str, Entity] = {}
            staged_events: dict[str, Event] = {}

            def stage(location, record, staged, stored):
                """Stage a parsed record, handling duplicate-id semantics."""
                existing = staged.get(record.id, stored.get(record.id))
                if existing is None:
                    staged[record.id] = record
                elif existing != record:
                    errors.append(
                        IngestError(
                            location, "duplicate_id",
                            f"id {record.id!r} already exists with differing content",
                        )
                    )
                # identical content: no-op

            for i, raw in enumerate(doc.get("vocabularies") or []):
                location = f"vocabularies[{i}]"
                try:
                    stage(location, term_from_dict(raw, strict=strict, where=location),
                          staged_terms, self._terms)
                except MalformedDocument as exc:
                    errors.append(IngestError(location, "malformed_record", exc.message))

            for i, raw in enumerate(doc.get("entities") or []):
                location = f"entities[{i}]"
                try:
                    record = entity_from_dict(raw, strict=strict, where=location)
                    stage(location, record, staged_entities, self._base_entities)
                except MalformedDocument as exc:
                    errors.append(IngestError(location, "malformed_record", exc.message))
                except InvariantViolation as exc:
                    errors.append(IngestError(location, "invariant_violation", exc.message))

            def resolve_kind(entity_id: str) -> str | None:
                record = staged_entities.get(entity_id)
                if record is None:
                    record = self._merged_entity(entity_id)
                return record.kind if record else None

            for i, raw in enumerate(doc.get("events") or []):
                location = f"events[{i}]"
                try:
                    record = event_from_dict(raw, strict=strict, where=location)
                except MalformedDocument as exc:
                    errors.append(IngestError(location, "malformed_record", exc.message))
                    continue
                except InvariantViolation as exc:
                    errors.append(IngestError(location, "invariant_violation", exc.message))
                    continue
                dangling = sorted(
                    ref for ref in record.referenced_entities() if resolve_kind(ref) is None
                )
                if dangling:
                    errors.append(
                        IngestError(
                            location, "dangling_reference",
                            f"event {record.id!r} references unknown entities {dangling}",
                        )
                    )
                    continue
                if record.place is not None and resolve_kind(record.place) != "place":
                    errors.append(
                        IngestError(
                            location, "invariant_violation",
                            f"event {record.id!r} place {record.place!r} is not a place entity",
                        )
                    )
                    continue
                stage(location, record, staged_events, self._base_events)

            if errors and strict:
                first = errors[0]
                exc_cls = _STRICT_RAISE[first.code]
                raise exc_cls(first.message, path=first.location, errors=errors)

            # lenient mode: records that errored were never staged, rest commits
            self._terms.update(staged_terms)
            self._base_entities.update(staged_entities)
            self._base_events.update(staged_events)
            if staged_terms or staged_entities or staged_events:
                self._revision += 1

            return IngestReport(
                entities_added=len(staged_entities),
                events_added=len(staged_events),
                terms_added=len(staged_terms),
                errors=errors,
            )

    # --- merged views ----------------------------------------------------

    def _merged_entity(self, entity_id: str) -> Entity | None:
        return self._local_entities.get(entity_id) or self._base_entities.get(entity_id)

    def _merged_event(self, event_id: str) -> Event | None:
        return self._local_events.get(event_id) or self._base_events.get(event_id)

    def get_entity(self, entity_id: str) -> Entity:
        with self._lock:
            record = self._merged_entity(entity_id)
            if record is None:
                raise NotFound(f"entity {entity_id!r} not found")
            return record

    def get_event(self, event_id: str) -> Event:
        with self._lock:
            record = self._merged_event(event_id)
            if record is None:
                raise NotFound(f"event {event_id!r} not found")
            return record

    def has_entity(self, entity_id: str) -> bool:
        with self._lock:
            return self._merged_entity(entity_id) is not None

    def has_event(self, event_id: str) -> bool:
        with self._lock:
            return self._merged_event(event_id) is not None

    def entities(self) -> list[Entity]:
        """All stored entities with overlays applied."""
        with self._lock:
            ids = self._base_entities.keys() | self._local_entities.keys()
            return [self._merged_entity(i) for i in sorted(ids)]

    def events(self) -> list[Event]:
        with self._lock:
            ids = self._base_events.keys() | self._local_events.keys()
            return [self._merged_event(i) for i in sorted(ids)]

    def terms(self) -> list[Term]:
        with self._lock:
            return [self._terms[i] for i in sorted(self._terms)]

    def get_term(self, term_id: str) -> Term | None:
        with self._lock:
            return self._terms.get(term_id)

    # --- event listing ---------------------------------------------------

    def _entity_event_ids(self, entity_id: str) -> list[str]:
        """Ids of events where the entity participates or serves as place."""
        if self._event_index_rev != self._revision:
            index: dict[str, list[str]] = {}
            for event in self.events():
                for ref in event.referenced_entities():
                    index.setdefault(ref, []).append(event.id)
            self._events_by_entity = index
            self._event_index_rev = self._revision
        return self._events_by_entity.get(entity_id, [])

    @staticmethod
    def event_sort_key(event: Event):
        day = event.start_day()
        if day is None:
            return (1, 0, event.id)
        return (0, day.toordinal(), event.id)

    def list_events(
        self,
        entity_id: str,
        kind_filter: str | None = None,
        time_filter: TimeSpan | None = None,
    ) -> list[Event]:
        with self._lock:
            if self._merged_entity(entity_id) is None:
                raise NotFound(f"entity {entity_id!r} not found")
            found = [self._merged_event(i) for i in self._entity_event_ids(entity_id)]
            if kind_filter is not None:
                found = [e for e in found if e.kind == kind_filter]
            if time_filter is not None:
                found = [e for e in found if e.span is not None and e.span.overlaps(time_filter)]
            return sorted(found, key=self.event_sort_key)

    # --- local curation ---------------------------------------------------

    def upsert_local_entity(self, draft: Entity) -> Entity:
        with self._lock:
            record = replace(draft, provenance="local")
            if record.kind != "place":
                used_as_place = [
                    e.id for e in self.events() if e.place == record.id
                ]
                if used_as_place:
                    raise InvariantViolation(
                        f"entity {record.id!r} is the place of events {used_as_place}; "
                        "kind must remain place"
                    )
            self._local_entities[record.id] = record
            self._revision += 1
            return record

    def upsert_local_event(self, draft: Event) -> Event:
        with self._lock:
            record = replace(draft, provenance="local")
            dangling = sorted(
                ref for ref in record.referenced_entities()
                if self._merged_entity(ref) is None
            )
            if dangling:
                raise IntegrityError(
                    f"event {record.id!r} references unknown entities {dangling}"
                )
            if record.place is not None and self._merged_entity(record.place).kind != "place":
                raise InvariantViolation(
                    f"event {record.id!r} place {record.place!r} is not a place entity"
                )
            self._local_events[record.id] = record
            self._revision += 1
            return record

    def delete_local_entity(self, entity_id: str) -> None:
        with self._lock:
            if entity_id not in self._local_entities:
                if entity_id in self._base_entities:
                    raise InvariantViolation(
                        f"entity {entity_id!r} is imported and cannot be deleted"
                    )
                raise NotFound(f"entity {entity_id!r} not found")
            # removal only breaks references when no base record resurfaces
            if entity_id not in self._base_entities:
                referencing = [
                    e.id for e in self.events() if entity_id in e.referenced_entities()
                ]
                if referencing:
                    raise IntegrityError(
                        f"entity {entity_id!r} is referenced by events {referencing}"
                    )
            del self._local_entities[entity_id]
            self._revision += 1

    def delete_local_event(self, event_id: str) -> None:
        with self._lock:
            if event_id not in self._local_events:
                if event_id in self._base_events:
                    raise InvariantViolation(
                        f"event {event_id!r} is imported and cannot be deleted"
                    )
                raise NotFound(f"event {event_id!r} not found")
            del self._local_events[event_id]
            self._revision += 1

    # --- collections -------------------------------------------------------

    def create_collection(
        self,
        label: str,
        entity_ids,
        event_ids,
        provenance_note: str | None = None,
    ) -> Collection:
        with self._lock:
            unique_entities = list(dict.fromkeys(entity_ids))
            unique_events = list(dict.fromkeys(event_ids))
            missing = [i for i in unique_entities if self._merged_entity(i) is None]
            missing += [i for i in unique_events if self._merged_event(i) is None]
            if missing:
                raise IntegrityError(f"collection references unknown ids {missing}")
            collection = Collection(
                id=new_id("col"),
                label=label,
                entity_ids=tuple(unique_entities),
                event_ids=tuple(unique_events),
                provenance_note=provenance_note,
            )
            self._collections[collection.id] = collection
            self._revision += 1
            return collection

    def get_collection(self, collection_id: str) -> Collection:
        with self._lock:
            collection = self._collections.get(collection_id)
            if collection is None:
                raise NotFound(f"collection {collection_id!r} not found")
            return collection

    def list_collections(self) -> list[Collection]:
        with self._lock:
            return sorted(self._collections.values(), key=lambda c: c.id)

    def resolve_collection(self, collection_id: str) -> tuple[list[Entity], list[Event]]:
        with self._lock:
            collection = self.get_collection(collection_id)
            missing = [i for i in collection.entity_ids if self._merged_entity(i) is None]
            missing += [i for i in collection.event_ids if self._merged_event(i) is None]
            if missing:
                raise IntegrityError(
                    f"collection {collection_id!r} members no longer resolve: {missing}"
                )
            return (
                [self._merged_entity(i) for i in collection.entity_ids],
                [self._merged_event(i) for i in collection.event_ids],
            )
