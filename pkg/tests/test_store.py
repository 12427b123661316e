from __future__ import annotations

import json

import pytest

from storyatlas.dates import CalendarDate, TimeSpan
from storyatlas.errors import (
    DuplicateId,
    IntegrityError,
    InvariantViolation,
    MalformedDocument,
    NotFound,
)
from storyatlas.models import Entity, Event, Participant
from storyatlas.store import EntityEventStore


def as_bytes(doc: dict) -> bytes:
    return json.dumps(doc).encode("utf-8")


class TestIngest:
    def test_fixture_counts_match_file(self, sample_path, sample_doc):
        store = EntityEventStore()
        report = store.ingest_dataset(sample_path.read_bytes(), mode="strict")
        assert report.entities_added == len(sample_doc["entities"])
        assert report.events_added == len(sample_doc["events"])
        assert report.terms_added == len(sample_doc["vocabularies"])
        assert report.errors == []

    def test_empty_document_all_zeros(self):
        store = EntityEventStore()
        report = store.ingest_dataset(
            as_bytes({"entities": [], "events": [], "vocabularies": []})
        )
        assert (report.entities_added, report.events_added, report.terms_added) == (0, 0, 0)
        assert report.errors == []

    def test_reingest_is_idempotent(self, sample_path):
        store = EntityEventStore()
        store.ingest_dataset(sample_path.read_bytes())
        again = store.ingest_dataset(sample_path.read_bytes())
        assert (again.entities_added, again.events_added, again.terms_added) == (0, 0, 0)
        assert again.errors == []

    def test_strict_dangling_place_commits_nothing(self):
        store = EntityEventStore()
        doc = {
            "entities": [{"id": "p1", "kind": "person", "label": "Anna"}],
            "events": [
                {
                    "id": "x1",
                    "label": "somewhere",
                    "kind": "travel",
                    "place": "P_missing",
                    "participants": [{"entity": "p1", "role": "traveler"}],
                }
            ],
        }
        with pytest.raises(IntegrityError):
            store.ingest_dataset(as_bytes(doc), mode="strict")
        assert store.entities() == []
        assert store.events() == []

    def test_lenient_quarantines_bad_records(self):
        store = EntityEventStore()
        doc = {
            "entities": [{"id": "p1", "kind": "person", "label": "Anna"}],
            "events": [
                {
                    "id": "ok",
                    "label": "fine",
                    "kind": "meeting",
                    "participants": [{"entity": "p1", "role": "witness"}],
                },
                {
                    "id": "bad",
                    "label": "broken",
                    "kind": "travel",
                    "place": "P_missing",
                    "participants": [{"entity": "p1", "role": "traveler"}],
                },
            ],
        }
        report = store.ingest_dataset(as_bytes(doc), mode="lenient")
        assert report.entities_added == 1
        assert report.events_added == 1
        assert [e.code for e in report.errors] == ["dangling_reference"]
        assert report.errors[0].location == "events[1]"
        assert store.has_event("ok") and not store.has_event("bad")

    def test_duplicate_id_same_content_is_noop(self):
        store = EntityEventStore()
        record = {"id": "p1", "kind": "person", "label": "Anna"}
        report = store.ingest_dataset(as_bytes({"entities": [record, dict(record)]}))
        assert report.entities_added == 1

    def test_duplicate_id_differing_content_rejected(self):
        store = EntityEventStore()
        doc = {
            "entities": [
                {"id": "p1", "kind": "person", "label": "Anna"},
                {"id": "p1", "kind": "person", "label": "Anne"},
            ]
        }
        with pytest.raises(DuplicateId):
            store.ingest_dataset(as_bytes(doc), mode="strict")

    def test_unknown_fields_strict_vs_lenient(self):
        doc = {"entities": [{"id": "p1", "kind": "person", "label": "Anna", "zzz": 1}]}
        with pytest.raises(MalformedDocument):
            EntityEventStore().ingest_dataset(as_bytes(doc), mode="strict")
        report = EntityEventStore().ingest_dataset(as_bytes(doc), mode="lenient")
        assert report.entities_added == 1
        assert report.errors == []

    def test_unknown_span_fields_follow_mode(self):
        doc = {
            "entities": [{"id": "p1", "kind": "person", "label": "Anna"}],
            "events": [
                {
                    "id": "x1",
                    "label": "dated",
                    "kind": "meeting",
                    "span": {
                        "start": {"value": "1500", "calendar": "julian"},
                        "era": "early-modern",
                    },
                    "participants": [{"entity": "p1", "role": "witness"}],
                }
            ],
        }
        with pytest.raises(MalformedDocument):
            EntityEventStore().ingest_dataset(as_bytes(doc), mode="strict")
        report = EntityEventStore().ingest_dataset(as_bytes(doc), mode="lenient")
        assert report.events_added == 1
        assert report.errors == []

    def test_unparseable_document(self):
        with pytest.raises(MalformedDocument):
            EntityEventStore().ingest_dataset(b"{not json", mode="lenient")

    def test_invariant_breaches_rejected_strict(self):
        doc = {
            "entities": [
                {
                    "id": "p1",
                    "kind": "person",
                    "label": "Anna",
                    "coordinates": {"lon": 0, "lat": 0},
                }
            ]
        }
        with pytest.raises(MalformedDocument):
            EntityEventStore().ingest_dataset(as_bytes(doc), mode="strict")

    def test_referential_integrity_holds_after_ingest(self, store):
        entity_ids = {e.id for e in store.entities()}
        for event in store.events():
            assert event.referenced_entities() <= entity_ids


class TestReads:
    def test_get_entity(self, store):
        duerer = store.get_entity("duerer")
        assert duerer.kind == "person"
        assert duerer.label == "Albrecht Dürer"
        assert duerer.provenance == "imported"

    def test_get_entity_not_found(self, store):
        with pytest.raises(NotFound):
            store.get_entity("X")

    def test_list_events_all(self, store, sample_doc):
        events = store.list_events("duerer")
        assert len(events) == len(sample_doc["events"])

    def test_list_events_travel_window(self, store):
        window = TimeSpan(CalendarDate(1520), CalendarDate(1521))
        events = store.list_events("duerer", kind_filter="travel", time_filter=window)
        assert [e.id for e in events] == ["ev08", "ev10", "ev11", "ev12", "ev13"]

    def test_list_events_empty_window(self, store):
        window = TimeSpan(CalendarDate(3000), CalendarDate(3001))
        assert store.list_events("duerer", time_filter=window) == []

    def test_list_events_sorted_spanless_last(self, store):
        store.upsert_local_event(
            Event(
                id="aaa-undated",
                label="Undated note",
                kind="meeting",
                participants=(Participant("duerer", "subject"),),
            )
        )
        events = store.list_events("duerer")
        assert events[-1].id == "aaa-undated"
        dated = [e for e in events if e.span is not None]
        keys = [(e.span.earliest_day(), e.id) for e in dated]
        assert keys == sorted(keys)

    def test_list_events_unknown_entity(self, store):
        with pytest.raises(NotFound):
            store.list_events("nobody")


class TestCuration:
    def test_new_local_place(self, store):
        place = Entity(
            id="rotterdam", kind="place", label="Rotterdam", coordinates=(4.47, 51.92)
        )
        stored = store.upsert_local_entity(place)
        assert stored.provenance == "local"
        assert store.get_entity("rotterdam").coordinates == (4.47, 51.92)

    def test_overlay_wins_and_base_survives_reingest(self, store, sample_path):
        edited = Entity(id="duerer", kind="person", label="Albrecht Dürer (edited)")
        store.upsert_local_entity(edited)
        read = store.get_entity("duerer")
        assert read.label == "Albrecht Dürer (edited)"
        assert read.provenance == "local"
        again = store.ingest_dataset(sample_path.read_bytes())
        assert again.entities_added == 0
        assert store.get_entity("duerer").label == "Albrecht Dürer (edited)"

    def test_person_with_coordinates_rejected(self, store):
        with pytest.raises(InvariantViolation):
            Entity(id="p2", kind="person", label="Anna", coordinates=(0.0, 0.0))

    def test_local_event_roundtrip(self, store):
        event = Event(
            id="local-1",
            label="Sketching in Antwerp",
            kind="creation",
            participants=(Participant("duerer", "creator"),),
            place="antwerp",
        )
        assert store.upsert_local_event(event).provenance == "local"

    def test_local_event_empty_participants(self, store):
        with pytest.raises(InvariantViolation):
            Event(id="local-2", label="x", kind="travel", participants=())

    def test_local_event_dangling_reference(self, store):
        event = Event(
            id="local-3",
            label="x",
            kind="travel",
            participants=(Participant("ghost", "traveler"),),
        )
        with pytest.raises(IntegrityError):
            store.upsert_local_event(event)

    def test_local_event_place_must_be_place(self, store):
        event = Event(
            id="local-4",
            label="x",
            kind="travel",
            place="duerer",
            participants=(Participant("duerer", "traveler"),),
        )
        with pytest.raises(InvariantViolation):
            store.upsert_local_event(event)

    def test_kind_change_blocked_while_used_as_place(self, store):
        with pytest.raises(InvariantViolation):
            store.upsert_local_entity(Entity(id="antwerp", kind="group", label="Antwerp"))

    def test_imported_records_not_deletable(self, store):
        with pytest.raises(InvariantViolation):
            store.delete_local_entity("duerer")
        with pytest.raises(InvariantViolation):
            store.delete_local_event("ev01")

    def test_delete_overlay_reverts_to_base(self, store):
        store.upsert_local_entity(Entity(id="duerer", kind="person", label="Edited"))
        store.delete_local_entity("duerer")
        read = store.get_entity("duerer")
        assert read.label == "Albrecht Dürer"
        assert read.provenance == "imported"

    def test_delete_referenced_local_entity_blocked(self, store):
        store.upsert_local_entity(Entity(id="helper", kind="person", label="Helper"))
        store.upsert_local_event(
            Event(
                id="local-5",
                label="meeting",
                kind="meeting",
                participants=(Participant("helper", "witness"),),
            )
        )
        with pytest.raises(IntegrityError):
            store.delete_local_entity("helper")
        store.delete_local_event("local-5")
        store.delete_local_entity("helper")
        assert not store.has_entity("helper")


class TestConcurrency:
    def test_readers_never_observe_partial_ingest(self, sample_path):
        import threading

        store = EntityEventStore()
        errors: list[Exception] = []
        stop = threading.Event()

        def reader():
            while not stop.is_set():
                try:
                    count = len(store.entities())
                    # ingest is atomic: either nothing or the full batch
                    assert count in (0, 10), f"partial ingest visible: {count}"
                    for event in store.events():
                        assert event.referenced_entities() <= {
                            e.id for e in store.entities()
                        }
                except Exception as exc:  # surfaced after join
                    errors.append(exc)
                    return

        threads = [threading.Thread(target=reader) for _ in range(4)]
        for t in threads:
            t.start()
        try:
            for _ in range(20):
                store.ingest_dataset(sample_path.read_bytes())
        finally:
            stop.set()
            for t in threads:
                t.join()
        assert errors == []
        assert len(store.entities()) == 10


class TestCollections:
    def test_create_and_resolve(self, store, sample_doc):
        event_ids = [e["id"] for e in sample_doc["events"]]
        collection = store.create_collection("Dürer journeys", ["duerer"], event_ids)
        assert len(collection.entity_ids) == 1
        assert len(collection.event_ids) == 14
        entities, events = store.resolve_collection(collection.id)
        assert [e.id for e in entities] == ["duerer"]
        assert len(events) == 14

    def test_duplicates_deduped_keeping_first(self, store):
        collection = store.create_collection(
            "dups", ["duerer", "duerer"], ["ev02", "ev01", "ev02"]
        )
        assert collection.entity_ids == ("duerer",)
        assert collection.event_ids == ("ev02", "ev01")

    def test_unknown_member_rejected(self, store):
        with pytest.raises(IntegrityError):
            store.create_collection("bad", [], ["ev99"])

    def test_empty_collection(self, store):
        collection = store.create_collection("empty", [], [])
        assert store.resolve_collection(collection.id) == ([], [])

    def test_deleted_member_reported(self, store):
        store.upsert_local_event(
            Event(
                id="local-6",
                label="x",
                kind="meeting",
                participants=(Participant("duerer", "subject"),),
            )
        )
        collection = store.create_collection("with-local", [], ["local-6"])
        store.delete_local_event("local-6")
        with pytest.raises(IntegrityError, match="local-6"):
            store.resolve_collection(collection.id)

    def test_resolution_applies_overlays(self, store):
        collection = store.create_collection("c", ["duerer"], [])
        store.upsert_local_entity(Entity(id="duerer", kind="person", label="Edited"))
        entities, _ = store.resolve_collection(collection.id)
        assert entities[0].label == "Edited"

    def test_unknown_collection(self, store):
        with pytest.raises(NotFound):
            store.resolve_collection("nope")
