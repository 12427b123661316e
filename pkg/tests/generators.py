"""Seeded random data builders shared by module and acceptance tests."""

from __future__ import annotations

import calendar
import json
import random

from storyatlas.dates import CalendarDate, TimeSpan
from storyatlas.models import MediaResource
from storyatlas.query import QueryConstraints
from storyatlas.store import EntityEventStore
from storyatlas.story import (
    LAYOUTS,
    HtmlChunk,
    ImageChunk,
    QuizChunk,
    StoryEditor,
    TextChunk,
    VideoChunk,
    VisualizationPanel,
)

WORDS = (
    "Amber", "Bridge", "Chapel", "Dürer", "Engraving", "Forge", "Guild",
    "Harbor", "atelier", "bastion", "chronicle", "diary", "eaves", "fresco",
    "Õlimaal", "Überfahrt", "łąka", "vineyard", "workshop", "quay",
)
EVENT_KINDS = ("birth", "death", "travel", "stay", "creation", "meeting")
ROLES = ("subject", "traveler", "creator", "witness", "patron")
OCCUPATIONS = ("painter", "printmaker", "sculptor", "goldsmith", "scribe")
ENTITY_KIND_POOL = (
    "person", "person", "person", "place", "place", "place",
    "cultural_object", "group", "historical_event",
)


def random_label(rng: random.Random) -> str:
    return f"{rng.choice(WORDS)} {rng.choice(WORDS)} {rng.randrange(1000)}"


def random_date_dict(rng: random.Random) -> dict:
    year = rng.randrange(1400, 1900)
    precision = rng.choice(("year", "month", "day"))
    if precision == "year":
        return {"value": f"{year:04d}", "precision": "year"}
    month = rng.randrange(1, 13)
    if precision == "month":
        return {"value": f"{year:04d}-{month:02d}", "precision": "month"}
    day = rng.randrange(1, calendar.monthrange(year, month)[1] + 1)
    return {"value": f"{year:04d}-{month:02d}-{day:02d}", "precision": "day"}


def random_span_dict(rng: random.Random) -> dict:
    start = random_date_dict(rng)
    span = {"start": start}
    if rng.random() < 0.5:
        end_year = int(start["value"][:4]) + rng.randrange(0, 10)
        span["end"] = {"value": f"{min(end_year, 1920):04d}", "precision": "year"}
    return span


def random_dataset(rng: random.Random, n_entities: int = 40, n_events: int = 80) -> dict:
    """A referentially valid dataset document with varied record shapes."""
    entities = []
    place_ids = []
    for i in range(n_entities):
        kind = rng.choice(ENTITY_KIND_POOL)
        record = {"id": f"e{i:04d}", "kind": kind, "label": random_label(rng)}
        if kind == "place":
            place_ids.append(record["id"])
            if rng.random() < 0.8:
                record["coordinates"] = {
                    "lon": round(rng.uniform(-170, 170), 4),
                    "lat": round(rng.uniform(-80, 80), 4),
                }
        if kind == "person" and rng.random() < 0.6:
            record["attributes"] = {
                "occupation": rng.sample(OCCUPATIONS, rng.randrange(1, 3))
            }
        entities.append(record)

    events = []
    for i in range(n_events):
        record = {
            "id": f"v{i:04d}",
            "label": random_label(rng),
            "kind": rng.choice(EVENT_KINDS),
            "participants": [
                {"entity": e["id"], "role": rng.choice(ROLES)}
                for e in rng.sample(entities, rng.randrange(1, 3))
            ],
        }
        if rng.random() < 0.85:
            record["span"] = random_span_dict(rng)
        if place_ids and rng.random() < 0.7:
            record["place"] = rng.choice(place_ids)
        events.append(record)

    terms = [{"id": k, "label": k.title()} for k in EVENT_KINDS]
    return {"vocabularies": terms, "entities": entities, "events": events}


def random_store(rng: random.Random, n_entities: int = 40, n_events: int = 80):
    store = EntityEventStore()
    doc = random_dataset(rng, n_entities, n_events)
    store.ingest_dataset(json.dumps(doc).encode("utf-8"), mode="strict")
    return store


def random_constraints(rng: random.Random, store: EntityEventStore) -> QueryConstraints:
    entities = store.entities()
    kwargs = {}
    if rng.random() < 0.4:
        target = rng.choice(entities)
        piece = target.label[
            rng.randrange(0, max(1, len(target.label) - 3)) :
        ][: rng.randrange(1, 6)]
        kwargs["name_contains"] = piece if rng.random() < 0.7 else piece.upper()
    if rng.random() < 0.4:
        kwargs["kinds"] = frozenset(
            rng.sample(
                ["person", "place", "cultural_object", "group", "historical_event"],
                rng.randrange(1, 3),
            )
        )
    if rng.random() < 0.3:
        kwargs["attribute_equals"] = (("occupation", rng.choice(OCCUPATIONS)),)
    if rng.random() < 0.4:
        year = rng.randrange(1400, 1900)
        kwargs["active_between"] = TimeSpan(
            CalendarDate(year), CalendarDate(min(year + rng.randrange(0, 60), 1920))
        )
    if rng.random() < 0.25:
        places = [e for e in entities if e.kind == "place"]
        if places:
            kwargs["related_place"] = rng.choice(places).id
    return QueryConstraints(**kwargs)


# --- random stories -------------------------------------------------------


def random_chunk(rng: random.Random):
    roll = rng.random()
    if roll < 0.4:
        return TextChunk(random_label(rng), settings={"align": rng.choice(["left", "right"])})
    if roll < 0.55:
        return ImageChunk(
            MediaResource(
                url=f"https://example.org/img/{rng.randrange(10_000)}.jpg",
                media_kind="image",
                alt_text=random_label(rng),
            )
        )
    if roll < 0.7:
        return VideoChunk(
            MediaResource(
                url=f"https://example.org/clip/{rng.randrange(10_000)}.mp4",
                media_kind="video",
                caption=random_label(rng),
            )
        )
    if roll < 0.9:
        n = rng.randrange(2, 5)
        return QuizChunk(
            question=random_label(rng),
            options=tuple(random_label(rng) for _ in range(n)),
            correct=frozenset(rng.sample(range(n), rng.randrange(1, n))),
        )
    return HtmlChunk(markup=f"<b>{random_label(rng)}</b>")


def random_panel(rng: random.Random, store: EntityEventStore, collection) -> VisualizationPanel:
    event_pool = list(collection.event_ids)
    entity_pool = list(collection.entity_ids)
    return VisualizationPanel(
        kind=rng.choice(("map", "timeline")),
        entity_ids=set(rng.sample(entity_pool, min(len(entity_pool), rng.randrange(0, 3)))),
        event_ids=set(rng.sample(event_pool, min(len(event_pool), rng.randrange(1, 6)))),
        coloring=rng.choice(("entity_identity", "event_kind", "temporal")),
        clustered=rng.random() < 0.5,
        glyph=rng.choice(("donut", "dot")),
        settings={"cluster_radius": rng.randrange(10, 60)},
    )


def random_edit_step(rng: random.Random, editor: StoryEditor, story,
                     store: EntityEventStore, collection) -> str:
    """Apply one random editing operation, sometimes with invalid arguments.

    Returns a short description; raises whatever the operation raises.
    """
    layout_ids = sorted(LAYOUTS)
    slide_ids = [s.id for s, _, _, _ in story.walk()]
    slide_ids.append("no-such-slide")

    def any_slide():
        return rng.choice(slide_ids)

    roll = rng.randrange(9)
    if roll == 0:
        index = rng.randrange(-1, len(story.slides) + 2)
        editor.add_slide(story, rng.choice(layout_ids + ["BOGUS"]), index)
        return "add_slide"
    if roll == 1:
        editor.add_nested_slide(story, any_slide(), rng.choice(layout_ids))
        return "add_nested_slide"
    if roll == 2:
        editor.duplicate_slide(story, any_slide())
        return "duplicate_slide"
    if roll == 3:
        editor.delete_slide(story, any_slide())
        return "delete_slide"
    if roll == 4:
        editor.move_slide(story, any_slide(), rng.randrange(-1, len(story.slides) + 2))
        return "move_slide"
    if roll == 5:
        editor.set_layout(story, any_slide(), rng.choice(layout_ids))
        return "set_layout"
    if roll == 6:
        if rng.random() < 0.15:
            chunk = QuizChunk(question="q", options=("a", "b"), correct=frozenset())
        else:
            chunk = random_chunk(rng)
        editor.add_content_chunk(story, any_slide(), rng.randrange(0, 3), chunk)
        return "add_content_chunk"
    if roll == 7:
        panel = random_panel(rng, store, collection)
        if rng.random() < 0.2:
            panel.event_ids = set(panel.event_ids) | {"foreign-event"}
        editor.attach_visualization(story, any_slide(), panel)
        return "attach_visualization"
    target = any_slide()
    pool: list[str] = []
    for slide, _, _, _ in story.walk():
        if slide.id == target and slide.viz is not None:
            pool = sorted(slide.viz.event_ids)
    focus = rng.sample(pool, rng.randrange(0, len(pool) + 1)) if pool else []
    if rng.random() < 0.2:
        focus.append("foreign-event")
    editor.set_focus_events(story, target, focus)
    return "set_focus_events"


def random_story(rng: random.Random, editor: StoryEditor, store: EntityEventStore,
                 collection, n_slides: int = 5):
    """A valid story assembled through editor operations only."""
    story = editor.create_story(random_label(rng), collection.id)
    layout_ids = sorted(LAYOUTS)
    for _ in range(n_slides):
        layout = rng.choice(layout_ids)
        slide = editor.add_slide(story, layout, rng.randrange(0, len(story.slides) + 1))
        template = LAYOUTS[layout]
        if template.viz_slots and rng.random() < 0.8:
            editor.attach_visualization(story, slide.id, random_panel(rng, store, collection))
            panel = slide.viz
            if panel is not None and panel.kind == "map" and rng.random() < 0.5:
                with_places = [
                    e for e in panel.event_ids
                    if store.get_event(e).place is not None
                    and store.get_entity(store.get_event(e).place).coordinates is not None
                ]
                if with_places:
                    editor.set_focus_events(
                        story, slide.id,
                        rng.sample(with_places, rng.randrange(1, len(with_places) + 1)),
                    )
        for pane_index in range(template.pane_slots):
            for _ in range(rng.randrange(0, 3)):
                editor.add_content_chunk(story, slide.id, pane_index, random_chunk(rng))
        if rng.random() < 0.4:
            child = editor.add_nested_slide(story, slide.id, rng.choice(layout_ids))
            child_template = LAYOUTS[child.layout]
            for pane_index in range(child_template.pane_slots):
                if rng.random() < 0.6:
                    editor.add_content_chunk(story, child.id, pane_index, random_chunk(rng))
        if rng.random() < 0.3 and len(story.slides) > 1:
            editor.move_slide(
                story, rng.choice(story.slides).id, rng.randrange(0, len(story.slides))
            )
        if rng.random() < 0.2:
            editor.duplicate_slide(story, rng.choice(story.slides).id)
    return story
