from __future__ import annotations

import json

import pytest

import storyatlas
from storyatlas.query import QueryEngine
from storyatlas.store import EntityEventStore
from storyatlas.story import StoryEditor


@pytest.fixture(scope="session")
def sample_path():
    return storyatlas.sample_dataset_path()


@pytest.fixture(scope="session")
def sample_doc(sample_path):
    return json.loads(sample_path.read_text("utf-8"))


@pytest.fixture
def store(sample_path) -> EntityEventStore:
    s = EntityEventStore()
    s.ingest_dataset(sample_path.read_bytes(), mode="strict")
    return s


@pytest.fixture
def engine(store) -> QueryEngine:
    return QueryEngine(store)


@pytest.fixture
def editor(store) -> StoryEditor:
    return StoryEditor(store)


@pytest.fixture
def duerer_collection(store):
    return store.create_collection(
        "Dürer journeys", ["duerer"], [f"ev{i:02d}" for i in range(1, 15)]
    )
