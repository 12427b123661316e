"""Desk-scale curation and slide-story authoring for entity/event data."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def sample_dataset_path() -> Path:
    """Path of the bundled Dürer journeys sample dataset."""
    return Path(resources.files("storyatlas").joinpath("data/duerer_journeys.json"))
