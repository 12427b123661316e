"""Domain records: entities, events, vocabularies, media, collections.

Record parsers implement the dataset document format: they validate field
types and per-record invariants, but leave cross-record referential checks
to the store.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from urllib.parse import urlparse

from .dates import TimeSpan, parse_time_span
from .errors import InvariantViolation, MalformedDocument

ENTITY_KINDS = ("person", "cultural_object", "place", "group", "historical_event")
MEDIA_KINDS = ("image", "video", "audio", "document")
PROVENANCES = ("imported", "local")


def _require_id(value, *, where: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise MalformedDocument(f"{where}: id must be a non-empty string", path=where)
    return value


@dataclass(frozen=True)
class Term:
    """A vocabulary entry naming an event kind, role or attribute key."""

    id: str
    label: str

    def to_dict(self) -> dict:
        return {"id": self.id, "label": self.label}


@dataclass(frozen=True)
class MediaResource:
    url: str
    media_kind: str
    caption: str | None = None
    alt_text: str | None = None

    def __post_init__(self):
        if self.media_kind not in MEDIA_KINDS:
            raise InvariantViolation(f"unknown media kind {self.media_kind!r}")
        parsed = urlparse(self.url)
        if not parsed.scheme:
            raise InvariantViolation(f"media url is not an absolute URI: {self.url!r}")

    def to_dict(self) -> dict:
        out: dict = {"url": self.url, "media_kind": self.media_kind}
        if self.caption is not None:
            out["caption"] = self.caption
        if self.alt_text is not None:
            out["alt_text"] = self.alt_text
        return out


@dataclass(frozen=True)
class Entity:
    """A potential story protagonist: person, object, place, group or event."""

    id: str
    kind: str
    label: str
    description: str | None = None
    attributes: dict[str, tuple[str, ...]] = field(default_factory=dict)
    coordinates: tuple[float, float] | None = None  # (lon, lat) degrees
    media: tuple[MediaResource, ...] = ()
    provenance: str = "imported"

    def __post_init__(self):
        _require_id(self.id, where="entity")
        if self.kind not in ENTITY_KINDS:
            raise InvariantViolation(f"unknown entity kind {self.kind!r}")
        if not self.label.strip():
            raise InvariantViolation(f"entity {self.id}: label must be non-empty")
        if self.provenance not in PROVENANCES:
            raise InvariantViolation(f"entity {self.id}: bad provenance {self.provenance!r}")
        if self.coordinates is not None:
            if self.kind != "place":
                raise InvariantViolation(
                    f"entity {self.id}: coordinates only allowed on places"
                )
            lon, lat = self.coordinates
            if not -180.0 <= lon <= 180.0 or not -90.0 <= lat <= 90.0:
                raise InvariantViolation(
                    f"entity {self.id}: coordinates ({lon}, {lat}) out of range"
                )

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "kind": self.kind,
            "label": self.label,
            "attributes": {k: list(v) for k, v in sorted(self.attributes.items())},
            "media": [m.to_dict() for m in self.media],
            "provenance": self.provenance,
        }
        if self.description is not None:
            out["description"] = self.description
        if self.coordinates is not None:
            out["coordinates"] = {"lon": self.coordinates[0], "lat": self.coordinates[1]}
        return out


@dataclass(frozen=True)
class Participant:
    entity: str
    role: str

    def to_dict(self) -> dict:
        return {"entity": self.entity, "role": self.role}


@dataclass(frozen=True)
class Event:
    """A time-stamped occurrence linking a kind, a place and participant roles."""

    id: str
    label: str
    kind: str
    span: TimeSpan | None = None
    place: str | None = None
    participants: tuple[Participant, ...] = ()
    provenance: str = "imported"

    def __post_init__(self):
        _require_id(self.id, where="event")
        if not isinstance(self.kind, str) or not self.kind.strip():
            raise InvariantViolation(f"event {self.id}: kind must be non-empty")
        if not self.participants:
            raise InvariantViolation(f"event {self.id}: participants must be non-empty")
        if self.provenance not in PROVENANCES:
            raise InvariantViolation(f"event {self.id}: bad provenance {self.provenance!r}")

    def start_day(self) -> date | None:
        """Day-resolution anchor used for sorting and temporal encodings."""
        return self.span.earliest_day() if self.span else None

    def referenced_entities(self) -> set[str]:
        refs = {p.entity for p in self.participants}
        if self.place is not None:
            refs.add(self.place)
        return refs

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "label": self.label,
            "kind": self.kind,
            "participants": [p.to_dict() for p in self.participants],
            "provenance": self.provenance,
        }
        if self.span is not None:
            out["span"] = self.span.to_dict()
        if self.place is not None:
            out["place"] = self.place
        return out


@dataclass(frozen=True)
class Collection:
    """A named, ordered, curated set of entity and event ids."""

    id: str
    label: str
    entity_ids: tuple[str, ...]
    event_ids: tuple[str, ...]
    created_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc)
    )
    provenance_note: str | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "label": self.label,
            "entity_ids": list(self.entity_ids),
            "event_ids": list(self.event_ids),
            "created_at": self.created_at.isoformat(),
        }
        if self.provenance_note is not None:
            out["provenance_note"] = self.provenance_note
        return out


@dataclass(frozen=True)
class IngestError:
    location: str
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"location": self.location, "code": self.code, "message": self.message}


@dataclass
class IngestReport:
    entities_added: int = 0
    events_added: int = 0
    terms_added: int = 0
    errors: list[IngestError] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "entities_added": self.entities_added,
            "events_added": self.events_added,
            "terms_added": self.terms_added,
            "errors": [e.to_dict() for e in self.errors],
        }


# --- dataset record parsing ------------------------------------------------

_TERM_FIELDS = {"id", "label"}
_ENTITY_FIELDS = {
    "id", "kind", "label", "description", "attributes", "coordinates", "media",
}
_EVENT_FIELDS = {"id", "label", "kind", "span", "place", "participants"}
_MEDIA_FIELDS = {"url", "media_kind", "caption", "alt_text"}
_COORD_FIELDS = {"lon", "lat"}
_PARTICIPANT_FIELDS = {"entity", "role"}


def _check_unknown(raw: dict, allowed: set[str], *, strict: bool, where: str):
    unknown = set(raw) - allowed
    if unknown and strict:
        raise MalformedDocument(f"{where}: unknown fields {sorted(unknown)}", path=where)


def _opt_str(raw: dict, key: str, *, where: str) -> str | None:
    value = raw.get(key)
    if value is not None and not isinstance(value, str):
        raise MalformedDocument(f"{where}.{key}: expected a string", path=where)
    return value


def term_from_dict(raw, *, strict: bool = True, where: str = "term") -> Term:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object", path=where)
    _check_unknown(raw, _TERM_FIELDS, strict=strict, where=where)
    term_id = _require_id(raw.get("id"), where=where)
    label = raw.get("label")
    if not isinstance(label, str) or not label.strip():
        raise MalformedDocument(f"{where}: label must be a non-empty string", path=where)
    return Term(term_id, label)


def media_from_dict(raw, *, strict: bool = True, where: str = "media") -> MediaResource:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object", path=where)
    _check_unknown(raw, _MEDIA_FIELDS, strict=strict, where=where)
    url = raw.get("url")
    media_kind = raw.get("media_kind")
    if not isinstance(url, str) or not isinstance(media_kind, str):
        raise MalformedDocument(f"{where}: url and media_kind are required", path=where)
    return MediaResource(
        url=url,
        media_kind=media_kind,
        caption=_opt_str(raw, "caption", where=where),
        alt_text=_opt_str(raw, "alt_text", where=where),
    )


def entity_from_dict(
    raw, *, strict: bool = True, provenance: str = "imported", where: str = "entity"
) -> Entity:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object", path=where)
    _check_unknown(raw, _ENTITY_FIELDS, strict=strict, where=where)
    entity_id = _require_id(raw.get("id"), where=where)
    kind = raw.get("kind")
    label = raw.get("label")
    if not isinstance(kind, str) or not isinstance(label, str):
        raise MalformedDocument(f"{where}: kind and label are required strings", path=where)

    attributes: dict[str, tuple[str, ...]] = {}
    for term, values in (raw.get("attributes") or {}).items():
        if not isinstance(term, str) or not isinstance(values, list) or not all(
            isinstance(v, str) for v in values
        ):
            raise MalformedDocument(
                f"{where}.attributes: expected map of term -> list of text", path=where
            )
        attributes[term] = tuple(values)

    coordinates = None
    if raw.get("coordinates") is not None:
        coords = raw["coordinates"]
        if not isinstance(coords, dict):
            raise MalformedDocument(f"{where}.coordinates: expected an object", path=where)
        _check_unknown(coords, _COORD_FIELDS, strict=strict, where=f"{where}.coordinates")
        lon, lat = coords.get("lon"), coords.get("lat")
        if not isinstance(lon, (int, float)) or not isinstance(lat, (int, float)):
            raise MalformedDocument(f"{where}.coordinates: lon/lat must be numbers", path=where)
        coordinates = (float(lon), float(lat))

    media = tuple(
        media_from_dict(m, strict=strict, where=f"{where}.media[{i}]")
        for i, m in enumerate(raw.get("media") or [])
    )
    return Entity(
        id=entity_id,
        kind=kind,
        label=label,
        description=_opt_str(raw, "description", where=where),
        attributes=attributes,
        coordinates=coordinates,
        media=media,
        provenance=provenance,
    )


def event_from_dict(
    raw, *, strict: bool = True, provenance: str = "imported", where: str = "event"
) -> Event:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object", path=where)
    _check_unknown(raw, _EVENT_FIELDS, strict=strict, where=where)
    event_id = _require_id(raw.get("id"), where=where)
    label = raw.get("label")
    kind = raw.get("kind")
    if not isinstance(label, str) or not isinstance(kind, str):
        raise MalformedDocument(f"{where}: label and kind are required strings", path=where)

    span = None
    if raw.get("span") is not None:
        span = parse_time_span(raw["span"], where=f"{where}.span", strict=strict)

    raw_participants = raw.get("participants")
    if not isinstance(raw_participants, list) or not raw_participants:
        raise InvariantViolation(f"{where}: participants must be a non-empty list")
    participants = []
    for i, p in enumerate(raw_participants):
        if not isinstance(p, dict):
            raise MalformedDocument(f"{where}.participants[{i}]: expected an object", path=where)
        _check_unknown(p, _PARTICIPANT_FIELDS, strict=strict, where=f"{where}.participants[{i}]")
        entity = p.get("entity")
        role = p.get("role")
        if not isinstance(entity, str) or not isinstance(role, str):
            raise MalformedDocument(
                f"{where}.participants[{i}]: entity and role are required strings", path=where
            )
        participants.append(Participant(entity, role))

    return Event(
        id=event_id,
        label=label,
        kind=kind,
        span=span,
        place=_opt_str(raw, "place", where=where),
        participants=tuple(participants),
        provenance=provenance,
    )
