"""Faceted entity search with facet-distribution histograms.

Desk-scale retrieval: a predicate scan over a per-revision snapshot of the
store, with small derived indexes for event lookups. Correctness is defined
by equivalence with a naive full scan, which the test suite enforces.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .dates import TimeSpan, parse_calendar_date, parse_time_span
from .errors import InvalidConstraint, NotFound
from .models import ENTITY_KINDS, Entity, Event
from .store import EntityEventStore

FACETS = ("entity_kind", "event_kind", "attribute", "decade_of_activity")

MAX_PAGE_LIMIT = 500


@dataclass(frozen=True)
class QueryConstraints:
    """Conjunctive entity filters; the empty object matches everything."""

    name_contains: str | None = None
    kinds: frozenset[str] | None = None
    attribute_equals: tuple[tuple[str, str], ...] = ()
    active_between: TimeSpan | None = None
    related_place: str | None = None

    def to_dict(self) -> dict:
        out: dict = {}
        if self.name_contains is not None:
            out["name_contains"] = self.name_contains
        if self.kinds is not None:
            out["kinds"] = sorted(self.kinds)
        if self.attribute_equals:
            out["attribute_equals"] = [[t, v] for t, v in self.attribute_equals]
        if self.active_between is not None:
            out["active_between"] = self.active_between.to_dict()
        if self.related_place is not None:
            out["related_place"] = self.related_place
        return out


_CONSTRAINT_FIELDS = {
    "name_contains", "kinds", "attribute_equals", "active_between", "related_place",
}


def constraints_from_dict(raw) -> QueryConstraints:
    if raw is None:
        return QueryConstraints()
    if not isinstance(raw, dict):
        raise InvalidConstraint("constraints must be an object")
    unknown = set(raw) - _CONSTRAINT_FIELDS
    if unknown:
        raise InvalidConstraint(f"unknown constraint fields {sorted(unknown)}")

    name_contains = raw.get("name_contains")
    if name_contains is not None and not isinstance(name_contains, str):
        raise InvalidConstraint("name_contains must be a string")

    kinds = None
    if raw.get("kinds") is not None:
        if not isinstance(raw["kinds"], (list, set, tuple)):
            raise InvalidConstraint("kinds must be a list")
        kinds = frozenset(raw["kinds"])
        bad = kinds - set(ENTITY_KINDS)
        if bad:
            raise InvalidConstraint(f"unknown entity kinds {sorted(bad)}")

    attribute_equals: list[tuple[str, str]] = []
    for pair in raw.get("attribute_equals") or []:
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, str) for x in pair)
        ):
            raise InvalidConstraint("attribute_equals entries must be [term, value] pairs")
        attribute_equals.append((pair[0], pair[1]))

    active_between = None
    if raw.get("active_between") is not None:
        try:
            active_between = parse_time_span(raw["active_between"], where="active_between")
        except Exception as exc:
            raise InvalidConstraint(f"bad active_between span: {exc}") from exc

    related_place = raw.get("related_place")
    if related_place is not None and not isinstance(related_place, str):
        raise InvalidConstraint("related_place must be an entity id string")

    return QueryConstraints(
        name_contains=name_contains,
        kinds=kinds,
        attribute_equals=tuple(attribute_equals),
        active_between=active_between,
        related_place=related_place,
    )


@dataclass(frozen=True)
class ResultItem:
    id: str
    label: str
    kind: str

    def to_dict(self) -> dict:
        return {"id": self.id, "label": self.label, "kind": self.kind}


@dataclass(frozen=True)
class ResultPage:
    items: tuple[ResultItem, ...]
    total: int
    offset: int
    limit: int

    def to_dict(self) -> dict:
        return {
            "items": [i.to_dict() for i in self.items],
            "total": self.total,
            "offset": self.offset,
            "limit": self.limit,
        }


@dataclass(frozen=True)
class HistogramBin:
    label: str
    count: int

    def to_dict(self) -> dict:
        return {"label": self.label, "count": self.count}


@dataclass(frozen=True)
class Histogram:
    facet: str
    bins: tuple[HistogramBin, ...]
    total_matched: int

    def to_dict(self) -> dict:
        return {
            "facet": self.facet,
            "bins": [b.to_dict() for b in self.bins],
            "total_matched": self.total_matched,
        }


@dataclass(frozen=True)
class RelatedEntity:
    id: str
    label: str
    via: str  # witnessing event id

    def to_dict(self) -> dict:
        return {"id": self.id, "label": self.label, "via": self.via}


@dataclass
class _EventRow:
    """Per-event derivations reused across queries."""

    event: Event
    refs: frozenset[str]
    bounds: tuple[int, int] | None  # (earliest, latest) day ordinals
    decade: str | None


@dataclass
class _Snapshot:
    revision: int
    entities_sorted: list[Entity] = field(default_factory=list)  # by (label_cf, id)
    events: list[Event] = field(default_factory=list)
    rows: list[_EventRow] = field(default_factory=list)
    bounds_by_entity: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    events_by_entity: dict[str, list[Event]] = field(default_factory=dict)
    places_by_participant: dict[str, set[str]] = field(default_factory=dict)


class QueryEngine:
    """Read-only search over store snapshots; rebuilt lazily per revision."""

    def __init__(self, store: EntityEventStore):
        self._store = store
        self._snapshot: _Snapshot | None = None

    def _snap(self) -> _Snapshot:
        snap = self._snapshot
        if snap is not None and snap.revision == self._store.revision:
            return snap
        revision = self._store.revision
        entities = self._store.entities()
        events = self._store.events()
        snap = _Snapshot(
            revision=revision,
            entities_sorted=sorted(entities, key=lambda e: (e.label.casefold(), e.id)),
            events=events,
        )
        for event in events:
            refs = frozenset(event.referenced_entities())
            bounds = None
            decade = None
            if event.span is not None:
                earliest = event.span.earliest_day()
                bounds = (earliest.toordinal(), event.span.latest_day().toordinal())
                decade = str(earliest.year // 10 * 10)
            snap.rows.append(_EventRow(event, refs, bounds, decade))
            for ref in refs:
                snap.events_by_entity.setdefault(ref, []).append(event)
                if bounds is not None:
                    snap.bounds_by_entity.setdefault(ref, []).append(bounds)
            if event.place is not None:
                for participant in event.participants:
                    snap.places_by_participant.setdefault(
                        participant.entity, set()
                    ).add(event.place)
        self._snapshot = snap
        return snap

    @staticmethod
    def _predicate(snap: _Snapshot, c: QueryConstraints):
        """Compile the constraint object into one entity predicate."""
        needle = c.name_contains.casefold() if c.name_contains is not None else None
        window = None
        if c.active_between is not None:
            window = (
                c.active_between.earliest_day().toordinal(),
                c.active_between.latest_day().toordinal(),
            )

        def check(entity: Entity) -> bool:
            if needle is not None and needle not in entity.label.casefold():
                return False
            if c.kinds is not None and entity.kind not in c.kinds:
                return False
            for term, value in c.attribute_equals:
                if value not in entity.attributes.get(term, ()):
                    return False
            if window is not None:
                lo, hi = window
                spans = snap.bounds_by_entity.get(entity.id, ())
                if not any(s_lo <= hi and lo <= s_hi for s_lo, s_hi in spans):
                    return False
            if c.related_place is not None:
                if c.related_place not in snap.places_by_participant.get(entity.id, ()):
                    return False
            return True

        return check

    def _matched(self, c: QueryConstraints) -> tuple[_Snapshot, list[Entity]]:
        snap = self._snap()
        check = self._predicate(snap, c)
        return snap, [e for e in snap.entities_sorted if check(e)]

    def search_entities(
        self, c: QueryConstraints, offset: int = 0, limit: int = 50
    ) -> ResultPage:
        if not 1 <= limit <= MAX_PAGE_LIMIT:
            raise InvalidConstraint(f"limit must be in [1, {MAX_PAGE_LIMIT}], got {limit}")
        if offset < 0:
            raise InvalidConstraint(f"offset must be >= 0, got {offset}")
        _, matched = self._matched(c)
        items = tuple(
            ResultItem(e.id, e.label, e.kind) for e in matched[offset : offset + limit]
        )
        return ResultPage(items=items, total=len(matched), offset=offset, limit=limit)

    def facet_histogram(
        self, c: QueryConstraints, facet: str, attribute_term: str | None = None
    ) -> Histogram:
        if facet not in FACETS:
            raise InvalidConstraint(f"unknown facet {facet!r}")
        if facet == "attribute" and not attribute_term:
            raise InvalidConstraint("attribute facet requires a term")
        snap, matched = self._matched(c)
        matched_ids = {e.id for e in matched}

        counts: Counter[str] = Counter()
        if facet == "entity_kind":
            counts.update(e.kind for e in matched)
        elif facet == "attribute":
            for entity in matched:
                counts.update(entity.attributes.get(attribute_term, ()))
        else:
            # event facets: each event touching the match set counts once
            for row in snap.rows:
                if matched_ids.isdisjoint(row.refs):
                    continue
                if facet == "event_kind":
                    counts[row.event.kind] += 1
                elif row.decade is not None:
                    counts[row.decade] += 1

        if facet == "decade_of_activity":
            bins = tuple(
                HistogramBin(label, counts[label])
                for label in sorted(counts, key=int)
            )
        else:
            bins = tuple(
                HistogramBin(label, count)
                for label, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            )
        facet_name = f"attribute:{attribute_term}" if facet == "attribute" else facet
        return Histogram(facet=facet_name, bins=bins, total_matched=len(matched))

    def related_entities(self, entity_id: str, max_hops: int = 1) -> list[RelatedEntity]:
        if max_hops != 1:
            raise InvalidConstraint("only single-hop relatedness is supported")
        snap = self._snap()
        if not self._store.has_entity(entity_id):
            raise NotFound(f"entity {entity_id!r} not found")
        witness: dict[str, str] = {}
        for event in snap.events_by_entity.get(entity_id, []):
            for ref in event.referenced_entities():
                if ref == entity_id:
                    continue
                if ref not in witness or event.id < witness[ref]:
                    witness[ref] = event.id
        related = []
        for ref, via in witness.items():
            record = self._store.get_entity(ref)
            related.append(RelatedEntity(id=ref, label=record.label, via=via))
        return sorted(related, key=lambda r: (r.label, r.id))
