"""Deterministic geometry for map and timeline visualizations.

Web-mercator projection on a 256 px world doubling per zoom level, greedy
radius clustering with id-sorted determinism, donut glyph segmentation,
normalized temporal color positions, camera fitting and timeline lane
layout. Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from datetime import date

from .errors import (
    DuplicateId,
    EmptyCluster,
    EmptySelection,
    InvalidConstraint,
    NoDatedEvents,
    OutOfRange,
)

TILE_SIZE = 256
Z_MAX = 16.0
LAT_CLAMP = 85.0511
COLOR_MODES = ("entity_identity", "event_kind", "temporal")
UNDATED_TOKEN = "undated"


def world_size(zoom: float) -> float:
    return TILE_SIZE * 2.0 ** zoom


@dataclass(frozen=True)
class WorldPoint:
    x: float
    y: float
    lon: float
    lat: float


def project_mercator(lon: float, lat: float, zoom: float) -> WorldPoint:
    """Project degrees to world pixels at the given zoom.

    lon = 180 lands exactly on the right world edge (x = world size).
    """
    if not -180.0 <= lon <= 180.0:
        raise OutOfRange(f"lon {lon} outside [-180, 180]")
    if not -LAT_CLAMP <= lat <= LAT_CLAMP:
        raise OutOfRange(f"lat {lat} outside [-{LAT_CLAMP}, {LAT_CLAMP}]")
    size = world_size(zoom)
    phi = math.radians(lat)
    x = (lon + 180.0) / 360.0 * size
    y = (1.0 - math.log(math.tan(phi) + 1.0 / math.cos(phi)) / math.pi) / 2.0 * size
    return WorldPoint(x=x, y=y, lon=lon, lat=lat)


def unproject_mercator(x: float, y: float, zoom: float) -> tuple[float, float]:
    """Inverse of :func:`project_mercator`, returning (lon, lat) degrees."""
    size = world_size(zoom)
    lon = x / size * 360.0 - 180.0
    k = math.pi * (1.0 - 2.0 * y / size)
    lat = math.degrees(math.atan(math.sinh(k)))
    return lon, lat


# --- clustering --------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    seed: str
    members: tuple[str, ...]
    center: tuple[float, float]  # (lon, lat)
    counts_by_category: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "members": list(self.members),
            "center": {"lon": self.center[0], "lat": self.center[1]},
            "counts_by_category": dict(sorted(self.counts_by_category.items())),
        }


def cluster_points(points, zoom: float, radius_px: float) -> list[Cluster]:
    """Greedy radius clustering in world pixels.

    Points are scanned in ascending id order; each unassigned point seeds a
    cluster and absorbs every later unassigned point within ``radius_px``.
    The result is invariant under permutation of the input.
    """
    if radius_px <= 0:
        raise OutOfRange(f"radius_px must be > 0, got {radius_px}")
    seen = set()
    prepared = []
    for pid, lon, lat, category in points:
        if pid in seen:
            raise DuplicateId(f"duplicate point id {pid!r}")
        seen.add(pid)
        wp = project_mercator(lon, lat, zoom)
        prepared.append((pid, wp.x, wp.y, category))
    prepared.sort(key=lambda p: p[0])

    clusters: list[Cluster] = []
    assigned = [False] * len(prepared)
    for i, (seed_id, sx, sy, seed_cat) in enumerate(prepared):
        if assigned[i]:
            continue
        assigned[i] = True
        members = [(seed_id, sx, sy, seed_cat)]
        for j in range(i + 1, len(prepared)):
            if assigned[j]:
                continue
            pid, px, py, cat = prepared[j]
            if math.hypot(px - sx, py - sy) <= radius_px:
                assigned[j] = True
                members.append((pid, px, py, cat))
        mean_x = sum(m[1] for m in members) / len(members)
        mean_y = sum(m[2] for m in members) / len(members)
        clusters.append(
            Cluster(
                seed=seed_id,
                members=tuple(m[0] for m in members),
                center=unproject_mercator(mean_x, mean_y, zoom),
                counts_by_category=dict(Counter(m[3] for m in members)),
            )
        )
    return clusters


# --- donut glyphs -------------------------------------------------------


@dataclass(frozen=True)
class DonutSegment:
    category: str
    start_angle: float  # degrees, clockwise from -90 (12 o'clock)
    end_angle: float
    fraction: float

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "start_angle": self.start_angle,
            "end_angle": self.end_angle,
            "fraction": self.fraction,
        }


def donut_segments(counts_by_category: dict[str, int]) -> list[DonutSegment]:
    """Partition the ring [-90, 270) into per-category segments.

    Categories are laid out in ascending key order, spans proportional to
    counts; zero-count categories are dropped.
    """
    for category, count in counts_by_category.items():
        if count < 0:
            raise OutOfRange(f"negative count for category {category!r}")
    positive = [(c, n) for c, n in sorted(counts_by_category.items()) if n > 0]
    total = sum(n for _, n in positive)
    if total == 0:
        raise EmptyCluster("donut requires a positive total count")
    segments = []
    cumulative = 0
    for category, count in positive:
        start = -90.0 + 360.0 * cumulative / total
        cumulative += count
        end = -90.0 + 360.0 * cumulative / total
        segments.append(
            DonutSegment(category=category, start_angle=start, end_angle=end,
                         fraction=count / total)
        )
    return segments


# --- temporal scale ------------------------------------------------------


def temporal_color_position(t: date, window: tuple[date, date]) -> float:
    """Normalized [0, 1] position of a day within a day-resolution window."""
    start, end = window
    if start > end:
        raise OutOfRange(f"window start {start} after end {end}")
    if start == end:
        return 0.5
    raw = (t.toordinal() - start.toordinal()) / (end.toordinal() - start.toordinal())
    return min(1.0, max(0.0, raw))


@dataclass(frozen=True)
class ColorAssignment:
    mode: str
    mapping: dict[str, object]  # id -> categorical index | scalar t | "undated"

    def to_dict(self) -> dict:
        return {"mode": self.mode, "mapping": dict(sorted(self.mapping.items()))}


def assign_colors(items, mode: str, palette_size: int = 12) -> ColorAssignment:
    """Color tokens per item under one of the three coloring modes.

    items: iterable of (id, entity, kind, date-or-None). Categorical modes
    index categories by first appearance in id-sorted order, modulo the
    palette size; temporal mode maps dates onto the item set's min-max
    window and marks undated items with the ``undated`` sentinel.
    """
    if mode not in COLOR_MODES:
        raise InvalidConstraint(f"unknown coloring mode {mode!r}")
    rows = sorted(items, key=lambda r: r[0])
    mapping: dict[str, object] = {}
    if mode == "temporal":
        dated = [r[3] for r in rows if r[3] is not None]
        window = (min(dated), max(dated)) if dated else None
        for item_id, _, _, day in rows:
            if day is None:
                mapping[item_id] = UNDATED_TOKEN
            else:
                mapping[item_id] = temporal_color_position(day, window)
        return ColorAssignment(mode=mode, mapping=mapping)

    if palette_size < 1:
        raise OutOfRange(f"palette_size must be >= 1, got {palette_size}")
    category_index: dict[str, int] = {}
    for item_id, entity, kind, _ in rows:
        category = entity if mode == "entity_identity" else kind
        if category not in category_index:
            category_index[category] = len(category_index)
        mapping[item_id] = category_index[category] % palette_size
    return ColorAssignment(mode=mode, mapping=mapping)


# --- camera fitting -------------------------------------------------------


@dataclass(frozen=True)
class CameraState:
    lon: float
    lat: float
    zoom: float

    def __post_init__(self):
        if not 0.0 <= self.zoom <= Z_MAX:
            raise OutOfRange(f"zoom {self.zoom} outside [0, {Z_MAX}]")

    def to_dict(self) -> dict:
        return {"center": {"lon": self.lon, "lat": self.lat}, "zoom": self.zoom}


def fit_camera(points, viewport: tuple[float, float], padding_px: float) -> CameraState:
    """Camera centered on the bounding box of the points, zoomed to fit.

    The returned zoom is continuous and clamped to [0, Z_MAX]. Containment
    inside the padded viewport is guaranteed whenever each padded viewport
    axis is at least one world tile (256 px); no antimeridian handling.
    """
    pts = list(points)
    if not pts:
        raise EmptySelection("camera fitting requires at least one point")
    width, height = viewport
    inner_w = width - 2 * padding_px
    inner_h = height - 2 * padding_px
    if inner_w <= 0 or inner_h <= 0:
        raise OutOfRange(f"padding {padding_px} leaves no viewport inside {viewport}")

    projected = [project_mercator(lon, lat, 0) for lon, lat in pts]
    min_x = min(p.x for p in projected)
    max_x = max(p.x for p in projected)
    min_y = min(p.y for p in projected)
    max_y = max(p.y for p in projected)
    box_w = max_x - min_x
    box_h = max_y - min_y

    if box_w == 0 and box_h == 0:
        return CameraState(lon=pts[0][0], lat=pts[0][1], zoom=Z_MAX)

    candidates = []
    if box_w > 0:
        candidates.append(math.log2(inner_w / box_w))
    if box_h > 0:
        candidates.append(math.log2(inner_h / box_h))
    zoom = min(max(min(candidates), 0.0), Z_MAX)
    lon, lat = unproject_mercator((min_x + max_x) / 2, (min_y + max_y) / 2, 0)
    return CameraState(lon=lon, lat=lat, zoom=zoom)


# --- timeline layout -------------------------------------------------------


@dataclass(frozen=True)
class TimelinePlacement:
    id: str
    x: float
    lane: int

    def to_dict(self) -> dict:
        return {"id": self.id, "x": self.x, "lane": self.lane}


@dataclass(frozen=True)
class TimelineCluster:
    lane: int
    seed: str
    members: tuple[str, ...]
    center_x: float

    def to_dict(self) -> dict:
        return {
            "lane": self.lane,
            "seed": self.seed,
            "members": list(self.members),
            "center_x": self.center_x,
        }


@dataclass(frozen=True)
class TimelineLayout:
    placements: tuple[TimelinePlacement, ...]
    clusters: tuple[TimelineCluster, ...]
    undated: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "placements": [p.to_dict() for p in self.placements],
            "clusters": [c.to_dict() for c in self.clusters],
            "undated": list(self.undated),
        }


def timeline_layout(
    events, width_px: float, margin_px: float, cluster_radius_px: float
) -> TimelineLayout:
    """Lay events out on horizontal per-entity lanes.

    events: iterable of (id, entity, date-or-None). Lanes are ordered by
    each entity's earliest event; within a lane events cluster greedily on
    the x axis by the same rule as map clustering. Undated events are left
    out of the layout and reported separately.
    """
    inner = width_px - 2 * margin_px
    if inner <= 0:
        raise OutOfRange(f"margin {margin_px} leaves no usable width in {width_px}")
    if cluster_radius_px <= 0:
        raise OutOfRange(f"cluster_radius_px must be > 0, got {cluster_radius_px}")

    rows = sorted(events, key=lambda r: r[0])
    seen = set()
    for row in rows:
        if row[0] in seen:
            raise DuplicateId(f"duplicate event id {row[0]!r}")
        seen.add(row[0])
    dated = [r for r in rows if r[2] is not None]
    undated = tuple(r[0] for r in rows if r[2] is None)
    if not dated:
        raise NoDatedEvents("timeline layout requires at least one dated event")

    window = (min(r[2] for r in dated), max(r[2] for r in dated))
    xs = {
        r[0]: margin_px + temporal_color_position(r[2], window) * inner for r in dated
    }

    earliest: dict[str, date] = {}
    for _, entity, day in dated:
        if entity not in earliest or day < earliest[entity]:
            earliest[entity] = day
    lane_of = {
        entity: lane
        for lane, entity in enumerate(
            sorted(earliest, key=lambda e: (earliest[e], e))
        )
    }

    placements = tuple(
        TimelinePlacement(id=r[0], x=xs[r[0]], lane=lane_of[r[1]])
        for r in sorted(dated, key=lambda r: (lane_of[r[1]], xs[r[0]], r[0]))
    )

    clusters: list[TimelineCluster] = []
    for entity in sorted(lane_of, key=lane_of.get):
        lane_rows = [r for r in dated if r[1] == entity]  # already id-sorted
        assigned = [False] * len(lane_rows)
        for i, (seed_id, _, _) in enumerate(lane_rows):
            if assigned[i]:
                continue
            assigned[i] = True
            members = [seed_id]
            for j in range(i + 1, len(lane_rows)):
                if assigned[j]:
                    continue
                pid = lane_rows[j][0]
                if abs(xs[pid] - xs[seed_id]) <= cluster_radius_px:
                    assigned[j] = True
                    members.append(pid)
            clusters.append(
                TimelineCluster(
                    lane=lane_of[entity],
                    seed=seed_id,
                    members=tuple(members),
                    center_x=sum(xs[m] for m in members) / len(members),
                )
            )
    return TimelineLayout(placements=placements, clusters=tuple(clusters), undated=undated)
