"""Calendar dates with explicit precision and day-resolution comparison.

Historical records are often only year- or month-precise. A ``CalendarDate``
keeps the stated precision; comparisons expand it to the earliest or latest
contained day so that span ordering and overlap tests are well-defined.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from datetime import date

from .errors import MalformedDocument

PRECISIONS = ("day", "month", "year")

_VALUE_RE = re.compile(r"^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?$")


@dataclass(frozen=True)
class CalendarDate:
    """A date of year, month or day precision."""

    year: int
    month: int | None = None
    day: int | None = None

    def __post_init__(self):
        if not 1 <= self.year <= 9999:
            raise MalformedDocument(f"year out of range: {self.year}")
        if self.day is not None and self.month is None:
            raise MalformedDocument("day given without month")
        if self.month is not None and not 1 <= self.month <= 12:
            raise MalformedDocument(f"month out of range: {self.month}")
        if self.day is not None:
            last = calendar.monthrange(self.year, self.month)[1]
            if not 1 <= self.day <= last:
                raise MalformedDocument(f"day out of range: {self.day}")

    @property
    def precision(self) -> str:
        if self.day is not None:
            return "day"
        if self.month is not None:
            return "month"
        return "year"

    @property
    def value(self) -> str:
        if self.day is not None:
            return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"
        if self.month is not None:
            return f"{self.year:04d}-{self.month:02d}"
        return f"{self.year:04d}"

    def earliest_day(self) -> date:
        return date(self.year, self.month or 1, self.day or 1)

    def latest_day(self) -> date:
        if self.day is not None:
            return date(self.year, self.month, self.day)
        if self.month is not None:
            return date(self.year, self.month, calendar.monthrange(self.year, self.month)[1])
        return date(self.year, 12, 31)

    def to_dict(self) -> dict:
        return {"value": self.value, "precision": self.precision}


def parse_calendar_date(raw, *, where: str = "date", strict: bool = True) -> CalendarDate:
    """Parse ``{"value": "YYYY[-MM[-DD]]", "precision": ...}``.

    The precision marker must match the components present in the value.
    Unknown fields are rejected when strict, ignored otherwise.
    """
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object, got {type(raw).__name__}")
    unknown = set(raw) - {"value", "precision"}
    if unknown and strict:
        raise MalformedDocument(f"{where}: unknown fields {sorted(unknown)}")
    value = raw.get("value")
    precision = raw.get("precision")
    if not isinstance(value, str):
        raise MalformedDocument(f"{where}: missing date value")
    m = _VALUE_RE.match(value)
    if not m:
        raise MalformedDocument(f"{where}: bad date value {value!r}")
    year, month, day = (int(g) if g is not None else None for g in m.groups())
    parsed = CalendarDate(year, month, day)
    if precision is None:
        return parsed
    if precision not in PRECISIONS:
        raise MalformedDocument(f"{where}: bad precision {precision!r}")
    if precision != parsed.precision:
        raise MalformedDocument(
            f"{where}: precision {precision!r} does not match value {value!r}"
        )
    return parsed


@dataclass(frozen=True)
class TimeSpan:
    """A possibly open-ended interval between two calendar dates."""

    start: CalendarDate
    end: CalendarDate | None = None

    def __post_init__(self):
        if self.end is not None and self.earliest_day() > self.latest_day():
            raise MalformedDocument(
                f"span start {self.start.value} after end {self.end.value}"
            )

    def earliest_day(self) -> date:
        return self.start.earliest_day()

    def latest_day(self) -> date:
        return (self.end or self.start).latest_day()

    def overlaps(self, other: TimeSpan) -> bool:
        return (
            self.earliest_day() <= other.latest_day()
            and other.earliest_day() <= self.latest_day()
        )

    def to_dict(self) -> dict:
        out = {"start": self.start.to_dict()}
        if self.end is not None:
            out["end"] = self.end.to_dict()
        return out


def parse_time_span(raw, *, where: str = "span", strict: bool = True) -> TimeSpan:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{where}: expected an object, got {type(raw).__name__}")
    unknown = set(raw) - {"start", "end"}
    if unknown and strict:
        raise MalformedDocument(f"{where}: unknown fields {sorted(unknown)}")
    if "start" not in raw:
        raise MalformedDocument(f"{where}: missing start")
    start = parse_calendar_date(raw["start"], where=f"{where}.start", strict=strict)
    end = None
    if raw.get("end") is not None:
        end = parse_calendar_date(raw["end"], where=f"{where}.end", strict=strict)
    return TimeSpan(start, end)
