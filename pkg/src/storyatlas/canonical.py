"""Canonical JSON serialization.

Exports must be byte-stable: keys sorted at every level, no insignificant
whitespace, numbers rendered as Python's shortest round-trip decimals, UTF-8
without ASCII escaping. Two structurally equal documents always serialize to
identical bytes, which makes round-trip and diff-based testing exact.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_bytes(obj: Any) -> bytes:
    return json.dumps(
        obj,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    ).encode("utf-8")


def canonical_str(obj: Any) -> str:
    return canonical_bytes(obj).decode("utf-8")
