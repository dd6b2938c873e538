"""Feasibility caps shared by every exhaustive operation.

All searches in this package are desk scale: dense tables over F_p^n and
exhaustive scans over direction tuples, codewords, or coefficient
combinations.  Rather than letting a bad parameter set run unbounded, every
sized operation checks its nominal case count against a cap first and fails
fast with :class:`FeasibilityError`.

Caps can be overridden programmatically, via the ``RMLAB_LIMITS``
environment variable, or via the CLI ``--limits`` flag.  The override string
format is ``table=<int>,exhaustive=<int>`` (either key may be omitted).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_TABLE_CAP = 10**6
DEFAULT_EXHAUSTIVE_CAP = 10**7


class FeasibilityError(Exception):
    """A requested operation exceeds the configured feasibility caps."""

    def __init__(self, what: str, requested: int, cap: int):
        self.what = what
        self.requested = requested
        self.cap = cap
        super().__init__(
            f"{what}: requested size {requested} exceeds cap {cap}"
        )


@dataclass(frozen=True)
class FeasibilityLimits:
    """Caps for dense tables (entries) and exhaustive scans (cases)."""

    table_cap: int = DEFAULT_TABLE_CAP
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP

    def check_table(self, size: int, what: str = "dense table") -> None:
        if size > self.table_cap:
            raise FeasibilityError(what, size, self.table_cap)

    def check_cases(self, count: int, what: str = "exhaustive scan") -> None:
        if count > self.exhaustive_cap:
            raise FeasibilityError(what, count, self.exhaustive_cap)


def parse_limits(spec: str, base: FeasibilityLimits | None = None) -> FeasibilityLimits:
    """Parse a ``table=...,exhaustive=...`` override string."""
    table = (base or DEFAULT_LIMITS).table_cap
    exhaustive = (base or DEFAULT_LIMITS).exhaustive_cap
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        key, _, value = part.partition("=")
        key = key.strip()
        if key == "table":
            table = int(value)
        elif key == "exhaustive":
            exhaustive = int(value)
        else:
            raise ValueError(f"unknown limits key: {key!r}")
    return FeasibilityLimits(table_cap=table, exhaustive_cap=exhaustive)


def limits_from_env(base: FeasibilityLimits | None = None) -> FeasibilityLimits:
    spec = os.environ.get("RMLAB_LIMITS")
    if not spec:
        return base or DEFAULT_LIMITS
    return parse_limits(spec, base)


DEFAULT_LIMITS = FeasibilityLimits()


def resolve(limits: FeasibilityLimits | None) -> FeasibilityLimits:
    return limits if limits is not None else DEFAULT_LIMITS
