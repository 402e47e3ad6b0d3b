"""The three maintenance activities and label parsing."""

from __future__ import annotations

import enum


class Activity(enum.Enum):
    """Maintenance activity of a commit."""

    CORRECTIVE = "corrective"
    PERFECTIVE = "perfective"
    ADAPTIVE = "adaptive"

    def __str__(self):
        return self.value


#: Canonical class order used by confusion matrices (alphabetical).
CLASS_ORDER = (Activity.ADAPTIVE, Activity.CORRECTIVE, Activity.PERFECTIVE)

_ALIASES = {
    "c": Activity.CORRECTIVE,
    "corrective": Activity.CORRECTIVE,
    "p": Activity.PERFECTIVE,
    "perfective": Activity.PERFECTIVE,
    "a": Activity.ADAPTIVE,
    "adaptive": Activity.ADAPTIVE,
}


def parse_activity(token: str) -> Activity:
    """Parse a label token; accepts full names and the a/c/p shorthand."""
    try:
        return _ALIASES[token.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown activity label: {token!r}") from None
