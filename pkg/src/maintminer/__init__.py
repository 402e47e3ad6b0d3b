"""maintminer: git history mining, fine-grained change distilling, and
maintenance-activity analytics."""

__version__ = "0.1.0"

from .activity import Activity, CLASS_ORDER, parse_activity
from .changetypes import CANONICAL_ORDER, ChangeType, parse_change_type

__all__ = [
    "Activity",
    "CLASS_ORDER",
    "parse_activity",
    "ChangeType",
    "CANONICAL_ORDER",
    "parse_change_type",
    "__version__",
]
