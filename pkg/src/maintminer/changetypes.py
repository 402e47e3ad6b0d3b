"""The closed 48-name taxonomy of fine-grained source code changes.

47 concrete change kinds plus UNKNOWN for edits the distiller cannot
classify.  The serialized spelling is the exact uppercase name; vector
encodings use the frozen alphabetical order of CANONICAL_ORDER.
"""

from __future__ import annotations

import enum
import hashlib


class ChangeType(enum.Enum):
    ADDING_ATTRIBUTE_MODIFIABILITY = "ADDING_ATTRIBUTE_MODIFIABILITY"
    ADDING_CLASS_DERIVABILITY = "ADDING_CLASS_DERIVABILITY"
    ADDING_METHOD_OVERRIDABILITY = "ADDING_METHOD_OVERRIDABILITY"
    ADDITIONAL_CLASS = "ADDITIONAL_CLASS"
    ADDITIONAL_FUNCTIONALITY = "ADDITIONAL_FUNCTIONALITY"
    ADDITIONAL_OBJECT_STATE = "ADDITIONAL_OBJECT_STATE"
    ALTERNATIVE_PART_DELETE = "ALTERNATIVE_PART_DELETE"
    ALTERNATIVE_PART_INSERT = "ALTERNATIVE_PART_INSERT"
    ATTRIBUTE_RENAMING = "ATTRIBUTE_RENAMING"
    ATTRIBUTE_TYPE_CHANGE = "ATTRIBUTE_TYPE_CHANGE"
    CLASS_RENAMING = "CLASS_RENAMING"
    COMMENT_DELETE = "COMMENT_DELETE"
    COMMENT_INSERT = "COMMENT_INSERT"
    COMMENT_MOVE = "COMMENT_MOVE"
    COMMENT_UPDATE = "COMMENT_UPDATE"
    CONDITION_EXPRESSION_CHANGE = "CONDITION_EXPRESSION_CHANGE"
    DECREASING_ACCESSIBILITY_CHANGE = "DECREASING_ACCESSIBILITY_CHANGE"
    DOC_DELETE = "DOC_DELETE"
    DOC_INSERT = "DOC_INSERT"
    DOC_UPDATE = "DOC_UPDATE"
    INCREASING_ACCESSIBILITY_CHANGE = "INCREASING_ACCESSIBILITY_CHANGE"
    METHOD_RENAMING = "METHOD_RENAMING"
    PARAMETER_DELETE = "PARAMETER_DELETE"
    PARAMETER_INSERT = "PARAMETER_INSERT"
    PARAMETER_ORDERING_CHANGE = "PARAMETER_ORDERING_CHANGE"
    PARAMETER_RENAMING = "PARAMETER_RENAMING"
    PARAMETER_TYPE_CHANGE = "PARAMETER_TYPE_CHANGE"
    PARENT_CLASS_CHANGE = "PARENT_CLASS_CHANGE"
    PARENT_CLASS_DELETE = "PARENT_CLASS_DELETE"
    PARENT_CLASS_INSERT = "PARENT_CLASS_INSERT"
    PARENT_INTERFACE_CHANGE = "PARENT_INTERFACE_CHANGE"
    PARENT_INTERFACE_DELETE = "PARENT_INTERFACE_DELETE"
    PARENT_INTERFACE_INSERT = "PARENT_INTERFACE_INSERT"
    REMOVED_CLASS = "REMOVED_CLASS"
    REMOVED_FUNCTIONALITY = "REMOVED_FUNCTIONALITY"
    REMOVED_OBJECT_STATE = "REMOVED_OBJECT_STATE"
    REMOVING_ATTRIBUTE_MODIFIABILITY = "REMOVING_ATTRIBUTE_MODIFIABILITY"
    REMOVING_CLASS_DERIVABILITY = "REMOVING_CLASS_DERIVABILITY"
    REMOVING_METHOD_OVERRIDABILITY = "REMOVING_METHOD_OVERRIDABILITY"
    RETURN_TYPE_CHANGE = "RETURN_TYPE_CHANGE"
    RETURN_TYPE_DELETE = "RETURN_TYPE_DELETE"
    RETURN_TYPE_INSERT = "RETURN_TYPE_INSERT"
    STATEMENT_DELETE = "STATEMENT_DELETE"
    STATEMENT_INSERT = "STATEMENT_INSERT"
    STATEMENT_ORDERING_CHANGE = "STATEMENT_ORDERING_CHANGE"
    STATEMENT_PARENT_CHANGE = "STATEMENT_PARENT_CHANGE"
    STATEMENT_UPDATE = "STATEMENT_UPDATE"
    UNKNOWN = "UNKNOWN"

    def __str__(self):
        return self.value


#: Frozen vector order: alphabetical by name.  Feature encodings and the
#: checked-in manifest both derive from this tuple.
CANONICAL_ORDER = tuple(sorted(ChangeType, key=lambda t: t.name))

#: Column index of each change type in the 48-wide feature block.
INDEX = {t: i for i, t in enumerate(CANONICAL_ORDER)}

# Read-side aliases: historical spellings seen in the wild.
_ALIASES = {
    "STATEMENT_UPDATED": ChangeType.STATEMENT_UPDATE,
    "UNCLASSIFIED_CHANGE": ChangeType.UNKNOWN,
}


def parse_change_type(name: str) -> ChangeType:
    """Parse a serialized change-type name (case-insensitive, aliased)."""
    token = name.strip().upper()
    try:
        return ChangeType(token)
    except ValueError:
        pass
    try:
        return _ALIASES[token]
    except KeyError:
        raise ValueError(f"unknown change type: {name!r}") from None


def manifest_text() -> str:
    """The frozen taxonomy manifest, one name per line in vector order."""
    return "\n".join(t.name for t in CANONICAL_ORDER) + "\n"


def manifest_hash() -> str:
    """SHA-256 of the manifest; embedded in --version output."""
    return hashlib.sha256(manifest_text().encode("ascii")).hexdigest()


assert len(ChangeType) == 48, "taxonomy must stay closed at 48 names"
