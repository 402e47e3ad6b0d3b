from __future__ import annotations

import pytest

from maintminer.changetypes import (
    CANONICAL_ORDER,
    INDEX,
    ChangeType,
    manifest_hash,
    manifest_text,
    parse_change_type,
)

PAPER_NAMES = [
    "STATEMENT_INSERT", "STATEMENT_UPDATE", "STATEMENT_DELETE",
    "ADDITIONAL_FUNCTIONALITY", "REMOVED_FUNCTIONALITY", "ADDITIONAL_CLASS",
    "REMOVED_CLASS", "ADDITIONAL_OBJECT_STATE", "REMOVED_OBJECT_STATE",
    "ALTERNATIVE_PART_INSERT", "DOC_UPDATE", "DOC_DELETE", "COMMENT_INSERT",
    "PARAMETER_INSERT",
]


def test_exactly_48_types():
    assert len(ChangeType) == 48
    assert len(CANONICAL_ORDER) == 48


def test_minimum_required_names_present():
    names = {t.name for t in ChangeType}
    for required in PAPER_NAMES:
        assert required in names
    assert "UNKNOWN" in names


def test_canonical_order_is_alphabetical_and_indexed():
    names = [t.name for t in CANONICAL_ORDER]
    assert names == sorted(names)
    for i, t in enumerate(CANONICAL_ORDER):
        assert INDEX[t] == i


def test_parse_aliases():
    assert parse_change_type("statement_update") is ChangeType.STATEMENT_UPDATE
    assert parse_change_type("statement_updated") is ChangeType.STATEMENT_UPDATE
    assert parse_change_type("UNCLASSIFIED_CHANGE") is ChangeType.UNKNOWN
    assert parse_change_type(" doc_delete ") is ChangeType.DOC_DELETE
    with pytest.raises(ValueError):
        parse_change_type("NOT_A_TYPE")


def test_manifest_stability():
    text = manifest_text()
    assert text.splitlines() == [t.name for t in CANONICAL_ORDER]
    assert len(manifest_hash()) == 64
    assert manifest_hash() == manifest_hash()
