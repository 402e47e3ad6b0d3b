"""Labeled-commit dataset: ingestion, stratified split, feature assembly.

The canonical file layout is long-form CSV (one change type per row):
``project, commit_id, label, message, change_type, count``.  A wide-form
reader exists as an adapter in case a published artifact arrives with one
column per change type.  Labels accept {c, corrective, p, perfective,
a, adaptive} in any case.
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .activity import Activity, parse_activity
from .changetypes import CANONICAL_ORDER, ChangeType, parse_change_type
from .errors import RowError, SchemaError, StratifyError
from .textfeat import Vocabulary, default_vocabulary, keyword_vector, normalize_message

log = logging.getLogger(__name__)

_LONG_COLUMNS = ["project", "commit_id", "label", "message", "change_type", "count"]


class Encoding(enum.Enum):
    KEYWORDS_20 = 20
    CHANGES_48 = 48
    COMBINED_68 = 68


@dataclass(frozen=True)
class LabeledCommit:
    project: str
    commit_id: str
    label: Activity
    message: str
    change_counts: Dict[ChangeType, int] = field(default_factory=dict)

    def total_changes(self) -> int:
        return sum(self.change_counts.values())


@dataclass(frozen=True)
class FeatureVector:
    encoding: Encoding
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.encoding.value:
            raise ValueError(
                f"{self.encoding.name} expects {self.encoding.value} values, got {len(self.values)}"
            )


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.85
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValueError("train_fraction must be in (0, 1]")


def load_labeled_dataset(path) -> List[LabeledCommit]:
    """Parse the long-form CSV; bad rows are collected, not fatal."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        missing = [c for c in _LONG_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        commits: Dict[Tuple[str, str], dict] = {}
        bad_rows: List[str] = []
        total_rows = 0
        for lineno, row in enumerate(reader, start=2):
            total_rows += 1
            try:
                label = parse_activity(row["label"])
                key = (row["project"], row["commit_id"])
                entry = commits.setdefault(
                    key,
                    {"label": label, "message": row["message"], "changes": {}},
                )
                if entry["label"] != label:
                    raise ValueError(f"conflicting labels for commit {key[1]}")
                if row["change_type"]:
                    ct = parse_change_type(row["change_type"])
                    entry["changes"][ct] = entry["changes"].get(ct, 0) + int(row["count"])
            except (ValueError, KeyError) as exc:
                bad_rows.append(f"row {lineno}: {exc}")
        if bad_rows and not commits:
            raise SchemaError(f"{path}: no parseable rows ({bad_rows[0]})")
        if bad_rows:
            raise RowError(f"{path}: {len(bad_rows)} unparseable row(s)", rows=bad_rows)
    data = [
        LabeledCommit(
            project=proj, commit_id=cid, label=entry["label"],
            message=entry["message"], change_counts=entry["changes"],
        )
        for (proj, cid), entry in commits.items()
    ]
    counts = class_counts(data)
    log.info(
        "loaded %d commits from %s (%s)", len(data), path.name,
        ", ".join(f"{a.value}={counts[a]}" for a in Activity),
    )
    return data


def load_labeled_dataset_wide(path) -> List[LabeledCommit]:
    """Adapter for wide-form files with one column per change type."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        base = ["project", "commit_id", "label", "message"]
        missing = [c for c in base if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        type_cols = [c for c in reader.fieldnames if c not in base]
        data = []
        bad_rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                changes = {}
                for col in type_cols:
                    count = int(row[col] or 0)
                    if count:
                        changes[parse_change_type(col)] = count
                data.append(
                    LabeledCommit(
                        project=row["project"], commit_id=row["commit_id"],
                        label=parse_activity(row["label"]), message=row["message"],
                        change_counts=changes,
                    )
                )
            except (ValueError, KeyError) as exc:
                bad_rows.append(f"row {lineno}: {exc}")
        if bad_rows and not data:
            raise SchemaError(f"{path}: no parseable rows")
        if bad_rows:
            raise RowError(f"{path}: {len(bad_rows)} unparseable row(s)", rows=bad_rows)
    return data


def write_labeled_dataset(data: Sequence[LabeledCommit], path) -> None:
    """Long-form writer; load -> write round-trips losslessly."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_LONG_COLUMNS)
        for c in data:
            if not c.change_counts:
                writer.writerow([c.project, c.commit_id, c.label.value, c.message, "", 0])
                continue
            for ct in CANONICAL_ORDER:
                if ct in c.change_counts:
                    writer.writerow(
                        [c.project, c.commit_id, c.label.value, c.message, ct.name,
                         c.change_counts[ct]]
                    )


def class_counts(data: Iterable[LabeledCommit]) -> Dict[Activity, int]:
    counts = {a: 0 for a in Activity}
    for c in data:
        counts[c.label] += 1
    return counts


def stratified_split(
    data: Sequence[LabeledCommit], spec: SplitSpec
) -> Tuple[List[LabeledCommit], List[LabeledCommit]]:
    """Seeded per-class split; train takes ceil(fraction * n_c) of each class."""
    by_class: Dict[Activity, List[LabeledCommit]] = {a: [] for a in Activity}
    for c in data:
        by_class[c.label].append(c)
    empty = [a.value for a in Activity if not by_class[a]]
    if empty:
        raise StratifyError(f"cannot stratify, empty class(es): {', '.join(empty)}")
    rng = np.random.RandomState(spec.seed)
    train: List[LabeledCommit] = []
    test: List[LabeledCommit] = []
    for act in Activity:
        members = by_class[act]
        order = rng.permutation(len(members))
        n_train = math.ceil(spec.train_fraction * len(members))
        train.extend(members[i] for i in order[:n_train])
        test.extend(members[i] for i in order[n_train:])
    return train, test


def assemble_features(
    commit: LabeledCommit,
    encoding: Encoding,
    vocabulary: Vocabulary | None = None,
) -> FeatureVector:
    """Encode one commit; COMBINED is the keyword block then the change block."""
    vocab = vocabulary or default_vocabulary()
    if encoding is Encoding.KEYWORDS_20:
        values = keyword_vector(normalize_message(commit.message), vocab)
    elif encoding is Encoding.CHANGES_48:
        values = np.array([commit.change_counts.get(ct, 0) for ct in CANONICAL_ORDER])
    else:
        kw = keyword_vector(normalize_message(commit.message), vocab)
        ch = np.array([commit.change_counts.get(ct, 0) for ct in CANONICAL_ORDER])
        values = np.concatenate([kw, ch])
    return FeatureVector(encoding=encoding, values=tuple(int(v) for v in values))


def feature_matrix(
    commits: Sequence[LabeledCommit],
    encoding: Encoding,
    vocabulary: Vocabulary | None = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """(X, y) arrays for the learners; y holds CLASS_ORDER indices."""
    from .activity import CLASS_ORDER

    vocab = vocabulary or default_vocabulary()
    X = np.array(
        [assemble_features(c, encoding, vocab).values for c in commits], dtype=np.float64
    ).reshape(len(commits), encoding.value)
    y = np.array([CLASS_ORDER.index(c.label) for c in commits], dtype=np.int64)
    return X, y


def feature_names(encoding: Encoding, vocabulary: Vocabulary | None = None) -> List[str]:
    vocab = vocabulary or default_vocabulary()
    kw = list(vocab.stems)
    ch = [ct.name for ct in CANONICAL_ORDER]
    if encoding is Encoding.KEYWORDS_20:
        return kw
    if encoding is Encoding.CHANGES_48:
        return ch
    return kw + ch
