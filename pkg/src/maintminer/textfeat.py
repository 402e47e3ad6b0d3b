"""Commit-message normalization, vocabularies, and the naive keyword baseline.

The normalize pipeline applies, in order: special-character stripping,
case folding, English stopword removal, punctuation/whitespace stripping
(subsumed by the first step), stemming, set-semantics deduplication, and
custom-stopword removal.  Stopword and naive-keyword data files are part
of the external interface and are themselves passed through the matching
normalization at load time, so hyphenated entries like "re-factor" fold
onto the stems commit messages actually produce.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, FrozenSet, Iterable, Tuple

import numpy as np

from .activity import Activity
from .errors import EmptyCorpus
from .stemming import stem

_SPECIAL = re.compile(r"[^0-9a-zA-Z\s]+")

#: The ten most frequent stems per activity in the labeled corpus.
DEFAULT_TOP10: Dict[Activity, Tuple[str, ...]] = {
    Activity.CORRECTIVE: ("fix", "test", "issu", "use", "fail", "bug", "report", "set", "error", "npe"),
    Activity.PERFECTIVE: ("test", "remov", "use", "fix", "refactor", "method", "chang", "add", "improv", "new"),
    Activity.ADAPTIVE: ("support", "add", "implement", "new", "allow", "use", "method", "test", "set", "chang"),
}


def _read_data_lines(name: str) -> list[str]:
    text = (resources.files("maintminer") / "data" / name).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def _strip_and_fold(text: str) -> str:
    return _SPECIAL.sub("", text).lower()


@lru_cache(maxsize=1)
def english_stopwords() -> FrozenSet[str]:
    return frozenset(_strip_and_fold(w) for w in _read_data_lines("english_stopwords.txt"))


@lru_cache(maxsize=1)
def custom_stopwords() -> FrozenSet[str]:
    return frozenset(_read_data_lines("custom_stopwords.txt"))


@dataclass(frozen=True)
class StemmedMessage:
    commit_id: str
    stems: FrozenSet[str]


@dataclass(frozen=True)
class Vocabulary:
    """Routing vocabulary: merged stem list plus the per-class top-10s."""

    stems: Tuple[str, ...]
    per_class_top10: Dict[Activity, Tuple[str, ...]]

    def __post_init__(self):
        if len(set(self.stems)) != len(self.stems):
            raise ValueError("vocabulary stems must be unique")
        union = set()
        for stems in self.per_class_top10.values():
            union.update(stems)
        if union and union != set(self.stems):
            raise ValueError("merged stems must equal the union of per-class lists")

    def index(self, s: str) -> int:
        return self.stems.index(s)


@lru_cache(maxsize=1)
def default_vocabulary() -> Vocabulary:
    stems = tuple(_read_data_lines("vocab20.txt"))
    return Vocabulary(stems=stems, per_class_top10=dict(DEFAULT_TOP10))


def normalize_message(text: str) -> FrozenSet[str]:
    """Normalize a commit message to its set of stems."""
    tokens = _strip_and_fold(text).split()
    stops = english_stopwords()
    custom = custom_stopwords()
    stems = {stem(t) for t in tokens if t and t not in stops}
    return frozenset(s for s in stems if s and s not in custom)


def keyword_vector(stems: FrozenSet[str], vocabulary: Vocabulary | None = None) -> np.ndarray:
    """0/1 presence vector over the vocabulary stems."""
    vocab = vocabulary or default_vocabulary()
    return np.fromiter((1 if s in stems else 0 for s in vocab.stems), dtype=np.int64, count=len(vocab.stems))


def has_keywords(stems: FrozenSet[str], vocabulary: Vocabulary | None = None) -> bool:
    vocab = vocabulary or default_vocabulary()
    return any(s in stems for s in vocab.stems)


class NaiveKeywordTable:
    """Per-activity stem lists of the naive baseline classifier."""

    def __init__(self, raw: Dict[Activity, Tuple[str, ...]]):
        self.raw = raw
        # entries are the published stems, matched verbatim against the
        # stemmed message tokens; entries no whole stem can equal (e.g.
        # "esolv", "re-factor") never fire under whole-token matching
        self.stems = {act: frozenset(w.lower() for w in words) for act, words in raw.items()}

    @classmethod
    def load_default(cls) -> "NaiveKeywordTable":
        table: Dict[Activity, list] = {a: [] for a in Activity}
        for line in _read_data_lines("naive_keywords.txt"):
            cls_token, word = line.split("\t")
            table[Activity(cls_token)].append(word)
        return cls({a: tuple(ws) for a, ws in table.items()})


@lru_cache(maxsize=1)
def default_naive_table() -> NaiveKeywordTable:
    return NaiveKeywordTable.load_default()


# zero matches fall back to the most frequent class; ties resolve in this order
_TIE_ORDER = (Activity.CORRECTIVE, Activity.PERFECTIVE, Activity.ADAPTIVE)


def naive_classify(text: str, table: NaiveKeywordTable | None = None) -> Activity:
    """Keyword-count argmax with a corrective fallback; total over any text."""
    table = table or default_naive_table()
    stems = normalize_message(text)
    counts = {act: len(stems & table.stems[act]) for act in Activity}
    best = max(counts.values())
    if best == 0:
        return Activity.CORRECTIVE
    for act in _TIE_ORDER:
        if counts[act] == best:
            return act
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class TopStems:
    per_class: Dict[Activity, Tuple[str, ...]]
    vocabulary: Vocabulary


def top_k_frequencies(corpus: Iterable[Tuple[Activity, str]], k: int = 10) -> TopStems:
    """Per-class top-k stems by message frequency (set semantics).

    Frequency counts the number of messages containing the stem; ties
    break lexicographically.  The merged vocabulary is the sorted,
    de-duplicated union of the per-class lists.
    """
    freq: Dict[Activity, Dict[str, int]] = {a: {} for a in Activity}
    seen = {a: 0 for a in Activity}
    for label, message in corpus:
        seen[label] += 1
        table = freq[label]
        for s in normalize_message(message):
            table[s] = table.get(s, 0) + 1
    empty = [a.value for a in Activity if seen[a] == 0]
    if empty:
        raise EmptyCorpus(f"no messages for class(es): {', '.join(empty)}")

    per_class = {}
    for act in Activity:
        ranked = sorted(freq[act].items(), key=lambda kv: (-kv[1], kv[0]))
        per_class[act] = tuple(s for s, _ in ranked[:k])
    merged = tuple(sorted(set().union(*per_class.values())))
    return TopStems(per_class=per_class, vocabulary=Vocabulary(merged, per_class))
