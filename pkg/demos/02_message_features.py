#!/usr/bin/env python3
"""Commit-message normalization and the keyword machinery.

Shows the normalize pipeline, the 20-stem vocabulary vector, routing,
the naive baseline, and per-class top-10 stem extraction on the bundled
corpus.
"""

from maintminer.activity import Activity
from maintminer.cli import bundled_dataset_path
from maintminer.dataset import load_labeled_dataset
from maintminer.textfeat import (
    default_vocabulary,
    has_keywords,
    keyword_vector,
    naive_classify,
    normalize_message,
    top_k_frequencies,
)

messages = [
    "Refactored blob logic into separate methods",
    "fixed NPE when closing stream",
    "add new support for widgets",
    "misc housekeeping",
]

vocab = default_vocabulary()
for text in messages:
    stems = normalize_message(text)
    vec = keyword_vector(stems, vocab)
    on = [vocab.stems[i] for i in range(len(vocab.stems)) if vec[i]]
    print(f"{text!r}")
    print(f"  stems     : {sorted(stems)}")
    print(f"  keywords  : {on or '(none)'}  -> routed to {'model_kw' if has_keywords(stems, vocab) else 'model_nokw'}")
    print(f"  naive     : {naive_classify(text)}")
    print()

data = load_labeled_dataset(bundled_dataset_path())
top = top_k_frequencies(((c.label, c.message) for c in data), k=10)
for activity in Activity:
    print(f"top-10 {activity.value:<11}: {', '.join(top.per_class[activity])}")
print(f"merged vocabulary ({len(top.vocabulary.stems)}): {', '.join(top.vocabulary.stems)}")
