#!/usr/bin/env python3
"""Train a compound classifier on the bundled corpus and evaluate it.

Uses a trimmed forest so the demo finishes in seconds; drop the
hyperparameter override for the full 500-tree default.
"""

from maintminer.cli import bundled_dataset_path
from maintminer.dataset import Encoding, SplitSpec, load_labeled_dataset, stratified_split
from maintminer.learners import (
    Algorithm,
    CompoundSpec,
    classify_commits,
    repeated_cv,
    train_compound,
)
from maintminer.metrics import confusion, format_summary, summarize

data = load_labeled_dataset(bundled_dataset_path())
train, test = stratified_split(data, SplitSpec(train_fraction=0.85, seed=42))
print(f"{len(train)} training / {len(test)} held-out commits")

spec = CompoundSpec(
    Algorithm.FOREST, Encoding.KEYWORDS_20, Encoding.COMBINED_68,
    seed=42, hyperparameters={"n_trees": 120},
)

stats = repeated_cv(train, spec, folds=10, repeats=1)
print(f"10-fold CV: accuracy {stats.mean_accuracy:.3f}, kappa {stats.mean_kappa:.3f}")

model = train_compound(train, spec)
preds = classify_commits(model, test)
matrix = confusion(preds, [c.label for c in test])
print(format_summary(matrix, summarize(matrix)))
