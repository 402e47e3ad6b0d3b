#!/usr/bin/env python3
"""One-shot calibration readout for the bundled corpus.

Prints the quantities the test suite pins: the banded CV cells, the
five-seed holdout quality, and the champion importance ranking.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from maintminer.cli import bundled_dataset_path
from maintminer.dataset import Encoding, SplitSpec, feature_matrix, load_labeled_dataset, stratified_split
from maintminer.learners import (
    Algorithm,
    ComponentSpec,
    CompoundSpec,
    classify_commits,
    repeated_cv,
    train_component,
    train_compound,
    variable_importance,
)
from maintminer.metrics import confusion, summarize

KW, CH, CO = Encoding.KEYWORDS_20, Encoding.CHANGES_48, Encoding.COMBINED_68


def main(fast: bool = True) -> None:
    t0 = time.time()
    data = load_labeled_dataset(bundled_dataset_path())
    train, _ = stratified_split(data, SplitSpec(0.85, seed=42))
    repeats = 1 if fast else 5
    forest_trees = 200 if fast else 500

    for alg, kw, nokw, label, hyper in [
        (Algorithm.TREE, KW, KW, "J48 KK  (band .645-.725)", {}),
        (Algorithm.TREE, CH, CH, "J48 CC  (band .448-.528)", {}),
        (Algorithm.FOREST, KW, CO, "RF K/CO (band .706-.766)", {"n_trees": forest_trees}),
    ]:
        st = repeated_cv(train, CompoundSpec(alg, kw, nokw, 7, hyper), folds=10, repeats=repeats, seed=7)
        print(f"{label}: CV acc {st.mean_accuracy:.4f} kappa {st.mean_kappa:.4f}")

    ok = 0
    for seed in range(1, 6):
        tr, te = stratified_split(data, SplitSpec(0.85, seed=seed))
        model = train_compound(tr, CompoundSpec(Algorithm.FOREST, KW, CO, seed, {"n_trees": forest_trees}))
        s = summarize(confusion(classify_commits(model, te), [c.label for c in te]))
        flag = "ok" if s.accuracy >= 0.70 and s.kappa >= 0.55 else "MISS"
        ok += flag == "ok"
        print(f"e2e seed {seed}: acc {s.accuracy:.3f} kappa {s.kappa:.3f} {flag}")
    print(f"e2e pass {ok}/5")

    X, y = feature_matrix(train, CO)
    forest = train_component(X, y, ComponentSpec(Algorithm.FOREST, CO, 42, {"n_trees": forest_trees}))
    top = variable_importance(forest).ranking()[:8]
    names = [n for n, _ in top]
    for i, (name, scores) in enumerate(top):
        print(f"imp {i + 1:2} {name:28} max={max(scores.values()):5.1f}")
    print(
        f"fix-first={names[0] == 'fix'} "
        f"AF-top5={'ADDITIONAL_FUNCTIONALITY' in names[:5]} "
        f"SI-top5={'STATEMENT_INSERT' in names[:5]}  ({time.time() - t0:.0f}s)"
    )


if __name__ == "__main__":
    main(fast="--full" not in sys.argv)
