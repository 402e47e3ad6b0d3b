#!/usr/bin/env python3
"""Evaluation statistics on two classification outcomes.

Feeds two confusion matrices through the metrics module: a weak
keyword-table baseline and a strong compound model, then prints the full
report plus the agreement confidence interval used for label quality.
"""

import numpy as np

from maintminer.metrics import ConfusionMatrix, format_summary, proportion_ci, summarize

# rows = classified-as, columns = true class, order (adaptive, corrective, perfective)
baseline = ConfusionMatrix(np.array([[18, 2, 16], [18, 72, 37], [1, 1, 7]]))
champion = ConfusionMatrix(np.array([[28, 5, 5], [6, 63, 14], [3, 7, 41]]))

for name, matrix in [("keyword baseline", baseline), ("compound champion", champion)]:
    summary = summarize(matrix)
    print(f"=== {name} ===")
    print(format_summary(matrix, summary))
    print()

ci = proportion_ci(0.945, n=110, level=0.95)
print(
    f"labeling agreement 94.5% over 110 commits -> "
    f"95% CI [{ci.lower:.3f}, {ci.upper:.3f}], margin {ci.margin:.3f}"
)
