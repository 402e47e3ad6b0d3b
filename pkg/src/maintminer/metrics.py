"""Confusion matrices and every evaluation statistic the reports use.

Matrices are 3x3 with rows = classified-as and columns = true class, in
the fixed (adaptive, corrective, perfective) order.  Rates that would
divide by zero are reported as None ("absent"), never NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .activity import CLASS_ORDER, Activity
from .errors import ArgError

# Exact binomial tails can underflow to 0.0; report this floor instead so
# downstream logs stay finite.
P_VALUE_FLOOR = 1e-300


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts of (classified-as, true-class) pairs."""

    counts: np.ndarray  # 3x3, rows = classified as, cols = true

    def __post_init__(self):
        arr = np.asarray(self.counts, dtype=np.int64)
        if arr.shape != (3, 3) or (arr < 0).any():
            raise ArgError("confusion matrix must be 3x3 with counts >= 0")
        object.__setattr__(self, "counts", arr)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def row(self, activity: Activity) -> np.ndarray:
        return self.counts[CLASS_ORDER.index(activity)]

    def column(self, activity: Activity) -> np.ndarray:
        return self.counts[:, CLASS_ORDER.index(activity)]


@dataclass(frozen=True)
class ProportionCI:
    lower: float
    upper: float
    margin: float
    level: float


@dataclass(frozen=True)
class MetricsSummary:
    precision: dict
    recall: dict
    accuracy: float
    kappa: float
    nir: float
    f1_micro: float
    f1_macro: Optional[float]
    p_value_accuracy_gt_nir: float


def confusion(preds: Sequence[Activity], labels: Sequence[Activity]) -> ConfusionMatrix:
    """Tally predictions against true labels."""
    if len(preds) != len(labels) or not preds:
        raise ArgError("preds and labels must be equal-length and non-empty")
    counts = np.zeros((3, 3), dtype=np.int64)
    for p, t in zip(preds, labels):
        counts[CLASS_ORDER.index(p), CLASS_ORDER.index(t)] += 1
    return ConfusionMatrix(counts)


def _rate(num: int, den: int) -> Optional[float]:
    return None if den == 0 else num / den


def summarize(matrix: ConfusionMatrix) -> MetricsSummary:
    """All headline statistics of a confusion matrix.

    Kappa uses the chance-agreement correction computed from the row and
    column marginals; the NIR comparison is a one-sided exact binomial
    test of the diagonal successes.
    """
    m = matrix.counts
    total = matrix.total
    if total == 0:
        raise ArgError("empty confusion matrix")
    diag = int(np.trace(m))
    rows = m.sum(axis=1)
    cols = m.sum(axis=0)

    accuracy = diag / total
    nir = cols.max() / total
    expected = float((rows * cols).sum()) / total**2
    kappa = (accuracy - expected) / (1.0 - expected) if expected < 1.0 else 1.0

    precision = {}
    recall = {}
    f1 = {}
    for i, act in enumerate(CLASS_ORDER):
        precision[act] = _rate(int(m[i, i]), int(rows[i]))
        recall[act] = _rate(int(m[i, i]), int(cols[i]))
        if rows[i] == 0 and cols[i] == 0:
            f1[act] = 0.0
        elif precision[act] is None or recall[act] is None:
            f1[act] = None
        else:
            s = precision[act] + recall[act]
            f1[act] = 0.0 if s == 0 else 2 * precision[act] * recall[act] / s

    f1_macro = None
    if all(v is not None for v in f1.values()):
        f1_macro = sum(f1.values()) / 3.0

    p_value = binomial_nir_test(diag, total, nir)

    return MetricsSummary(
        precision=precision,
        recall=recall,
        accuracy=accuracy,
        kappa=kappa,
        nir=nir,
        f1_micro=accuracy,  # micro-F1 equals accuracy for single-label multiclass
        f1_macro=f1_macro,
        p_value_accuracy_gt_nir=p_value,
    )


def proportion_ci(p_hat: float, n: int, level: float = 0.95) -> ProportionCI:
    """Wald interval for an observed proportion, clipped to [0, 1]."""
    if not 0.0 <= p_hat <= 1.0:
        raise ArgError("p_hat must be within [0, 1]")
    if n < 1:
        raise ArgError("n must be >= 1")
    z = stats.norm.ppf(0.5 + level / 2.0)
    margin = z * np.sqrt(p_hat * (1.0 - p_hat) / n)
    return ProportionCI(
        lower=max(0.0, p_hat - margin),
        upper=min(1.0, p_hat + margin),
        margin=float(margin),
        level=level,
    )


def binomial_nir_test(successes: int, n: int, nir: float) -> float:
    """One-sided exact binomial tail P(X >= successes | n, nir)."""
    if not 0 <= successes <= n:
        raise ArgError("successes must lie in [0, n]")
    if not 0.0 < nir < 1.0:
        raise ArgError("nir must lie in (0, 1)")
    p = float(stats.binom.sf(successes - 1, n, nir))
    return max(p, P_VALUE_FLOOR)


_ROW_LABELS = {
    "recall": "Recall:",
    "precision": "Precision:",
    "accuracy": "Accuracy:",
    "kappa": "Kappa:",
    "f1_micro": "F1 Score (micro-averaged):",
    "f1_macro": "F1 Score (macro-averaged):",
    "nir": "No Information Rate (NIR):",
    "p_value": "P-Value [Accuracy > NIR]:",
}


def _fmt_rate(value: Optional[float]) -> str:
    return "absent" if value is None else f"{100 * value:.0f}%"


def format_summary(matrix: ConfusionMatrix, summary: MetricsSummary) -> str:
    """Human-readable table mirroring the published report layout."""
    header = ["classified as \\ true class"] + [a.value.capitalize() for a in CLASS_ORDER]
    lines = ["\t".join(header)]
    for i, act in enumerate(CLASS_ORDER):
        cells = [str(int(c)) for c in matrix.counts[i]]
        lines.append("\t".join([act.value.capitalize()] + cells))
    lines.append("\t".join([_ROW_LABELS["recall"]] + [_fmt_rate(summary.recall[a]) for a in CLASS_ORDER]))
    lines.append("\t".join([_ROW_LABELS["precision"]] + [_fmt_rate(summary.precision[a]) for a in CLASS_ORDER]))
    lines.append(f"{_ROW_LABELS['accuracy']}\t{100 * summary.accuracy:.0f}%")
    lines.append(f"{_ROW_LABELS['kappa']}\t{100 * summary.kappa:.0f}%")
    lines.append(f"{_ROW_LABELS['f1_micro']}\t{summary.f1_micro:.2f}")
    macro = "absent" if summary.f1_macro is None else f"{summary.f1_macro:.2f}"
    lines.append(f"{_ROW_LABELS['f1_macro']}\t{macro}")
    lines.append(f"{_ROW_LABELS['nir']}\t{100 * summary.nir:.0f}%")
    lines.append(f"{_ROW_LABELS['p_value']}\t{summary.p_value_accuracy_gt_nir:.3g}")
    return "\n".join(lines)


def summary_csv(matrix: ConfusionMatrix, summary: MetricsSummary) -> str:
    """CSV twin of :func:`format_summary` with identical row labels."""
    out = ["label,adaptive,corrective,perfective"]
    for i, act in enumerate(CLASS_ORDER):
        out.append(",".join([act.value.capitalize()] + [str(int(c)) for c in matrix.counts[i]]))

    def rate_row(label, values):
        return ",".join([label] + ["" if v is None else f"{v:.6f}" for v in values])

    out.append(rate_row(_ROW_LABELS["recall"], [summary.recall[a] for a in CLASS_ORDER]))
    out.append(rate_row(_ROW_LABELS["precision"], [summary.precision[a] for a in CLASS_ORDER]))
    out.append(f"{_ROW_LABELS['accuracy']},{summary.accuracy:.6f},,")
    out.append(f"{_ROW_LABELS['kappa']},{summary.kappa:.6f},,")
    out.append(f"{_ROW_LABELS['f1_micro']},{summary.f1_micro:.6f},,")
    macro = "" if summary.f1_macro is None else f"{summary.f1_macro:.6f}"
    out.append(f"{_ROW_LABELS['f1_macro']},{macro},,")
    out.append(f"{_ROW_LABELS['nir']},{summary.nir:.6f},,")
    out.append(f"{_ROW_LABELS['p_value']},{summary.p_value_accuracy_gt_nir:.6g},,")
    return "\n".join(out) + "\n"
