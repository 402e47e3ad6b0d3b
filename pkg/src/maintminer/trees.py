"""Shared tree-growing engine for the three classifiers.

Features here are small non-negative counts, so splits are found on
histograms of per-feature value bins: one combined bincount per node
scores every candidate threshold of every sampled feature at once.
Trees are stored as flat arrays; prediction walks all rows level by
level.  All randomness flows through numpy RandomState for bit-stable
results across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import stats

_EPS = 1e-12


@dataclass
class BinnedMatrix:
    """Per-feature value bins; thresholds are midpoints between values."""

    bins: np.ndarray  # (n, p) int32
    values: List[np.ndarray]  # sorted distinct raw values per feature
    max_bins: int
    nbins: np.ndarray = None  # (p,) distinct-value count per feature

    def __post_init__(self):
        if self.nbins is None:
            self.nbins = np.array([len(v) for v in self.values], dtype=np.int64)

    @classmethod
    def from_matrix(cls, X: np.ndarray) -> "BinnedMatrix":
        X = np.asarray(X, dtype=np.float64)
        n, p = X.shape
        bins = np.empty((n, p), dtype=np.int32)
        values = []
        for j in range(p):
            vals, inv = np.unique(X[:, j], return_inverse=True)
            if len(vals) > 256:
                qs = np.quantile(vals, np.linspace(0, 1, 257)[1:-1])
                vals = np.unique(qs)
                inv = np.searchsorted(vals, X[:, j], side="left")
                vals = np.unique(np.concatenate([vals, [X[:, j].max()]]))
                inv = np.clip(inv, 0, len(vals) - 1)
            bins[:, j] = inv
            values.append(vals)
        return cls(bins=bins, values=values, max_bins=max(len(v) for v in values) or 1)

    def threshold(self, feature: int, bin_idx: int) -> float:
        v = self.values[feature]
        return float((v[bin_idx] + v[bin_idx + 1]) / 2.0)


@dataclass
class ArrayTree:
    """Flat tree: leaves have feature == -1 and carry `value` rows."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # (n_nodes, K) class counts or (n_nodes, 1) regression value
    n_node: np.ndarray  # training row count per node

    def leaf_ids(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            feats = self.feature[node]
            active = feats >= 0
            if not active.any():
                return node
            f = np.where(active, feats, 0)
            go_left = X[rows, f] <= self.threshold[node]
            nxt = np.where(go_left, self.left[node], self.right[node])
            node = np.where(active, nxt, node)

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "n_node": self.n_node.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ArrayTree":
        return cls(
            feature=np.asarray(doc["feature"], dtype=np.int64),
            threshold=np.asarray(doc["threshold"], dtype=np.float64),
            left=np.asarray(doc["left"], dtype=np.int64),
            right=np.asarray(doc["right"], dtype=np.int64),
            value=np.asarray(doc["value"], dtype=np.float64),
            n_node=np.asarray(doc["n_node"], dtype=np.float64),
        )


class _TreeBuilder:
    def __init__(self):
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[np.ndarray] = []
        self.n_node: List[float] = []

    def add(self, value: np.ndarray, n: float) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        self.n_node.append(float(n))
        return len(self.feature) - 1

    def make_split(self, node_id: int, feature: int, threshold: float, left: int, right: int):
        self.feature[node_id] = feature
        self.threshold[node_id] = threshold
        self.left[node_id] = left
        self.right[node_id] = right

    def build(self) -> ArrayTree:
        return ArrayTree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.vstack(self.value),
            n_node=np.asarray(self.n_node, dtype=np.float64),
        )


def _node_histogram(
    binned: BinnedMatrix, rows: np.ndarray, feats: np.ndarray, weights: np.ndarray, K: int,
    y: Optional[np.ndarray],
) -> np.ndarray:
    """(n_feats, max_bins, K) weighted class histogram for one node."""
    B = binned.max_bins
    sub = binned.bins[rows[:, None], feats[None, :]].astype(np.int64)
    if y is None:
        codes = sub + np.arange(len(feats), dtype=np.int64) * B
        cnt = np.bincount(
            codes.ravel(), weights=np.repeat(weights, len(feats)), minlength=len(feats) * B
        )
        return cnt.reshape(len(feats), B, 1)
    codes = sub * K + y[rows, None] + np.arange(len(feats), dtype=np.int64) * (B * K)
    cnt = np.bincount(
        codes.ravel(), weights=np.repeat(weights, len(feats)), minlength=len(feats) * B * K
    )
    return cnt.reshape(len(feats), B, K)


@dataclass
class ClassTreeParams:
    criterion: str = "gini"  # gini | gain_ratio
    min_leaf: int = 1
    max_features: Optional[int] = None  # per-split subsample; None = all
    max_depth: Optional[int] = None


def grow_classification_tree(
    binned: BinnedMatrix,
    y: np.ndarray,
    n_classes: int,
    params: ClassTreeParams,
    rng: np.random.RandomState,
    sample_weight: Optional[np.ndarray] = None,
) -> ArrayTree:
    n, p = binned.bins.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    active = np.flatnonzero(w > 0)
    builder = _TreeBuilder()
    K = n_classes

    def grow(rows: np.ndarray, depth: int) -> int:
        counts = np.bincount(y[rows], weights=w[rows], minlength=K)
        total = counts.sum()
        node_id = builder.add(counts, total)
        if (
            (counts > 0).sum() <= 1
            or total < 2 * params.min_leaf
            or (params.max_depth is not None and depth >= params.max_depth)
        ):
            return node_id
        if params.max_features is not None and params.max_features < p:
            feats = np.sort(rng.choice(p, size=params.max_features, replace=False))
        else:
            feats = np.arange(p)
        hist = _node_histogram(binned, rows, feats, w[rows], K, y)
        cum = hist.cumsum(axis=1)  # (f, B, K) left class counts per cut
        n_l = cum.sum(axis=2)
        n_r = total - n_l
        # a cut after bin b is valid while bins above b exist for the feature
        B = binned.max_bins
        nbins = binned.nbins[feats]
        valid = (
            (np.arange(B)[None, :] < (nbins - 1)[:, None])
            & (n_l >= params.min_leaf)
            & (n_r >= params.min_leaf)
        )
        if not valid.any():
            return node_id
        right = counts[None, None, :] - cum
        if params.criterion == "gini":
            score = np.full(n_l.shape, np.inf)
            with np.errstate(divide="ignore", invalid="ignore"):
                gl = n_l - (cum**2).sum(axis=2) / n_l
                gr = n_r - (right**2).sum(axis=2) / n_r
            sc = gl + gr
            score[valid] = sc[valid]
            flat = np.argmin(score)
            fi, b = np.unravel_index(flat, score.shape)
            parent_imp = total - (counts**2).sum() / total
            gain = parent_imp - score[fi, b]
            if gain <= _EPS:
                return node_id
        else:  # gain ratio
            def entropy(c, nn):
                with np.errstate(divide="ignore", invalid="ignore"):
                    q = c / nn[..., None]
                    t = np.where(q > 0, q * np.log2(q), 0.0)
                return -t.sum(axis=-1)

            h_parent = entropy(counts[None, None, :], np.array([[total]]))[0, 0]
            h_l = entropy(cum, n_l)
            h_r = entropy(right, n_r)
            with np.errstate(divide="ignore", invalid="ignore"):
                gain = h_parent - (n_l * h_l + n_r * h_r) / total
                frac_l, frac_r = n_l / total, n_r / total
                split_info = -(
                    np.where(frac_l > 0, frac_l * np.log2(frac_l), 0.0)
                    + np.where(frac_r > 0, frac_r * np.log2(frac_r), 0.0)
                )
                ratio = gain / split_info
            usable = valid & (gain > _EPS) & (split_info > _EPS)
            if not usable.any():
                return node_id
            avg_gain = gain[usable].mean()
            candidates = usable & (gain >= avg_gain - 1e-9)
            if not candidates.any():
                candidates = usable
            ratio = np.where(candidates, ratio, -np.inf)
            flat = np.argmax(ratio)
            fi, b = np.unravel_index(flat, ratio.shape)
            if not np.isfinite(ratio[fi, b]):
                return node_id

        feat = int(feats[fi])
        thr = binned.threshold(feat, int(b))
        mask = binned.bins[rows, feat] <= b
        left_id = grow(rows[mask], depth + 1)
        right_id = grow(rows[~mask], depth + 1)
        builder.make_split(node_id, feat, thr, left_id, right_id)
        return node_id

    grow(active, 0)
    return builder.build()


def prune_pessimistic(tree: ArrayTree, confidence: float = 0.25) -> ArrayTree:
    """Error-based pruning: collapse subtrees whose estimated error is no
    better than the node as a leaf, with binomial upper bounds at the
    given confidence."""

    def upper_errors(n: float, errors: float) -> float:
        if n <= 0:
            return 0.0
        e = min(errors, n)
        if e >= n:
            return n
        p_u = stats.beta.ppf(1.0 - confidence, e + 1, n - e)
        return n * float(p_u)

    feature = tree.feature.copy()
    left, right = tree.left.copy(), tree.right.copy()

    def walk(node: int) -> float:
        counts = tree.value[node]
        n = counts.sum()
        leaf_est = upper_errors(n, n - counts.max())
        if feature[node] < 0:
            return leaf_est
        subtree_est = walk(left[node]) + walk(right[node])
        if leaf_est <= subtree_est + 1e-9:
            feature[node] = -1
            left[node] = right[node] = -1
            return leaf_est
        return subtree_est

    walk(0)
    return ArrayTree(
        feature=feature, threshold=tree.threshold.copy(), left=left, right=right,
        value=tree.value.copy(), n_node=tree.n_node.copy(),
    )


@dataclass
class RegTreeParams:
    min_leaf: int = 10
    max_depth: int = 3


def grow_regression_tree(
    binned: BinnedMatrix,
    gradient: np.ndarray,
    hessian: np.ndarray,
    params: RegTreeParams,
    leaf_scale: float,
    row_mask: Optional[np.ndarray] = None,
) -> ArrayTree:
    """Squared-error splits on the gradient; leaves carry Newton steps
    ``leaf_scale * sum(g) / sum(h)``."""
    n, p = binned.bins.shape
    builder = _TreeBuilder()
    ones = np.ones(n)
    feats_all = np.arange(p)

    def leaf_value(rows) -> np.ndarray:
        g = gradient[rows].sum()
        h = hessian[rows].sum()
        return np.array([leaf_scale * g / (h + _EPS)])

    def grow(rows: np.ndarray, depth: int) -> int:
        node_id = builder.add(leaf_value(rows), len(rows))
        if depth >= params.max_depth or len(rows) < 2 * params.min_leaf:
            return node_id
        B = binned.max_bins
        sub = binned.bins[rows].astype(np.int64) + feats_all[None, :] * B
        flat = sub.ravel()
        minlength = p * B
        cnt = np.bincount(flat, weights=np.repeat(ones[rows], p), minlength=minlength)
        gsum = np.bincount(flat, weights=np.repeat(gradient[rows], p), minlength=minlength)
        cnt = cnt.reshape(p, B).cumsum(axis=1)
        gsum = gsum.reshape(p, B).cumsum(axis=1)
        n_tot = float(len(rows))
        g_tot = gradient[rows].sum()
        n_r = n_tot - cnt
        g_r = g_tot - gsum
        nbins = binned.nbins
        valid = (
            (np.arange(B)[None, :] < (nbins - 1)[:, None])
            & (cnt >= params.min_leaf)
            & (n_r >= params.min_leaf)
        )
        if not valid.any():
            return node_id
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = gsum**2 / cnt + g_r**2 / n_r
        gain = np.where(valid, gain, -np.inf)
        fi, b = np.unravel_index(np.argmax(gain), gain.shape)
        if gain[fi, b] - g_tot**2 / n_tot <= _EPS:
            return node_id
        feat = int(fi)
        mask = binned.bins[rows, feat] <= b
        left_id = grow(rows[mask], depth + 1)
        right_id = grow(rows[~mask], depth + 1)
        builder.make_split(node_id, feat, binned.threshold(feat, int(b)), left_id, right_id)
        return node_id

    start = np.arange(n) if row_mask is None else np.flatnonzero(row_mask)
    grow(start, 0)
    return builder.build()
