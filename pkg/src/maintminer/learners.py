"""Tree, forest, and boosting classifiers plus compound-model machinery.

A compound model pairs two trained components: messages containing at
least one vocabulary stem go to ``model_kw``, the rest to
``model_nokw``.  Both components are trained on the same training rows,
each under its own feature encoding.  Defaults are frozen for the
acceptance runs and overridable through ComponentSpec.hyperparameters.
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .activity import CLASS_ORDER, Activity
from .dataset import Encoding, LabeledCommit, feature_matrix, feature_names
from .errors import CvError, SpecError
from .metrics import confusion, summarize
from .textfeat import Vocabulary, default_vocabulary, has_keywords, normalize_message
from .trees import (
    ArrayTree,
    BinnedMatrix,
    ClassTreeParams,
    RegTreeParams,
    grow_classification_tree,
    grow_regression_tree,
    prune_pessimistic,
)

log = logging.getLogger(__name__)

N_CLASSES = len(CLASS_ORDER)


class Algorithm(enum.Enum):
    TREE = "TREE"
    FOREST = "FOREST"
    GBM = "GBM"


_DEFAULT_HYPERPARAMETERS = {
    Algorithm.TREE: {"confidence": 0.25, "min_leaf": 2},
    Algorithm.FOREST: {"n_trees": 500, "min_leaf": 1},
    Algorithm.GBM: {
        "rounds": 150, "shrinkage": 0.1, "interaction_depth": 3,
        "min_leaf": 10, "subsample": 1.0,
    },
}


def algorithm_hyperparameters(algorithm: Algorithm, pool: dict) -> dict:
    """Project a mixed config pool onto one algorithm's known knobs."""
    return {k: v for k, v in pool.items() if k in _DEFAULT_HYPERPARAMETERS[algorithm]}


@dataclass(frozen=True)
class ComponentSpec:
    algorithm: Algorithm
    encoding: Encoding
    seed: int = 0
    hyperparameters: dict = field(default_factory=dict)

    def params(self) -> dict:
        merged = dict(_DEFAULT_HYPERPARAMETERS[self.algorithm])
        unknown = set(self.hyperparameters) - set(merged)
        if unknown:
            raise SpecError(f"unknown hyperparameters for {self.algorithm.name}: {sorted(unknown)}")
        merged.update(self.hyperparameters)
        return merged


class TrainedComponent:
    """Prediction surface shared by all algorithms."""

    spec: ComponentSpec

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def predict_activities(self, X: np.ndarray) -> List[Activity]:
        return [CLASS_ORDER[i] for i in self.predict(X)]

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass
class ConstantComponent(TrainedComponent):
    spec: ComponentSpec
    class_index: int

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros((len(X), N_CLASSES))
        out[:, self.class_index] = 1.0
        return out

    def to_dict(self) -> dict:
        return {"kind": "constant", "class_index": self.class_index}


@dataclass
class TreeComponent(TrainedComponent):
    spec: ComponentSpec
    tree: ArrayTree

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        leaves = self.tree.leaf_ids(np.asarray(X, dtype=np.float64))
        counts = self.tree.value[leaves]
        return counts / counts.sum(axis=1, keepdims=True)

    def to_dict(self) -> dict:
        return {"kind": "tree", "tree": self.tree.to_dict()}


@dataclass
class ForestComponent(TrainedComponent):
    spec: ComponentSpec
    trees: List[ArrayTree]
    oob_masks: Optional[List[np.ndarray]] = None  # per-tree out-of-bag rows
    train_X: Optional[np.ndarray] = None
    train_y: Optional[np.ndarray] = None
    importance_cache: Optional[np.ndarray] = None  # (p, K) raw permutation scores

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros((len(X), N_CLASSES))
        for tree in self.trees:
            counts = tree.value[tree.leaf_ids(X)]
            votes[np.arange(len(X)), counts.argmax(axis=1)] += 1.0
        return votes / votes.sum(axis=1, keepdims=True)

    def raw_importance(self) -> np.ndarray:
        """Per-class out-of-bag permutation importance: the mean per-class
        accuracy decrease when a feature column is shuffled."""
        if self.importance_cache is not None:
            return self.importance_cache
        if self.train_X is None or self.oob_masks is None:
            raise SpecError(
                "importance unavailable: this forest was deserialized without "
                "cached scores; compute variable_importance before saving"
            )
        X, y = self.train_X, self.train_y
        p = X.shape[1]
        rng = np.random.RandomState(self.spec.seed + 0x5EED)
        totals = np.zeros((p, N_CLASSES))
        used = 0
        for tree, oob in zip(self.trees, self.oob_masks):
            rows = np.flatnonzero(oob)
            if len(rows) == 0:
                continue
            used += 1
            Xo = X[rows]
            yo = y[rows]
            n_k = np.array([(yo == k).sum() for k in range(N_CLASSES)], dtype=np.float64)
            base = tree.value[tree.leaf_ids(Xo)].argmax(axis=1)
            base_correct = np.array(
                [((base == yo) & (yo == k)).sum() for k in range(N_CLASSES)]
            )
            shuffle = rng.permutation(len(rows))
            for j in range(p):
                Xp = Xo.copy()
                Xp[:, j] = Xp[shuffle, j]
                pred = tree.value[tree.leaf_ids(Xp)].argmax(axis=1)
                correct = np.array(
                    [((pred == yo) & (yo == k)).sum() for k in range(N_CLASSES)]
                )
                with np.errstate(invalid="ignore"):
                    totals[j] += np.where(n_k > 0, (base_correct - correct) / np.maximum(n_k, 1), 0.0)
        self.importance_cache = totals / max(used, 1)
        return self.importance_cache

    def to_dict(self) -> dict:
        doc = {"kind": "forest", "trees": [t.to_dict() for t in self.trees]}
        if self.importance_cache is not None:
            doc["importance"] = self.importance_cache.tolist()
        return doc


@dataclass
class GbmComponent(TrainedComponent):
    spec: ComponentSpec
    base_scores: np.ndarray  # (K,)
    trees: List[List[ArrayTree]]  # [round][class]
    shrinkage: float

    def _raw(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        F = np.tile(self.base_scores, (len(X), 1))
        for round_trees in self.trees:
            for k, tree in enumerate(round_trees):
                F[:, k] += self.shrinkage * tree.value[tree.leaf_ids(X), 0]
        return F

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        F = self._raw(X)
        F -= F.max(axis=1, keepdims=True)
        e = np.exp(F)
        return e / e.sum(axis=1, keepdims=True)

    def to_dict(self) -> dict:
        return {
            "kind": "gbm",
            "base_scores": self.base_scores.tolist(),
            "shrinkage": self.shrinkage,
            "trees": [[t.to_dict() for t in row] for row in self.trees],
        }


def train_component(X: np.ndarray, y: np.ndarray, spec: ComponentSpec) -> TrainedComponent:
    """Deterministic fit of one component on a labeled feature matrix."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != spec.encoding.value:
        raise SpecError(
            f"{spec.encoding.name} expects {spec.encoding.value} columns, got {X.shape}"
        )
    present = np.unique(y)
    if len(present) < 2:
        log.warning("single-class training set; fitting a constant classifier")
        return ConstantComponent(spec=spec, class_index=int(present[0]))
    params = spec.params()
    rng = np.random.RandomState(spec.seed)
    binned = BinnedMatrix.from_matrix(X)

    if spec.algorithm is Algorithm.TREE:
        tree = grow_classification_tree(
            binned, y, N_CLASSES,
            ClassTreeParams(criterion="gain_ratio", min_leaf=params["min_leaf"]),
            rng,
        )
        return TreeComponent(spec=spec, tree=prune_pessimistic(tree, params["confidence"]))

    if spec.algorithm is Algorithm.FOREST:
        n, p = X.shape
        mtry = max(1, int(np.sqrt(p)))
        trees = []
        oob_masks = []
        tree_params = ClassTreeParams(criterion="gini", min_leaf=params["min_leaf"], max_features=mtry)
        for _ in range(params["n_trees"]):
            counts = np.bincount(rng.randint(0, n, size=n), minlength=n).astype(np.float64)
            oob_masks.append(counts == 0)
            trees.append(
                grow_classification_tree(
                    binned, y, N_CLASSES, tree_params, rng, sample_weight=counts
                )
            )
        return ForestComponent(
            spec=spec, trees=trees, oob_masks=oob_masks, train_X=X, train_y=y
        )

    # GBM: multinomial deviance, Newton leaf steps
    n = len(y)
    Y = np.zeros((n, N_CLASSES))
    Y[np.arange(n), y] = 1.0
    priors = Y.mean(axis=0)
    base = np.log(np.clip(priors, 1e-12, None))
    base -= base.mean()
    F = np.tile(base, (n, 1))
    reg_params = RegTreeParams(min_leaf=params["min_leaf"], max_depth=params["interaction_depth"])
    leaf_scale = (N_CLASSES - 1) / N_CLASSES
    subsample = float(params["subsample"])
    rounds: List[List[ArrayTree]] = []
    for _ in range(params["rounds"]):
        Fs = F - F.max(axis=1, keepdims=True)
        e = np.exp(Fs)
        P = e / e.sum(axis=1, keepdims=True)
        if subsample < 1.0:
            keep = rng.rand(n) < subsample
            if not keep.any():
                keep[rng.randint(n)] = True
        else:
            keep = None
        round_trees = []
        for k in range(N_CLASSES):
            residual = Y[:, k] - P[:, k]
            hessian = np.abs(residual) * (1.0 - np.abs(residual))
            if keep is None:
                tree = grow_regression_tree(binned, residual, hessian, reg_params, leaf_scale)
            else:
                tree = grow_regression_tree(
                    binned, np.where(keep, residual, 0.0), np.where(keep, hessian, 0.0),
                    reg_params, leaf_scale, row_mask=keep,
                )
            F[:, k] += params["shrinkage"] * tree.value[tree.leaf_ids(X), 0]
            round_trees.append(tree)
        rounds.append(round_trees)
    return GbmComponent(
        spec=spec, base_scores=base, trees=rounds, shrinkage=params["shrinkage"]
    )


# -- compound models -------------------------------------------------------

@dataclass
class CompoundSpec:
    algorithm: Algorithm
    kw_encoding: Encoding
    nokw_encoding: Encoding
    seed: int = 0
    hyperparameters: dict = field(default_factory=dict)


@dataclass
class CompoundModel:
    model_kw: TrainedComponent
    model_nokw: TrainedComponent
    routing_vocabulary: Vocabulary


def train_compound(
    train: Sequence[LabeledCommit],
    spec: CompoundSpec,
    vocabulary: Optional[Vocabulary] = None,
) -> CompoundModel:
    vocab = vocabulary or default_vocabulary()
    components = {}
    for encoding in {spec.kw_encoding, spec.nokw_encoding}:
        X, y = feature_matrix(train, encoding, vocab)
        components[encoding] = train_component(
            X, y,
            ComponentSpec(spec.algorithm, encoding, spec.seed, spec.hyperparameters),
        )
    return CompoundModel(
        model_kw=components[spec.kw_encoding],
        model_nokw=components[spec.nokw_encoding],
        routing_vocabulary=vocab,
    )


def _route_mask(commits: Sequence[LabeledCommit], vocab: Vocabulary) -> np.ndarray:
    return np.array(
        [has_keywords(normalize_message(c.message), vocab) for c in commits], dtype=bool
    )


def classify_commits(model: CompoundModel, commits: Sequence[LabeledCommit]) -> List[Activity]:
    """Route each commit to one component and return its prediction."""
    vocab = model.routing_vocabulary
    routed = _route_mask(commits, vocab)
    out: List[Optional[Activity]] = [None] * len(commits)
    for component, mask in ((model.model_kw, routed), (model.model_nokw, ~routed)):
        idx = np.flatnonzero(mask)
        if len(idx) == 0:
            continue
        X, _ = feature_matrix([commits[i] for i in idx], component.spec.encoding, vocab)
        for i, act in zip(idx, component.predict_activities(X)):
            out[i] = act
    return out  # type: ignore[return-value]


def classify_commit(model: CompoundModel, commit: LabeledCommit) -> Activity:
    return classify_commits(model, [commit])[0]


# -- cross validation ------------------------------------------------------

@dataclass
class ResampleStats:
    accuracies: List[float]
    kappas: List[float]

    def summary(self) -> Dict[str, Dict[str, float]]:
        out = {}
        for name, values in (("accuracy", self.accuracies), ("kappa", self.kappas)):
            arr = np.asarray(values)
            out[name] = {
                "min": float(arr.min()),
                "q1": float(np.percentile(arr, 25)),
                "median": float(np.percentile(arr, 50)),
                "mean": float(arr.mean()),
                "q3": float(np.percentile(arr, 75)),
                "max": float(arr.max()),
            }
        return out

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def mean_kappa(self) -> float:
        return float(np.mean(self.kappas))


def _stratified_folds(y: np.ndarray, folds: int, rng: np.random.RandomState) -> List[np.ndarray]:
    assignments = np.empty(len(y), dtype=np.int64)
    for k in np.unique(y):
        idx = np.flatnonzero(y == k)
        if len(idx) < folds:
            raise CvError(f"class {k} has {len(idx)} instances, fewer than {folds} folds")
        idx = idx[rng.permutation(len(idx))]
        assignments[idx] = np.arange(len(idx)) % folds
    return [np.flatnonzero(assignments == f) for f in range(folds)]


def _cv_cells(
    train: Sequence[LabeledCommit],
    algorithm: Algorithm,
    cells: List[Tuple[Encoding, Encoding]],
    folds: int,
    repeats: int,
    seed: int,
    vocab: Vocabulary,
    hyperparameters: dict,
) -> Dict[Tuple[Encoding, Encoding], ResampleStats]:
    """Resampled metrics for many (kw, nokw) cells sharing trained parts."""
    encodings = sorted({e for pair in cells for e in pair}, key=lambda e: e.name)
    matrices = {enc: feature_matrix(train, enc, vocab) for enc in encodings}
    y_all = matrices[encodings[0]][1]
    routed = _route_mask(train, vocab)
    rng = np.random.RandomState(seed)
    results = {cell: ResampleStats([], []) for cell in cells}
    for _ in range(repeats):
        for holdout in _stratified_folds(y_all, folds, rng):
            train_idx = np.setdiff1d(np.arange(len(y_all)), holdout)
            preds: Dict[Encoding, np.ndarray] = {}
            for enc in encodings:
                X, y = matrices[enc]
                component = train_component(
                    X[train_idx], y[train_idx],
                    ComponentSpec(algorithm, enc, seed, hyperparameters),
                )
                preds[enc] = component.predict(X[holdout])
            truth = [CLASS_ORDER[i] for i in y_all[holdout]]
            hold_routed = routed[holdout]
            for kw_enc, nokw_enc in cells:
                merged = np.where(hold_routed, preds[kw_enc], preds[nokw_enc])
                stats = summarize(confusion([CLASS_ORDER[i] for i in merged], truth))
                results[(kw_enc, nokw_enc)].accuracies.append(stats.accuracy)
                results[(kw_enc, nokw_enc)].kappas.append(stats.kappa)
    return results


def repeated_cv(
    train: Sequence[LabeledCommit],
    spec: CompoundSpec,
    folds: int = 10,
    repeats: int = 5,
    seed: Optional[int] = None,
    vocabulary: Optional[Vocabulary] = None,
) -> ResampleStats:
    """Stratified k-fold, repeated; returns folds x repeats resamples."""
    if len(train) < folds:
        raise CvError(f"{len(train)} rows cannot fill {folds} folds")
    vocab = vocabulary or default_vocabulary()
    cell = (spec.kw_encoding, spec.nokw_encoding)
    return _cv_cells(
        train, spec.algorithm, [cell], folds, repeats,
        spec.seed if seed is None else seed, vocab, spec.hyperparameters,
    )[cell]


# -- evaluation grid -------------------------------------------------------

@dataclass
class GridRow:
    algorithm: Algorithm
    kw_encoding: Encoding
    nokw_encoding: Encoding
    stats: ResampleStats


@dataclass
class ChampionResult:
    algorithm: Algorithm
    kw_encoding: Encoding
    nokw_encoding: Encoding
    matrix: object
    summary: object


@dataclass
class GridReport:
    rows: List[GridRow]
    champions: List[ChampionResult]

    def row(self, algorithm: Algorithm, kw: Encoding, nokw: Encoding) -> GridRow:
        for r in self.rows:
            if r.algorithm is algorithm and r.kw_encoding is kw and r.nokw_encoding is nokw:
                return r
        raise KeyError((algorithm, kw, nokw))

    def to_csv(self) -> str:
        lines = ["algorithm,model_kw,model_nokw,cv_accuracy,cv_kappa"]
        for r in self.rows:
            lines.append(
                f"{r.algorithm.value},{_MODEL_LABELS[r.kw_encoding]},"
                f"{_MODEL_LABELS[r.nokw_encoding]},"
                f"{r.stats.mean_accuracy:.4f},{r.stats.mean_kappa:.4f}"
            )
        return "\n".join(lines) + "\n"


_MODEL_LABELS = {
    Encoding.KEYWORDS_20: "Keywords",
    Encoding.CHANGES_48: "Changes",
    Encoding.COMBINED_68: "Combined",
}

ALL_ENCODINGS = (Encoding.KEYWORDS_20, Encoding.CHANGES_48, Encoding.COMBINED_68)


def grid_evaluate(
    train: Sequence[LabeledCommit],
    test: Sequence[LabeledCommit],
    algorithms: Sequence[Algorithm] = (Algorithm.TREE, Algorithm.GBM, Algorithm.FOREST),
    folds: int = 10,
    repeats: int = 5,
    seed: int = 0,
    vocabulary: Optional[Vocabulary] = None,
    hyperparameters: Optional[dict] = None,
) -> GridReport:
    """All 9 compound cells per algorithm, plus held-out champion runs."""
    vocab = vocabulary or default_vocabulary()
    hyper = hyperparameters or {}
    cells = [(kw, nokw) for kw in ALL_ENCODINGS for nokw in ALL_ENCODINGS]
    rows: List[GridRow] = []
    champions: List[ChampionResult] = []
    for algorithm in algorithms:
        alg_hyper = algorithm_hyperparameters(algorithm, hyper)
        stats = _cv_cells(train, algorithm, cells, folds, repeats, seed, vocab, alg_hyper)
        for cell in cells:
            rows.append(GridRow(algorithm, cell[0], cell[1], stats[cell]))
        best_cell = max(cells, key=lambda c: stats[c].mean_accuracy)
        model = train_compound(
            train,
            CompoundSpec(algorithm, best_cell[0], best_cell[1], seed, alg_hyper),
            vocab,
        )
        preds = classify_commits(model, test)
        matrix = confusion(preds, [c.label for c in test])
        champions.append(
            ChampionResult(algorithm, best_cell[0], best_cell[1], matrix, summarize(matrix))
        )
    return GridReport(rows=rows, champions=champions)


# -- variable importance ---------------------------------------------------

@dataclass
class ImportanceReport:
    features: List[str]
    scores: np.ndarray  # (p, K) scaled 0..100, global max = 100

    def ranking(self) -> List[Tuple[str, Dict[str, float]]]:
        # descending by each feature's best class score, the published shape
        order = np.argsort(-self.scores.max(axis=1), kind="stable")
        return [
            (
                self.features[i],
                {CLASS_ORDER[k].value: float(self.scores[i, k]) for k in range(N_CLASSES)},
            )
            for i in order
        ]


def variable_importance(component: TrainedComponent) -> ImportanceReport:
    """Per-class permutation importance of a combined-encoding forest,
    scaled so the single largest score is 100."""
    if not isinstance(component, ForestComponent):
        raise SpecError("variable importance requires a FOREST component")
    if component.spec.encoding is not Encoding.COMBINED_68:
        raise SpecError("variable importance requires the COMBINED_68 encoding")
    raw = component.raw_importance()
    top = raw.max()
    scores = 100.0 * raw / top if top > 0 else raw.copy()
    return ImportanceReport(features=feature_names(component.spec.encoding), scores=scores)


# -- serialization ---------------------------------------------------------

def _component_to_dict(component: TrainedComponent) -> dict:
    doc = component.to_dict()
    doc.update(
        algorithm=component.spec.algorithm.value,
        encoding=component.spec.encoding.name,
        seed=component.spec.seed,
        hyperparameters=component.spec.hyperparameters,
    )
    return doc


def _component_from_dict(doc: dict) -> TrainedComponent:
    spec = ComponentSpec(
        Algorithm(doc["algorithm"]), Encoding[doc["encoding"]],
        doc["seed"], doc.get("hyperparameters", {}),
    )
    kind = doc["kind"]
    if kind == "constant":
        return ConstantComponent(spec=spec, class_index=doc["class_index"])
    if kind == "tree":
        return TreeComponent(spec=spec, tree=ArrayTree.from_dict(doc["tree"]))
    if kind == "forest":
        cache = doc.get("importance")
        return ForestComponent(
            spec=spec,
            trees=[ArrayTree.from_dict(t) for t in doc["trees"]],
            importance_cache=None if cache is None else np.asarray(cache),
        )
    if kind == "gbm":
        return GbmComponent(
            spec=spec,
            base_scores=np.asarray(doc["base_scores"]),
            trees=[[ArrayTree.from_dict(t) for t in row] for row in doc["trees"]],
            shrinkage=doc["shrinkage"],
        )
    raise SpecError(f"unknown component kind {kind!r}")


def save_model(model: CompoundModel, path) -> None:
    doc = {
        "format": "maintminer-compound-model",
        "version": 1,
        "model_kw": _component_to_dict(model.model_kw),
        "model_nokw": _component_to_dict(model.model_nokw),
        "vocabulary": {
            "stems": list(model.routing_vocabulary.stems),
            "per_class_top10": {
                act.value: list(stems)
                for act, stems in model.routing_vocabulary.per_class_top10.items()
            },
        },
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path) -> CompoundModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    vocab = Vocabulary(
        stems=tuple(doc["vocabulary"]["stems"]),
        per_class_top10={
            Activity(k): tuple(v) for k, v in doc["vocabulary"]["per_class_top10"].items()
        },
    )
    return CompoundModel(
        model_kw=_component_from_dict(doc["model_kw"]),
        model_nokw=_component_from_dict(doc["model_nokw"]),
        routing_vocabulary=vocab,
    )
