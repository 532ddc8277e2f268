"""From-scratch match-probability learners: regression stumps + LogitBoost,
classification trees + discrete AdaBoost, and a random forest.

All learners expect feature matrices whose missing entries were already
mapped to the -1.0 sentinel (every genuine feature value is >= 0, so stumps
can isolate missingness). Training is deterministic for a given
(data, config, seed); the split search runs on the kernel backend.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from profilematch import _kernels as kernels
from profilematch.errors import TrainingError
from profilematch.metrics import COMPRESSION_LEVEL
from profilematch.features import ALL_FEATURES, MISSING_SENTINEL, N_FEATURES, feature_subset

LOGITBOOST_P_CLAMP = 1e-5

# Stand-in weight for a base learner with zero weighted error (alpha would be
# infinite); chosen so a single perfect member dominates any realistic vote.
_ALPHA_CAP = 0.5 * math.log((1.0 - 1e-12) / 1e-12)


def _sigmoid2(f: float) -> float:
    """1 / (1 + e^(-2f)), overflow-safe for any finite f."""
    if f >= 0.0:
        return 1.0 / (1.0 + math.exp(-2.0 * f))
    e = math.exp(2.0 * f)
    return e / (1.0 + e)


def _sigmoid2_batch(f: np.ndarray) -> np.ndarray:
    out = np.empty_like(f)
    pos = f >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-2.0 * f[pos]))
    e = np.exp(2.0 * f[~pos])
    out[~pos] = e / (1.0 + e)
    return out


@dataclass(frozen=True)
class DecisionStump:
    """One-split regression stump: left_value where x <= threshold, else
    right_value. A threshold of +inf encodes a constant fit."""

    feature_index: int
    threshold: float
    left_value: float
    right_value: float

    def predict(self, x: np.ndarray) -> float:
        return self.left_value if x[self.feature_index] <= self.threshold else self.right_value

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        return np.where(
            X[:, self.feature_index] <= self.threshold, self.left_value, self.right_value
        )


@dataclass
class TreeNode:
    """Recursive classification-tree node; leaves carry the weighted positive
    fraction of their training samples."""

    prob: float
    feature_index: int = -1
    threshold: float = math.nan
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def predict(self, x: np.ndarray) -> float:
        node = self
        while not node.is_leaf:
            node = node.left if x[node.feature_index] <= node.threshold else node.right
        return node.prob

    def to_obj(self) -> dict:
        if self.is_leaf:
            return {"prob": self.prob}
        return {
            "feature_index": self.feature_index,
            "threshold": self.threshold,
            "left": self.left.to_obj(),
            "right": self.right.to_obj(),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "TreeNode":
        if "prob" in obj:
            return cls(prob=float(obj["prob"]))
        return cls(
            prob=math.nan,
            feature_index=int(obj["feature_index"]),
            threshold=float(obj["threshold"]),
            left=cls.from_obj(obj["left"]),
            right=cls.from_obj(obj["right"]),
        )


@dataclass
class TrainedModel:
    """A serialized ensemble: its kind, members, feature subset, and the
    training configuration."""

    kind: str
    members: list
    feature_subset: frozenset
    metadata: dict = field(default_factory=dict)

    def predict_proba(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (N_FEATURES,):
            raise ValueError(f"expected a {N_FEATURES}-feature vector, got {x.shape}")
        if self.kind == "logitboost":
            f = 0.0
            for stump in self.members:
                f += 0.5 * stump.predict(x)
            return _sigmoid2(f)
        if self.kind == "adaboost":
            total = sum(alpha for alpha, _ in self.members)
            if total <= 0.0:
                return 0.5
            vote = sum(alpha for alpha, tree in self.members if tree.predict(x) >= 0.5)
            return vote / total
        if self.kind == "random_forest":
            return sum(tree.predict(x) for tree in self.members) / len(self.members)
        raise ValueError(f"unknown model kind {self.kind!r}")

    def predict_proba_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != N_FEATURES:
            raise ValueError(f"expected (n, {N_FEATURES}) matrix, got {X.shape}")
        if self.kind == "logitboost":
            f = np.zeros(len(X))
            for stump in self.members:
                f += 0.5 * stump.predict_batch(X)
            return _sigmoid2_batch(f)
        return np.array([self.predict_proba(x) for x in X])


def predict_proba(model: TrainedModel, x) -> float:
    """Probability that the pair described by x is a match."""
    return model.predict_proba(x)


def _check_training_data(X: np.ndarray, y: np.ndarray) -> None:
    if len(X) != len(y):
        raise ValueError("X and y lengths differ")
    if len(X) == 0 or len(set(int(v) for v in y)) < 2:
        raise TrainingError("training set must contain both classes")


def _sorted_columns(X: np.ndarray, feats: Sequence[int]):
    """Per-feature sort orders and presorted values, computed once per
    training set (boosting reorders only targets/weights per iteration)."""
    cols = {}
    for f in feats:
        order = np.argsort(X[:, f], kind="stable")
        cols[f] = (order, np.ascontiguousarray(X[order, f]))
    return cols


def _fit_stump(sorted_cols, z: np.ndarray, w: np.ndarray) -> DecisionStump:
    best = None
    best_sse = math.inf
    for f, (order, xs) in sorted_cols.items():
        zs = np.ascontiguousarray(z[order])
        ws = np.ascontiguousarray(w[order])
        thr, left, right, sse = kernels.best_regression_split(xs, zs, ws)
        if sse < best_sse:
            best_sse = sse
            best = DecisionStump(f, thr, left, right)
    assert best is not None
    return best


def train_logitboost(
    X,
    y,
    iterations: int = 25,
    seed: int = 0,
    subset: frozenset | None = None,
) -> TrainedModel:
    """Additive logistic boosting of regression stumps.

    Each round fits a stump to the working responses z = (y - p) / (p(1-p))
    with weights w = p(1-p), then updates F <- F + f/2 and p = 1/(1+e^(-2F)).
    Probabilities are clamped to [1e-5, 1-1e-5] for stability.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_training_data(X, y)
    subset = feature_subset(subset) if subset is not None else ALL_FEATURES
    sorted_cols = _sorted_columns(X, sorted(subset))

    members: list[DecisionStump] = []
    nll_per_iteration: list[float] = []
    F = np.zeros(len(X))
    for _ in range(iterations):
        p = np.clip(_sigmoid2_batch(F), LOGITBOOST_P_CLAMP, 1.0 - LOGITBOOST_P_CLAMP)
        w = p * (1.0 - p)
        z = (y - p) / w
        stump = _fit_stump(sorted_cols, z, w)
        members.append(stump)
        F = F + 0.5 * stump.predict_batch(X)
        p_new = np.clip(
            _sigmoid2_batch(F), LOGITBOOST_P_CLAMP, 1.0 - LOGITBOOST_P_CLAMP
        )
        nll_per_iteration.append(
            float(-np.mean(y * np.log(p_new) + (1.0 - y) * np.log(1.0 - p_new)))
        )
    metadata = {
        "iterations": iterations,
        "seed": seed,
        "missing_sentinel": MISSING_SENTINEL,
        "compression_level": COMPRESSION_LEVEL,
        "train_nll": nll_per_iteration,
    }
    return TrainedModel("logitboost", members, subset, metadata)


def _weighted_prob(y: np.ndarray, w: np.ndarray) -> float:
    total = float(w.sum())
    if total <= 0.0:
        return 0.5
    return float(w[y == 1.0].sum()) / total


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    feats: list[int],
    max_depth: int | None,
    min_leaf: int,
    mtry: int | None,
    rng: np.random.Generator | None,
) -> TreeNode:
    """Grow a weighted-Gini classification tree iteratively (explicit stack,
    no recursion-depth limit). mtry, when set, samples that many candidate
    features per split."""
    root = TreeNode(prob=0.0)
    stack = [(root, np.arange(len(X)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        yi = y[idx]
        wi = w[idx]
        node.prob = _weighted_prob(yi, wi)
        if (
            (max_depth is not None and depth >= max_depth)
            or len(idx) < 2 * min_leaf
            or node.prob <= 0.0
            or node.prob >= 1.0
        ):
            continue
        if mtry is not None and mtry < len(feats):
            candidates = sorted(rng.choice(len(feats), size=mtry, replace=False).tolist())
            candidates = [feats[c] for c in candidates]
        else:
            candidates = feats
        best_f = -1
        best_thr = math.nan
        best_score = math.inf
        for f in candidates:
            order = np.argsort(X[idx, f], kind="stable")
            xs = np.ascontiguousarray(X[idx[order], f])
            ys = np.ascontiguousarray(yi[order])
            ws = np.ascontiguousarray(wi[order])
            thr, score = kernels.best_gini_split(xs, ys, ws)
            if not math.isnan(thr) and score < best_score:
                best_score = score
                best_f = f
                best_thr = thr
        if best_f < 0:
            continue  # no boundary on any candidate feature: stay a leaf
        mask = X[idx, best_f] <= best_thr
        node.feature_index = best_f
        node.threshold = best_thr
        node.left = TreeNode(prob=0.0)
        node.right = TreeNode(prob=0.0)
        stack.append((node.right, idx[~mask], depth + 1))
        stack.append((node.left, idx[mask], depth + 1))
    return root


def train_adaboost(
    X,
    y,
    iterations: int = 200,
    base_depth: int = 2,
    seed: int = 0,
    subset: frozenset | None = None,
) -> TrainedModel:
    """Discrete AdaBoost over shallow classification trees.

    alpha = ln((1-e)/e)/2; boosting stops early when a base learner reaches
    e = 0 (kept with a capped alpha) or e >= 0.5. The score is the
    alpha-weighted fraction of members voting match.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_training_data(X, y)
    subset = feature_subset(subset) if subset is not None else ALL_FEATURES
    feats = sorted(subset)

    n = len(X)
    w = np.full(n, 1.0 / n)
    members: list[tuple[float, TreeNode]] = []
    for _ in range(iterations):
        tree = _grow_tree(X, y, w, feats, max_depth=base_depth, min_leaf=1, mtry=None, rng=None)
        pred = np.array([tree.predict(x) for x in X]) >= 0.5
        wrong = pred != (y == 1.0)
        err = float(w[wrong].sum())
        if err <= 0.0:
            members.append((_ALPHA_CAP, tree))
            break
        if err >= 0.5:
            if not members:
                members.append((0.0, tree))
            break
        alpha = 0.5 * math.log((1.0 - err) / err)
        members.append((alpha, tree))
        w = w * np.exp(np.where(wrong, alpha, -alpha))
        w = w / w.sum()
    metadata = {
        "iterations": iterations,
        "base_depth": base_depth,
        "seed": seed,
        "missing_sentinel": MISSING_SENTINEL,
        "compression_level": COMPRESSION_LEVEL,
    }
    return TrainedModel("adaboost", members, subset, metadata)


def train_random_forest(
    X,
    y,
    n_trees: int = 150,
    seed: int = 0,
    subset: frozenset | None = None,
    min_leaf: int = 1,
) -> TrainedModel:
    """Random forest of fully grown trees: one bootstrap sample per tree,
    floor(sqrt(|features|)) random candidate features per split, leaves grown
    to purity (min_leaf 1); the score is the mean leaf probability."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_training_data(X, y)
    subset = feature_subset(subset) if subset is not None else ALL_FEATURES
    feats = sorted(subset)
    mtry = max(1, int(math.isqrt(len(feats))))

    n = len(X)
    trees = []
    for child in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child)
        boot = rng.integers(0, n, size=n)
        trees.append(
            _grow_tree(
                X[boot],
                y[boot],
                np.ones(n),
                feats,
                max_depth=None,
                min_leaf=min_leaf,
                mtry=mtry,
                rng=rng,
            )
        )
    metadata = {
        "n_trees": n_trees,
        "mtry": mtry,
        "min_leaf": min_leaf,
        "seed": seed,
        "missing_sentinel": MISSING_SENTINEL,
        "compression_level": COMPRESSION_LEVEL,
    }
    return TrainedModel("random_forest", trees, subset, metadata)


@dataclass(frozen=True)
class LearnerConfig:
    """Which learner to train and with what settings."""

    kind: str = "logitboost"
    iterations: int = 25
    adaboost_iterations: int = 200
    n_trees: int = 150
    base_depth: int = 2
    seed: int = 0
    threshold: float = 0.5

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "iterations": self.iterations,
            "adaboost_iterations": self.adaboost_iterations,
            "n_trees": self.n_trees,
            "base_depth": self.base_depth,
            "seed": self.seed,
            "threshold": self.threshold,
        }


MODEL_KINDS = ("logitboost", "adaboost", "random_forest")


def train_model(X, y, config: LearnerConfig, subset: frozenset | None = None, seed: int | None = None) -> TrainedModel:
    """Dispatch to the configured learner."""
    seed = config.seed if seed is None else seed
    if config.kind == "logitboost":
        return train_logitboost(X, y, iterations=config.iterations, seed=seed, subset=subset)
    if config.kind == "adaboost":
        return train_adaboost(
            X, y, iterations=config.adaboost_iterations, base_depth=config.base_depth,
            seed=seed, subset=subset,
        )
    if config.kind == "random_forest":
        return train_random_forest(X, y, n_trees=config.n_trees, seed=seed, subset=subset)
    raise ValueError(f"unknown model kind {config.kind!r}")


def model_to_json(model: TrainedModel) -> str:
    """Self-describing portable JSON for a trained model."""
    if model.kind == "logitboost":
        members = [
            {
                "feature_index": s.feature_index,
                "threshold": s.threshold,
                "left_value": s.left_value,
                "right_value": s.right_value,
            }
            for s in model.members
        ]
    elif model.kind == "adaboost":
        members = [{"alpha": alpha, "tree": tree.to_obj()} for alpha, tree in model.members]
    elif model.kind == "random_forest":
        members = [tree.to_obj() for tree in model.members]
    else:
        raise ValueError(f"unknown model kind {model.kind!r}")
    obj = {
        "kind": model.kind,
        "feature_subset": sorted(model.feature_subset),
        "metadata": model.metadata,
        "members": members,
    }
    return json.dumps(obj, sort_keys=True)


def model_from_json(text: str) -> TrainedModel:
    obj = json.loads(text)
    kind = obj["kind"]
    if kind == "logitboost":
        members = [
            DecisionStump(
                int(m["feature_index"]),
                float(m["threshold"]),
                float(m["left_value"]),
                float(m["right_value"]),
            )
            for m in obj["members"]
        ]
    elif kind == "adaboost":
        members = [(float(m["alpha"]), TreeNode.from_obj(m["tree"])) for m in obj["members"]]
    elif kind == "random_forest":
        members = [TreeNode.from_obj(m) for m in obj["members"]]
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    return TrainedModel(
        kind=kind,
        members=members,
        feature_subset=feature_subset(obj["feature_subset"]),
        metadata=obj.get("metadata", {}),
    )


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))
        fh.write("\n")


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read())
