"""Evaluation: ROC/AUC, confusion metrics, one-way ANOVA, the three matching
scenarios, and the two feature-ablation procedures."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from profilematch.errors import EvaluationError
from profilematch.features import (
    ALL_FEATURES,
    FEATURE_NAMES,
    N_FEATURES,
    NO_NAME_FEATURES,
    feature_subset,
)
from profilematch.folds import FoldData
from profilematch.learn import LearnerConfig, train_model

logger = logging.getLogger(__name__)

SCENARIOS = ("A", "B", "C")
ABLATION_MODES = ("all_but_x", "only_x")


def roc_auc(scores_pos: Sequence[float], scores_neg: Sequence[float]) -> float:
    """Area under the ROC curve via the rank-sum identity
    AUC = (#{p > n} + #{p = n}/2) / (|pos| * |neg|), computed with one sort."""
    m = len(scores_pos)
    n = len(scores_neg)
    if m == 0 or n == 0:
        raise EvaluationError("AUC undefined: one class has no scores")
    combined = sorted(
        [(float(s), 1) for s in scores_pos] + [(float(s), 0) for s in scores_neg]
    )
    rank_sum_pos = 0.0
    i = 0
    total = m + n
    while i < total:
        j = i
        while j + 1 < total and combined[j + 1][0] == combined[i][0]:
            j += 1
        avg_rank = (i + j) / 2.0 + 1.0  # 1-based average rank of the tie block
        for k in range(i, j + 1):
            if combined[k][1] == 1:
                rank_sum_pos += avg_rank
        i = j + 1
    u = rank_sum_pos - m * (m + 1) // 2
    return u / (m * n)


def roc_points(scores: Sequence[float], labels: Sequence[int]) -> list[tuple[float, float]]:
    """(fpr, tpr) points of the threshold-swept ROC curve, from (0,0) to (1,1)."""
    pairs = sorted(zip(scores, labels), key=lambda t: -t[0])
    n_pos = sum(1 for _, l in pairs if l == 1)
    n_neg = len(pairs) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise EvaluationError("ROC undefined: one class has no scores")
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(pairs):
        score = pairs[i][0]
        while i < len(pairs) and pairs[i][0] == score:
            if pairs[i][1] == 1:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((fp / n_neg, tp / n_pos))
    return points


@dataclass(frozen=True)
class ConfusionMetrics:
    accuracy: float
    tpr: float | None
    fpr: float | None


def confusion_metrics(
    scores: Sequence[float], labels: Sequence[int], threshold: float = 0.5
) -> ConfusionMetrics:
    """Accuracy/TPR/FPR predicting match iff score >= threshold; a rate whose
    class is absent is reported as None."""
    if len(scores) == 0 or len(scores) != len(labels):
        raise ValueError("scores and labels must be non-empty and equal length")
    tp = fp = tn = fn = 0
    for s, l in zip(scores, labels):
        pred = s >= threshold
        if l == 1:
            if pred:
                tp += 1
            else:
                fn += 1
        else:
            if pred:
                fp += 1
            else:
                tn += 1
    accuracy = (tp + tn) / len(scores)
    tpr = tp / (tp + fn) if (tp + fn) > 0 else None
    fpr = fp / (fp + tn) if (fp + tn) > 0 else None
    return ConfusionMetrics(accuracy=accuracy, tpr=tpr, fpr=fpr)


def _betacf(a: float, b: float, x: float, rel_tol: float = 1e-10) -> float:
    """Continued fraction for the regularized incomplete beta (modified
    Lentz), evaluated to a relative tolerance of 1e-10."""
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < rel_tol:
            return h
    raise EvaluationError("incomplete beta continued fraction did not converge")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_sf(f_value: float, df1: int, df2: int) -> float:
    """Survival function of the F distribution (the ANOVA p-value)."""
    if f_value < 0.0:
        return 1.0
    x = df2 / (df2 + df1 * f_value)
    return betainc_reg(df2 / 2.0, df1 / 2.0, x)


@dataclass(frozen=True)
class AnovaResult:
    F: float
    df1: int
    df2: int
    p: float


def anova_f(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way ANOVA: F = (SSB/df1) / (SSW/df2), p from the F survival
    function. Zero within-group variance with unequal means is degenerate
    (infinite F) and raises."""
    if len(groups) < 2:
        raise ValueError("ANOVA needs at least 2 groups")
    sizes = [len(g) for g in groups]
    if any(s < 2 for s in sizes):
        raise ValueError("every ANOVA group needs at least 2 values")
    total_n = sum(sizes)
    grand = sum(sum(g) for g in groups) / total_n
    means = [sum(g) / len(g) for g in groups]
    ssb = sum(len(g) * (mg - grand) ** 2 for g, mg in zip(groups, means))
    ssw = sum(sum((v - mg) ** 2 for v in g) for g, mg in zip(groups, means))
    df1 = len(groups) - 1
    df2 = total_n - len(groups)
    if ssw <= 0.0:
        if ssb > 0.0:
            raise EvaluationError("degenerate ANOVA: zero within-group variance, unequal means")
        raise EvaluationError("degenerate ANOVA: zero variance everywhere")
    f_value = (ssb / df1) / (ssw / df2)
    return AnovaResult(F=f_value, df1=df1, df2=df2, p=f_sf(f_value, df1, df2))


@dataclass
class FoldMetrics:
    fold: int
    auc: float
    accuracy: float
    tpr: float | None
    fpr: float | None
    n_test_pos: int
    n_test_neg: int

    def to_dict(self) -> dict:
        return {
            "fold": self.fold,
            "auc": self.auc,
            "accuracy": self.accuracy,
            "tpr": self.tpr,
            "fpr": self.fpr,
            "n_test_pos": self.n_test_pos,
            "n_test_neg": self.n_test_neg,
        }


@dataclass
class EvalReport:
    """Per-fold AUC/accuracy/TPR/FPR plus their mean and standard deviation."""

    scenario: str
    classifier: dict
    feature_subset: list
    per_fold: list[FoldMetrics]
    warnings: list = field(default_factory=list)

    def _collect(self, name: str) -> list[float]:
        return [
            getattr(fm, name) for fm in self.per_fold if getattr(fm, name) is not None
        ]

    def mean(self, name: str) -> float | None:
        vals = self._collect(name)
        return sum(vals) / len(vals) if vals else None

    def std(self, name: str) -> float | None:
        vals = self._collect(name)
        if len(vals) < 2:
            return None
        mu = sum(vals) / len(vals)
        return math.sqrt(sum((v - mu) ** 2 for v in vals) / (len(vals) - 1))

    def to_dict(self) -> dict:
        measures = ("auc", "accuracy", "tpr", "fpr")
        return {
            "scenario": self.scenario,
            "classifier": self.classifier,
            "feature_subset": list(self.feature_subset),
            "per_fold": [fm.to_dict() for fm in self.per_fold],
            "mean": {m: self.mean(m) for m in measures},
            "std": {m: self.std(m) for m in measures},
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _evaluate_fold(
    fold: FoldData,
    config: LearnerConfig,
    subset: frozenset,
    test_mask: np.ndarray | None = None,
) -> tuple[FoldMetrics | None, str | None]:
    """Train on the fold's train matrix and score its (optionally filtered)
    test matrix; returns (metrics, warning)."""
    test_labels = fold.test.labels
    test_values = fold.test.learning_matrix()
    if test_mask is not None:
        test_labels = test_labels[test_mask]
        test_values = test_values[test_mask]
    n_pos = int((test_labels == 1).sum())
    n_neg = int((test_labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        return None, (
            f"fold {fold.index}: test set lacks a class "
            f"({n_pos} positives, {n_neg} negatives); skipped"
        )
    model = train_model(
        fold.train.learning_matrix(),
        fold.train.labels,
        config,
        subset=subset,
        seed=config.seed + fold.index,
    )
    scores = model.predict_proba_batch(test_values)
    auc = roc_auc(scores[test_labels == 1], scores[test_labels == 0])
    cm = confusion_metrics(scores, test_labels, threshold=config.threshold)
    return (
        FoldMetrics(
            fold=fold.index,
            auc=auc,
            accuracy=cm.accuracy,
            tpr=cm.tpr,
            fpr=cm.fpr,
            n_test_pos=n_pos,
            n_test_neg=n_neg,
        ),
        None,
    )


def run_scenario(
    folds: list[FoldData], config: LearnerConfig, scenario: str
) -> EvalReport:
    """Run one matching scenario over all folds.

    A trains and tests on all 27 features; B trains on everything but tests
    only pairs whose Soundex name similarity equals 1; C restricts training
    and testing to the non-name features f10..f26.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    subset = NO_NAME_FEATURES if scenario == "C" else ALL_FEATURES
    per_fold: list[FoldMetrics] = []
    warnings: list[str] = []
    any_qualifying = False
    for fold in folds:
        mask = None
        if scenario == "B":
            mask = fold.test.values[:, 0] == 1.0
            if not mask.any():
                warnings.append(f"fold {fold.index}: no Soundex-equal test pairs; skipped")
                continue
        any_qualifying = True
        metrics, warning = _evaluate_fold(fold, config, subset, test_mask=mask)
        if warning is not None:
            warnings.append(warning)
            logger.warning(warning)
        if metrics is not None:
            per_fold.append(metrics)
    if scenario == "B" and not any_qualifying:
        raise EvaluationError(
            "scenario B: no fold has any test pair with Soundex name similarity 1.0"
        )
    if not per_fold:
        raise EvaluationError(f"scenario {scenario}: no fold could be evaluated")
    return EvalReport(
        scenario=scenario,
        classifier=config.to_dict(),
        feature_subset=sorted(subset),
        per_fold=per_fold,
        warnings=warnings,
    )


@dataclass
class AblationReport:
    """Mean AUC per feature under all-but-x or only-x training."""

    mode: str
    classifier: dict
    per_feature: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "classifier": self.classifier,
            "per_feature": [
                {
                    "index": i,
                    "feature": FEATURE_NAMES[i],
                    "mean_auc": self.per_feature[i],
                }
                for i in sorted(self.per_feature)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def ablation(folds: list[FoldData], config: LearnerConfig, mode: str) -> AblationReport:
    """27 scenario-A runs per mode: train with every feature except x
    (all_but_x) or with x alone (only_x); record mean AUC over folds."""
    if mode not in ABLATION_MODES:
        raise ValueError(f"unknown ablation mode {mode!r}; expected one of {ABLATION_MODES}")
    per_feature: dict[int, float] = {}
    for x in range(N_FEATURES):
        if mode == "all_but_x":
            subset = feature_subset(set(range(N_FEATURES)) - {x})
        else:
            subset = feature_subset({x})
        aucs = []
        for fold in folds:
            metrics, _ = _evaluate_fold(fold, config, subset)
            if metrics is not None:
                aucs.append(metrics.auc)
        if not aucs:
            raise EvaluationError(f"ablation {mode}: no evaluable fold for feature {x}")
        per_feature[x] = sum(aucs) / len(aucs)
    return AblationReport(mode=mode, classifier=config.to_dict(), per_feature=per_feature)
