import numpy as np
import pytest

from profilematch.errors import TrainingError
from profilematch.evaluate import roc_auc
from profilematch.features import N_FEATURES, feature_subset
from profilematch.learn import (
    LearnerConfig,
    TrainedModel,
    _grow_tree,
    load_model,
    model_from_json,
    model_to_json,
    save_model,
    train_adaboost,
    train_logitboost,
    train_model,
    train_random_forest,
)


def embed(col, n_rows):
    """Place a 1-D feature into column 0 of a 27-wide sentinel-padded matrix."""
    X = np.full((n_rows, N_FEATURES), -1.0)
    X[:, 0] = col
    return X


def separable_data(n=60):
    rng = np.random.default_rng(0)
    y = np.array([1] * (n // 2) + [0] * (n - n // 2), dtype=np.int8)
    col = np.where(y == 1, 1.0, 0.0) + rng.normal(0, 0.01, n)
    return embed(col, n), y


def random_data(n, seed):
    rng = np.random.default_rng(seed)
    X = np.full((n, N_FEATURES), -1.0)
    X[:, :5] = rng.uniform(0, 1, (n, 5))
    y = (rng.uniform(size=n) < 0.5).astype(np.int8)
    if y.sum() in (0, n):  # force both classes
        y[0] = 1 - y[0]
    return X, y


def train_accuracy(model, X, y, threshold=0.5):
    scores = model.predict_proba_batch(X)
    return ((scores >= threshold).astype(int) == y).mean()


class TestLogitBoost:
    def test_separable_perfect_accuracy(self):
        X, y = separable_data()
        model = train_logitboost(X, y, iterations=25)
        assert train_accuracy(model, X, y) == 1.0

    def test_random_labels_test_auc_near_half(self):
        X, y = random_data(400, seed=1)
        Xt, yt = random_data(400, seed=2)
        model = train_logitboost(X, y, iterations=25)
        scores = model.predict_proba_batch(Xt)
        auc_train = roc_auc(
            model.predict_proba_batch(X)[y == 1], model.predict_proba_batch(X)[y == 0]
        )
        auc_test = roc_auc(scores[yt == 1], scores[yt == 0])
        assert 0.5 <= auc_train <= 1.0
        assert abs(auc_test - 0.5) <= 0.1

    def test_duplicated_rows_give_equivalent_model(self):
        # scale invariance of the weighted fit: same stumps up to accumulation
        # rounding, indistinguishable predictions
        X, y = separable_data(40)
        m1 = train_logitboost(X, y, iterations=10)
        m2 = train_logitboost(np.vstack([X, X]), np.concatenate([y, y]), iterations=10)
        for s1, s2 in zip(m1.members, m2.members):
            assert s1.feature_index == s2.feature_index
            assert s1.threshold == s2.threshold
            assert s1.left_value == pytest.approx(s2.left_value, abs=1e-9)
            assert s1.right_value == pytest.approx(s2.right_value, abs=1e-9)
        Xt = np.random.default_rng(3).uniform(-1, 2, (50, N_FEATURES))
        assert np.allclose(m1.predict_proba_batch(Xt), m2.predict_proba_batch(Xt), atol=1e-9)

    def test_zero_iterations_prior_only(self):
        X, y = separable_data(40)
        model = train_logitboost(X, y, iterations=0)
        assert model.predict_proba(np.zeros(N_FEATURES)) == 0.5

    def test_single_class_rejected(self):
        X = np.zeros((10, N_FEATURES))
        y = np.ones(10, dtype=np.int8)
        with pytest.raises(TrainingError):
            train_logitboost(X, y)

    def test_nll_non_increasing(self):
        for seed in (1, 2):
            X, y = random_data(200, seed=seed)
            model = train_logitboost(X, y, iterations=25)
            nll = model.metadata["train_nll"]
            for a, b in zip(nll, nll[1:]):
                assert b <= a + 1e-9
        X, y = separable_data()
        nll = train_logitboost(X, y, iterations=25).metadata["train_nll"]
        for a, b in zip(nll, nll[1:]):
            assert b <= a + 1e-9


class TestAdaBoost:
    def test_separable_perfect_accuracy(self):
        X, y = separable_data()
        model = train_adaboost(X, y, iterations=20)
        assert train_accuracy(model, X, y) == 1.0

    def test_zero_error_base_learner_stops_with_single_member(self):
        X, y = separable_data()
        model = train_adaboost(X, y, iterations=200)
        assert len(model.members) == 1  # first tree separates perfectly

    def test_random_labels_test_auc_near_half(self):
        X, y = random_data(400, seed=3)
        Xt, yt = random_data(400, seed=4)
        model = train_adaboost(X, y, iterations=30)
        scores = model.predict_proba_batch(Xt)
        assert abs(roc_auc(scores[yt == 1], scores[yt == 0]) - 0.5) <= 0.1

    def test_single_class_rejected(self):
        with pytest.raises(TrainingError):
            train_adaboost(np.zeros((5, N_FEATURES)), np.zeros(5, dtype=np.int8))


class TestRandomForest:
    def test_separable_high_accuracy(self):
        X, y = separable_data()
        model = train_random_forest(X, y, n_trees=30, seed=1)
        assert train_accuracy(model, X, y) >= 0.99

    def test_same_seed_identical_serialization(self):
        X, y = random_data(80, seed=5)
        m1 = train_random_forest(X, y, n_trees=10, seed=9)
        m2 = train_random_forest(X, y, n_trees=10, seed=9)
        assert model_to_json(m1) == model_to_json(m2)
        m3 = train_random_forest(X, y, n_trees=10, seed=10)
        assert model_to_json(m1) != model_to_json(m3)

    def test_single_class_tree_predicts_that_class_everywhere(self):
        X = np.random.default_rng(0).uniform(0, 1, (20, N_FEATURES))
        y = np.ones(20)
        tree = _grow_tree(X, y, np.ones(20), list(range(N_FEATURES)),
                          max_depth=None, min_leaf=1, mtry=None, rng=None)
        assert tree.is_leaf
        for x in X:
            assert tree.predict(x) == 1.0

    def test_single_class_rejected(self):
        with pytest.raises(TrainingError):
            train_random_forest(np.zeros((5, N_FEATURES)), np.ones(5, dtype=np.int8))


class TestPredictProba:
    def test_range_on_fuzzed_inputs(self):
        X, y = random_data(100, seed=6)
        rng = np.random.default_rng(7)
        for config in (
            LearnerConfig(kind="logitboost", iterations=10),
            LearnerConfig(kind="adaboost", adaboost_iterations=10),
            LearnerConfig(kind="random_forest", n_trees=10),
        ):
            model = train_model(X, y, config)
            for _ in range(50):
                x = rng.uniform(-1, 2, N_FEATURES)
                assert 0.0 <= model.predict_proba(x) <= 1.0

    def test_extreme_ensemble_scores_do_not_overflow(self):
        from profilematch.learn import DecisionStump

        stumps = [DecisionStump(0, 0.5, -1e6, 1e6) for _ in range(5)]
        model = TrainedModel("logitboost", stumps, feature_subset(range(27)), {})
        lo = np.zeros(N_FEATURES)
        hi = np.ones(N_FEATURES)
        assert model.predict_proba(lo) == 0.0
        assert model.predict_proba(hi) == 1.0
        batch = model.predict_proba_batch(np.vstack([lo, hi]))
        assert batch[0] == 0.0 and batch[1] == 1.0

    def test_wrong_dimensionality_rejected(self):
        X, y = separable_data(30)
        model = train_logitboost(X, y, iterations=5)
        with pytest.raises(ValueError):
            model.predict_proba(np.zeros(5))
        with pytest.raises(ValueError):
            model.predict_proba_batch(np.zeros((3, 5)))

    def test_subset_isolation(self):
        rng = np.random.default_rng(8)
        X = rng.uniform(0, 1, (120, N_FEATURES))
        y = (X[:, 12] > 0.5).astype(np.int8)
        subset = feature_subset(range(10, 27))
        for config in (
            LearnerConfig(kind="logitboost", iterations=10),
            LearnerConfig(kind="adaboost", adaboost_iterations=5),
            LearnerConfig(kind="random_forest", n_trees=10),
        ):
            model = train_model(X, y, config, subset=subset)
            x = rng.uniform(0, 1, N_FEATURES)
            base = model.predict_proba(x)
            for trial in range(10):
                x2 = x.copy()
                x2[:10] = rng.uniform(0, 1, 10)  # perturb name features only
                assert model.predict_proba(x2) == base


class TestModelSerialization:
    @pytest.mark.parametrize(
        "config",
        [
            LearnerConfig(kind="logitboost", iterations=8),
            LearnerConfig(kind="adaboost", adaboost_iterations=8),
            LearnerConfig(kind="random_forest", n_trees=8),
        ],
    )
    def test_json_round_trip_preserves_predictions(self, config, tmp_path):
        X, y = random_data(80, seed=11)
        model = train_model(X, y, config)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert isinstance(loaded, TrainedModel)
        assert loaded.kind == model.kind
        assert loaded.feature_subset == model.feature_subset
        Xt = np.random.default_rng(12).uniform(-1, 1, (30, N_FEATURES))
        assert np.array_equal(model.predict_proba_batch(Xt), loaded.predict_proba_batch(Xt))

    def test_round_trip_is_byte_stable(self):
        X, y = random_data(60, seed=13)
        model = train_logitboost(X, y, iterations=6)
        text = model_to_json(model)
        assert model_to_json(model_from_json(text)) == text

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            model_from_json('{"kind": "svm", "members": [], "feature_subset": [0]}')

    def test_train_model_unknown_kind(self):
        X, y = separable_data(20)
        with pytest.raises(ValueError):
            train_model(X, y, LearnerConfig(kind="svm"))
