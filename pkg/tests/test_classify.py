import numpy as np
import pytest

from conftest import separable_blobs
from eegsig.classify import (Metrics, evaluate, fit_classifier,
                             fit_standardizer, init_mlp, kfold_split,
                             load_classifier, mlp_gradient_check, predict_knn,
                             predict_mlp, predict_svm, save_classifier,
                             train_knn, train_mlp, train_svm)
from eegsig.features import FeatureMatrix


class TestStandardizer:
    def test_training_data_becomes_zero_mean_unit_std(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((40, 6)) * 5 + 3
        std = fit_standardizer(x)
        z = std.transform(x)
        np.testing.assert_allclose(z.mean(axis=0), 0.0, atol=1e-10)
        np.testing.assert_allclose(z.std(axis=0), 1.0, atol=1e-10)

    def test_constant_column_maps_to_zero(self):
        x = np.column_stack([np.full(10, 2.0), np.arange(10.0)])
        std = fit_standardizer(x)
        assert std.constant_columns.tolist() == [True, False]
        assert np.max(np.abs(std.transform(x)[:, 0])) == 0.0

    def test_single_row_all_zero(self):
        std = fit_standardizer(np.array([[3.0, -2.0]]))
        np.testing.assert_array_equal(std.transform([[3.0, -2.0]]), [[0.0, 0.0]])


class TestKnn:
    def test_exact_match_with_k1(self):
        x = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 0.0]])
        y = np.array([0, 1, 2])
        m = train_knn(x, y, k=1)
        assert predict_knn(m, [[5.0, 5.0]])[0] == 1

    def test_two_blobs_majority(self):
        x = np.array([[0, 0], [0.5, 0], [0, 0.5], [10, 10], [10.5, 10], [10, 10.5]],
                     dtype=float)
        y = np.array([0, 0, 0, 1, 1, 1])
        m = train_knn(x, y, k=3)
        assert predict_knn(m, [[1.0, 1.0]])[0] == 0

    def test_full_vote_tie_broken_by_summed_distance(self):
        x = np.array([[0.0], [1.0], [10.0], [11.0]])
        y = np.array([0, 0, 1, 1])
        m = train_knn(x, y, k=4)
        assert predict_knn(m, [[2.0]])[0] == 0
        assert predict_knn(m, [[9.0]])[0] == 1

    def test_k_out_of_range(self):
        x = np.zeros((3, 2))
        y = np.array([0, 1, 0])
        with pytest.raises(ValueError):
            train_knn(x, y, k=4)
        with pytest.raises(ValueError):
            train_knn(x, y, k=0)

    def test_dimension_mismatch(self):
        m = train_knn(np.zeros((3, 2)), np.array([0, 1, 0]), k=1)
        with pytest.raises(ValueError):
            predict_knn(m, [[1.0, 2.0, 3.0]])

    def test_k1_training_accuracy_perfect(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((50, 4))
        y = rng.integers(0, 3, 50)
        m = train_knn(x, y, k=1)
        assert np.array_equal(predict_knn(m, x), y)


class TestSvm:
    def test_separable_blobs(self):
        (xtr, ytr), (xte, yte) = separable_blobs(
            classes=2, train_per_class=100, test_per_class=50, dims=10,
            separation=4.0, seed=11)
        m = train_svm(xtr, ytr, seed=1)
        acc = (predict_svm(m, xte) == yte).mean()
        assert acc >= 0.95

    def test_far_point_keeps_its_class(self):
        (xtr, ytr), _ = separable_blobs(classes=2, train_per_class=50,
                                        dims=6, separation=4.0, seed=3)
        m = train_svm(xtr, ytr, seed=0)
        # the farthest-from-boundary training point must be classified correctly
        scores = np.abs(m.weights[1] @ xtr.T + m.biases[1])
        idx = int(np.argmax(scores))
        assert predict_svm(m, xtr[idx:idx + 1])[0] == ytr[idx]

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            train_svm(np.zeros((5, 2)), np.zeros(5, dtype=int))

    def test_deterministic(self):
        (xtr, ytr), _ = separable_blobs(classes=3, train_per_class=10, seed=5)
        a = train_svm(xtr, ytr, seed=9)
        b = train_svm(xtr, ytr, seed=9)
        np.testing.assert_array_equal(a.weights, b.weights)


class TestMlp:
    def test_xor(self):
        x = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        y = np.array([0, 1, 1, 0])
        m = train_mlp(x, y, hidden=8, learning_rate=0.1, epochs=3000, seed=0)
        assert np.array_equal(predict_mlp(m, x), y)

    def test_gradient_check(self):
        m = init_mlp(5, 7, 3, seed=2)
        rng = np.random.default_rng(3)
        x = rng.standard_normal((3, 5))
        y = np.array([0, 2, 1])
        assert mlp_gradient_check(m, x, y, epsilon=1e-5) < 1e-4

    def test_untrained_model_is_chance_level(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((500, 12))
        y = np.tile(np.arange(5), 100)
        m = train_mlp(x, y, hidden=10, epochs=0, seed=4)
        acc = (predict_mlp(m, x) == y).mean()
        # binomial 99% interval around chance (p = 0.2, n = 500)
        margin = 2.576 * np.sqrt(0.2 * 0.8 / 500)
        assert abs(acc - 0.2) <= margin

    def test_loss_decreases_in_five_epoch_windows(self, blobs5):
        fm, _, _ = blobs5
        m = train_mlp(fm.values, fm.labels, hidden=20, epochs=60, seed=2)
        smoothed = np.convolve(m.loss_curve, np.ones(5) / 5, mode="valid")
        assert np.all(np.diff(smoothed) <= 1e-9)

    def test_softmax_rows_sum_to_one(self):
        from eegsig.classify import _mlp_forward
        m = init_mlp(4, 6, 3, seed=5)
        _, probs = _mlp_forward(m, np.random.default_rng(6).standard_normal((10, 4)))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)

    def test_bad_hyperparameters(self):
        x = np.zeros((4, 2))
        y = np.array([0, 1, 0, 1])
        with pytest.raises(ValueError):
            train_mlp(x, y, hidden=0)
        with pytest.raises(ValueError):
            train_mlp(x, y, learning_rate=0.0)

    def test_deterministic(self):
        (xtr, ytr), _ = separable_blobs(classes=3, train_per_class=10, seed=6)
        a = train_mlp(xtr, ytr, epochs=15, seed=3)
        b = train_mlp(xtr, ytr, epochs=15, seed=3)
        np.testing.assert_array_equal(a.w1, b.w1)
        np.testing.assert_array_equal(a.w2, b.w2)


class TestEvaluate:
    def test_perfect_prediction(self):
        m = evaluate([0, 1, 2], [0, 1, 2], 3)
        assert m.accuracy == 1.0
        np.testing.assert_array_equal(m.confusion, np.eye(3, dtype=int))
        np.testing.assert_array_equal(m.per_class_recall, [1.0, 1.0, 1.0])

    def test_single_class_predictor_on_balanced_k5(self):
        truth = np.tile(np.arange(5), 20)
        pred = np.zeros(100, dtype=int)
        m = evaluate(pred, truth, 5)
        assert m.accuracy == pytest.approx(0.2)

    def test_hand_confusion(self):
        m = evaluate([0, 0, 1, 1, 1, 1], [0, 0, 0, 1, 1, 1], 2)
        np.testing.assert_array_equal(m.confusion, [[2, 1], [0, 3]])
        assert m.accuracy == pytest.approx(5 / 6)

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            evaluate([0, 5], [0, 1], 2)
        with pytest.raises(ValueError):
            evaluate([0], [0, 1], 2)

    def test_confusion_counts_sum_to_samples(self):
        rng = np.random.default_rng(7)
        truth = rng.integers(0, 4, 200)
        pred = rng.integers(0, 4, 200)
        m = evaluate(pred, truth, 4)
        assert m.confusion.sum() == 200


class TestKfold:
    def test_covers_every_index_once(self):
        splits = kfold_split(10, 5, seed=0)
        tests = np.sort(np.concatenate([t for _, t in splits]))
        np.testing.assert_array_equal(tests, np.arange(10))
        assert all(len(t) == 2 for _, t in splits)

    def test_leave_one_out(self):
        splits = kfold_split(6, 6, seed=1)
        assert all(len(t) == 1 for _, t in splits)

    def test_deterministic(self):
        a = kfold_split(20, 4, seed=9)
        b = kfold_split(20, 4, seed=9)
        for (ta, sa), (tb, sb) in zip(a, b):
            np.testing.assert_array_equal(ta, tb)
            np.testing.assert_array_equal(sa, sb)

    def test_train_test_disjoint(self):
        for train, test in kfold_split(23, 4, seed=2):
            assert not set(train) & set(test)
            assert len(train) + len(test) == 23

    def test_bounds(self):
        with pytest.raises(ValueError):
            kfold_split(5, 1, seed=0)
        with pytest.raises(ValueError):
            kfold_split(5, 6, seed=0)


class TestTrainedClassifier:
    def test_all_three_hit_95_percent_on_blobs(self, blobs5):
        fm, xte, yte = blobs5
        for kind in ("knn", "svm", "mlp"):
            clf = fit_classifier(fm, kind, seed=7)
            metrics = evaluate(clf.predict(xte), yte, clf.n_classes)
            assert metrics.accuracy >= 0.95, kind

    def test_labels_stay_in_range(self, blobs5):
        fm, xte, _ = blobs5
        for kind in ("knn", "svm", "mlp"):
            clf = fit_classifier(fm, kind, seed=1)
            pred = clf.predict(xte)
            assert pred.min() >= 0 and pred.max() < clf.n_classes

    def test_unknown_kind(self, blobs5):
        fm, _, _ = blobs5
        with pytest.raises(ValueError):
            fit_classifier(fm, "forest")

    @pytest.mark.parametrize("kind", ["knn", "svm", "mlp"])
    def test_save_load_round_trip(self, kind, blobs5, tmp_path):
        fm, xte, _ = blobs5
        clf = fit_classifier(fm, kind, seed=3)
        path = save_classifier(clf, tmp_path / f"{kind}.json")
        loaded = load_classifier(path)
        np.testing.assert_array_equal(loaded.predict(xte), clf.predict(xte))
        assert loaded.feature_names == clf.feature_names

    def test_load_rejects_unknown_version(self, tmp_path, blobs5):
        fm, _, _ = blobs5
        path = save_classifier(fit_classifier(fm, "knn"), tmp_path / "m.json")
        doc = path.read_text().replace('"format_version": 1', '"format_version": 99')
        path.write_text(doc)
        with pytest.raises(ValueError, match="version"):
            load_classifier(path)

    def test_deterministic_predictions(self, blobs5):
        fm, xte, _ = blobs5
        a = fit_classifier(fm, "mlp", seed=5).predict(xte)
        b = fit_classifier(fm, "mlp", seed=5).predict(xte)
        np.testing.assert_array_equal(a, b)
