"""Tests for linear classifiers, the separability checker, and cross-validation."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cdtkit import classify
from cdtkit.classify import LabeledDataset
from cdtkit.errors import (
    BadRank,
    DimensionMismatch,
    NotConverged,
    SingularScatter,
    TooFewSamples,
)


def blobs(seed=0, n_per=20, d=4, sep=6.0, n_classes=2):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for c in range(n_classes):
        center = np.zeros(d)
        center[c % d] = sep * (c + 1)
        xs.append(center + rng.normal(size=(n_per, d)))
        ys.append(np.full(n_per, c))
    return LabeledDataset(np.vstack(xs), np.concatenate(ys))


def cosine(u, v):
    return abs(float(u @ v)) / (np.linalg.norm(u) * np.linalg.norm(v))


class TestFisherLda:
    def test_hand_computed_clouds(self):
        x = np.array([[0.0, 0.0], [0.0, 1.0], [3.0, 0.0], [3.0, 1.0]])
        y = np.array([0, 0, 1, 1])
        clf = classify.fit_fisher_lda(LabeledDataset(x, y), shrinkage=1e-3)
        assert cosine(clf.weights, np.array([1.0, 0.0])) >= 1.0 - 1e-9
        # threshold sits at the projected midpoint x = 1.5
        assert clf.bias / clf.weights[0] == pytest.approx(1.5)
        assert classify._error_rate(clf.predict(x), y) == 0.0

    def test_identical_means_rejected(self):
        x = np.array([[0.0, 1.0], [0.0, -1.0], [1e-13, 1.0], [-1e-13, -1.0]])
        y = np.array([0, 0, 1, 1])
        with pytest.raises(ValueError, match="coincide"):
            classify.fit_fisher_lda(LabeledDataset(x, y))

    def test_singular_scatter_without_shrinkage(self):
        x = np.array([[0.0, 0.0], [0.0, 1.0], [3.0, 0.0], [3.0, 1.0]])
        y = np.array([0, 0, 1, 1])
        with pytest.raises(SingularScatter):
            classify.fit_fisher_lda(LabeledDataset(x, y), shrinkage=0.0)

    def test_separates_blobs(self):
        data = blobs(seed=3)
        clf = classify.fit_fisher_lda(data)
        assert classify._error_rate(clf.predict(data.features), data.labels) == 0.0


class TestPenalizedLda:
    def test_alpha_zero_matches_fisher_direction(self):
        data = blobs(seed=1, n_per=30, d=5)
        model = classify.fit_penalized_lda(data, alpha=0.0, k=1)
        fisher = classify.fit_fisher_lda(data)
        assert cosine(model.components[:, 0], fisher.weights) >= 0.99

    def test_large_alpha_recovers_principal_components(self):
        # isotropic within-class scatter by construction: cross-shaped clusters
        delta = 0.3
        cross = np.array([[delta, 0], [-delta, 0], [0, delta], [0, -delta]])
        mu1, mu2 = np.array([0.0, 0.0]), np.array([10.0, 3.0])
        x = np.vstack([mu1 + cross, mu2 + cross])
        y = np.array([0] * 4 + [1] * 4)
        data = LabeledDataset(x, y)
        model = classify.fit_penalized_lda(data, alpha=1e6, k=2)
        centered = x - x.mean(axis=0)
        _, vecs = np.linalg.eigh(centered.T @ centered)
        pca_first = vecs[:, -1]
        assert cosine(model.components[:, 0], pca_first) >= 0.99

    def test_bad_rank_for_binary_alpha_zero(self):
        data = blobs(seed=2)
        with pytest.raises(BadRank):
            classify.fit_penalized_lda(data, alpha=0.0, k=2)

    def test_nearest_centroid_classifies_blobs(self):
        data = blobs(seed=5, n_classes=3, d=4)
        model = classify.fit_penalized_lda(data, alpha=0.1, k=2)
        assert classify._error_rate(model.predict(data.features), data.labels) == 0.0


class TestLinearSvm:
    def test_hard_margin_toy(self):
        x = np.array([[0.0, 0.0], [0.0, 1.0], [2.0, 0.0], [2.0, 1.0]])
        y = np.array([0, 0, 1, 1])
        clf = classify.fit_linear_svm(LabeledDataset(x, y), c=1e6)
        assert classify._error_rate(clf.predict(x), y) == 0.0
        margin = 2.0 / np.linalg.norm(clf.weights)
        assert margin == pytest.approx(2.0, abs=1e-4)

    def test_symmetric_single_points(self):
        x = np.array([[-1.0], [1.0]])
        y = np.array([0, 1])
        clf = classify.fit_linear_svm(LabeledDataset(x, y), c=1.0)
        assert clf.weights[0] == pytest.approx(1.0, abs=1e-6)
        assert clf.bias == pytest.approx(0.0, abs=1e-6)

    def test_not_converged_with_zero_budget(self):
        data = blobs(seed=7)
        with pytest.raises(NotConverged):
            classify.fit_linear_svm(data, c=1.0, max_refits=0)


class TestSeparability:
    def test_trivial_separable_pair(self):
        res = classify.check_linear_separability([[0.0, 0.0]], [[1.0, 0.0]])
        assert res.separable
        w, b = res.witness.weights, res.witness.bias
        assert w @ [0.0, 0.0] < b < w @ [1.0, 0.0]
        assert res.margin > 0

    def test_midpoint_coincidence_certificate(self):
        res = classify.check_linear_separability([[0.0], [2.0]], [[1.0]])
        assert not res.separable
        assert_allclose(res.alpha, [0.5, 0.5], atol=1e-9)
        assert_allclose(res.beta, [1.0])
        assert res.residual <= 1e-8

    def test_witness_soundness_random_instances(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            d = rng.integers(1, 5)
            a = rng.normal(size=(rng.integers(1, 8), d))
            b = rng.normal(size=(rng.integers(1, 8), d)) + 8.0
            res = classify.check_linear_separability(a, b)
            assert res.separable
            w, bias = res.witness.weights, res.witness.bias
            assert np.all(a @ w < bias)
            assert np.all(b @ w > bias)

    def test_certificate_soundness_random_instances(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            d = rng.integers(1, 4)
            base = rng.integers(-3, 4, size=(6, d)).astype(float)
            # guarantee intersecting hulls: plant a shared point
            a = np.vstack([base[:3], [np.zeros(d)]])
            b = np.vstack([base[3:], [np.zeros(d)]])
            res = classify.check_linear_separability(a, b)
            assert not res.separable
            assert np.all(res.alpha >= -1e-12) and np.all(res.beta >= -1e-12)
            assert res.alpha.sum() == pytest.approx(1.0, abs=1e-9)
            assert res.beta.sum() == pytest.approx(1.0, abs=1e-9)
            assert res.residual <= 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            classify.check_linear_separability([[0.0, 1.0]], [[1.0]])


class TestCrossValidate:
    def test_separable_data_zero_error(self):
        data = blobs(seed=21, n_per=15, sep=10.0)
        for method in ("lda", "plda", "svm"):
            report = classify.cross_validate(data, method, folds=5, seed=4)
            assert report.mean_test_error == 0.0

    def test_permutation_baseline_near_chance(self):
        rng = np.random.default_rng(31)
        x = rng.normal(size=(40, 5))
        errors = []
        for s in range(20):
            labels = np.array([0] * 20 + [1] * 20)
            np.random.default_rng(s).shuffle(labels)
            data = LabeledDataset(x, labels)
            report = classify.cross_validate(data, "lda", folds=5, seed=s)
            errors.append(report.mean_test_error)
        assert abs(float(np.mean(errors)) - 0.5) <= 0.1

    def test_leave_one_out_runs_n_folds(self):
        data = blobs(seed=23, n_per=10, sep=8.0)
        report = classify.cross_validate(data, "lda", folds=20, seed=0)
        assert len(report.per_fold_errors) == 20
        assert report.mean_test_error == 0.0

    def test_too_few_samples(self):
        x = np.random.default_rng(0).normal(size=(8, 3))
        y = np.array([0, 0, 0, 0, 0, 1, 1, 1])
        with pytest.raises(TooFewSamples):
            classify.cross_validate(LabeledDataset(x, y), "lda", folds=5, seed=0)

    def test_deterministic_given_seed(self):
        data = blobs(seed=29, n_per=12, sep=3.0)
        r1 = classify.cross_validate(data, "svm", folds=4, seed=9)
        r2 = classify.cross_validate(data, "svm", folds=4, seed=9)
        assert r1.per_fold_errors == r2.per_fold_errors
        assert r1.chosen_params == r2.chosen_params

    def test_fold_fit_depends_only_on_training_rows(self):
        data = blobs(seed=17, n_per=12, sep=3.0)
        seed = 5
        rng = np.random.default_rng(np.random.SeedSequence([seed, data.n_samples]))
        assignment = classify._stratified_folds(data.labels, 4, rng)
        report = classify.cross_validate(data, "svm", folds=4, seed=seed)
        j = 2
        train = data.subset(assignment != j)
        model, params = classify._fit_with_selection(train, "svm", None, [seed, 1 + j])
        assert params == report.chosen_params[j]
        again, params2 = classify._fit_with_selection(train, "svm", None, [seed, 1 + j])
        assert params2 == params
        probe = np.linspace(-2, 10, 30).reshape(-1, data.n_features // data.n_features)
        probe = np.tile(probe, (1, data.n_features))
        assert np.array_equal(model.predict(probe), again.predict(probe))

    def test_scale_equivariance_of_predictions(self):
        data = blobs(seed=41, n_per=15, sep=8.0)
        probe = np.random.default_rng(1).normal(size=(25, data.n_features)) * 4.0
        fits = {
            "lda": lambda d: classify.fit_fisher_lda(d),
            "plda": lambda d: classify.fit_penalized_lda(d, alpha=0.1, k=2),
            "svm": lambda d: classify.fit_linear_svm(d, c=10.0),
        }
        for name, fit in fits.items():
            base = fit(data).predict(probe)
            for gamma in (0.1, 10.0):
                scaled = LabeledDataset(data.features * gamma, data.labels)
                pred = fit(scaled).predict(probe * gamma)
                assert np.array_equal(pred, base), name

    def test_multiclass_one_vs_rest(self):
        data = blobs(seed=43, n_per=12, sep=9.0, n_classes=3)
        report = classify.cross_validate(data, "svm", folds=3, seed=2)
        assert report.mean_test_error == 0.0
        report = classify.cross_validate(data, "lda", folds=3, seed=2)
        assert report.mean_test_error == 0.0
        report = classify.cross_validate(data, "plda", folds=3, seed=2)
        assert report.mean_test_error == 0.0


class TestProject2d:
    def test_separated_centroids(self):
        data = blobs(seed=51, n_per=10, sep=8.0)
        z = classify.project_2d(data, np.arange(data.n_samples))
        c0 = z[data.labels == 0].mean(axis=0)
        c1 = z[data.labels == 1].mean(axis=0)
        # the leading discriminant axis carries the class separation
        assert abs(c0[0] - c1[0]) > 0.0
        assert np.linalg.norm(c0 - c1) > 0.0

    def test_projection_ignores_test_rows(self):
        data = blobs(seed=53, n_per=10, sep=8.0)
        extra = np.random.default_rng(9).normal(size=(5, data.n_features)) + 30.0
        augmented = LabeledDataset(
            np.vstack([data.features, extra]),
            np.concatenate([data.labels, np.full(5, 0)]),
        )
        train_idx = np.arange(data.n_samples)
        z_plain = classify.project_2d(data, train_idx)
        z_aug = classify.project_2d(augmented, train_idx)
        assert_allclose(z_aug[: data.n_samples], z_plain)

    def test_report_serialization(self):
        data = blobs(seed=55, n_per=10, sep=8.0)
        report = classify.cross_validate(data, "plda", folds=5, seed=3)
        text = report.to_text()
        assert "mean" in text and "kappa" in text
        rows = report.to_csv_rows()
        assert rows[0] == ["fold", "train_error", "test_error", "params"]
        assert len(rows) == 5 + 2
