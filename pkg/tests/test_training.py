import math

import numpy as np
import pytest

from adi.extract import Candidate, Document, NBestList
from adi.reranker import FeatureSet, FeatureVector
from adi.suffix_index import build_index
from adi.training import (
    ConvergenceError,
    DegenerateDataError,
    TrainingInstance,
    design_matrix,
    instances_from_nbest,
    penalized_gradient,
    penalized_loglik,
    train,
)


def sample_instances(rng, n, beta, max_freq=1000):
    """Draw labeled instances from a known model; the generating process is
    independent of the fitting code."""
    rank = rng.integers(0, 5, size=n)
    cm = (rng.random(n) < 0.5).astype(int)
    freq = rng.integers(0, max_freq + 1, size=n)
    l1f = np.log1p(freq)
    z = beta[0] + beta[1] * rank + beta[2] * cm + beta[3] * l1f
    y = (rng.random(n) < 1.0 / (1.0 + np.exp(-z))).astype(int)
    return [
        TrainingInstance(
            features=FeatureVector(int(r), int(c), float(f)), label=int(lab)
        )
        for r, c, f, lab in zip(rank, cm, l1f, y)
    ]


class TestGradient:
    def test_matches_central_differences(self):
        rng = np.random.default_rng(42)
        data = sample_instances(rng, 200, (-1.0, -2.0, 3.0, 0.5))
        X, y = design_matrix(data, FeatureSet.RANK_CHARMATCH_FREQ)
        l2 = 0.01
        h = 1e-5
        for _ in range(10):
            beta = rng.normal(scale=0.5, size=4)
            analytic = penalized_gradient(X, y, beta, l2)
            numeric = np.empty(4)
            for j in range(4):
                e = np.zeros(4)
                e[j] = h
                numeric[j] = (
                    penalized_loglik(X, y, beta + e, l2)
                    - penalized_loglik(X, y, beta - e, l2)
                ) / (2 * h)
            np.testing.assert_allclose(numeric, analytic, rtol=1e-6, atol=1e-9)


class TestTrain:
    def test_recovers_generating_coefficients(self):
        rng = np.random.default_rng(7)
        true = (-1.0, -2.0, 3.0, 0.5)
        data = sample_instances(rng, 30_000, true)
        result = train(data, FeatureSet.RANK_CHARMATCH_FREQ)
        fitted = result.coefficients
        for got, want in zip(
            (fitted.beta0, fitted.beta1, fitted.beta2, fitted.beta3), true
        ):
            assert got == pytest.approx(want, abs=0.15)

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        data = sample_instances(rng, 2000, (-1.0, -2.0, 3.0, 0.5))
        a = train(data, FeatureSet.RANK_CHARMATCH_FREQ).coefficients
        b = train(data, FeatureSet.RANK_CHARMATCH_FREQ).coefficients
        assert a == b

    def test_feature_pinning(self):
        rng = np.random.default_rng(5)
        data = sample_instances(rng, 2000, (-0.5, -1.0, 0.0, 0.0))
        fs1 = train(data, FeatureSet.RANK_ONLY).coefficients
        assert fs1.beta2 == 0.0 and fs1.beta3 == 0.0
        assert fs1.feature_set == FeatureSet.RANK_ONLY
        fs2 = train(data, FeatureSet.RANK_CHARMATCH).coefficients
        assert fs2.beta3 == 0.0

    def test_one_class_without_ridge_is_degenerate(self):
        data = [
            TrainingInstance(FeatureVector(r, 0, 0.0), 1) for r in range(10)
        ]
        with pytest.raises(DegenerateDataError, match="label 1"):
            train(data, FeatureSet.RANK_ONLY, l2=0.0)

    def test_one_class_with_ridge_fits(self):
        data = [
            TrainingInstance(FeatureVector(r % 3, 0, 0.0), 1) for r in range(30)
        ]
        result = train(data, FeatureSet.RANK_ONLY, l2=0.1)
        assert math.isfinite(result.coefficients.beta0)

    def test_separable_charmatch_stays_finite(self):
        data = [
            TrainingInstance(FeatureVector(r % 5, 1, 0.0), 1) for r in range(40)
        ] + [
            TrainingInstance(FeatureVector(r % 5, 0, 0.0), 0) for r in range(40)
        ]
        result = train(data, FeatureSet.RANK_CHARMATCH, l2=0.01)
        b2 = result.coefficients.beta2
        assert b2 > 0 and math.isfinite(b2)

    def test_max_iter_exceeded_carries_last_iterate(self):
        rng = np.random.default_rng(3)
        data = sample_instances(rng, 500, (-1.0, -2.0, 3.0, 0.5))
        with pytest.raises(ConvergenceError) as err:
            train(data, FeatureSet.RANK_CHARMATCH_FREQ, max_iter=1, tol=1e-14)
        assert err.value.coefficients.shape == (4,)
        assert err.value.gradient_norm > 0

    def test_empty_data_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            train([], FeatureSet.RANK_ONLY)

    def test_label_validation(self):
        with pytest.raises(ValueError):
            TrainingInstance(FeatureVector(0, 0, 0.0), 2)

    def test_sign_pattern_on_correlated_fixture(self):
        # correctness tracks charmatch and frequency, and decays with rank
        rng = np.random.default_rng(17)
        data = []
        for _ in range(3000):
            rank = int(rng.integers(0, 5))
            correct = rng.random() < (0.7 - 0.14 * rank)
            cm = int(rng.random() < (0.9 if correct else 0.2))
            freq = int(rng.integers(200, 1000)) if correct else int(rng.integers(0, 5))
            data.append(
                TrainingInstance(
                    FeatureVector(rank, cm, float(np.log1p(freq))), int(correct)
                )
            )
        fitted = train(data, FeatureSet.RANK_CHARMATCH_FREQ).coefficients
        assert fitted.beta1 < 0
        assert fitted.beta2 > 0
        assert fitted.beta3 > 0


class TestInstancesFromNbest:
    def test_labeling_uses_normalized_equality(self):
        lists = [
            NBestList(
                doc_id="d1",
                sf="HC",
                sf_span=(0, 2),
                candidates=(
                    Candidate("Healthy  Controls", 0),
                    Candidate("controls", 1),
                ),
            )
        ]
        gold = {"d1": {("hc", "healthy controls")}}
        instances = instances_from_nbest(lists, gold)
        assert [inst.label for inst in instances] == [1, 0]

    def test_features_use_index_when_given(self):
        corpus = Document("c", "healthy controls (HC) and healthy controls (HC)")
        index = build_index([corpus])
        lists = [
            NBestList(
                doc_id="d1",
                sf="HC",
                sf_span=(0, 2),
                candidates=(Candidate("healthy controls", 0),),
            )
        ]
        instances = instances_from_nbest(lists, {"d1": set()}, index)
        assert instances[0].features.log1p_freq == pytest.approx(math.log(3))
        assert instances[0].label == 0
