"""Logistic-regression training for the reranking models.

Damped Newton iterations on the L2-penalized Bernoulli log-likelihood; the
per-sample sweep (likelihood, gradient, curvature) runs on the selected
kernel backend.  Training is deterministic: no randomness, fixed start at
zero, fixed step-halving rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from adi import kernels
from adi.evaluation import normalize_pair
from adi.extract import NBestList
from adi.reranker import FeatureSet, FeatureVector, ModelCoefficients, featurize
from adi.suffix_index import SuffixIndex

DEFAULT_L2 = 1e-6
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100

_MAX_HALVINGS = 40


class TrainingError(Exception):
    pass


class DegenerateDataError(TrainingError):
    """Unpenalized fit on one-class data: the optimum runs to infinity."""

    def __init__(self, label: int):
        self.label = label
        super().__init__(
            f"degenerate one-class data: every instance has label {label}; "
            "the unpenalized optimum diverges (set l2 > 0 to regularize)"
        )


class ConvergenceError(TrainingError):
    """Iteration budget exhausted; carries the last iterate."""

    def __init__(self, coefficients: np.ndarray, gradient_norm: float,
                 max_iter: int):
        self.coefficients = coefficients
        self.gradient_norm = gradient_norm
        super().__init__(
            f"no convergence after {max_iter} iterations "
            f"(gradient norm {gradient_norm:.3e})"
        )


@dataclass(frozen=True)
class TrainingInstance:
    features: FeatureVector
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


@dataclass(frozen=True)
class FitResult:
    coefficients: ModelCoefficients
    iterations: int
    gradient_norm: float
    log_likelihood: float


def design_matrix(data: Sequence[TrainingInstance],
                  feature_set: FeatureSet) -> tuple[np.ndarray, np.ndarray]:
    """Intercept-first design matrix restricted to the active features."""
    n = len(data)
    d = 1 + int(feature_set)
    X = np.empty((n, d), dtype=np.float64)
    y = np.empty(n, dtype=np.float64)
    for i, inst in enumerate(data):
        X[i, 0] = 1.0
        X[i, 1] = inst.features.rank
        if d > 2:
            X[i, 2] = inst.features.charmatch
        if d > 3:
            X[i, 3] = inst.features.log1p_freq
        y[i] = inst.label
    return X, y


def penalized_loglik(X: np.ndarray, y: np.ndarray, beta: np.ndarray,
                     l2: float) -> float:
    ll, _, _ = kernels.logistic_stats(X, y, beta)
    return ll - 0.5 * l2 * float(beta @ beta)


def penalized_gradient(X: np.ndarray, y: np.ndarray, beta: np.ndarray,
                       l2: float) -> np.ndarray:
    _, grad, _ = kernels.logistic_stats(X, y, beta)
    return grad - l2 * beta


def _fit(X: np.ndarray, y: np.ndarray, l2: float, tol: float,
         max_iter: int) -> tuple[np.ndarray, int, float, float]:
    d = X.shape[1]
    beta = np.zeros(d, dtype=np.float64)
    pll = penalized_loglik(X, y, beta, l2)
    for it in range(1, max_iter + 1):
        _, grad, neg_hess = kernels.logistic_stats(X, y, beta)
        grad = grad - l2 * beta
        H = neg_hess + l2 * np.eye(d)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < tol:
            return beta, it - 1, grad_norm, pll
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError as exc:
            raise TrainingError(
                "singular curvature matrix; a feature column is degenerate "
                "(set l2 > 0 to regularize)"
            ) from exc
        # Halve the step until the penalized likelihood stops decreasing.
        scale = 1.0
        for _ in range(_MAX_HALVINGS):
            cand = beta + scale * step
            cand_pll = penalized_loglik(X, y, cand, l2)
            if cand_pll >= pll - 1e-12:
                break
            scale *= 0.5
        beta = beta + scale * step
        new_pll = penalized_loglik(X, y, beta, l2)
        if float(np.max(np.abs(scale * step))) < tol:
            grad_norm = float(
                np.linalg.norm(penalized_gradient(X, y, beta, l2)))
            return beta, it, grad_norm, new_pll
        pll = new_pll
    grad_norm = float(np.linalg.norm(penalized_gradient(X, y, beta, l2)))
    raise ConvergenceError(beta, grad_norm, max_iter)


def train(data: Sequence[TrainingInstance],
          feature_set: FeatureSet = FeatureSet.RANK_CHARMATCH_FREQ,
          l2: float = DEFAULT_L2,
          tol: float = DEFAULT_TOL,
          max_iter: int = DEFAULT_MAX_ITER) -> FitResult:
    """Fit one reranking model; excluded coefficients stay pinned at 0."""
    if not data:
        raise ValueError("training data must be non-empty")
    if l2 < 0:
        raise ValueError("l2 must be >= 0")
    feature_set = FeatureSet(feature_set)
    labels = {inst.label for inst in data}
    if l2 == 0 and len(labels) < 2:
        raise DegenerateDataError(labels.pop())
    X, y = design_matrix(data, feature_set)
    beta, iters, grad_norm, pll = _fit(X, y, l2, tol, max_iter)
    full = np.zeros(4, dtype=np.float64)
    full[: beta.size] = beta
    coeffs = ModelCoefficients(
        beta0=float(full[0]),
        beta1=float(full[1]),
        beta2=float(full[2]),
        beta3=float(full[3]),
        feature_set=feature_set,
        source="trained",
    )
    return FitResult(coefficients=coeffs, iterations=iters,
                     gradient_norm=grad_norm, log_likelihood=pll)


def instances_from_nbest(lists: Sequence[NBestList],
                         gold: dict[str, set[tuple[str, str]]],
                         index: Optional[SuffixIndex] = None
                         ) -> list[TrainingInstance]:
    """Label every candidate against gold pairs: 1 iff (sf, lf) matches a
    gold pair for the document after normalization."""
    out = []
    for nb in lists:
        gold_pairs = {normalize_pair(sf, lf) for sf, lf in gold.get(nb.doc_id, set())}
        for cand in nb.candidates:
            fv = featurize(cand, nb.sf, index)
            label = int(normalize_pair(nb.sf, cand.lf) in gold_pairs)
            out.append(TrainingInstance(features=fv, label=label))
    return out
