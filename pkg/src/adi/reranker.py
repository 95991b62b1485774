"""Feature computation and logistic-regression scoring for n-best lists.

Each candidate long form gets three features: its generator rank, a binary
first-letter match against the short form (charmatch), and the log corpus
frequency of its definition string (freq).  A linear model

    z = beta0 + beta1 * rank + beta2 * charmatch + beta3 * log(1 + freq)

scores candidates; sigma(z) is the correctness probability and lists are
reordered by z.  Twelve built-in coefficient sets ship with the package.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, asdict
from typing import Optional

from adi.extract import Candidate, NBestList
from adi.suffix_index import SuffixIndex, definition_freq


class FeatureSet(enum.IntEnum):
    RANK_ONLY = 1
    RANK_CHARMATCH = 2
    RANK_CHARMATCH_FREQ = 3


@dataclass(frozen=True)
class FeatureVector:
    rank: int
    charmatch: int
    log1p_freq: float

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be >= 0")
        if self.charmatch not in (0, 1):
            raise ValueError("charmatch must be 0 or 1")
        if self.log1p_freq < 0:
            raise ValueError("log1p_freq must be >= 0")


@dataclass(frozen=True)
class ModelCoefficients:
    beta0: float
    beta1: float
    beta2: float
    beta3: float
    feature_set: FeatureSet
    source: str

    def __post_init__(self):
        if self.feature_set == FeatureSet.RANK_ONLY and (
            self.beta2 != 0 or self.beta3 != 0
        ):
            raise ValueError("rank-only model must have beta2 = beta3 = 0")
        if self.feature_set == FeatureSet.RANK_CHARMATCH and self.beta3 != 0:
            raise ValueError("rank+charmatch model must have beta3 = 0")

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["feature_set"] = int(self.feature_set)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "ModelCoefficients":
        return cls(
            beta0=float(d["beta0"]),
            beta1=float(d["beta1"]),
            beta2=float(d["beta2"]),
            beta3=float(d["beta3"]),
            feature_set=FeatureSet(int(d["feature_set"])),
            source=str(d.get("source", "file")),
        )


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: Candidate
    features: FeatureVector
    z: float
    prob: float


@dataclass(frozen=True)
class RerankedList:
    source: NBestList
    scored: tuple[ScoredCandidate, ...]

    @property
    def chosen(self) -> Optional[ScoredCandidate]:
        return self.scored[0] if self.scored else None


# Built-in models: 1-4 rank only, 5-8 add charmatch, 9-12 add freq.
# Within each block the four fits come from the four standard benchmarks
# (Ab3P, BIOADI, MEDSTRACT, SH), in that order.
_PRESET_ROWS = {
    1: (1.6, -3.3, 0.0, 0.0),
    2: (0.7, -1.6, 0.0, 0.0),
    3: (1.9, -3.9, 0.0, 0.0),
    4: (1.4, -3.3, 0.0, 0.0),
    5: (-1.2, -3.2, 3.5, 0.0),
    6: (-2.5, -1.5, 3.8, 0.0),
    7: (-1.0, -4.0, 3.9, 0.0),
    8: (-1.9, -3.2, 4.1, 0.0),
    9: (-2.7, -2.9, 3.7, 0.3),
    10: (-5.2, -1.5, 5.2, 0.5),
    11: (-3.2, -3.8, 4.7, 0.4),
    12: (-3.1, -2.9, 4.3, 0.3),
}

PRESET_IDS = tuple(sorted(_PRESET_ROWS))


def _preset_feature_set(model_id: int) -> FeatureSet:
    if model_id <= 4:
        return FeatureSet.RANK_ONLY
    if model_id <= 8:
        return FeatureSet.RANK_CHARMATCH
    return FeatureSet.RANK_CHARMATCH_FREQ


def preset(model_id: int) -> ModelCoefficients:
    """One of the 12 built-in models (1..12)."""
    if model_id not in _PRESET_ROWS:
        raise ValueError(f"model_id must be in 1..12, got {model_id}")
    b0, b1, b2, b3 = _PRESET_ROWS[model_id]
    return ModelCoefficients(
        beta0=b0,
        beta1=b1,
        beta2=b2,
        beta3=b3,
        feature_set=_preset_feature_set(model_id),
        source=f"preset:{model_id}",
    )


def sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def charmatch(sf: str, lf: str) -> int:
    """1 iff the first alphanumeric characters of ``lf`` and ``sf`` match,
    case-insensitively."""
    if not sf or not lf:
        raise ValueError("sf and lf must be non-empty")
    a = next((ch for ch in lf if ch.isalnum()), None)
    b = next((ch for ch in sf if ch.isalnum()), None)
    if a is None or b is None:
        return 0
    return int(a.lower() == b.lower())


def featurize(candidate: Candidate, sf: str,
              index: Optional[SuffixIndex] = None) -> FeatureVector:
    """Feature vector for one candidate; without an index the freq feature
    degrades to the neutral value 0."""
    if index is not None:
        freq = definition_freq(index, sf, candidate.lf)
        log1p_freq = math.log1p(freq)
    else:
        log1p_freq = 0.0
    return FeatureVector(
        rank=candidate.rank,
        charmatch=charmatch(sf, candidate.lf),
        log1p_freq=log1p_freq,
    )


def score(coeffs: ModelCoefficients, fv: FeatureVector) -> tuple[float, float]:
    """Linear score z and sigma(z) for one feature vector."""
    z = (
        coeffs.beta0
        + coeffs.beta1 * fv.rank
        + coeffs.beta2 * fv.charmatch
        + coeffs.beta3 * fv.log1p_freq
    )
    return z, sigmoid(z)


def rerank(nbest: NBestList, coeffs: ModelCoefficients,
           index: Optional[SuffixIndex] = None) -> RerankedList:
    """Score every candidate and reorder by z descending, original rank
    breaking ties."""
    scored = []
    for cand in nbest.candidates:
        fv = featurize(cand, nbest.sf, index)
        z, prob = score(coeffs, fv)
        scored.append(ScoredCandidate(candidate=cand, features=fv, z=z, prob=prob))
    scored.sort(key=lambda s: (-s.z, s.candidate.rank))
    return RerankedList(source=nbest, scored=tuple(scored))


def save_model(coeffs: ModelCoefficients, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(coeffs.to_json_dict(), fh, indent=2)
        fh.write("\n")


def load_model(path) -> ModelCoefficients:
    with open(path, "r", encoding="utf-8") as fh:
        return ModelCoefficients.from_json_dict(json.load(fh))
