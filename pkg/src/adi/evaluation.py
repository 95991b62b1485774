"""Scoring against gold pairs and the diagnostic report tables.

Micro-averaged precision/recall/F over all documents, plus three
diagnostics on n-best output: where in the list the correct answers sit,
how correctness splits on the charmatch feature, and how confident the
model is when it is right (median sigma(z) over correct chosen
candidates).
"""

from __future__ import annotations

import re
import statistics
import string
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from adi.extract import NBestList
from adi.reranker import RerankedList, ScoredCandidate

DEFAULT_K_MAX = 5

_WS_RUN = re.compile(r"\s+")

PairSet = set  # set of (sf, lf) tuples
Predictions = Mapping[str, "PairSet"]


class UnknownDocumentError(ValueError):
    """Predictions refer to documents absent from the gold set."""

    def __init__(self, doc_ids: Sequence[str]):
        self.doc_ids = tuple(sorted(doc_ids))
        super().__init__(
            "predictions for unknown document ids: " + ", ".join(self.doc_ids)
        )


class UndefinedMedianError(ValueError):
    """No correct chosen candidates: the confidence median does not exist."""


@dataclass
class GoldSet:
    name: str
    entries: dict[str, set[tuple[str, str]]]

    @classmethod
    def from_pairs(cls, name: str,
                   pairs: Iterable[tuple[str, str, str]]) -> "GoldSet":
        entries: dict[str, set[tuple[str, str]]] = {}
        for doc_id, sf, lf in pairs:
            entries.setdefault(doc_id, set()).add((sf, lf))
        return cls(name=name, entries=entries)

    def normalized(self, doc_id: str) -> set[tuple[str, str]]:
        return {normalize_pair(sf, lf) for sf, lf in self.entries.get(doc_id, set())}


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "EvalReport":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        return cls(tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f1=f1)


@dataclass(frozen=True)
class RankHistogram:
    counts: tuple[int, ...]


@dataclass(frozen=True)
class CharmatchReport:
    p_correct_given_charmatch: Optional[float]
    p_correct_given_not: Optional[float]
    support_charmatch: int
    support_not: int


@dataclass(frozen=True)
class ConfidenceReport:
    median_prob_correct: float
    n_correct: int


def normalize_pair(sf: str, lf: str) -> tuple[str, str]:
    """Canonical form for pair comparison: lowercase, collapsed whitespace,
    trailing punctuation stripped."""
    if not sf or not lf:
        raise ValueError("sf and lf must be non-empty")
    return _normalize(sf), _normalize(lf)


def _normalize(s: str) -> str:
    s = _WS_RUN.sub(" ", s.lower()).strip()
    return s.rstrip(string.punctuation + " ")


def evaluate(predictions: Predictions, gold: GoldSet) -> EvalReport:
    """Micro-averaged precision/recall/F of predicted pairs against gold."""
    unknown = set(predictions) - set(gold.entries)
    if unknown:
        raise UnknownDocumentError(sorted(unknown))
    tp = fp = fn = 0
    for doc_id, gold_pairs in gold.entries.items():
        gold_norm = {normalize_pair(sf, lf) for sf, lf in gold_pairs}
        pred_norm = {
            normalize_pair(sf, lf) for sf, lf in predictions.get(doc_id, set())
        }
        tp += len(pred_norm & gold_norm)
        fp += len(pred_norm - gold_norm)
        fn += len(gold_norm - pred_norm)
    return EvalReport.from_counts(tp, fp, fn)


def rank_histogram(nbest_lists: Sequence[NBestList], gold: GoldSet,
                   k_max: int = DEFAULT_K_MAX) -> RankHistogram:
    """Count, per n-best rank, how many lists have their first correct
    candidate at that rank.  Lists with no correct candidate count nowhere."""
    counts = [0] * k_max
    for nb in nbest_lists:
        gold_norm = gold.normalized(nb.doc_id)
        for cand in nb.candidates:
            if normalize_pair(nb.sf, cand.lf) in gold_norm:
                if cand.rank < k_max:
                    counts[cand.rank] += 1
                break
    return RankHistogram(counts=tuple(counts))


def charmatch_conditional(
    chosen: Sequence[tuple[ScoredCandidate, str, bool]]
) -> CharmatchReport:
    """Fraction of correct chosen candidates within each charmatch class.

    ``chosen`` holds (scored candidate, sf, gold-correct flag) triples; a
    class with no observations is reported as undefined, not 0.
    """
    if not chosen:
        raise ValueError("at least one observation is required")
    n_match = n_match_correct = 0
    n_not = n_not_correct = 0
    for scored, _sf, correct in chosen:
        if scored.features.charmatch:
            n_match += 1
            n_match_correct += int(correct)
        else:
            n_not += 1
            n_not_correct += int(correct)
    return CharmatchReport(
        p_correct_given_charmatch=n_match_correct / n_match if n_match else None,
        p_correct_given_not=n_not_correct / n_not if n_not else None,
        support_charmatch=n_match,
        support_not=n_not,
    )


def confidence_summary(reranked: Sequence[RerankedList],
                       gold: GoldSet) -> ConfidenceReport:
    """Median sigma(z) over the chosen candidates that are gold-correct;
    even counts take the midpoint of the two middle values."""
    probs = []
    for rl in reranked:
        top = rl.chosen
        if top is None:
            continue
        gold_norm = gold.normalized(rl.source.doc_id)
        if normalize_pair(rl.source.sf, top.candidate.lf) in gold_norm:
            probs.append(top.prob)
    if not probs:
        raise UndefinedMedianError(
            "no correct chosen candidates: median confidence is undefined"
        )
    return ConfidenceReport(
        median_prob_correct=float(statistics.median(probs)),
        n_correct=len(probs),
    )


def chosen_pairs(reranked: Sequence[RerankedList]) -> dict[str, set[tuple[str, str]]]:
    """Predictions mapping built from the top candidate of each list."""
    out: dict[str, set[tuple[str, str]]] = {}
    for rl in reranked:
        top = rl.chosen
        if top is None:
            continue
        out.setdefault(rl.source.doc_id, set()).add((rl.source.sf, top.candidate.lf))
    return out


# --- plain-text table rendering -------------------------------------------

def render_eval_report(report: EvalReport) -> str:
    lines = [
        f"{'tp':>10}  {report.tp}",
        f"{'fp':>10}  {report.fp}",
        f"{'fn':>10}  {report.fn}",
        f"{'precision':>10}  {report.precision:.3f}",
        f"{'recall':>10}  {report.recall:.3f}",
        f"{'f1':>10}  {report.f1:.3f}",
    ]
    return "\n".join(lines)


def render_rank_histogram(hist: RankHistogram) -> str:
    lines = [f"{'rank':>5}  {'correct':>7}"]
    for rank, count in enumerate(hist.counts):
        lines.append(f"{rank:>5}  {count:>7}")
    return "\n".join(lines)


def _fmt_prob(p: Optional[float]) -> str:
    return "undefined" if p is None else f"{p:.2f}"


def render_charmatch_report(report: CharmatchReport) -> str:
    lines = [
        f"{'':>16}  {'Pr(correct)':>11}  {'n':>6}",
        f"{'not charmatch':>16}  {_fmt_prob(report.p_correct_given_not):>11}"
        f"  {report.support_not:>6}",
        f"{'charmatch':>16}  "
        f"{_fmt_prob(report.p_correct_given_charmatch):>11}"
        f"  {report.support_charmatch:>6}",
    ]
    return "\n".join(lines)


def render_confidence_report(report: ConfidenceReport) -> str:
    return (
        f"median sigma(z) of correct chosen candidates: "
        f"{report.median_prob_correct:.3f}  (n={report.n_correct})"
    )
