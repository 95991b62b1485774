"""Stable on-disk formats: document input, pair TSV, and n-best JSONL.

TSV uses literal tabs with no quoting; tabs and newlines inside fields are
rejected at write time.  JSON Lines carry one n-best (or reranked) list
per line and are the ingestion boundary for external candidate
generators.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from adi.extract import Candidate, Document, NBestList, SfLfPair
from adi.reranker import FeatureVector, RerankedList, ScoredCandidate


class JsonlError(ValueError):
    """A malformed JSON Lines record; carries the 1-based line number."""

    def __init__(self, path, line_no: int, reason: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {reason}")


def _check_field(value: str, column: str) -> str:
    if "\t" in value or "\n" in value or "\r" in value:
        raise ValueError(f"TSV field {column!r} contains a tab or newline: {value!r}")
    return value


def read_documents(paths: Sequence) -> list[Document]:
    """Load documents: ``.tsv`` files hold id<TAB>text rows, anything else
    is one plain-text document named after the file."""
    docs = []
    seen = set()
    for raw in paths:
        path = Path(raw)
        if path.suffix == ".tsv":
            with open(path, "r", encoding="utf-8") as fh:
                for line_no, line in enumerate(fh, start=1):
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    doc_id, sep, text = line.partition("\t")
                    if not sep:
                        raise ValueError(
                            f"{path}:{line_no}: expected id<TAB>text"
                        )
                    docs.append(Document(id=doc_id, text=text))
        else:
            docs.append(Document(id=path.stem, text=path.read_text("utf-8")))
    for doc in docs:
        if doc.id in seen:
            raise ValueError(f"duplicate document id: {doc.id!r}")
        seen.add(doc.id)
    return docs


def write_pairs_tsv(rows: Iterable[tuple[str, SfLfPair]], fh) -> None:
    """doc_id, sf, lf, sf_start, sf_end, lf_start, lf_end, pattern."""
    for doc_id, pair in rows:
        fields = (
            _check_field(doc_id, "doc_id"),
            _check_field(pair.sf, "sf"),
            _check_field(pair.lf, "lf"),
            str(pair.sf_span[0]),
            str(pair.sf_span[1]),
            str(pair.lf_span[0]),
            str(pair.lf_span[1]),
            pair.pattern.value,
        )
        fh.write("\t".join(fields) + "\n")


def read_pairs_tsv(path) -> dict[str, set[tuple[str, str]]]:
    """Predicted or gold pairs keyed by document id.

    Accepts the 3-column gold layout (doc_id, sf, lf) and the 8-column
    extractor output; extra columns beyond the first three are ignored.
    """
    out: dict[str, set[tuple[str, str]]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise ValueError(
                    f"{path}:{line_no}: expected at least 3 tab-separated "
                    f"columns, got {len(fields)}"
                )
            doc_id, sf, lf = fields[0], fields[1], fields[2]
            out.setdefault(doc_id, set()).add((sf, lf))
    return out


def nbest_to_dict(nbest: NBestList) -> dict:
    cands = []
    for c in nbest.candidates:
        entry = {"lf": c.lf, "rank": c.rank}
        if c.generator_score is not None:
            entry["score"] = c.generator_score
        cands.append(entry)
    return {
        "doc_id": nbest.doc_id,
        "sf": nbest.sf,
        "sf_start": nbest.sf_span[0],
        "sf_end": nbest.sf_span[1],
        "candidates": cands,
    }


def nbest_from_dict(obj: dict) -> NBestList:
    candidates = tuple(
        Candidate(
            lf=str(c["lf"]),
            rank=int(c["rank"]),
            generator_score=float(c["score"]) if "score" in c else None,
        )
        for c in obj["candidates"]
    )
    return NBestList(
        doc_id=str(obj["doc_id"]),
        sf=str(obj["sf"]),
        sf_span=(int(obj["sf_start"]), int(obj["sf_end"])),
        candidates=candidates,
    )


def write_nbest_jsonl(lists: Iterable[NBestList], fh) -> None:
    for nb in lists:
        fh.write(json.dumps(nbest_to_dict(nb), ensure_ascii=True) + "\n")


def read_nbest_jsonl(path) -> list[NBestList]:
    return _read_jsonl(path, nbest_from_dict, required=("doc_id", "sf", "candidates"))


def reranked_to_dict(rl: RerankedList) -> dict:
    base = nbest_to_dict(rl.source)
    by_rank = {s.candidate.rank: s for s in rl.scored}
    for entry in base["candidates"]:
        s = by_rank[entry["rank"]]
        entry["charmatch"] = s.features.charmatch
        entry["log1p_freq"] = s.features.log1p_freq
        entry["z"] = s.z
        entry["prob"] = s.prob
    top = rl.chosen
    base["chosen"] = (
        None
        if top is None
        else {
            "lf": top.candidate.lf,
            "rank": top.candidate.rank,
            "z": top.z,
            "prob": top.prob,
        }
    )
    return base


def reranked_from_dict(obj: dict) -> RerankedList:
    source = nbest_from_dict(obj)
    scored = []
    for cand, entry in zip(source.candidates, obj["candidates"]):
        fv = FeatureVector(
            rank=cand.rank,
            charmatch=int(entry["charmatch"]),
            log1p_freq=float(entry["log1p_freq"]),
        )
        scored.append(
            ScoredCandidate(
                candidate=cand,
                features=fv,
                z=float(entry["z"]),
                prob=float(entry["prob"]),
            )
        )
    scored.sort(key=lambda s: (-s.z, s.candidate.rank))
    return RerankedList(source=source, scored=tuple(scored))


def write_reranked_jsonl(lists: Iterable[RerankedList], fh) -> None:
    for rl in lists:
        fh.write(json.dumps(reranked_to_dict(rl), ensure_ascii=True) + "\n")


def read_reranked_jsonl(path) -> list[RerankedList]:
    return _read_jsonl(
        path, reranked_from_dict, required=("doc_id", "sf", "candidates", "chosen")
    )


def _read_jsonl(path, converter, required: tuple[str, ...]) -> list:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise JsonlError(path, line_no, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise JsonlError(path, line_no, "expected a JSON object")
            missing = [key for key in required if key not in obj]
            if missing:
                raise JsonlError(
                    path, line_no, f"missing required keys: {', '.join(missing)}"
                )
            try:
                out.append(converter(obj))
            except JsonlError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise JsonlError(path, line_no, str(exc)) from exc
    return out
