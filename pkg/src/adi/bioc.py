"""Reader for the BioC subset used to distribute the standard gold sets.

Only the elements the benchmarks need are understood: collection,
document (with an <id>), passage (with <offset> and <text>), annotations
carrying a <location offset len> plus <text>, and relations whose two
<node> refs use roles SF and LF (ShortForm/LongForm accepted).  Offsets
are document-absolute, as in the benchmark distributions.

Annotations whose location does not reproduce their declared text are
skipped with a warning count rather than failing the whole file.
"""

from __future__ import annotations

import sys
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from adi.evaluation import GoldSet
from adi.extract import Document

_SF_ROLES = {"sf", "shortform", "short_form", "abbr"}
_LF_ROLES = {"lf", "longform", "long_form"}


class BiocFormatError(ValueError):
    """The file is not well-formed for the declared subset."""


@dataclass
class BiocPassage:
    offset: int
    text: str


@dataclass
class BiocSubsetDocument:
    id: str
    passages: list[BiocPassage] = field(default_factory=list)
    pairs: list[tuple[str, str]] = field(default_factory=list)

    def full_text(self) -> str:
        """Document text with every passage placed at its declared offset;
        gaps are space-filled so annotation offsets stay valid."""
        if not self.passages:
            return ""
        end = max(p.offset + len(p.text) for p in self.passages)
        buf = [" "] * end
        for p in self.passages:
            buf[p.offset : p.offset + len(p.text)] = p.text
        return "".join(buf)


@dataclass
class BiocCollection:
    documents: list[BiocSubsetDocument]
    skipped_annotations: int

    def to_documents(self) -> list[Document]:
        return [
            Document(id=d.id, text=d.full_text())
            for d in self.documents
            if d.passages
        ]

    def to_gold(self, name: str) -> GoldSet:
        # documents without pairs stay in the gold set with empty entries,
        # so predictions on them score as false positives rather than
        # unknown-document errors
        entries = {d.id: set(d.pairs) for d in self.documents}
        return GoldSet(name=name, entries=entries)


def _byte_offset(data: bytes, line: int, column: int) -> int:
    lines = data.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def read_bioc_subset(path, warn=sys.stderr) -> BiocCollection:
    """Parse ``path``; returns documents, gold pairs, and the number of
    annotations skipped for offset/text mismatches."""
    data = Path(path).read_bytes()
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(data, line, column)
        raise BiocFormatError(
            f"{path}: malformed markup at byte offset {offset} "
            f"(line {line}, column {column}): {exc.msg}"
        ) from exc
    if root.tag != "collection":
        raise BiocFormatError(f"{path}: root element is <{root.tag}>, "
                              "expected <collection>")
    documents = []
    skipped = 0
    for doc_el in root.iter("document"):
        doc_id = (doc_el.findtext("id") or "").strip()
        if not doc_id:
            raise BiocFormatError(f"{path}: document without an <id>")
        doc = BiocSubsetDocument(id=doc_id)
        annotations: dict[str, tuple[str, int, int]] = {}
        relations = []
        for p_el in doc_el.iter("passage"):
            offset_text = p_el.findtext("offset")
            if offset_text is None:
                raise BiocFormatError(
                    f"{path}: passage without an <offset> in document {doc_id}"
                )
            passage = BiocPassage(offset=int(offset_text),
                                  text=p_el.findtext("text") or "")
            doc.passages.append(passage)
            for a_el in p_el.iter("annotation"):
                ann_id = a_el.get("id")
                loc = a_el.find("location")
                text = a_el.findtext("text")
                if ann_id is None or loc is None or text is None:
                    skipped += 1
                    continue
                start = int(loc.get("offset", "-1"))
                length = int(loc.get("length", "-1"))
                rel_start = start - passage.offset
                actual = passage.text[rel_start : rel_start + length]
                if rel_start < 0 or actual != text:
                    print(
                        f"warning: {path}: annotation {ann_id} in document "
                        f"{doc_id} does not match passage text at offset "
                        f"{start}; skipped",
                        file=warn,
                    )
                    skipped += 1
                    continue
                annotations[ann_id] = (text, start, start + length)
            for r_el in p_el.iter("relation"):
                relations.append(r_el)
        for r_el in doc_el.findall("relation"):
            relations.append(r_el)
        for r_el in relations:
            sf = lf = None
            for node in r_el.findall("node"):
                role = (node.get("role") or "").lower()
                refid = node.get("refid")
                if refid not in annotations:
                    continue
                if role in _SF_ROLES:
                    sf = annotations[refid][0]
                elif role in _LF_ROLES:
                    lf = annotations[refid][0]
            if sf and lf:
                # relations whose annotations were skipped drop out here
                doc.pairs.append((sf, lf))
        documents.append(doc)
    return BiocCollection(documents=documents, skipped_annotations=skipped)
