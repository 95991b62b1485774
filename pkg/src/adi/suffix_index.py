"""Suffix-array index over a document corpus with exact substring counting.

The corpus is concatenated with a NUL sentinel after every document, so no
match can span two documents.  Counting a definition string such as
"heat shock protein (HSP" across the corpus is the backend of the freq
reranking feature.
"""

from __future__ import annotations

import re
import struct
import zlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from adi import kernels
from adi.extract import Document

SENTINEL = "\x00"

MAGIC = b"ADISA1"
_HEADER = struct.Struct("<QI")  # text byte length, flags
_FLAG_CASE_FOLDED = 0x1
_CHECKSUM = struct.Struct("<I")

_WS_RUN = re.compile(r"\s+")


class IndexFormatError(ValueError):
    """A serialized index could not be read."""


class IndexVersionError(IndexFormatError):
    """Bad magic: not an index file, or an incompatible format version."""


class IndexTruncatedError(IndexFormatError):
    """File ends before the declared payload does."""


class IndexChecksumError(IndexFormatError):
    """Payload checksum mismatch: the file is corrupt."""


@dataclass(frozen=True)
class SuffixIndex:
    """Immutable suffix array over a sentinel-joined corpus.

    ``text`` is the UTF-8 corpus (sentinels included) and ``sa`` the int64
    permutation of byte offsets in lexicographic suffix order.  Queries are
    read-only; instances are safe to share across threads.
    """

    text: bytes
    sa: np.ndarray
    doc_count: int
    case_folded: bool
    _codes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        codes = np.frombuffer(self.text, dtype=np.uint8)
        if self.sa.shape != (codes.size,):
            raise ValueError("suffix array length does not match text length")
        object.__setattr__(self, "_codes", codes)

    def __eq__(self, other):
        if not isinstance(other, SuffixIndex):
            return NotImplemented
        return (
            self.text == other.text
            and np.array_equal(self.sa, other.sa)
            and self.doc_count == other.doc_count
            and self.case_folded == other.case_folded
        )


def build_index(docs: Sequence[Document], case_fold: bool = False) -> SuffixIndex:
    """Index ``docs``; with ``case_fold`` both corpus and queries are lowercased."""
    if not docs:
        raise ValueError("cannot build an index from an empty document list")
    parts = []
    for doc in docs:
        if not doc.text:
            raise ValueError(f"empty document: {doc.id!r}")
        if SENTINEL in doc.text:
            raise ValueError(f"document {doc.id!r} contains the sentinel byte 0x00")
        text = doc.text.lower() if case_fold else doc.text
        parts.append(text)
        parts.append(SENTINEL)
    text = "".join(parts).encode("utf-8")
    codes = np.frombuffer(text, dtype=np.uint8)
    sa = kernels.build_suffix_array(codes)
    return SuffixIndex(text=text, sa=sa, doc_count=len(docs), case_folded=case_fold)


def count_occurrences(index: SuffixIndex, pattern: str) -> int:
    """Exact number of (possibly overlapping) occurrences of ``pattern``."""
    if not pattern:
        raise ValueError("empty pattern: count is undefined")
    if index.case_folded:
        pattern = pattern.lower()
    pat = np.frombuffer(pattern.encode("utf-8"), dtype=np.uint8)
    lo, hi = kernels.pattern_range(index._codes, index.sa, pat)
    return int(hi - lo)


def definition_freq(index: SuffixIndex, sf: str, lf: str) -> int:
    """Corpus frequency of the definition string ``lf + " (" + sf``.

    Whitespace runs inside ``lf`` are collapsed to single spaces first, so
    the query string is canonical.
    """
    if not sf or not lf:
        raise ValueError("sf and lf must be non-empty")
    lf = _WS_RUN.sub(" ", lf).strip()
    return count_occurrences(index, f"{lf} ({sf}")


def save_index(index: SuffixIndex, path) -> None:
    """Write the index: magic, corpus length, flags, text bytes, int64
    offsets, crc32 trailer.  The document count is recoverable from the
    sentinels, one per document."""
    sa_bytes = index.sa.astype("<i8").tobytes()
    flags = _FLAG_CASE_FOLDED if index.case_folded else 0
    payload = (
        MAGIC
        + _HEADER.pack(len(index.text), flags)
        + index.text
        + sa_bytes
    )
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(_CHECKSUM.pack(zlib.crc32(payload)))


def load_index(path) -> SuffixIndex:
    """Read an index written by :func:`save_index`; load(save(x)) == x."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC):
        raise IndexTruncatedError(f"{path}: truncated index file (no magic header)")
    if blob[: len(MAGIC)] != MAGIC:
        raise IndexVersionError(
            f"{path}: bad magic {blob[:len(MAGIC)]!r}, expected {MAGIC!r}"
        )
    header_end = len(MAGIC) + _HEADER.size
    if len(blob) < header_end:
        raise IndexTruncatedError(f"{path}: truncated index file (incomplete header)")
    text_len, flags = _HEADER.unpack(blob[len(MAGIC) : header_end])
    body_end = header_end + text_len + text_len * 8
    if len(blob) < body_end + _CHECKSUM.size:
        raise IndexTruncatedError(
            f"{path}: truncated index file "
            f"(expected {body_end + _CHECKSUM.size} bytes, found {len(blob)})"
        )
    (stored_crc,) = _CHECKSUM.unpack(blob[body_end : body_end + _CHECKSUM.size])
    if zlib.crc32(blob[:body_end]) != stored_crc:
        raise IndexChecksumError(f"{path}: checksum mismatch, file is corrupt")
    text = blob[header_end : header_end + text_len]
    sa = np.frombuffer(
        blob[header_end + text_len : body_end], dtype="<i8"
    ).astype(np.int64)
    return SuffixIndex(
        text=text,
        sa=sa,
        doc_count=text.count(SENTINEL.encode()),
        case_folded=bool(flags & _FLAG_CASE_FOLDED),
    )


def corpus_length(index: SuffixIndex) -> int:
    """Total indexed bytes excluding the per-document sentinels."""
    return len(index.text) - index.doc_count
