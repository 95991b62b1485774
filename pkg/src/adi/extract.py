"""Parenthetical definition extraction and n-best candidate generation.

Both common definition orders are handled: "heat shock protein (HSP)" and
"HSP (heat shock protein)".  Long forms are recovered with a right-to-left
character-matching procedure: the shortest run of tokens before the
parenthesis that accounts for every letter of the short form, anchored on
the short form's first letter starting a token.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional, Sequence

MAX_SF_LEN = 10
MAX_PAREN_SPAN = 200  # give up matching ')' beyond this many chars
DEFAULT_K = 5

_TOKEN = re.compile(r"\S+")
_NUMERIC = re.compile(r"[0-9.,:;%/+\-–—]+")
_CITATION_WORDS = frozenset({"eg", "ie", "cf", "etc", "vs", "viz", "et al"})
_SENTENCE_END = ".!?"


class DefinitionPattern(enum.Enum):
    LF_PAREN_SF = "LF_PAREN_SF"
    SF_PAREN_LF = "SF_PAREN_LF"


@dataclass(frozen=True)
class Document:
    """A unit of input text; offsets elsewhere index into ``text``."""

    id: str
    text: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")


@dataclass(frozen=True)
class Token:
    """A whitespace-delimited word with surrounding punctuation stripped.

    ``start``/``end`` delimit the stripped core in the source text; ``raw``
    keeps the original chunk (starting at ``raw_start``) for boundary
    heuristics.
    """

    text: str
    start: int
    end: int
    raw: str = ""
    raw_start: int = -1

    @property
    def raw_end(self) -> int:
        return self.raw_start + len(self.raw)


@dataclass(frozen=True)
class SfLfPair:
    sf: str
    lf: str
    sf_span: tuple[int, int]
    lf_span: tuple[int, int]
    pattern: DefinitionPattern


@dataclass(frozen=True)
class DefinitionSite:
    """A '(' whose content looks like a short form, plus the token window
    preceding it (never crossing a sentence boundary or an earlier paren)."""

    sf: str
    sf_span: tuple[int, int]
    window: tuple[Token, ...]
    window_span: tuple[int, int]


@dataclass(frozen=True)
class Candidate:
    lf: str
    rank: int
    generator_score: Optional[float] = None


@dataclass(frozen=True)
class NBestList:
    doc_id: str
    sf: str
    sf_span: tuple[int, int]
    candidates: tuple[Candidate, ...]

    def __post_init__(self):
        ranks = [c.rank for c in self.candidates]
        if ranks != list(range(len(ranks))):
            raise ValueError(f"candidate ranks must be 0..k-1, got {ranks}")


def tokenize(text: str, offset: int = 0) -> list[Token]:
    """Split on whitespace; strip non-alphanumeric edges for matching while
    keeping source offsets.  Chunks with no alphanumeric core are dropped."""
    tokens = []
    for m in _TOKEN.finditer(text):
        raw = m.group()
        lo, hi = 0, len(raw)
        while lo < hi and not raw[lo].isalnum():
            lo += 1
        while hi > lo and not raw[hi - 1].isalnum():
            hi -= 1
        if lo == hi:
            continue
        tokens.append(
            Token(
                text=raw[lo:hi],
                start=offset + m.start() + lo,
                end=offset + m.start() + hi,
                raw=raw,
                raw_start=offset + m.start(),
            )
        )
    return tokens


def plausible_sf(s: str) -> bool:
    """Heuristic filter for parenthesized short-form candidates."""
    s = s.strip()
    if not 1 <= len(s) <= MAX_SF_LEN:
        return False
    if not any(ch.isalpha() for ch in s):
        return False
    if len(s.split()) > 2:
        return False
    if _NUMERIC.fullmatch(s):
        return False
    if s.lower().rstrip(".").replace(".", "") in _CITATION_WORDS:
        return False
    return True


def default_window_cap(sf: str) -> int:
    """Token budget for the long-form window, tied to the short-form length."""
    return max(1, min(len(sf) + 5, 2 * len(sf)))


def _paren_groups(text: str):
    """Yield (open_idx, close_idx, inner) for '(...)' groups, allowing one
    nested level.  Unbalanced or overlong groups are skipped."""
    i = 0
    n = len(text)
    while i < n:
        if text[i] != "(":
            i += 1
            continue
        depth = 1
        j = i + 1
        close = -1
        while j < n and j - i <= MAX_PAREN_SPAN:
            ch = text[j]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    close = j
                    break
            j += 1
        if close >= 0:
            yield i, close, text[i + 1 : close]
        i += 1


def _trimmed_span(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def _window_before(tokens: Sequence[Token], open_idx: int, text: str,
                   cap: int) -> list[Token]:
    """Up to ``cap`` tokens immediately left of the '(' at ``open_idx``,
    stopping at sentence boundaries and earlier parentheses."""
    before = []
    for tok in tokens:
        if tok.end <= open_idx:
            before.append(tok)
        elif tok.start < open_idx:
            # token runs into the '(' itself, e.g. "protein(HSP)"
            clipped = tokenize(text[tok.start : open_idx], offset=tok.start)
            before.extend(clipped)
        else:
            break
    window: list[Token] = []
    right: Optional[Token] = None
    for tok in reversed(before):
        if "(" in tok.raw or ")" in tok.raw:
            break
        if (
            right is not None
            and tok.raw
            and tok.raw[-1] in _SENTENCE_END
            and right.raw[:1].isupper()
        ):
            break
        window.append(tok)
        right = tok
        if len(window) == cap:
            break
    window.reverse()
    return window


def find_definition_sites(doc: Document, max_window: Optional[int] = None
                          ) -> list[DefinitionSite]:
    """Locate "long form (SF)" candidate sites in ``doc``.

    ``max_window`` caps the token window; when omitted the cap adapts to
    each short form via :func:`default_window_cap`.  Unparseable regions
    produce no sites, never errors.
    """
    if max_window is not None and max_window < 1:
        raise ValueError("max_window must be >= 1")
    if not doc.text:
        raise ValueError("document text must be non-empty")
    tokens = tokenize(doc.text)
    sites = []
    for open_idx, close_idx, _inner in _paren_groups(doc.text):
        sf_start, sf_end = _trimmed_span(doc.text, open_idx + 1, close_idx)
        sf = doc.text[sf_start:sf_end]
        if not plausible_sf(sf):
            continue
        cap = max_window if max_window is not None else default_window_cap(sf)
        window = _window_before(tokens, open_idx, doc.text, cap)
        if not window:
            continue
        if doc.text[window[-1].raw_end : open_idx].strip():
            # stray punctuation between the window and '(': not a clean site
            continue
        sites.append(
            DefinitionSite(
                sf=sf,
                sf_span=(sf_start, sf_end),
                window=tuple(window),
                window_span=(window[0].raw_start, window[-1].raw_end),
            )
        )
    return sites


def _alnum_chars(s: str) -> list[str]:
    return [ch.lower() for ch in s if ch.isalnum()]


def _first_alnum(s: str) -> str:
    for ch in s:
        if ch.isalnum():
            return ch.lower()
    return ""


def _is_subsequence(needle: list[str], hay: str) -> bool:
    pos = 0
    hay = hay.lower()
    for ch in needle:
        pos = hay.find(ch, pos)
        if pos < 0:
            return False
        pos += 1
    return True


def char_match_lf(sf: str, window: Sequence[Token], text: str
                  ) -> Optional[tuple[str, tuple[int, int]]]:
    """Shortest window suffix covering every letter of ``sf`` in order.

    The first letter of ``sf`` must start the suffix's leading token; the
    suffix must stay within the token budget, contain no '(' and differ
    from ``sf``.  Returns ``(lf, lf_span)`` or None.
    """
    if not sf:
        raise ValueError("sf must be non-empty")
    if not window:
        raise ValueError("window must be non-empty")
    chars = _alnum_chars(sf)
    if not chars:
        return None
    cap = default_window_cap(sf)
    for n in range(1, len(window) + 1):
        if n > cap:
            break
        suffix = window[-n:]
        if _first_alnum(suffix[0].text) != chars[0]:
            continue
        lf_span = (suffix[0].start, suffix[-1].end)
        lf = text[lf_span[0] : lf_span[1]]
        if "(" in lf:
            continue
        if not _is_subsequence(chars, lf):
            continue
        if lf.lower() == sf.lower():
            continue
        return lf, lf_span
    return None


def extract_pairs(doc: Document) -> list[SfLfPair]:
    """All definition pairs in ``doc``, at most one per parenthesis, in
    short-form position order.  Handles both definition orders."""
    if not doc.text:
        return []
    tokens = tokenize(doc.text)
    pairs = []
    for open_idx, close_idx, _inner in _paren_groups(doc.text):
        in_start, in_end = _trimmed_span(doc.text, open_idx + 1, close_idx)
        inner_trim = doc.text[in_start:in_end]
        if plausible_sf(inner_trim):
            sf, sf_span = inner_trim, (in_start, in_end)
            cap = default_window_cap(sf)
            window = _window_before(tokens, open_idx, doc.text, cap)
            if not window:
                continue
            if doc.text[window[-1].raw_end : open_idx].strip():
                continue
            match = char_match_lf(sf, window, doc.text)
            if match is None:
                continue
            lf, lf_span = match
            if len(sf) >= len(lf):
                continue
            pairs.append(SfLfPair(sf, lf, sf_span, lf_span,
                                  DefinitionPattern.LF_PAREN_SF))
        else:
            # swapped order: short form sits just before the parenthesis
            pre = _window_before(tokens, open_idx, doc.text, cap=1)
            if not pre or not plausible_sf(pre[0].text):
                continue
            sf_tok = pre[0]
            if doc.text[sf_tok.raw_end : open_idx].strip():
                continue
            inner_tokens = tokenize(inner_trim, offset=in_start)
            if not inner_tokens:
                continue
            match = char_match_lf(sf_tok.text, inner_tokens, doc.text)
            if match is None:
                continue
            lf, lf_span = match
            if len(sf_tok.text) >= len(lf):
                continue
            pairs.append(SfLfPair(sf_tok.text, lf, (sf_tok.start, sf_tok.end),
                                  lf_span, DefinitionPattern.SF_PAREN_LF))
    pairs.sort(key=lambda p: (p.sf_span[0], p.sf_span[1]))
    return pairs


def generate_nbest(doc: Document, site: DefinitionSite, k: int = DEFAULT_K
                   ) -> NBestList:
    """Up to ``k`` distinct long-form candidates for ``site``.

    Candidates are window suffixes (they share the right edge at the
    parenthesis and differ at the left edge).  The character-matched long
    form, when present, takes rank 0; the rest are ordered by how far
    their token count is from the short-form length, shorter first on
    ties.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    window = site.window
    suffixes = []
    for n in range(1, len(window) + 1):
        span = (window[-n].start, window[-1].end)
        suffixes.append((doc.text[span[0] : span[1]], n))
    best = None
    if window:
        match = char_match_lf(site.sf, window, doc.text)
        if match is not None:
            best = match[0]
    ordered = []
    if best is not None:
        ordered.append(best)
    target = len(site.sf)
    rest = [(abs(n - target), n, lf) for lf, n in suffixes if lf != best]
    rest.sort()
    ordered.extend(lf for _, _, lf in rest)
    seen = set()
    candidates = []
    for lf in ordered:
        if lf in seen:
            continue
        seen.add(lf)
        candidates.append(Candidate(lf=lf, rank=len(candidates)))
        if len(candidates) == k:
            break
    return NBestList(
        doc_id=doc.id,
        sf=site.sf,
        sf_span=site.sf_span,
        candidates=tuple(candidates),
    )
