import numpy as np
import pytest

from adi.extract import (
    Candidate,
    DefinitionPattern,
    Document,
    NBestList,
    char_match_lf,
    default_window_cap,
    extract_pairs,
    find_definition_sites,
    generate_nbest,
    plausible_sf,
    tokenize,
)

AFC_TEXT = (
    "The American Football Conference (AFC) champion Denver Broncos defeated "
    "the National Football Conference (NFC) champion Carolina Panthers 24-10 "
    "to earn their third Super Bowl title."
)


def is_char_subsequence(sf: str, lf: str) -> bool:
    """Independent check: every alphanumeric char of sf appears in lf in order."""
    chars = [c.lower() for c in sf if c.isalnum()]
    hay = lf.lower()
    pos = 0
    for c in chars:
        pos = hay.find(c, pos)
        if pos < 0:
            return False
        pos += 1
    return True


class TestTokenize:
    def test_strips_edge_punctuation_keeps_offsets(self):
        text = "mice, (heat) shock."
        tokens = tokenize(text)
        assert [t.text for t in tokens] == ["mice", "heat", "shock"]
        for t in tokens:
            assert text[t.start : t.end] == t.text

    def test_drops_pure_punctuation_chunks(self):
        assert [t.text for t in tokenize("a - b")] == ["a", "b"]


class TestPlausibleSf:
    @pytest.mark.parametrize("sf", ["HSP", "HC", "AFC", "pH", "IL-6", "x"])
    def test_accepts(self, sf):
        assert plausible_sf(sf)

    @pytest.mark.parametrize(
        "bad", ["7.4", "2020", "", "e.g.", "i.e.", "24-10",
                "three word phrase", "waytoolongtoken"]
    )
    def test_rejects(self, bad):
        assert not plausible_sf(bad)


class TestFindSites:
    def test_hsp_site(self):
        sites = find_definition_sites(Document("d", "heat shock protein (HSP)"))
        assert len(sites) == 1
        site = sites[0]
        assert site.sf == "HSP"
        assert [t.text for t in site.window] == ["heat", "shock", "protein"]

    def test_no_parens_no_sites(self):
        assert find_definition_sites(Document("d", "no parentheses at all")) == []

    def test_number_in_parens_filtered(self):
        assert find_definition_sites(Document("d", "pH (7.4) was measured")) == []

    def test_window_respects_explicit_cap(self):
        sites = find_definition_sites(
            Document("d", "one two three four five six (STU)"), max_window=2
        )
        assert [t.text for t in sites[0].window] == ["five", "six"]

    def test_max_window_must_be_positive(self):
        with pytest.raises(ValueError):
            find_definition_sites(Document("d", "x (Y)"), max_window=0)

    def test_window_stops_at_sentence_boundary(self):
        sites = find_definition_sites(
            Document("d", "It ended. Heat shock protein (HSP)")
        )
        assert [t.text for t in sites[0].window] == ["Heat", "shock", "protein"]

    def test_window_stops_at_prior_close_paren(self):
        sites = find_definition_sites(
            Document("d", "alpha (AB) heat shock protein (HSP)")
        )
        windows = {s.sf: [t.text for t in s.window] for s in sites}
        assert windows["HSP"] == ["heat", "shock", "protein"]

    def test_default_cap_tracks_sf_length(self):
        assert default_window_cap("HSP") == 6
        assert default_window_cap("AB") == 4
        assert default_window_cap("x") == 2
        assert default_window_cap("ABCDEFGH") == 13

    def test_paren_at_text_start_has_no_window(self):
        assert find_definition_sites(Document("d", "(HSP) protein")) == []

    def test_sites_ordered_by_position(self):
        sites = find_definition_sites(Document("d", AFC_TEXT))
        assert [s.sf for s in sites] == ["AFC", "NFC"]
        assert sites[0].sf_span[0] < sites[1].sf_span[0]

    def test_window_span_abuts_the_parenthesis(self):
        for text in ("heat shock protein (HSP)", "heat shock protein, (HSP)",
                     "heat shock protein - (HSP)", "pH(7) heat shock protein (HSP)"):
            for site in find_definition_sites(Document("d", text)):
                after = text[site.window_span[1] :].lstrip()
                assert after.startswith("(")

    def test_stray_punctuation_before_paren_rejects_site(self):
        # a dangling dash between window and '(' is not a clean definition
        assert find_definition_sites(Document("d", "protein - (HSP)")) == []


class TestCharMatch:
    def test_healthy_controls(self):
        text = "patients and healthy controls"
        lf, span = char_match_lf("HC", tokenize(text), text)
        assert lf == "healthy controls"
        assert text[span[0] : span[1]] == lf

    def test_drops_leading_unmatched_token(self):
        text = "Latent herpes simplex virus"
        lf, _ = char_match_lf("HSV", tokenize(text), text)
        assert lf == "herpes simplex virus"

    def test_no_shared_characters(self):
        assert char_match_lf("ABC", tokenize("xyz"), "xyz") is None

    def test_first_letter_must_start_a_token(self):
        # 'h' occurs inside "the" but never token-initial
        assert char_match_lf("HC", tokenize("the controls"), "the controls") is None

    def test_lf_never_equals_sf(self):
        assert char_match_lf("abc", tokenize("abc"), "abc") is None

    def test_token_budget_enforced(self):
        # 2 chars -> at most 4 tokens; the only anchored suffix has 5
        text = "alpha one two three four"
        assert char_match_lf("af", tokenize(text), text) is None

    def test_requires_nonempty_inputs(self):
        with pytest.raises(ValueError):
            char_match_lf("", tokenize("x"), "x")
        with pytest.raises(ValueError):
            char_match_lf("X", [], "x")


class TestExtractPairs:
    def test_lf_paren_sf(self):
        pairs = extract_pairs(Document("d", "heat shock protein (HSP)"))
        assert [(p.sf, p.lf, p.pattern) for p in pairs] == [
            ("HSP", "heat shock protein", DefinitionPattern.LF_PAREN_SF)
        ]

    def test_sf_paren_lf(self):
        pairs = extract_pairs(Document("d", "HSP (heat shock protein)"))
        assert [(p.sf, p.lf, p.pattern) for p in pairs] == [
            ("HSP", "heat shock protein", DefinitionPattern.SF_PAREN_LF)
        ]

    def test_two_definitions_in_one_sentence(self):
        pairs = extract_pairs(Document("d", AFC_TEXT))
        assert [(p.sf, p.lf) for p in pairs] == [
            ("AFC", "American Football Conference"),
            ("NFC", "National Football Conference"),
        ]

    def test_latent_prefix_excluded(self):
        pairs = extract_pairs(
            Document("d", "Latent herpes simplex virus (HSV) has been demonstrated.")
        )
        assert [(p.sf, p.lf) for p in pairs] == [("HSV", "herpes simplex virus")]

    def test_healthy_controls(self):
        pairs = extract_pairs(Document("d", "patients and healthy controls (HC)"))
        assert [(p.sf, p.lf) for p in pairs] == [("HC", "healthy controls")]

    def test_empty_on_no_parens(self):
        assert extract_pairs(Document("d", "nothing here")) == []

    def test_deterministic(self):
        doc = Document("d", AFC_TEXT)
        assert repr(extract_pairs(doc)) == repr(extract_pairs(doc))

    def test_pair_invariants_on_generated_text(self):
        rng = np.random.default_rng(21)
        words = ["alpha", "beta", "gamma", "delta", "heat", "shock",
                 "protein", "virus", "cells", "late"]
        sfs = ["HS", "HSP", "AB", "GD", "VC"]
        for _ in range(50):
            parts = list(rng.choice(words, size=int(rng.integers(3, 12))))
            insert_at = int(rng.integers(0, len(parts) + 1))
            sf = str(rng.choice(sfs))
            parts.insert(insert_at, f"({sf})")
            text = " ".join(parts)
            doc = Document("d", text)
            for pair in extract_pairs(doc):
                assert is_char_subsequence(pair.sf, pair.lf)
                assert len(pair.sf) < len(pair.lf)
                assert doc.text[pair.sf_span[0] : pair.sf_span[1]] == pair.sf
                assert doc.text[pair.lf_span[0] : pair.lf_span[1]] == pair.lf
                if pair.pattern is DefinitionPattern.LF_PAREN_SF:
                    assert pair.lf_span[1] < pair.sf_span[0]
                    between = doc.text[pair.lf_span[1] : pair.sf_span[0]]
                    assert between.strip() == "("

    def test_sf_span_gap_is_whitespace_and_paren(self):
        doc = Document("d", "heat shock protein  (HSP)")
        (pair,) = extract_pairs(doc)
        assert doc.text[pair.lf_span[1] : pair.sf_span[0]] == "  ("


class TestGenerateNbest:
    def _site(self, text, which=0):
        return find_definition_sites(Document("d", text))[which]

    def test_suffix_candidates_with_char_match_first(self):
        text = "patients and healthy controls (HC)"
        doc = Document("d", text)
        nb = generate_nbest(doc, self._site(text), k=3)
        assert [(c.rank, c.lf) for c in nb.candidates] == [
            (0, "healthy controls"),
            (1, "controls"),
            (2, "and healthy controls"),
        ]

    def test_k_one(self):
        text = "patients and healthy controls (HC)"
        nb = generate_nbest(Document("d", text), self._site(text), k=1)
        assert len(nb.candidates) == 1
        assert nb.candidates[0].lf == "healthy controls"

    def test_single_token_window_yields_at_most_one(self):
        text = "virus (HSV)"
        nb = generate_nbest(Document("d", text), self._site(text), k=5)
        assert [c.lf for c in nb.candidates] == ["virus"]

    def test_ranks_consecutive_and_distinct(self):
        text = "one two three four five six seven heat shock protein (HSP)"
        nb = generate_nbest(Document("d", text), self._site(text), k=5)
        assert [c.rank for c in nb.candidates] == list(range(len(nb.candidates)))
        lfs = [c.lf for c in nb.candidates]
        assert len(set(lfs)) == len(lfs)

    def test_k_must_be_positive(self):
        text = "virus (HSV)"
        with pytest.raises(ValueError):
            generate_nbest(Document("d", text), self._site(text), k=0)

    def test_nbest_list_validates_ranks(self):
        with pytest.raises(ValueError):
            NBestList(
                doc_id="d",
                sf="X",
                sf_span=(0, 1),
                candidates=(Candidate("a", 0), Candidate("b", 2)),
            )
