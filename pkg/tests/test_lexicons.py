import random

import pytest

from opinex.corpus import Polarity
from opinex.lexicons import (
    EnsemblePolicy,
    LexiconError,
    banded_verdict,
    ensemble_polarity,
    load_lexicon,
    merge_lexicons,
    normalize_lemma,
    sentence_lexicon_score,
    word_polarity,
)

from conftest import LEXICON_DIR, text_sentence

POS, NEG, NEU = Polarity.POS, Polarity.NEG, Polarity.NEU


class TestSentiWordNet:
    def test_rank_weighted_fold(self, tmp_path):
        # two senses: p-n = 0.5 at rank 1, 0.0 at rank 2
        # (0.5/1 + 0/2) / (1/1 + 1/2) = 1/3
        path = tmp_path / "swn.txt"
        path.write_text(
            "# comment\n"
            "a\t00000001\t0.5\t0\tcurious#1\teager to learn\n"
            "a\t00000002\t0\t0\tcurious#2\todd\n"
        )
        lex = load_lexicon(str(path), "sentiwordnet")
        assert word_polarity(lex, "curious", "adj") == pytest.approx(1 / 3)

    def test_bundled_fixture_golden(self):
        lex = load_lexicon(f"{LEXICON_DIR}/sentiwordnet.txt", "sentiwordnet")
        assert word_polarity(lex, "curious", "adj") == pytest.approx(1 / 3)
        # good: (0.625/1 + 0.25/2) / (1 + 0.5) = 0.5
        assert word_polarity(lex, "good", "adj") == pytest.approx(0.5)
        assert word_polarity(lex, "disproportionately", "adv") == 0.0
        assert word_polarity(lex, "bad", "adj") == pytest.approx(-0.625)
        # multi-term line: wonderful#2 gets the same delta at rank 2
        assert word_polarity(lex, "wonderful", "adj") == pytest.approx(0.875)

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "swn.txt"
        path.write_text("a\t1\t0.5\t0\tok#1\tfine\nnot\ttabs\n")
        with pytest.raises(LexiconError, match=":2"):
            load_lexicon(str(path), "sentiwordnet")

    def test_missing_rank_rejected(self, tmp_path):
        path = tmp_path / "swn.txt"
        path.write_text("a\t1\t0.5\t0\tnorank\tfine\n")
        with pytest.raises(LexiconError, match="rank"):
            load_lexicon(str(path), "sentiwordnet")


class TestWordlist:
    def test_negative_entry_with_hyphen(self, tmp_path):
        path = tmp_path / "neg.txt"
        path.write_text("; header\none-dimensional\n")
        lex = load_lexicon(str(path), "wordlist", role="negative")
        assert lex.entries == {("one_dimensional", "any"): -1.0}

    def test_positive_role(self, tmp_path):
        path = tmp_path / "pos.txt"
        path.write_text("great\n")
        lex = load_lexicon(str(path), "wordlist", role="positive")
        assert word_polarity(lex, "great") == 1.0

    def test_line_permutation_invariance(self, tmp_path):
        words = ["alpha", "beta", "gamma", "delta-one", "put_to_sleep"]
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        a.write_text("\n".join(words) + "\n")
        shuffled = list(words)
        random.Random(1).shuffle(shuffled)
        b.write_text("\n".join(shuffled) + "\n")
        lex_a = load_lexicon(str(a), "wordlist", name="x", role="negative")
        lex_b = load_lexicon(str(b), "wordlist", name="x", role="negative")
        assert lex_a == lex_b

    def test_bad_role(self, tmp_path):
        path = tmp_path / "w.txt"
        path.write_text("x\n")
        with pytest.raises(LexiconError, match="role"):
            load_lexicon(str(path), "wordlist", role="meh")


class TestMpqa:
    def test_weaksubj_negative_verb(self, tmp_path):
        path = tmp_path / "mpqa.tff"
        path.write_text(
            "type=weaksubj len=1 word1=abandon pos1=verb stemmed1=y priorpolarity=negative\n"
        )
        lex = load_lexicon(str(path), "mpqa")
        assert lex.entries == {("abandon", "verb"): -0.5}

    def test_bundled_fixture_golden(self):
        lex = load_lexicon(f"{LEXICON_DIR}/mpqa.tff", "mpqa")
        assert word_polarity(lex, "abandon", "verb") == -0.5
        assert word_polarity(lex, "joy", "noun") == 1.0
        assert word_polarity(lex, "average", "noun") == 0.0  # anypos wildcard
        assert word_polarity(lex, "surprise", "noun") == 0.0  # 'both' maps to 0
        assert word_polarity(lex, "disproportionately", "adv") == -1.0

    def test_missing_keys_rejected(self, tmp_path):
        path = tmp_path / "mpqa.tff"
        path.write_text("type=weaksubj len=1 pos1=verb\n")
        with pytest.raises(LexiconError, match=":1"):
            load_lexicon(str(path), "mpqa")


class TestTsv:
    def test_golden_parse(self):
        lex = load_lexicon(f"{LEXICON_DIR}/extra.tsv", "tsv")
        assert word_polarity(lex, "boring") == pytest.approx(-0.8)
        assert word_polarity(lex, "melody", "noun") == pytest.approx(0.4)
        assert word_polarity(lex, "melody", "verb") is None  # pos-specific entry
        assert lex.clamp_warnings == 0

    def test_out_of_range_clamped_with_warning(self, tmp_path):
        path = tmp_path / "x.tsv"
        path.write_text("huge\tany\t3.5\ntame\tany\t0.5\nlow\tany\t-2\n")
        lex = load_lexicon(str(path), "tsv")
        assert word_polarity(lex, "huge") == 1.0
        assert word_polarity(lex, "low") == -1.0
        assert lex.clamp_warnings == 2

    def test_duplicate_keys_average(self, tmp_path):
        path = tmp_path / "x.tsv"
        path.write_text("word\tany\t1.0\nword\tany\t0.0\n")
        lex = load_lexicon(str(path), "tsv")
        assert word_polarity(lex, "word") == pytest.approx(0.5)

    def test_bad_pos_rejected(self, tmp_path):
        path = tmp_path / "x.tsv"
        path.write_text("word\tnounish\t0.5\n")
        with pytest.raises(LexiconError, match="pos"):
            load_lexicon(str(path), "tsv")

    def test_unknown_format(self, tmp_path):
        path = tmp_path / "x.lex"
        path.write_text("")
        with pytest.raises(LexiconError, match="format"):
            load_lexicon(str(path), "xml")


class TestWordPolarity:
    def test_exact_pos_beats_wildcard(self, tmp_path):
        path = tmp_path / "x.tsv"
        path.write_text("word\tnoun\t0.5\nword\tany\t-0.5\n")
        lex = load_lexicon(str(path), "tsv")
        assert word_polarity(lex, "word", "noun") == 0.5
        assert word_polarity(lex, "word", "verb") == -0.5  # wildcard fallback

    def test_absent_is_none_not_zero(self, lexicon_set):
        lexicons, _ = lexicon_set
        assert word_polarity(lexicons["extra"], "qqqq") is None


class TestEnsemble:
    def test_second_opinion_resolves_negative(self, lexicon_set):
        # neutral in SentiWordNet, -1 in the word list: NEG via the second
        lexicons, policy = lexicon_set
        verdict, score, provenance = ensemble_polarity(
            "disproportionately", "adv", lexicons, policy
        )
        assert verdict is NEG
        assert score == -1.0
        assert provenance == "liu"

    def test_absent_everywhere_is_neutral(self, lexicon_set):
        lexicons, policy = lexicon_set
        verdict, score, provenance = ensemble_polarity("qqqq", "any", lexicons, policy)
        assert (verdict, score) == (NEU, 0.0)
        assert provenance == "vote"

    def test_majority_tie_is_neutral(self, tmp_path):
        (tmp_path / "p.txt").write_text("word\n")
        (tmp_path / "n.txt").write_text("word\n")
        (tmp_path / "z.tsv").write_text("word\tany\t0.0\n")
        lexicons = {
            "p": load_lexicon(str(tmp_path / "p.txt"), "wordlist", "p", role="positive"),
            "n": load_lexicon(str(tmp_path / "n.txt"), "wordlist", "n", role="negative"),
            "z": load_lexicon(str(tmp_path / "z.tsv"), "tsv", "z"),
        }
        policy = EnsemblePolicy(order=("p", "n", "z"), strategy="majority")
        verdict, score, provenance = ensemble_polarity("word", "any", lexicons, policy)
        assert (verdict, score, provenance) == (NEU, 0.0, "vote")

    def test_majority_wins(self, tmp_path):
        (tmp_path / "p1.txt").write_text("word\n")
        (tmp_path / "p2.txt").write_text("word\n")
        (tmp_path / "n.txt").write_text("word\n")
        lexicons = {
            "p1": load_lexicon(str(tmp_path / "p1.txt"), "wordlist", "p1", role="positive"),
            "p2": load_lexicon(str(tmp_path / "p2.txt"), "wordlist", "p2", role="positive"),
            "n": load_lexicon(str(tmp_path / "n.txt"), "wordlist", "n", role="negative"),
        }
        policy = EnsemblePolicy(order=("p1", "p2", "n"), strategy="majority")
        verdict, score, provenance = ensemble_polarity("word", "any", lexicons, policy)
        assert verdict is POS
        assert score == 1.0
        assert provenance == "vote"

    def test_single_lexicon_policy_equals_banded_verdict(self, lexicon_set):
        lexicons, _ = lexicon_set
        policy = EnsemblePolicy(order=("extra",), tau=0.05)
        for lemma, pos in (("boring", "any"), ("loud", "any"),
                           ("standard", "any"), ("melody", "noun")):
            score = word_polarity(lexicons["extra"], lemma, pos)
            verdict, _, _ = ensemble_polarity(lemma, pos, lexicons, policy)
            assert verdict is banded_verdict(score, 0.05)

    def test_verdicts_depend_only_on_tau_band(self, tmp_path):
        # rescaling scores inside the same band never changes the verdict
        (tmp_path / "a.tsv").write_text("word\tany\t0.3\n")
        (tmp_path / "b.tsv").write_text("word\tany\t0.9\n")
        lex_a = {"x": load_lexicon(str(tmp_path / "a.tsv"), "tsv", "x")}
        lex_b = {"x": load_lexicon(str(tmp_path / "b.tsv"), "tsv", "x")}
        policy = EnsemblePolicy(order=("x",))
        va, _, _ = ensemble_polarity("word", "any", lex_a, policy)
        vb, _, _ = ensemble_polarity("word", "any", lex_b, policy)
        assert va is vb is POS

    def test_empty_policy_rejected(self, lexicon_set):
        lexicons, _ = lexicon_set
        with pytest.raises(LexiconError, match="no lexicons"):
            ensemble_polarity("x", "any", lexicons, EnsemblePolicy(order=()))

    def test_unloaded_reference_rejected(self, lexicon_set):
        lexicons, _ = lexicon_set
        with pytest.raises(LexiconError, match="ghost"):
            ensemble_polarity("x", "any", lexicons, EnsemblePolicy(order=("ghost",)))

    def test_tau_inclusive_band_is_neutral(self, tmp_path):
        (tmp_path / "a.tsv").write_text("word\tany\t0.05\n")
        lex = {"x": load_lexicon(str(tmp_path / "a.tsv"), "tsv", "x")}
        verdict, _, _ = ensemble_polarity(
            "word", "any", lex, EnsemblePolicy(order=("x",), tau=0.05)
        )
        assert verdict is NEU


class TestSentenceScore:
    def test_gapped_multiword_needs_allow_gap(self, db, lexicon_set, stopwords):
        lexicons, policy = lexicon_set
        sent = text_sentence("this book put me to sleep", db)
        strict = sentence_lexicon_score(sent, lexicons, policy, 0, stopwords)
        assert strict.hit_count == 0
        gapped = sentence_lexicon_score(sent, lexicons, policy, 1, stopwords)
        assert gapped.net == -1.0
        assert gapped.hit_count == 1

    def test_contiguous_multiword_matches_without_gap(self, db, lexicon_set, stopwords):
        lexicons, policy = lexicon_set
        sent = text_sentence("they put to sleep the reader", db)
        strict = sentence_lexicon_score(sent, lexicons, policy, 0, stopwords)
        assert strict.net == -1.0

    def test_no_hits(self, db, lexicon_set, stopwords):
        lexicons, policy = lexicon_set
        sent = text_sentence("zzzz qqqq", db)
        s = sentence_lexicon_score(sent, lexicons, policy, 0, stopwords)
        assert (s.sum_pos, s.sum_neg, s.net, s.hit_count) == (0.0, 0.0, 0.0, 0)

    def test_mixed_hits_arithmetic(self, tmp_path, db, stopwords):
        (tmp_path / "x.tsv").write_text("joy\tany\t1.0\nabandon\tany\t-0.5\n")
        lexicons = {"x": load_lexicon(str(tmp_path / "x.tsv"), "tsv", "x")}
        policy = EnsemblePolicy(order=("x",))
        sent = text_sentence("joy then abandon", db)
        s = sentence_lexicon_score(sent, lexicons, policy, 0, stopwords)
        assert s.sum_pos == 1.0
        assert s.sum_neg == -0.5
        assert s.net == 0.5
        assert s.hit_count == 2

    def test_hyphenated_token_matches_underscore_entry(self, db, lexicon_set, stopwords):
        lexicons, policy = lexicon_set
        sent = text_sentence("a one-dimensional story", db)
        s = sentence_lexicon_score(sent, lexicons, policy, 0, stopwords)
        assert s.sum_neg <= -1.0

    def test_two_word_phrase_matches(self, db, lexicon_set, stopwords):
        lexicons, policy = lexicon_set
        sent = text_sentence("a very one dimensional story", db)
        s = sentence_lexicon_score(sent, lexicons, policy, 0, stopwords)
        assert s.sum_neg <= -1.0


def test_merge_lexicons_averages_duplicates(tmp_path):
    (tmp_path / "a.tsv").write_text("word\tany\t1.0\n")
    (tmp_path / "b.tsv").write_text("word\tany\t0.0\nother\tany\t0.5\n")
    merged = merge_lexicons("m", [
        load_lexicon(str(tmp_path / "a.tsv"), "tsv"),
        load_lexicon(str(tmp_path / "b.tsv"), "tsv"),
    ])
    assert word_polarity(merged, "word") == pytest.approx(0.5)
    assert word_polarity(merged, "other") == pytest.approx(0.5)


def test_normalize_lemma():
    assert normalize_lemma("Put To Sleep") == "put_to_sleep"
    assert normalize_lemma("one-dimensional") == "one_dimensional"
