import json
import re

import pytest
from hypothesis import given, strategies as st

from opinex.corpus import (
    CorpusError,
    Polarity,
    StatsTable,
    corpus_stats,
    load_corpus,
    load_stopwords,
    normalize_label,
    tokenize,
)

from conftest import CORPUS_PATH


class TestNormalizeLabel:
    def test_mix_collapses_to_neu(self):
        assert normalize_label("MIX") is Polarity.NEU

    def test_pos_identity(self):
        assert normalize_label("POS") is Polarity.POS

    def test_case_insensitive(self):
        assert normalize_label("nr") is Polarity.NEU
        assert normalize_label("Neg") is Polarity.NEG

    def test_unknown_label_names_value_and_document(self):
        with pytest.raises(CorpusError, match=r"BOGUS.*doc-7"):
            normalize_label("BOGUS", doc_id="doc-7")

    @given(st.sampled_from(["POS", "NEG", "NEU", "MIX", "NR"]),
           st.sampled_from([str.lower, str.upper, str.title]))
    def test_idempotent(self, raw, casing):
        once = normalize_label(casing(raw))
        assert normalize_label(once.value) is once


class TestTokenize:
    def test_detachment_and_pos_priority(self, db):
        tokens = tokenize("This is a very one dimensional book.", db)
        assert [t.lemma for t in tokens] == ["this", "be", "a", "very", "one", "dimensional", "book"]
        assert [t.pos for t in tokens] == ["other", "verb", "other", "adv", "other", "other", "noun"]

    def test_empty_text(self, db):
        assert tokenize("", db) == []

    def test_plural_noun_reduction(self, db):
        (tok,) = tokenize("books", db)
        assert tok.lemma == "book" and tok.pos == "noun"

    def test_internal_apostrophe_and_hyphen_kept(self):
        tokens = tokenize("it's a co-op game")
        assert [t.surface for t in tokens] == ["it's", "a", "co-op", "game"]

    @given(st.text(max_size=200))
    def test_lemmas_lowercase_no_whitespace(self, text):
        for tok in tokenize(text):
            assert tok.lemma
            assert tok.lemma == tok.lemma.lower()
            assert not re.search(r"\s", tok.lemma)

    @given(st.text(max_size=200))
    def test_lossless_over_word_characters(self, text):
        # every word character of the input survives into some token surface
        joined = "".join(t.surface for t in tokenize(text))
        assert sorted(re.findall(r"\w", joined)) == sorted(re.findall(r"\w", text))


class TestLoadCorpus:
    def test_bundled_fixture_counts(self, fixture_corpus):
        # hand-counted from the fixture file (12 lines; 5+5+5+5+5+5+6+5+5+5+5+5)
        assert len(fixture_corpus) == 12
        assert sum(len(d.sentences) for d in fixture_corpus) == 61

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert load_corpus(str(path)) == []

    def test_nr_label_becomes_neu(self, fixture_corpus):
        by_id = {d.id: d for d in fixture_corpus}
        assert by_id["e3"].label is Polarity.NEU  # raw label NR
        assert by_id["b3"].label is Polarity.NEU  # raw label MIX

    def test_sentence_indices_contiguous(self, fixture_corpus):
        for doc in fixture_corpus:
            assert [s.index for s in doc.sentences] == list(range(len(doc.sentences)))

    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        ok = {"id": "a", "domain": "books", "label": "POS",
              "sentences": [{"text": "x", "label": "POS"}]}
        path.write_text(json.dumps(ok) + "\n{broken\n")
        with pytest.raises(CorpusError, match="line 2"):
            load_corpus(str(path))

    def test_duplicate_id_rejected(self, tmp_path):
        doc = {"id": "dup", "domain": "books", "label": "POS",
               "sentences": [{"text": "x", "label": "POS"}]}
        path = tmp_path / "dup.jsonl"
        path.write_text(json.dumps(doc) + "\n" + json.dumps(doc) + "\n")
        with pytest.raises(CorpusError, match="duplicate.*dup"):
            load_corpus(str(path))

    def test_empty_sentences_rejected(self, tmp_path):
        doc = {"id": "a", "domain": "books", "label": "POS", "sentences": []}
        path = tmp_path / "no_sents.jsonl"
        path.write_text(json.dumps(doc) + "\n")
        with pytest.raises(CorpusError, match="sentences"):
            load_corpus(str(path))

    def test_missing_field_named(self, tmp_path):
        doc = {"id": "a", "label": "POS", "sentences": [{"text": "x", "label": "POS"}]}
        path = tmp_path / "no_domain.jsonl"
        path.write_text(json.dumps(doc) + "\n")
        with pytest.raises(CorpusError, match="domain"):
            load_corpus(str(path))

    def test_unknown_fields_ignored(self, tmp_path):
        doc = {"id": "a", "domain": "books", "label": "POS", "extra": 1,
               "sentences": [{"text": "x", "label": "POS", "junk": True}]}
        path = tmp_path / "extra.jsonl"
        path.write_text(json.dumps(doc) + "\n")
        assert len(load_corpus(str(path))) == 1

    def test_missing_file(self):
        with pytest.raises(CorpusError, match="no/such/file"):
            load_corpus("no/such/file.jsonl")


class TestStats:
    def test_single_pos_document(self, tmp_path):
        doc = {"id": "a", "domain": "music", "label": "POS",
               "sentences": [{"text": "x", "label": "POS"}] * 3}
        path = tmp_path / "one.jsonl"
        path.write_text(json.dumps(doc) + "\n")
        table = corpus_stats(load_corpus(str(path)))
        assert table.docs("music", Polarity.POS) == 1
        assert table.docs("music", Polarity.NEG) == 0
        assert table.sentences("music", Polarity.POS) == 3
        assert table.row_totals("music") == (1, 3)

    def test_fixture_totals_match_independent_count(self, fixture_corpus):
        # independent oracle: tally the raw JSON, bypassing corpus_stats
        expected_docs = {}
        expected_sents = {}
        with open(CORPUS_PATH, encoding="utf-8") as fh:
            for line in fh:
                obj = json.loads(line)
                dlab = normalize_label(obj["label"])
                expected_docs[(obj["domain"], dlab)] = (
                    expected_docs.get((obj["domain"], dlab), 0) + 1
                )
                for s in obj["sentences"]:
                    slab = normalize_label(s["label"])
                    expected_sents[(obj["domain"], slab)] = (
                        expected_sents.get((obj["domain"], slab), 0) + 1
                    )
        table = corpus_stats(fixture_corpus)
        for (domain, pol), n in expected_docs.items():
            assert table.docs(domain, pol) == n
        for (domain, pol), n in expected_sents.items():
            assert table.sentences(domain, pol) == n
        docs, sents = table.grand_totals()
        assert sum(docs.values()) == 12
        assert sum(sents.values()) == 61

    def test_row_totals_equal_cell_sums(self, fixture_corpus):
        table = corpus_stats(fixture_corpus)
        for domain in table.ordered_domains():
            row = table.rows[domain]
            dt, st_ = table.row_totals(domain)
            assert dt == sum(row["docs"].values())
            assert st_ == sum(row["sentences"].values())
        docs, sents = table.grand_totals()
        assert sum(docs.values()) == sum(table.row_totals(d)[0] for d in table.ordered_domains())
        assert sum(sents.values()) == sum(table.row_totals(d)[1] for d in table.ordered_domains())

    def test_csv_shape(self, fixture_corpus):
        text = corpus_stats(fixture_corpus).to_csv()
        lines = text.strip().split("\n")
        assert lines[0].startswith("domain,docs_pos,docs_neg,docs_neu,docs_total")
        assert lines[-1].startswith("total,")
        assert all(len(line.split(",")) == 9 for line in lines)


def test_stopword_list_size_and_content():
    sw = load_stopwords()
    assert 100 <= len(sw) <= 150
    assert "the" in sw and "is" in sw and "be" in sw
    assert "book" not in sw
