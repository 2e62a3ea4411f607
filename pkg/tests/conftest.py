import os

import pytest

from opinex import corpus as corpus_mod
from opinex import emotion, metachar, pipeline, wordnet, wsd
from opinex.cli import DEFAULT_LEXICON_SPECS, parse_lexicon_specs
from opinex.corpus import DATA_DIR, Polarity, Sentence, Document
from opinex.lexicons import EnsemblePolicy

WORDNET_DIR = os.path.join(DATA_DIR, "wordnet")
CORPUS_PATH = os.path.join(DATA_DIR, "corpus.jsonl")
LEXICON_DIR = os.path.join(DATA_DIR, "lexicons")


@pytest.fixture(scope="session")
def db():
    return wordnet.load_wordnet(WORDNET_DIR)


@pytest.fixture(scope="session")
def stopwords():
    return corpus_mod.load_stopwords()


@pytest.fixture(scope="session")
def fixture_corpus(db):
    return corpus_mod.load_corpus(CORPUS_PATH, db)


@pytest.fixture(scope="session")
def annotated_corpus(db, fixture_corpus, stopwords):
    return wsd.annotate_corpus(db, fixture_corpus, stopwords)


@pytest.fixture(scope="session")
def lexicon_set():
    lexicons, order = parse_lexicon_specs(DEFAULT_LEXICON_SPECS)
    return lexicons, EnsemblePolicy(order=order)


@pytest.fixture(scope="session")
def seedsets(db):
    return emotion.emotion_seedsets(emotion.load_seedsets(db))


@pytest.fixture(scope="session")
def ctx(db, seedsets, lexicon_set, stopwords):
    lexicons, policy = lexicon_set
    return pipeline.FeatureContext(
        db=db,
        seedsets=seedsets,
        lexicons=lexicons,
        policy=policy,
        stopwords=stopwords,
        cue_table=metachar.load_cue_table(),
        emoticon_table=metachar.load_emoticon_table(),
    )


def label_corpus(label_lists):
    """Documents carrying only sentence labels; enough for transition tests."""
    docs = []
    for d, labels in enumerate(label_lists):
        sentences = tuple(
            Sentence(text="", tokens=(), label=lab, index=i) for i, lab in enumerate(labels)
        )
        docs.append(Document(id=f"doc{d}", domain="other", label=labels[0], sentences=sentences))
    return docs


def text_sentence(text, db=None, label=Polarity.NEU, index=0):
    return Sentence(
        text=text, tokens=tuple(corpus_mod.tokenize(text, db)), label=label, index=index
    )
