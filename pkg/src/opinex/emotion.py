"""Six-emotion vectors from aggregated WordNet similarity to seed synsets.

Each token's contribution to an emotion is the max similarity over all of its
noun/verb senses crossed with the emotion's seed synsets (same-pos pairs
only); sentence scores are the mean over content tokens, document scores the
mean over sentences.  The same machinery serves arbitrary seed sets, e.g. a
"good" polarity seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

from .corpus import Corpus, DATA_DIR, Document, Polarity, Sentence, Token
from .wordnet import Synset, WordNetDb, lookup, similarity

EMOTIONS = ("Anger", "Disgust", "Fear", "Joy", "Sadness", "Surprise")

EmotionVector = tuple[float, float, float, float, float, float]

ZERO_VECTOR: EmotionVector = (0.0,) * 6


class SeedConfigError(Exception):
    """Raised when a seed configuration entry cannot be resolved in WordNet."""


@dataclass
class SeedSet:
    """A named set of seed synsets, resolved against one loaded WordNet.

    The per-lemma score cache is a pure memo (same key, same value), so
    concurrent reads and redundant writes are harmless.
    """

    name: str
    seeds: tuple[tuple[str, str], ...]
    synsets: tuple[Synset, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)


def resolve_seedset(db: WordNetDb, name: str, seeds: list[tuple[str, str]]) -> SeedSet:
    synsets: list[Synset] = []
    for lemma, pos in seeds:
        found = lookup(db, lemma, pos)
        if not found:
            raise SeedConfigError(
                f"seed ({lemma!r}, {pos}) of seedset {name!r} not found in WordNet"
            )
        synsets.extend(found)
    if not synsets:
        raise SeedConfigError(f"seedset {name!r} has no seeds")
    return SeedSet(name=name, seeds=tuple(seeds), synsets=tuple(synsets))


def load_seedsets(db: WordNetDb, path: str | None = None) -> dict[str, SeedSet]:
    """Load the seed configuration JSON and resolve every set against ``db``."""
    if path is None:
        path = os.path.join(DATA_DIR, "seedsets.json")
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    out: dict[str, SeedSet] = {}
    for entry in cfg.get("seedsets", []):
        name = entry["name"]
        seeds = [(s["lemma"].lower(), s["pos"]) for s in entry["seeds"]]
        out[name] = resolve_seedset(db, name, seeds)
    return out


def emotion_seedsets(seedsets: dict[str, SeedSet]) -> list[SeedSet]:
    """The six canonical emotion seed sets, in fixed vector order."""
    missing = [e for e in EMOTIONS if e not in seedsets]
    if missing:
        raise SeedConfigError(f"seed configuration missing emotion sets: {missing}")
    return [seedsets[e] for e in EMOTIONS]


def _sense_pool(db: WordNetDb, token: Token, use_wsd_sense: bool) -> list[Synset]:
    if use_wsd_sense:
        if token.sense is None:
            return []
        syn = db.synsets[token.sense]
        return [syn] if syn.pos in ("noun", "verb") else []
    return lookup(db, token.lemma, "noun") + lookup(db, token.lemma, "verb")


def seed_similarity(
    db: WordNetDb,
    token: Token,
    seedset: SeedSet,
    measure: str = "wup",
    use_wsd_sense: bool = False,
) -> float:
    """Max same-pos similarity between the token's senses and the seed synsets.

    Tokens without noun/verb senses score 0 (adjective and adverb synsets
    carry no hypernym taxonomy).
    """
    key = (token.sense, measure) if use_wsd_sense else (token.lemma, measure)
    cached = seedset._cache.get(key)
    if cached is not None:
        return cached
    pool = _sense_pool(db, token, use_wsd_sense)
    best = 0.0
    for syn in pool:
        for seed in seedset.synsets:
            if syn.pos != seed.pos:
                continue
            score = similarity(db, syn, seed, measure)
            if score > best:
                best = score
    seedset._cache[key] = best
    return best


def has_noun_or_verb_sense(db: WordNetDb, token: Token) -> bool:
    return bool(db.index.get((token.lemma, "noun")) or db.index.get((token.lemma, "verb")))


def content_tokens(db: WordNetDb, sentence: Sentence, stopwords: frozenset[str]) -> list[Token]:
    """Non-stopword tokens with at least one noun or verb sense."""
    return [t for t in sentence.tokens
            if t.lemma not in stopwords and has_noun_or_verb_sense(db, t)]


def sentence_emotions(
    db: WordNetDb,
    sentence: Sentence,
    seedsets: list[SeedSet],
    measure: str = "wup",
    stopwords: frozenset[str] = frozenset(),
    use_wsd_sense: bool = False,
) -> EmotionVector:
    """Component-wise mean of seed similarities over the sentence's content tokens."""
    tokens = content_tokens(db, sentence, stopwords)
    if not tokens:
        return (0.0,) * len(seedsets)
    scores = [
        [seed_similarity(db, token, seedset, measure, use_wsd_sense) for token in tokens]
        for seedset in seedsets
    ]
    n = len(tokens)
    # fsum: correctly rounded, so token order cannot perturb the mean
    return tuple(math.fsum(row) / n for row in scores)


def document_emotions(
    db: WordNetDb,
    document: Document,
    seedsets: list[SeedSet],
    measure: str = "wup",
    stopwords: frozenset[str] = frozenset(),
    use_wsd_sense: bool = False,
) -> EmotionVector:
    """Arithmetic mean of sentence emotion vectors over the document."""
    vectors = [
        sentence_emotions(db, s, seedsets, measure, stopwords, use_wsd_sense)
        for s in document.sentences
    ]
    n = len(vectors)
    return tuple(math.fsum(v[k] for v in vectors) / n for k in range(len(seedsets)))


REPORT_HEADER = ["level", "id", "class", "anger", "disgust", "fear", "joy", "sadness", "surprise"]


def emotion_distribution_report(
    corpus: Corpus,
    db: WordNetDb,
    seedsets: list[SeedSet],
    level: str = "document",
    measure: str = "wup",
    stopwords: frozenset[str] = frozenset(),
    use_wsd_sense: bool = False,
    histogram_bins: int | None = None,
) -> str:
    """Per-item emotion scores grouped by polarity class, as CSV text.

    With ``histogram_bins`` set, emits binned counts per emotion and class
    instead of the raw score rows.
    """
    if level not in ("sentence", "document"):
        raise ValueError(f"unknown level {level!r}")
    rows = []
    for doc in corpus:
        if level == "document":
            vec = document_emotions(db, doc, seedsets, measure, stopwords, use_wsd_sense)
            rows.append(("document", doc.id, doc.label, vec))
        else:
            for sent in doc.sentences:
                vec = sentence_emotions(db, sent, seedsets, measure, stopwords, use_wsd_sense)
                rows.append(("sentence", f"{doc.id}:{sent.index}", sent.label, vec))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if histogram_bins is None:
        writer.writerow(REPORT_HEADER)
        for lvl, item_id, label, vec in rows:
            writer.writerow([lvl, item_id, label.value] + [repr(x) for x in vec])
        return buf.getvalue()

    if histogram_bins < 1:
        raise ValueError("histogram_bins must be >= 1")
    writer.writerow(["emotion", "class", "bin_lo", "bin_hi", "count"])
    for k, emotion in enumerate(EMOTIONS):
        for pol in (Polarity.POS, Polarity.NEG, Polarity.NEU):
            scores = [vec[k] for _, _, label, vec in rows if label == pol]
            counts = [0] * histogram_bins
            for s in scores:
                b = min(int(s * histogram_bins), histogram_bins - 1)
                counts[b] += 1
            for b, c in enumerate(counts):
                lo = b / histogram_bins
                hi = (b + 1) / histogram_bins
                writer.writerow([emotion.lower(), pol.value, f"{lo:.6g}", f"{hi:.6g}", c])
    return buf.getvalue()
