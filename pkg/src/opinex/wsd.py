"""Gloss-overlap word sense disambiguation (simplified extended Lesk).

Each content token is assigned the candidate sense whose signature (gloss
content words + synset words + direct hypernym gloss content words) shares
the most words with the rest of the sentence.  Overlap is a multiset
intersection; ties break toward the lowest sense rank.  Monosemous tokens
short-circuit, and all-zero overlaps fall back to the first sense.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .corpus import Corpus, Document, Sentence, _TOKEN_RE
from .wordnet import Synset, SynsetId, WordNetDb, lookup

METHOD_LESK = "lesk"
METHOD_MONOSEMOUS = "monosemous"
METHOD_FALLBACK = "first-sense-fallback"


@dataclass(frozen=True)
class SenseAssignment:
    token_index: int
    synset_id: SynsetId
    overlap_score: int
    method: str


def gloss_words(text: str, stopwords: frozenset[str]) -> list[str]:
    """Lowercased word tokens of a gloss, minus stopwords (no lemmatization)."""
    return [w for w in (m.group().lower() for m in _TOKEN_RE.finditer(text))
            if w not in stopwords]


def signature(db: WordNetDb, synset: Synset, stopwords: frozenset[str]) -> Counter:
    """Extended-Lesk signature bag: gloss + synset words + hypernym glosses."""
    bag = Counter(gloss_words(synset.gloss, stopwords))
    bag.update(w.lower() for w in synset.words)
    for hid in synset.hypernyms:
        bag.update(gloss_words(db.synsets[hid].gloss, stopwords))
    return bag


def disambiguate_sentence(
    db: WordNetDb, sentence: Sentence, stopwords: frozenset[str]
) -> list[SenseAssignment]:
    """One sense per token that has any sense under its pos; others skipped."""
    lemmas = [t.lemma for t in sentence.tokens]
    full_context = Counter(l for l in lemmas if l not in stopwords)
    signatures: dict[SynsetId, Counter] = {}
    assignments = []
    for i, token in enumerate(sentence.tokens):
        if token.pos == "other":
            continue
        candidates = lookup(db, token.lemma, token.pos)
        if not candidates:
            continue
        if len(candidates) == 1:
            assignments.append(
                SenseAssignment(i, candidates[0].id, 0, METHOD_MONOSEMOUS)
            )
            continue
        context = full_context.copy()
        if token.lemma in context:
            context[token.lemma] -= 1
            if context[token.lemma] == 0:
                del context[token.lemma]
        best_score = -1
        best_id = None
        for cand in candidates:
            sig = signatures.get(cand.id)
            if sig is None:
                sig = signatures[cand.id] = signature(db, cand, stopwords)
            score = sum((context & sig).values())
            if score > best_score:  # strict: ties keep the lower sense rank
                best_score = score
                best_id = cand.id
        method = METHOD_LESK if best_score > 0 else METHOD_FALLBACK
        if best_score == 0:
            best_id = candidates[0].id
        assignments.append(SenseAssignment(i, best_id, best_score, method))
    return assignments


def annotate_lexdomains(
    db: WordNetDb, sentence: Sentence, assignments: list[SenseAssignment]
) -> Sentence:
    """New Sentence with sense and lexicographer domain filled in per assignment."""
    by_index = {a.token_index: a for a in assignments}
    tokens = []
    for i, token in enumerate(sentence.tokens):
        a = by_index.get(i)
        if a is None:
            tokens.append(token)
        else:
            tokens.append(
                replace(token, sense=a.synset_id, lexdomain=db.synsets[a.synset_id].lexfile)
            )
    return replace(sentence, tokens=tuple(tokens))


def annotate_sentence(db: WordNetDb, sentence: Sentence, stopwords: frozenset[str]) -> Sentence:
    return annotate_lexdomains(db, sentence, disambiguate_sentence(db, sentence, stopwords))


def annotate_document(db: WordNetDb, doc: Document, stopwords: frozenset[str]) -> Document:
    return replace(
        doc, sentences=tuple(annotate_sentence(db, s, stopwords) for s in doc.sentences)
    )


def annotate_corpus(
    db: WordNetDb, corpus: Corpus, stopwords: frozenset[str], jobs: int = 1
) -> Corpus:
    """Sense-annotate every document; per-document parallelism preserves order."""
    if jobs <= 1:
        return [annotate_document(db, d, stopwords) for d in corpus]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda d: annotate_document(db, d, stopwords), corpus))
