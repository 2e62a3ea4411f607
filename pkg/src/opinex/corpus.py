"""Labeled review corpus: loading, label normalization, tokenization, stats.

The corpus file is JSONL, one document per line:

    {"id": "...", "domain": "books", "label": "POS",
     "sentences": [{"text": "...", "label": "NEG"}, ...]}

Raw labels POS/NEG/NEU/MIX/NR are accepted case-insensitively; MIX and NR
collapse into NEU so only three classes exist downstream.  Sentences arrive
pre-split; this module never re-splits them.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, replace
from enum import Enum

from . import wordnet
from .wordnet import WordNetDb

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

DOMAINS = ("books", "dvds", "electronics", "music", "videogames", "other")


class CorpusError(Exception):
    """Raised for unreadable, malformed, or schema-violating corpus files."""


class Polarity(str, Enum):
    POS = "POS"
    NEG = "NEG"
    NEU = "NEU"

    def __str__(self):
        return self.value


_LABEL_MAP = {
    "pos": Polarity.POS,
    "neg": Polarity.NEG,
    "neu": Polarity.NEU,
    "mix": Polarity.NEU,
    "nr": Polarity.NEU,
}


def normalize_label(raw: str, doc_id: str | None = None) -> Polarity:
    """Collapse a raw 5-way label into {POS, NEG, NEU} (MIX, NR -> NEU)."""
    pol = _LABEL_MAP.get(str(raw).strip().lower())
    if pol is None:
        where = f" in document {doc_id!r}" if doc_id else ""
        raise CorpusError(f"unrecognized label {raw!r}{where}")
    return pol


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str  # noun | verb | adj | adv | other
    sense: wordnet.SynsetId | None = None
    lexdomain: int | None = None


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[Token, ...]
    label: Polarity
    index: int


@dataclass(frozen=True)
class Document:
    id: str
    domain: str
    label: Polarity
    sentences: tuple[Sentence, ...]


Corpus = list[Document]

# Word-character runs; internal apostrophes/hyphens stay inside the token
# (underscores are word characters already).
_TOKEN_RE = re.compile(r"\w+(?:['’-]\w+)*")


def tokenize(text: str, db: WordNetDb | None = None) -> list[Token]:
    """Split ``text`` into tokens with lowercase lemma and index-derived pos.

    With a loaded WordNet, the lemma is the morphy reduction of the lowercased
    surface and pos is assigned by index membership, trying noun, verb, adj,
    adv in that order.  Without one, lemma is the lowercased surface and pos
    is ``other``.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group()
        lower = surface.lower().replace("’", "'")
        lemma, pos = lower, "other"
        if db is not None:
            for cand_pos in wordnet.POS_TAGS:
                reduced = wordnet.morphy(db, lower, cand_pos)
                if reduced is not None:
                    lemma, pos = reduced, cand_pos
                    break
        tokens.append(Token(surface=surface, lemma=lemma, pos=pos))
    return tokens


def _require(obj: dict, key: str, doc_id: str, lineno: int):
    if key not in obj:
        raise CorpusError(f"line {lineno}: document {doc_id!r} missing field {key!r}")
    return obj[key]


def load_corpus(path: str, db: WordNetDb | None = None) -> Corpus:
    """Load and validate a JSONL corpus; tokenize sentences against ``db``."""
    if not os.path.exists(path):
        raise CorpusError(f"corpus file not found: {path}")
    docs: list[Document] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno}: expected a JSON object")
            doc_id = str(_require(obj, "id", "<unknown>", lineno))
            if doc_id in seen_ids:
                raise CorpusError(f"line {lineno}: duplicate document id {doc_id!r}")
            seen_ids.add(doc_id)
            domain = _require(obj, "domain", doc_id, lineno)
            if domain not in DOMAINS:
                raise CorpusError(
                    f"line {lineno}: document {doc_id!r} has unknown domain {domain!r}"
                )
            label = normalize_label(_require(obj, "label", doc_id, lineno), doc_id)
            raw_sentences = _require(obj, "sentences", doc_id, lineno)
            if not isinstance(raw_sentences, list) or not raw_sentences:
                raise CorpusError(
                    f"line {lineno}: document {doc_id!r} field 'sentences' must be a non-empty list"
                )
            sentences = []
            for i, raw in enumerate(raw_sentences):
                if not isinstance(raw, dict):
                    raise CorpusError(
                        f"line {lineno}: document {doc_id!r} sentence {i} is not an object"
                    )
                text = str(_require(raw, "text", doc_id, lineno))
                slabel = normalize_label(_require(raw, "label", doc_id, lineno), doc_id)
                sentences.append(
                    Sentence(text=text, tokens=tuple(tokenize(text, db)), label=slabel, index=i)
                )
            docs.append(
                Document(id=doc_id, domain=domain, label=label, sentences=tuple(sentences))
            )
    return docs


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """The bundled ~120-word English function-word list (or a custom file)."""
    if path is None:
        path = os.path.join(DATA_DIR, "stopwords.txt")
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.lower())
    return frozenset(words)


_POLS = (Polarity.POS, Polarity.NEG, Polarity.NEU)


@dataclass
class StatsTable:
    """Per-domain, per-polarity document and sentence counts with totals."""

    rows: dict[str, dict[str, dict[Polarity, int]]] = field(default_factory=dict)

    def _row(self, domain: str):
        if domain not in self.rows:
            self.rows[domain] = {
                "docs": {p: 0 for p in _POLS},
                "sentences": {p: 0 for p in _POLS},
            }
        return self.rows[domain]

    def docs(self, domain: str, pol: Polarity) -> int:
        return self.rows.get(domain, {}).get("docs", {}).get(pol, 0)

    def sentences(self, domain: str, pol: Polarity) -> int:
        return self.rows.get(domain, {}).get("sentences", {}).get(pol, 0)

    def row_totals(self, domain: str) -> tuple[int, int]:
        row = self.rows.get(domain)
        if row is None:
            return 0, 0
        return sum(row["docs"].values()), sum(row["sentences"].values())

    def grand_totals(self):
        docs = {p: 0 for p in _POLS}
        sents = {p: 0 for p in _POLS}
        for row in self.rows.values():
            for p in _POLS:
                docs[p] += row["docs"][p]
                sents[p] += row["sentences"][p]
        return docs, sents

    def ordered_domains(self) -> list[str]:
        return [d for d in DOMAINS if d in self.rows]

    def to_csv(self) -> str:
        lines = [
            "domain,docs_pos,docs_neg,docs_neu,docs_total,"
            "sents_pos,sents_neg,sents_neu,sents_total"
        ]
        for domain in self.ordered_domains():
            row = self.rows[domain]
            dt, st = self.row_totals(domain)
            cells = [domain]
            cells += [str(row["docs"][p]) for p in _POLS] + [str(dt)]
            cells += [str(row["sentences"][p]) for p in _POLS] + [str(st)]
            lines.append(",".join(cells))
        docs, sents = self.grand_totals()
        cells = ["total"]
        cells += [str(docs[p]) for p in _POLS] + [str(sum(docs.values()))]
        cells += [str(sents[p]) for p in _POLS] + [str(sum(sents.values()))]
        lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def corpus_stats(corpus: Corpus) -> StatsTable:
    """Document and sentence distribution over domains and polarity classes."""
    table = StatsTable()
    for doc in corpus:
        row = table._row(doc.domain)
        row["docs"][doc.label] += 1
        for sent in doc.sentences:
            row["sentences"][sent.label] += 1
    return table


def annotate_token(token: Token, sense: wordnet.SynsetId | None, lexdomain: int | None) -> Token:
    return replace(token, sense=sense, lexdomain=lexdomain)
