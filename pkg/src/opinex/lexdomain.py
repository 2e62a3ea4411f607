"""Lexicographer-domain histograms (45 bins) per sentence, document, and group.

Counts are token-frequency based: every sense-annotated token contributes one
count to its domain bin.  Histograms merge associatively, so corpus-level
distributions can be tallied per document in parallel and reduced.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .corpus import Corpus, Document, Sentence
from .wordnet import LEXFILE_NAMES

N_DOMAINS = 45

GROUP_MODES = ("domain", "polarity", "domain-polarity")


@dataclass
class DomainHistogram:
    counts: list[int] = field(default_factory=lambda: [0] * N_DOMAINS)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def add(self, other: "DomainHistogram") -> "DomainHistogram":
        for i, c in enumerate(other.counts):
            self.counts[i] += c
        return self

    def normalized(self) -> list[float]:
        """Relative frequencies summing to 1, or all zeros when empty."""
        total = self.total
        if total == 0:
            return [0.0] * N_DOMAINS
        return [c / total for c in self.counts]


def sentence_domains(sentence: Sentence) -> DomainHistogram:
    """Histogram of the sentence's assigned token domains (unassigned excluded)."""
    hist = DomainHistogram()
    for token in sentence.tokens:
        if token.lexdomain is not None:
            hist.counts[token.lexdomain] += 1
    return hist


def document_domains(document: Document) -> DomainHistogram:
    hist = DomainHistogram()
    for sent in document.sentences:
        hist.add(sentence_domains(sent))
    return hist


def _group_key(doc: Document, group_by: str):
    if group_by == "domain":
        return doc.domain
    if group_by == "polarity":
        return doc.label.value
    return f"{doc.domain}:{doc.label.value}"


def corpus_domain_distribution(corpus: Corpus, group_by: str = "domain") -> dict[str, list[float]]:
    """Normalized 45-vector per group; empty groups come out all-zero."""
    if group_by in ("domain×polarity", "domain_x_polarity"):
        group_by = "domain-polarity"
    if group_by not in GROUP_MODES:
        raise ValueError(f"unknown group_by {group_by!r} (expected one of {GROUP_MODES})")
    groups: dict[str, DomainHistogram] = {}
    for doc in corpus:
        key = _group_key(doc, group_by)
        groups.setdefault(key, DomainHistogram()).add(document_domains(doc))
    return {key: hist.normalized() for key, hist in sorted(groups.items())}


def distribution_csv(distribution: dict[str, list[float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group"] + list(LEXFILE_NAMES))
    for key, vec in distribution.items():
        writer.writerow([key] + [repr(x) for x in vec])
    return buf.getvalue()
