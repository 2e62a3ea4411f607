"""Inter-sentence polarity transition estimation and coherence findings.

Pairs are consecutive sentences within a document; document boundaries never
contribute.  The matrix comes in two modes: joint (all nine cells sum to 1)
and conditional (each row sums to 1), both with optional additive smoothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus, Document, Polarity

POLARITY_ORDER = (Polarity.POS, Polarity.NEG, Polarity.NEU)
_POL_INDEX = {p: i for i, p in enumerate(POLARITY_ORDER)}


class TransitionError(Exception):
    """Raised when no transition pairs exist and smoothing cannot fill in."""


@dataclass
class TransitionMatrix:
    mode: str  # joint | conditional
    cells: list[list[float]]
    support: list[list[int]]
    alpha: float

    def cell(self, current: Polarity, nxt: Polarity) -> float:
        return self.cells[_POL_INDEX[current]][_POL_INDEX[nxt]]

    def pair_count(self) -> int:
        return sum(sum(row) for row in self.support)


def count_pairs(corpus: Corpus) -> list[list[int]]:
    """Raw 3x3 counts of adjacent (current, next) sentence-label pairs."""
    support = [[0] * 3 for _ in range(3)]
    for doc in corpus:
        labels = [s.label for s in doc.sentences]
        for cur, nxt in zip(labels, labels[1:]):
            support[_POL_INDEX[cur]][_POL_INDEX[nxt]] += 1
    return support


def estimate_transitions(
    corpus: Corpus, mode: str = "joint", alpha: float = 0.0
) -> TransitionMatrix:
    """Estimate the transition matrix with additive smoothing ``alpha``."""
    if mode not in ("joint", "conditional"):
        raise ValueError(f"unknown mode {mode!r} (expected 'joint' or 'conditional')")
    if alpha < 0:
        raise ValueError("smoothing alpha must be >= 0")
    support = count_pairs(corpus)
    total = sum(sum(row) for row in support)
    if total == 0 and alpha == 0:
        raise TransitionError(
            "no adjacent sentence pairs in corpus and alpha=0; nothing to estimate"
        )
    cells = [[0.0] * 3 for _ in range(3)]
    if mode == "joint":
        denom = total + 9 * alpha
        for i in range(3):
            for j in range(3):
                cells[i][j] = (support[i][j] + alpha) / denom
    else:
        for i in range(3):
            row_total = sum(support[i]) + 3 * alpha
            if row_total > 0:
                for j in range(3):
                    cells[i][j] = (support[i][j] + alpha) / row_total
    return TransitionMatrix(mode=mode, cells=cells, support=support, alpha=alpha)


@dataclass
class CoherenceFindings:
    """The three observations checkable on a joint transition matrix."""

    same_polarity_dominance: bool
    pos_abrupt_lt_neutral: bool
    neg_abrupt_lt_neutral: bool
    supporting_cells: dict[str, float]

    def to_dict(self) -> dict[str, bool]:
        return {
            "same_polarity_dominance": self.same_polarity_dominance,
            "pos_abrupt_lt_neutral": self.pos_abrupt_lt_neutral,
            "neg_abrupt_lt_neutral": self.neg_abrupt_lt_neutral,
        }


def coherence_report(matrix: TransitionMatrix) -> CoherenceFindings:
    """Check same-polarity dominance and abrupt-vs-neutral transition ordering."""
    if matrix.mode != "joint":
        raise ValueError("coherence_report requires a joint-mode matrix")
    c = matrix.cell
    POS, NEG, NEU = POLARITY_ORDER
    dominance = all(
        c(p, p) > c(p, q) for p in POLARITY_ORDER for q in POLARITY_ORDER if q != p
    )
    pos_abrupt = c(POS, NEG) < c(POS, NEU)
    neg_abrupt = c(NEG, POS) < c(NEG, NEU)
    cells = {
        "pos_pos": c(POS, POS), "pos_neg": c(POS, NEG), "pos_neu": c(POS, NEU),
        "neg_pos": c(NEG, POS), "neg_neg": c(NEG, NEG), "neg_neu": c(NEG, NEU),
        "neu_pos": c(NEU, POS), "neu_neg": c(NEU, NEG), "neu_neu": c(NEU, NEU),
    }
    return CoherenceFindings(dominance, pos_abrupt, neg_abrupt, cells)


NO_PREVIOUS = (0.0, 0.0, 0.0, 1.0)


def previous_polarity_feature(
    document: Document,
    sentence_index: int,
    source: str = "gold",
    predicted: list[Polarity] | None = None,
) -> tuple[float, float, float, float]:
    """One-hot over {prev-POS, prev-NEG, prev-NEU, no-previous}.

    ``source='predicted'`` reads the decoder's label for the previous
    sentence from ``predicted`` (teacher forcing uses gold labels instead).
    """
    n = len(document.sentences)
    if not 0 <= sentence_index < n:
        raise IndexError(f"sentence index {sentence_index} out of range 0..{n - 1}")
    if sentence_index == 0:
        return NO_PREVIOUS
    if source == "gold":
        prev = document.sentences[sentence_index - 1].label
    elif source == "predicted":
        if predicted is None:
            raise ValueError("source='predicted' requires the predicted labels so far")
        prev = predicted[sentence_index - 1]
    else:
        raise ValueError(f"unknown source {source!r}")
    onehot = [0.0, 0.0, 0.0, 0.0]
    onehot[_POL_INDEX[prev]] = 1.0
    return tuple(onehot)


def transition_report(matrix: TransitionMatrix, findings: CoherenceFindings | None = None) -> dict:
    """JSON-ready report: mode, alpha, cells, support, and optional findings."""
    out = {
        "mode": matrix.mode,
        "alpha": matrix.alpha,
        "cells": matrix.cells,
        "support": matrix.support,
    }
    if findings is not None:
        out["findings"] = findings.to_dict()
    return out
