"""Meta-character signals: X/Y ratings, cue-labeled colon segments, emoticons.

Reviews carry sentiment in raw typography — "Story: 1/10", "Pros: ... Cons:
...", ":D" — that survives no tokenizer.  These extractors work on raw
sentence text.  Cue and emoticon tables are data files so the open-ended
inventory can grow without code changes.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass

from .corpus import DATA_DIR, Polarity

DEFAULT_DENOMINATORS = (5, 10, 100)
DEFAULT_NEG_MAX = 0.4
DEFAULT_POS_MIN = 0.7


@dataclass(frozen=True)
class RatioRating:
    x: float
    y: float
    span: tuple[int, int]
    polarity: Polarity


@dataclass(frozen=True)
class LabeledSegment:
    cue: str
    prior: Polarity
    body: str
    span: tuple[int, int]  # body span in the source text, cue excluded


def rating_polarity(
    x: float, y: float, neg_max: float = DEFAULT_NEG_MAX, pos_min: float = DEFAULT_POS_MIN
) -> Polarity:
    """Map a rating x/y onto a polarity: low ratio NEG, high POS, else NEU."""
    if y <= 0 or x < 0 or x > y:
        raise ValueError(f"invalid rating {x}/{y}: need 0 <= x <= y, y > 0")
    ratio = x / y
    if ratio <= neg_max:
        return Polarity.NEG
    if ratio >= pos_min:
        return Polarity.POS
    return Polarity.NEU


def _rating_re(denominators) -> re.Pattern:
    alt = "|".join(str(d) for d in sorted(denominators, reverse=True))
    # no word char/slash/dot before; no word char/slash after, nor a decimal
    # tail — keeps dates (3/4/2020) and slash chains out
    return re.compile(rf"(?<![\w./])(\d+(?:\.\d+)?)\s*/\s*({alt})(?!\.?\d|[\w/])")


def extract_ratings(
    text: str,
    denominators=DEFAULT_DENOMINATORS,
    neg_max: float = DEFAULT_NEG_MAX,
    pos_min: float = DEFAULT_POS_MIN,
) -> list[RatioRating]:
    """All X/Y ratings in the text with an allowed denominator and x <= y."""
    ratings = []
    for m in _rating_re(denominators).finditer(text):
        x = float(m.group(1))
        y = float(m.group(2))
        if x > y:
            continue
        ratings.append(
            RatioRating(x=x, y=y, span=m.span(), polarity=rating_polarity(x, y, neg_max, pos_min))
        )
    return ratings


def load_cue_table(path: str | None = None) -> dict[str, Polarity]:
    """Cue -> prior polarity table from JSON {"pos": [...], "neg": [...]}."""
    if path is None:
        path = os.path.join(DATA_DIR, "cues.json")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    table = {}
    for cue in raw.get("pos", []):
        table[cue.lower()] = Polarity.POS
    for cue in raw.get("neg", []):
        table[cue.lower()] = Polarity.NEG
    return table


def extract_labeled_segments(
    text: str, cue_table: dict[str, Polarity] | None = None
) -> list[LabeledSegment]:
    """Flat segmentation of the text at ``<cue>:`` markers.

    A cue counts only at the start of the text or right after
    sentence-terminal punctuation; each body runs to the next cue or the end.
    """
    if cue_table is None:
        cue_table = load_cue_table()
    if not cue_table:
        return []
    alt = "|".join(re.escape(cue) for cue in sorted(cue_table, key=len, reverse=True))
    pattern = re.compile(rf"(?:^|(?<=[.!?\n]))\s*({alt}):", re.IGNORECASE)
    matches = list(pattern.finditer(text))
    segments = []
    for k, m in enumerate(matches):
        body_start = m.end()
        body_end = matches[k + 1].start() if k + 1 < len(matches) else len(text)
        segments.append(
            LabeledSegment(
                cue=m.group(1),
                prior=cue_table[m.group(1).lower()],
                body=text[body_start:body_end].strip(),
                span=(body_start, body_end),
            )
        )
    return segments


def load_emoticon_table(path: str | None = None) -> dict[str, int]:
    """Emoticon -> +1/-1 table from JSON."""
    if path is None:
        path = os.path.join(DATA_DIR, "emoticons.json")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {emo: int(v) for emo, v in raw.items()}


@dataclass(frozen=True)
class PunctuationProfile:
    question: int
    exclamation: int
    colon: int
    slash: int
    emoticon_count: int
    emoticon_score: int


def punctuation_profile(
    text: str, emoticon_table: dict[str, int] | None = None
) -> PunctuationProfile:
    """Raw counts of {?, !, :, /} plus emoticon count and signed score."""
    if emoticon_table is None:
        emoticon_table = load_emoticon_table()
    count = 0
    score = 0
    if emoticon_table:
        alt = "|".join(re.escape(e) for e in sorted(emoticon_table, key=len, reverse=True))
        for m in re.finditer(alt, text):
            count += 1
            score += emoticon_table[m.group()]
    return PunctuationProfile(
        question=text.count("?"),
        exclamation=text.count("!"),
        colon=text.count(":"),
        slash=text.count("/"),
        emoticon_count=count,
        emoticon_score=score,
    )
