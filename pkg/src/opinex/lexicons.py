"""Sentiment lexicon loading and ensemble polarity resolution.

Four on-disk formats are supported: SentiWordNet 3.0, plain word lists
(positive/negative role given by the caller), MPQA subjectivity clues, and a
generic ``lemma<TAB>pos<TAB>score`` TSV.  All scores live in [-1, +1];
multiword lemmas are underscore-joined.  Words missing from one dictionary
can be resolved by the next one in the ensemble order ("second opinion").
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Polarity, Sentence

FORMATS = ("sentiwordnet", "wordlist", "mpqa", "tsv")

POS_VALUES = ("noun", "verb", "adj", "adv", "any")

_SWN_POS = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}
_MPQA_POS = {"noun": "noun", "verb": "verb", "adj": "adj", "adverb": "adv", "anypos": "any"}


class LexiconError(Exception):
    """Raised for malformed lexicon files or bad ensemble configuration."""


def normalize_lemma(term: str) -> str:
    """Lowercase and underscore-join a lexicon term (spaces and hyphens)."""
    return term.strip().lower().replace(" ", "_").replace("-", "_")


@dataclass
class Lexicon:
    name: str
    format: str
    entries: dict[tuple[str, str], float] = field(default_factory=dict)
    clamp_warnings: int = 0

    @property
    def lemmas(self) -> set[str]:
        return {lemma for lemma, _ in self.entries}

    def __len__(self):
        return len(self.entries)


def _finish(name, fmt, sums: dict, counts: dict, clamp_warnings=0) -> Lexicon:
    # duplicate (lemma, pos) keys resolve by score averaging
    entries = {key: sums[key] / counts[key] for key in sums}
    return Lexicon(name=name, format=fmt, entries=entries, clamp_warnings=clamp_warnings)


def _accumulate(sums, counts, key, score):
    sums[key] = sums.get(key, 0.0) + score
    counts[key] = counts.get(key, 0) + 1


def _load_sentiwordnet(path: str, name: str) -> Lexicon:
    # Per-word folding over listed senses, rank-weighted:
    #   score(w) = sum_k (p_k - n_k)/k  /  sum_k 1/k
    weighted: dict[tuple[str, str], float] = {}
    weight_sum: dict[tuple[str, str], float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 5:
                raise LexiconError(f"{path}:{lineno}: expected >=5 tab-separated fields")
            pos_char, _, pos_score, neg_score, terms = parts[:5]
            pos = _SWN_POS.get(pos_char.strip())
            if pos is None:
                raise LexiconError(f"{path}:{lineno}: unknown POS column {pos_char!r}")
            try:
                delta = float(pos_score) - float(neg_score)
            except ValueError as exc:
                raise LexiconError(f"{path}:{lineno}: non-numeric score ({exc})") from exc
            for term in terms.split():
                lemma, _, rank_str = term.partition("#")
                try:
                    rank = int(rank_str)
                except ValueError as exc:
                    raise LexiconError(
                        f"{path}:{lineno}: term {term!r} missing '#rank'"
                    ) from exc
                key = (normalize_lemma(lemma), pos)
                weighted[key] = weighted.get(key, 0.0) + delta / rank
                weight_sum[key] = weight_sum.get(key, 0.0) + 1.0 / rank
    entries = {key: weighted[key] / weight_sum[key] for key in weighted}
    return Lexicon(name=name, format="sentiwordnet", entries=entries)


def _load_wordlist(path: str, name: str, role: str) -> Lexicon:
    if role not in ("positive", "negative"):
        raise LexiconError(f"wordlist role must be 'positive' or 'negative', got {role!r}")
    score = 1.0 if role == "positive" else -1.0
    sums: dict[tuple[str, str], float] = {}
    counts: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            term = line.strip()
            if not term or term.startswith(";"):
                continue
            _accumulate(sums, counts, (normalize_lemma(term), "any"), score)
    return _finish(name, "wordlist", sums, counts)


def _load_mpqa(path: str, name: str) -> Lexicon:
    base = {"positive": 1.0, "negative": -1.0, "neutral": 0.0, "both": 0.0}
    sums: dict[tuple[str, str], float] = {}
    counts: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = {}
            for item in line.split():
                key, eq, value = item.partition("=")
                if eq:
                    fields[key] = value
            if "word1" not in fields or "priorpolarity" not in fields:
                raise LexiconError(
                    f"{path}:{lineno}: clue line missing word1= or priorpolarity="
                )
            polarity = fields["priorpolarity"]
            if polarity not in base:
                raise LexiconError(f"{path}:{lineno}: unknown priorpolarity {polarity!r}")
            score = base[polarity]
            if fields.get("type") == "weaksubj":
                score *= 0.5
            pos = _MPQA_POS.get(fields.get("pos1", "anypos"), "any")
            _accumulate(sums, counts, (normalize_lemma(fields["word1"]), pos), score)
    return _finish(name, "mpqa", sums, counts)


def _load_tsv(path: str, name: str) -> Lexicon:
    sums: dict[tuple[str, str], float] = {}
    counts: dict[tuple[str, str], int] = {}
    clamped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise LexiconError(f"{path}:{lineno}: expected lemma<TAB>pos<TAB>score")
            lemma, pos, score_str = parts
            if pos not in POS_VALUES:
                raise LexiconError(f"{path}:{lineno}: pos must be one of {POS_VALUES}")
            try:
                score = float(score_str)
            except ValueError as exc:
                raise LexiconError(f"{path}:{lineno}: non-numeric score {score_str!r}") from exc
            if score > 1.0 or score < -1.0:
                score = max(-1.0, min(1.0, score))
                clamped += 1
            _accumulate(sums, counts, (normalize_lemma(lemma), pos), score)
    return _finish(name, "tsv", sums, counts, clamp_warnings=clamped)


def load_lexicon(path: str, fmt: str, name: str | None = None, role: str | None = None) -> Lexicon:
    """Load one lexicon file in the declared format."""
    if name is None:
        name = fmt
    if fmt == "sentiwordnet":
        return _load_sentiwordnet(path, name)
    if fmt == "wordlist":
        return _load_wordlist(path, name, role or "positive")
    if fmt == "mpqa":
        return _load_mpqa(path, name)
    if fmt == "tsv":
        return _load_tsv(path, name)
    raise LexiconError(f"unknown lexicon format {fmt!r} (expected one of {FORMATS})")


def merge_lexicons(name: str, parts: list[Lexicon], fmt: str | None = None) -> Lexicon:
    """Combine several loaded files into one dictionary (duplicates averaged)."""
    sums: dict[tuple[str, str], float] = {}
    counts: dict[tuple[str, str], int] = {}
    for part in parts:
        for key, score in part.entries.items():
            _accumulate(sums, counts, key, score)
    merged = _finish(name, fmt or (parts[0].format if parts else "tsv"), sums, counts)
    merged.clamp_warnings = sum(p.clamp_warnings for p in parts)
    return merged


def word_polarity(lexicon: Lexicon, lemma: str, pos: str = "any") -> float | None:
    """Exact (lemma, pos) score, else the ``any`` wildcard, else None."""
    score = lexicon.entries.get((lemma, pos))
    if score is None and pos != "any":
        score = lexicon.entries.get((lemma, "any"))
    return score


@dataclass
class EnsemblePolicy:
    order: tuple[str, ...]
    tau: float = 0.05
    strategy: str = "first-non-neutral"  # or: majority


def banded_verdict(score: float, tau: float) -> Polarity:
    if score > tau:
        return Polarity.POS
    if score < -tau:
        return Polarity.NEG
    return Polarity.NEU


def ensemble_polarity(
    lemma: str,
    pos: str,
    lexicons: dict[str, Lexicon],
    policy: EnsemblePolicy,
) -> tuple[Polarity, float, str]:
    """Resolve a word's polarity through the lexicon ensemble.

    Returns (polarity, score, provenance); provenance is the deciding
    lexicon's name, or "vote" when no single lexicon decided.
    """
    if not policy.order:
        raise LexiconError("ensemble policy has no lexicons")
    missing = [n for n in policy.order if n not in lexicons]
    if missing:
        raise LexiconError(f"ensemble policy references unloaded lexicons: {missing}")
    lemma = normalize_lemma(lemma)

    verdicts = []  # (name, score, verdict) for non-absent entries, in order
    for lex_name in policy.order:
        score = word_polarity(lexicons[lex_name], lemma, pos)
        if score is not None:
            verdicts.append((lex_name, score, banded_verdict(score, policy.tau)))

    if policy.strategy == "first-non-neutral":
        for lex_name, score, verdict in verdicts:
            if verdict != Polarity.NEU:
                return verdict, score, lex_name
        return Polarity.NEU, 0.0, "vote"

    if policy.strategy == "majority":
        if not verdicts:
            return Polarity.NEU, 0.0, "vote"
        tally = {Polarity.POS: 0, Polarity.NEG: 0, Polarity.NEU: 0}
        for _, _, verdict in verdicts:
            tally[verdict] += 1
        best = max(tally.values())
        winners = [p for p, c in tally.items() if c == best]
        if len(winners) != 1:
            return Polarity.NEU, 0.0, "vote"
        winner = winners[0]
        scores = [s for _, s, v in verdicts if v == winner]
        return winner, sum(scores) / len(scores), "vote"

    raise LexiconError(f"unknown ensemble strategy {policy.strategy!r}")


@dataclass(frozen=True)
class SentenceLexiconScore:
    sum_pos: float
    sum_neg: float
    net: float
    hit_count: int


MAX_NGRAM = 4


def _candidate_spans(tokens, start: int, length: int, allow_gap: int, stopwords):
    """Token index tuples of ``length`` starting at ``start``: contiguous picks,
    optionally skipping up to ``allow_gap`` stopword tokens between picks."""
    results = []

    def walk(picked, pos, gaps_left):
        if len(picked) == length:
            results.append(tuple(picked))
            return
        if pos >= len(tokens):
            return
        walk(picked + [pos], pos + 1, gaps_left)
        if picked and gaps_left > 0 and tokens[pos].lemma in stopwords:
            walk(picked, pos + 1, gaps_left - 1)

    walk([start], start + 1, allow_gap)
    return results


def sentence_lexicon_score(
    sentence: Sentence,
    lexicons: dict[str, Lexicon],
    policy: EnsemblePolicy,
    allow_gap: int = 0,
    stopwords: frozenset[str] = frozenset(),
) -> SentenceLexiconScore:
    """Greedy longest-first lexicon matching over the sentence's lemmas.

    Multiword units must be contiguous; ``allow_gap=1`` additionally permits
    one intervening stopword inside a multiword unit.  Every matched unit
    counts as a hit; its ensemble score lands in sum_pos or sum_neg by sign.
    """
    known_lemmas = set()
    for lex_name in policy.order:
        known_lemmas |= lexicons[lex_name].lemmas

    tokens = sentence.tokens
    sum_pos = 0.0
    sum_neg = 0.0
    hits = 0
    i = 0
    while i < len(tokens):
        matched_span = None
        matched_gram = None
        for length in range(min(MAX_NGRAM, len(tokens) - i), 0, -1):
            gap = allow_gap if length > 1 else 0
            for span in _candidate_spans(tokens, i, length, gap, stopwords):
                gram = normalize_lemma("_".join(tokens[k].lemma for k in span))
                if gram in known_lemmas:
                    matched_span = span
                    matched_gram = gram
                    break
            if matched_span:
                break
        if matched_span is None:
            i += 1
            continue
        pos = tokens[i].pos if len(matched_span) == 1 else "any"
        _, score, _ = ensemble_polarity(matched_gram, pos, lexicons, policy)
        hits += 1
        if score > 0:
            sum_pos += score
        elif score < 0:
            sum_neg += score
        i = matched_span[-1] + 1
    return SentenceLexiconScore(sum_pos, sum_neg, sum_pos + sum_neg, hits)
