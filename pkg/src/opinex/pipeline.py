"""Feature vector assembly, linear classifier training, evaluation, reports.

The per-item feature vector has a fixed, versioned 64-slot layout; disabled
feature groups contribute zeros so the geometry never shifts with config.
The classifier is a softmax linear model (one weight row and bias per class)
trained by full-batch gradient descent on mean cross-entropy with L2 on the
weights (bias unregularized), so the objective is convex and the analytic
gradient is checkable against finite differences.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import emotion, lexdomain, lexicons, metachar, transition
from .corpus import Corpus, Document, Polarity, corpus_stats
from .metachar import DEFAULT_DENOMINATORS, DEFAULT_NEG_MAX, DEFAULT_POS_MIN
from .emotion import SeedSet
from .lexicons import EnsemblePolicy, Lexicon
from .transition import POLARITY_ORDER
from .wordnet import LEXFILE_NAMES, WordNetDb

LAYOUT_VERSION = 1
N_FEATURES = 64

# (group, start, stop) — offsets are part of the layout contract
FEATURE_GROUPS = (
    ("emotions", 0, 6),
    ("lexdomains", 6, 51),
    ("lexicon", 51, 55),
    ("prev_polarity", 55, 59),
    ("metachar", 59, 62),
    ("punctuation", 62, 64),
)

GROUP_SLICES = {name: slice(start, stop) for name, start, stop in FEATURE_GROUPS}

FEATURE_NAMES = (
    tuple(e.lower() for e in emotion.EMOTIONS)
    + LEXFILE_NAMES
    + ("lex_sum_pos", "lex_sum_neg", "lex_net", "lex_hits")
    + ("prev_pos", "prev_neg", "prev_neu", "prev_none")
    + ("rating_score", "segment_score", "emoticon_score")
    + ("log_questions", "log_exclamations")
)

_POL_SCORE = {Polarity.POS: 1.0, Polarity.NEU: 0.0, Polarity.NEG: -1.0}


class PipelineError(Exception):
    """Raised for invalid training inputs or unwritable outputs."""


@dataclass
class FeatureConfig:
    emotions: bool = True
    lexdomains: bool = True
    lexicon: bool = True
    prev_polarity: bool = True
    metachar: bool = True
    punctuation: bool = True
    measure: str = "wup"
    use_wsd_sense: bool = False
    allow_gap: int = 0
    denominators: tuple[int, ...] = DEFAULT_DENOMINATORS
    rating_neg_max: float = DEFAULT_NEG_MAX
    rating_pos_min: float = DEFAULT_POS_MIN

    def disable(self, groups) -> "FeatureConfig":
        updates = {}
        for g in groups:
            if g not in GROUP_SLICES:
                raise PipelineError(f"unknown feature group {g!r}")
            updates[g] = False
        return replace(self, **updates)


@dataclass
class FeatureContext:
    """All loaded resources feature building needs; immutable in use."""

    db: WordNetDb
    seedsets: list[SeedSet]  # the six emotion sets, canonical order
    lexicons: dict[str, Lexicon]
    policy: EnsemblePolicy
    stopwords: frozenset[str]
    cue_table: dict[str, Polarity]
    emoticon_table: dict[str, int]
    config: FeatureConfig = field(default_factory=FeatureConfig)


def sentence_features(
    ctx: FeatureContext,
    document: Document,
    index: int,
    prev_source: str = "gold",
    predicted: list[Polarity] | None = None,
) -> np.ndarray:
    """64-component feature vector for one sentence of a document."""
    cfg = ctx.config
    sent = document.sentences[index]
    vec = np.zeros(N_FEATURES)
    if cfg.emotions:
        vec[GROUP_SLICES["emotions"]] = emotion.sentence_emotions(
            ctx.db, sent, ctx.seedsets, cfg.measure, ctx.stopwords, cfg.use_wsd_sense
        )
    if cfg.lexdomains:
        vec[GROUP_SLICES["lexdomains"]] = lexdomain.sentence_domains(sent).normalized()
    if cfg.lexicon:
        score = lexicons.sentence_lexicon_score(
            sent, ctx.lexicons, ctx.policy, cfg.allow_gap, ctx.stopwords
        )
        vec[GROUP_SLICES["lexicon"]] = (score.sum_pos, score.sum_neg, score.net, score.hit_count)
    if cfg.prev_polarity:
        vec[GROUP_SLICES["prev_polarity"]] = transition.previous_polarity_feature(
            document, index, prev_source, predicted
        )
    profile = None
    if cfg.metachar:
        ratings = metachar.extract_ratings(
            sent.text, cfg.denominators, cfg.rating_neg_max, cfg.rating_pos_min
        )
        segments = metachar.extract_labeled_segments(sent.text, ctx.cue_table)
        profile = metachar.punctuation_profile(sent.text, ctx.emoticon_table)
        rating_score = (
            sum(_POL_SCORE[r.polarity] for r in ratings) / len(ratings) if ratings else 0.0
        )
        segment_score = (
            sum(_POL_SCORE[s.prior] for s in segments) / len(segments) if segments else 0.0
        )
        vec[GROUP_SLICES["metachar"]] = (rating_score, segment_score, profile.emoticon_score)
    if cfg.punctuation:
        if profile is None:
            profile = metachar.punctuation_profile(sent.text, ctx.emoticon_table)
        vec[GROUP_SLICES["punctuation"]] = (
            math.log1p(profile.question),
            math.log1p(profile.exclamation),
        )
    return vec


def document_features(ctx: FeatureContext, document: Document) -> np.ndarray:
    """Document vector: mean of sentence vectors for score groups, sum for
    meta-character counts, previous-polarity zeroed."""
    rows = np.stack(
        [sentence_features(ctx, document, i) for i in range(len(document.sentences))]
    )
    vec = rows.mean(axis=0)
    vec[GROUP_SLICES["prev_polarity"]] = 0.0
    for group in ("metachar", "punctuation"):
        sl = GROUP_SLICES[group]
        vec[sl] = rows[:, sl].sum(axis=0)
    return vec


def corpus_feature_matrix(
    ctx: FeatureContext, corpus: Corpus, level: str = "sentence", jobs: int = 1
):
    """(ids, labels, X) for every item at the requested level, corpus order."""
    if level == "document":
        def doc_row(doc):
            return document_features(ctx, doc)
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(doc_row, corpus))
        else:
            rows = [doc_row(d) for d in corpus]
        ids = [d.id for d in corpus]
        labels = [d.label for d in corpus]
    elif level == "sentence":
        def doc_rows(doc):
            return [sentence_features(ctx, doc, i) for i in range(len(doc.sentences))]
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                per_doc = list(pool.map(doc_rows, corpus))
        else:
            per_doc = [doc_rows(d) for d in corpus]
        rows, ids, labels = [], [], []
        for doc, doc_vecs in zip(corpus, per_doc):
            for sent, vec in zip(doc.sentences, doc_vecs):
                rows.append(vec)
                ids.append(f"{doc.id}:{sent.index}")
                labels.append(sent.label)
    else:
        raise ValueError(f"unknown level {level!r}")
    X = np.stack(rows) if rows else np.zeros((0, N_FEATURES))
    return ids, labels, X


def features_csv(ids, labels, X) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "label"] + list(FEATURE_NAMES))
    for item_id, label, row in zip(ids, labels, X):
        writer.writerow([item_id, label.value] + [repr(float(v)) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# softmax linear model


@dataclass
class Hyperparams:
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 500
    seed: int = 42


@dataclass
class Model:
    classes: list[Polarity]
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    mean: np.ndarray
    scale: np.ndarray  # multiplicative: standardized = (x - mean) * scale
    hyper: Hyperparams
    loss_history: list[float] = field(default_factory=list)

    def standardize(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) * self.scale


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_value(W, b, X, Y, l2: float) -> float:
    """Mean cross-entropy + (l2/2)*||W||^2 for one-hot targets Y."""
    z = X @ W.T + b
    z = z - z.max(axis=1, keepdims=True)
    log_p = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    ce = -np.mean(np.sum(Y * log_p, axis=1))
    return float(ce + 0.5 * l2 * np.sum(W * W))


def loss_gradient(W, b, X, Y, l2: float):
    """Analytic gradient of :func:`loss_value` w.r.t. W and b."""
    n = X.shape[0]
    p = softmax(X @ W.T + b)
    delta = (p - Y) / n
    grad_w = delta.T @ X + l2 * W
    grad_b = delta.sum(axis=0)
    return grad_w, grad_b


def _one_hot(labels, classes) -> np.ndarray:
    index = {c: i for i, c in enumerate(classes)}
    Y = np.zeros((len(labels), len(classes)))
    for i, lab in enumerate(labels):
        Y[i, index[lab]] = 1.0
    return Y


def gradient(model: Model, X, labels):
    """Gradient of the regularized loss at the model's weights on a batch."""
    if len(labels) == 0:
        raise PipelineError("gradient requires a non-empty batch")
    Xs = model.standardize(X)
    Y = _one_hot(labels, model.classes)
    return loss_gradient(model.weights, model.bias, Xs, Y, model.hyper.l2)


def train(X, labels, hyper: Hyperparams | None = None) -> Model:
    """Full-batch gradient descent from zero weights; deterministic."""
    hyper = hyper or Hyperparams()
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise PipelineError("feature matrix must be 2-dimensional")
    if not np.all(np.isfinite(X)):
        raise PipelineError("non-finite feature values in training data")
    present = set(labels)
    classes = [p for p in POLARITY_ORDER if p in present]
    if len(classes) < 2:
        raise PipelineError(f"need at least 2 distinct labels, got {sorted(present)}")

    mean = X.mean(axis=0)
    var = X.var(axis=0)
    scale = np.where(var > 0, 1.0 / np.sqrt(np.where(var > 0, var, 1.0)), 1.0)
    Xs = (X - mean) * scale

    Y = _one_hot(labels, classes)
    W = np.zeros((len(classes), X.shape[1]))
    b = np.zeros(len(classes))
    history = [loss_value(W, b, Xs, Y, hyper.l2)]
    lr = hyper.learning_rate
    for _ in range(hyper.epochs):
        grad_w, grad_b = loss_gradient(W, b, Xs, Y, 0.0)
        # L2 applied as its exact shrinkage (proximal) step: equivalent descent
        # on the same objective, but stable for arbitrarily large lambda
        W = (W - lr * grad_w) / (1.0 + lr * hyper.l2)
        b = b - lr * grad_b
        history.append(loss_value(W, b, Xs, Y, hyper.l2))
    return Model(
        classes=classes, weights=W, bias=b, mean=mean, scale=scale,
        hyper=hyper, loss_history=history,
    )


def predict(model: Model, X) -> list[Polarity]:
    Xs = model.standardize(np.atleast_2d(X))
    logits = Xs @ model.weights.T + model.bias
    return [model.classes[i] for i in logits.argmax(axis=1)]


def save_model(model: Model, path: str):
    payload = {
        "layout_version": LAYOUT_VERSION,
        "classes": [c.value for c in model.classes],
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
        "mean": model.mean.tolist(),
        "scale": model.scale.tolist(),
        "hyper": {
            "learning_rate": model.hyper.learning_rate,
            "l2": model.hyper.l2,
            "epochs": model.hyper.epochs,
            "seed": model.hyper.seed,
        },
        "final_loss": model.loss_history[-1] if model.loss_history else None,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_model(path: str) -> Model:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("layout_version") != LAYOUT_VERSION:
        raise PipelineError(
            f"model layout version {payload.get('layout_version')} != {LAYOUT_VERSION}"
        )
    hyper = Hyperparams(**payload["hyper"])
    return Model(
        classes=[Polarity(c) for c in payload["classes"]],
        weights=np.array(payload["weights"], dtype=np.float64),
        bias=np.array(payload["bias"], dtype=np.float64),
        mean=np.array(payload["mean"], dtype=np.float64),
        scale=np.array(payload["scale"], dtype=np.float64),
        hyper=hyper,
    )


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class Metrics:
    level: str
    mode: str  # 3class | binary
    accuracy: float
    per_class: dict[str, dict[str, float]]
    confusion: list[list[int]]
    classes: list[str]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "mode": self.mode,
            "accuracy": self.accuracy,
            "per_class": self.per_class,
            "confusion": self.confusion,
        }


def score_predictions(gold, predicted, classes, level: str, mode: str) -> Metrics:
    index = {c: i for i, c in enumerate(classes)}
    n = len(classes)
    confusion = [[0] * n for _ in range(n)]
    for g, p in zip(gold, predicted):
        confusion[index[g]][index[p]] += 1
    correct = sum(confusion[i][i] for i in range(n))
    total = len(gold)
    per_class = {}
    for i, c in enumerate(classes):
        tp = confusion[i][i]
        support = sum(confusion[i])
        predicted_c = sum(confusion[r][i] for r in range(n))
        precision = tp / predicted_c if predicted_c else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[c.value] = {
            "precision": precision, "recall": recall, "f1": f1, "support": support,
        }
    return Metrics(
        level=level,
        mode=mode,
        accuracy=correct / total if total else 0.0,
        per_class=per_class,
        confusion=confusion,
        classes=[c.value for c in classes],
    )


def evaluate(
    model: Model,
    corpus: Corpus,
    ctx: FeatureContext,
    level: str = "sentence",
    decode: str = "gold-prev",
    binary: bool = False,
) -> Metrics:
    """Accuracy, per-class P/R/F1, and the confusion matrix on a corpus.

    ``decode='greedy-prev'`` feeds each sentence's predicted label into the
    next sentence's previous-polarity feature, left to right per document.
    """
    if decode not in ("gold-prev", "greedy-prev"):
        raise ValueError(f"unknown decode {decode!r}")
    mode = "binary" if binary else "3class"
    gold: list[Polarity] = []
    predicted: list[Polarity] = []
    if level == "document":
        docs = [d for d in corpus if not binary or d.label != Polarity.NEU]
        if docs:
            X = np.stack([document_features(ctx, d) for d in docs])
            predicted = predict(model, X)
            gold = [d.label for d in docs]
    elif level == "sentence":
        for doc in corpus:
            if decode == "greedy-prev":
                doc_preds: list[Polarity] = []
                for i in range(len(doc.sentences)):
                    vec = sentence_features(ctx, doc, i, "predicted", doc_preds)
                    doc_preds.append(predict(model, vec)[0])
            else:
                X = np.stack(
                    [sentence_features(ctx, doc, i) for i in range(len(doc.sentences))]
                )
                doc_preds = predict(model, X)
            for sent, pred in zip(doc.sentences, doc_preds):
                if binary and sent.label == Polarity.NEU:
                    continue
                gold.append(sent.label)
                predicted.append(pred)
    else:
        raise ValueError(f"unknown level {level!r}")
    return score_predictions(gold, predicted, model.classes, level, mode)


def stratified_split(labels, test_frac: float = 0.2, seed: int = 42):
    """Deterministic stratified (train, test) index split."""
    rng = random.Random(seed)
    by_class: dict = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)
    train_idx, test_idx = [], []
    for lab in sorted(by_class, key=lambda p: p.value):
        idxs = by_class[lab]
        rng.shuffle(idxs)
        n_test = int(round(len(idxs) * test_frac))
        n_test = min(n_test, len(idxs) - 1)  # keep at least one in train
        test_idx.extend(idxs[:n_test])
        train_idx.extend(idxs[n_test:])
    return sorted(train_idx), sorted(test_idx)


# ---------------------------------------------------------------------------
# report emission

REPORT_FILES = ("stats", "transitions", "emotions", "domains", "metrics")


def emit_report(
    ctx: FeatureContext,
    corpus: Corpus,
    out_dir: str,
    only: set[str] | None = None,
    alpha: float = 0.0,
    group_by: str = "domain",
    level: str = "document",
    test_frac: float = 0.2,
    hyper: Hyperparams | None = None,
    binary: bool = False,
    histogram_bins: int | None = None,
    jobs: int = 1,
) -> dict[str, str]:
    """Write the requested report files; returns {report: path}."""
    wanted = set(REPORT_FILES) if only is None else set(only)
    unknown = wanted - set(REPORT_FILES)
    if unknown:
        raise PipelineError(f"unknown report(s): {sorted(unknown)}")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise PipelineError(f"cannot create output directory {out_dir}: {exc}") from exc
    if not os.access(out_dir, os.W_OK):
        raise PipelineError(f"output directory not writable: {out_dir}")

    written: dict[str, str] = {}

    def emit(name: str, filename: str, text: str):
        path = os.path.join(out_dir, filename)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        written[name] = path

    if "stats" in wanted:
        emit("stats", "stats.csv", corpus_stats(corpus).to_csv())
    if "transitions" in wanted:
        matrix = transition.estimate_transitions(corpus, "joint", alpha)
        findings = transition.coherence_report(matrix)
        payload = transition.transition_report(matrix, findings)
        emit("transitions", "transitions.json", json.dumps(payload, indent=2) + "\n")
    if "emotions" in wanted:
        emit(
            "emotions",
            "emotions.csv",
            emotion.emotion_distribution_report(
                corpus, ctx.db, ctx.seedsets, level, ctx.config.measure,
                ctx.stopwords, ctx.config.use_wsd_sense, histogram_bins,
            ),
        )
    if "domains" in wanted:
        dist = lexdomain.corpus_domain_distribution(corpus, group_by)
        emit("domains", "domains.csv", lexdomain.distribution_csv(dist))
    if "metrics" in wanted:
        hyper = hyper or Hyperparams()
        ids, labels, X = corpus_feature_matrix(ctx, corpus, level, jobs=jobs)
        keep = list(range(len(labels)))
        if binary:
            keep = [i for i in keep if labels[i] != Polarity.NEU]
        labels_kept = [labels[i] for i in keep]
        train_idx, test_idx = stratified_split(labels_kept, test_frac, hyper.seed)
        train_rows = [keep[i] for i in train_idx]
        test_rows = [keep[i] for i in test_idx]
        model = train(X[train_rows], [labels[i] for i in train_rows], hyper)
        gold = [labels[i] for i in test_rows]
        preds = predict(model, X[test_rows]) if test_rows else []
        metrics = score_predictions(
            gold, preds, model.classes, level, "binary" if binary else "3class"
        )
        emit("metrics", "metrics.json", json.dumps(metrics.to_dict(), indent=2) + "\n")
    return written
