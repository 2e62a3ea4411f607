"""Command-line surface: batch corpus analyses with file-based outputs.

Every subcommand reads inputs from flags, writes machine-readable results
under ``--out DIR``, and keeps diagnostics on stderr.  Exit codes: 0 success,
1 usage error, 2 data error.  The ``OPINEX_WORDNET`` environment variable
supplies the default WordNet directory; without it the bundled fixture
database is used.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import emotion, lexdomain, lexicons, metachar, pipeline, transition, wsd
from .corpus import (
    DATA_DIR,
    CorpusError,
    Polarity,
    corpus_stats,
    load_corpus,
    load_stopwords,
)
from .emotion import SeedConfigError
from .lexicons import EnsemblePolicy, LexiconError
from .metachar import load_cue_table, load_emoticon_table
from .pipeline import FeatureConfig, FeatureContext, Hyperparams, PipelineError
from .transition import TransitionError
from .wordnet import MEASURES, WordNetError, load_wordnet

USAGE_EXIT = 1
DATA_EXIT = 2

_DATA_ERRORS = (
    CorpusError,
    WordNetError,
    LexiconError,
    SeedConfigError,
    TransitionError,
    PipelineError,
    OSError,
    ValueError,
    json.JSONDecodeError,
)

DEFAULT_LEXICON_SPECS = (
    f"sentiwordnet=sentiwordnet:{os.path.join(DATA_DIR, 'lexicons', 'sentiwordnet.txt')}",
    f"liu=wordlist-positive:{os.path.join(DATA_DIR, 'lexicons', 'positive-words.txt')}",
    f"liu=wordlist-negative:{os.path.join(DATA_DIR, 'lexicons', 'negative-words.txt')}",
    f"mpqa=mpqa:{os.path.join(DATA_DIR, 'lexicons', 'mpqa.tff')}",
    f"extra=tsv:{os.path.join(DATA_DIR, 'lexicons', 'extra.tsv')}",
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1 (2 is for data errors)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def default_wordnet_dir() -> str:
    return os.environ.get("OPINEX_WORDNET") or os.path.join(DATA_DIR, "wordnet")


def bundled_corpus_path() -> str:
    return os.path.join(DATA_DIR, "corpus.jsonl")


def _add_common(p: _Parser, corpus: bool = True):
    if corpus:
        p.add_argument("--corpus", required=True, help="corpus JSONL file")
    p.add_argument("--out", default="out", help="output directory (default: %(default)s)")
    p.add_argument("--seed", type=int, default=42, help="random seed (default: %(default)s)")
    p.add_argument("--jobs", type=int, default=1,
                   help="per-document parallelism (default: %(default)s)")


def _add_wordnet(p: _Parser):
    p.add_argument("--wordnet", default=None,
                   help="WordNet directory (default: $OPINEX_WORDNET, else bundled fixture)")
    p.add_argument("--measure", choices=MEASURES, default="wup",
                   help="similarity measure (default: %(default)s)")
    p.add_argument("--seeds", default=os.path.join(DATA_DIR, "seedsets.json"),
                   help="seed configuration JSON (default: %(default)s)")
    p.add_argument("--use-wsd-sense", action="store_true",
                   help="restrict emotion similarity to the WSD-chosen sense (default: all senses)")


def _add_lexicons(p: _Parser):
    p.add_argument("--lexicon", action="append", default=None, metavar="NAME=FORMAT:PATH",
                   help="lexicon spec; FORMAT one of sentiwordnet, wordlist-positive, "
                        "wordlist-negative, mpqa, tsv; repeatable (default: bundled set)")
    p.add_argument("--tau", type=float, default=0.05,
                   help="neutral band half-width (default: %(default)s)")
    p.add_argument("--strategy", choices=("first-non-neutral", "majority"),
                   default="first-non-neutral",
                   help="ensemble strategy (default: %(default)s)")
    p.add_argument("--allow-gap", type=int, default=0, choices=(0, 1),
                   help="stopwords allowed inside a multiword match (default: %(default)s)")


def _add_metachar(p: _Parser):
    p.add_argument("--cues", default=os.path.join(DATA_DIR, "cues.json"),
                   help="cue table JSON (default: %(default)s)")
    p.add_argument("--emoticons", default=os.path.join(DATA_DIR, "emoticons.json"),
                   help="emoticon table JSON (default: %(default)s)")
    p.add_argument("--rating-neg-max", type=float, default=0.4,
                   help="x/y at or below this is NEG (default: %(default)s)")
    p.add_argument("--rating-pos-min", type=float, default=0.7,
                   help="x/y at or above this is POS (default: %(default)s)")
    p.add_argument("--denominators", default="5,10,100",
                   help="allowed rating denominators (default: %(default)s)")


def _add_train(p: _Parser):
    p.add_argument("--learning-rate", type=float, default=0.1,
                   help="gradient descent step size (default: %(default)s)")
    p.add_argument("--l2", type=float, default=1e-4,
                   help="L2 regularization strength (default: %(default)s)")
    p.add_argument("--epochs", type=int, default=500,
                   help="full-batch epochs (default: %(default)s)")
    p.add_argument("--level", choices=("sentence", "document"), default="document",
                   help="item granularity (default: %(default)s)")
    p.add_argument("--binary", action="store_true",
                   help="drop NEU items and classify POS vs NEG")
    p.add_argument("--disable", action="append", default=[], metavar="GROUP",
                   choices=[g for g, _, _ in pipeline.FEATURE_GROUPS],
                   help="disable a feature group (repeatable); one of "
                        + ", ".join(g for g, _, _ in pipeline.FEATURE_GROUPS))


def build_parser() -> _Parser:
    parser = _Parser(prog="opinex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("stats", help="document/sentence distribution table")
    _add_common(p)

    p = sub.add_parser("transitions", help="inter-sentence polarity transition matrix")
    _add_common(p)
    p.add_argument("--mode", choices=("joint", "conditional"), default="joint",
                   help="probability normalization (default: %(default)s)")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="additive smoothing (default: %(default)s)")

    p = sub.add_parser("emotions", help="six-emotion distribution data")
    _add_common(p)
    _add_wordnet(p)
    p.add_argument("--level", choices=("sentence", "document"), default="document",
                   help="item granularity (default: %(default)s)")
    p.add_argument("--histogram", type=int, default=None, metavar="BINS",
                   help="emit binned counts with this many bins over [0,1] "
                        "instead of raw scores (default: raw scores)")

    p = sub.add_parser("domains", help="lexicographer-domain distribution data")
    _add_common(p)
    _add_wordnet(p)
    p.add_argument("--group-by", choices=lexdomain.GROUP_MODES, default="domain",
                   help="grouping key (default: %(default)s)")

    p = sub.add_parser("lexicon", help="ensemble lookup or per-sentence lexicon scores")
    _add_common(p)
    _add_wordnet(p)
    _add_lexicons(p)
    p.add_argument("--lookup", default=None, metavar="LEMMA",
                   help="resolve one lemma instead of scoring the corpus")
    p.add_argument("--pos", default="any",
                   choices=("noun", "verb", "adj", "adv", "any"),
                   help="pos for --lookup (default: %(default)s)")

    p = sub.add_parser("metachar", help="meta-character extraction dump")
    _add_common(p)
    _add_metachar(p)

    p = sub.add_parser("extract", help="feature matrix CSV")
    _add_common(p)
    _add_wordnet(p)
    _add_lexicons(p)
    _add_metachar(p)
    _add_train(p)

    p = sub.add_parser("train", help="train the linear classifier")
    _add_common(p)
    _add_wordnet(p)
    _add_lexicons(p)
    _add_metachar(p)
    _add_train(p)
    p.add_argument("--model", default=None,
                   help="model output path (default: <out>/model.json)")
    p.add_argument("--test-frac", type=float, default=0.2,
                   help="held-out fraction for the split (default: %(default)s)")

    p = sub.add_parser("eval", help="evaluate a trained model")
    _add_common(p)
    _add_wordnet(p)
    _add_lexicons(p)
    _add_metachar(p)
    _add_train(p)
    p.add_argument("--model", required=True, help="model JSON from `opinex train`")
    p.add_argument("--decode", choices=("gold-prev", "greedy-prev"), default="gold-prev",
                   help="previous-polarity source at inference (default: %(default)s)")

    p = sub.add_parser("report", help="all reports: stats, transitions, emotions, "
                                      "domains, metrics")
    _add_common(p)
    _add_wordnet(p)
    _add_lexicons(p)
    _add_metachar(p)
    _add_train(p)
    p.add_argument("--only", action="append", default=None,
                   choices=pipeline.REPORT_FILES, metavar="REPORT",
                   help="emit only this report (repeatable); one of "
                        + ", ".join(pipeline.REPORT_FILES))
    p.add_argument("--alpha", type=float, default=0.0,
                   help="transition smoothing (default: %(default)s)")
    p.add_argument("--group-by", choices=lexdomain.GROUP_MODES, default="domain",
                   help="domain report grouping (default: %(default)s)")
    p.add_argument("--histogram", type=int, default=None, metavar="BINS",
                   help="bin the emotion report (default: raw scores)")
    p.add_argument("--test-frac", type=float, default=0.2,
                   help="held-out fraction for metrics (default: %(default)s)")

    return parser


def parse_lexicon_specs(specs) -> tuple[dict[str, lexicons.Lexicon], tuple[str, ...]]:
    """Load ``NAME=FORMAT:PATH`` specs; same NAME twice merges the files."""
    loaded: dict[str, list[lexicons.Lexicon]] = {}
    order: list[str] = []
    for spec in specs:
        name, eq, rest = spec.partition("=")
        fmt, colon, path = rest.partition(":")
        if not eq or not colon:
            raise LexiconError(f"bad lexicon spec {spec!r} (expected NAME=FORMAT:PATH)")
        role = None
        if fmt.startswith("wordlist-"):
            fmt, role = "wordlist", fmt.split("-", 1)[1]
        if not os.path.exists(path):
            raise LexiconError(f"lexicon file not found: {path}")
        lex = lexicons.load_lexicon(path, fmt, name=name, role=role)
        if name not in loaded:
            order.append(name)
        loaded.setdefault(name, []).append(lex)
    merged = {
        name: parts[0] if len(parts) == 1 else lexicons.merge_lexicons(name, parts)
        for name, parts in loaded.items()
    }
    return merged, tuple(order)


def _parse_denominators(raw: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in raw.split(",") if v.strip())
    except ValueError as exc:
        raise ValueError(f"bad --denominators {raw!r}: {exc}") from exc
    if not values or any(v <= 0 for v in values):
        raise ValueError(f"--denominators must be positive integers, got {raw!r}")
    return values


def _feature_config(args) -> FeatureConfig:
    cfg = FeatureConfig(
        measure=getattr(args, "measure", "wup"),
        use_wsd_sense=getattr(args, "use_wsd_sense", False),
        allow_gap=getattr(args, "allow_gap", 0),
        denominators=_parse_denominators(getattr(args, "denominators", "5,10,100")),
        rating_neg_max=getattr(args, "rating_neg_max", 0.4),
        rating_pos_min=getattr(args, "rating_pos_min", 0.7),
    )
    return cfg.disable(getattr(args, "disable", []))


def _load_context(args, db) -> FeatureContext:
    seedsets = emotion.emotion_seedsets(emotion.load_seedsets(db, args.seeds))
    lex, default_order = parse_lexicon_specs(args.lexicon or DEFAULT_LEXICON_SPECS)
    policy = EnsemblePolicy(order=default_order, tau=args.tau, strategy=args.strategy)
    return FeatureContext(
        db=db,
        seedsets=seedsets,
        lexicons=lex,
        policy=policy,
        stopwords=load_stopwords(),
        cue_table=load_cue_table(getattr(args, "cues", None)),
        emoticon_table=load_emoticon_table(getattr(args, "emoticons", None)),
        config=_feature_config(args),
    )


def _write(out_dir: str, filename: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, filename)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _write_json(out_dir: str, filename: str, payload) -> str:
    return _write(out_dir, filename, json.dumps(payload, indent=2) + "\n")


def _annotated_corpus(args, db):
    stopwords = load_stopwords()
    docs = load_corpus(args.corpus, db)
    return wsd.annotate_corpus(db, docs, stopwords, jobs=args.jobs)


def _hyper(args) -> Hyperparams:
    return Hyperparams(
        learning_rate=args.learning_rate, l2=args.l2, epochs=args.epochs, seed=args.seed
    )


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    if not args.command:
        parser.print_help(sys.stderr)
        return USAGE_EXIT
    try:
        return _dispatch(args)
    except _DATA_ERRORS as exc:
        print(f"opinex {args.command}: {exc}", file=sys.stderr)
        return DATA_EXIT


def _dispatch(args) -> int:
    cmd = args.command

    if cmd == "stats":
        docs = load_corpus(args.corpus)
        path = _write(args.out, "stats.csv", corpus_stats(docs).to_csv())
        print(f"wrote {path}", file=sys.stderr)
        return 0

    if cmd == "transitions":
        docs = load_corpus(args.corpus)
        matrix = transition.estimate_transitions(docs, args.mode, args.alpha)
        findings = transition.coherence_report(matrix) if args.mode == "joint" else None
        path = _write_json(args.out, "transitions.json",
                           transition.transition_report(matrix, findings))
        print(f"wrote {path}", file=sys.stderr)
        return 0

    if cmd == "metachar":
        docs = load_corpus(args.corpus)
        cue_table = load_cue_table(args.cues)
        emo_table = load_emoticon_table(args.emoticons)
        denominators = _parse_denominators(args.denominators)
        dump = []
        for doc in docs:
            for sent in doc.sentences:
                ratings = metachar.extract_ratings(
                    sent.text, denominators, args.rating_neg_max, args.rating_pos_min
                )
                segments = metachar.extract_labeled_segments(sent.text, cue_table)
                profile = metachar.punctuation_profile(sent.text, emo_table)
                dump.append({
                    "id": f"{doc.id}:{sent.index}",
                    "ratings": [
                        {"x": r.x, "y": r.y, "polarity": r.polarity.value,
                         "span": list(r.span)} for r in ratings
                    ],
                    "segments": [
                        {"cue": s.cue, "prior": s.prior.value, "body": s.body}
                        for s in segments
                    ],
                    "punctuation": {
                        "question": profile.question,
                        "exclamation": profile.exclamation,
                        "colon": profile.colon,
                        "slash": profile.slash,
                        "emoticon_count": profile.emoticon_count,
                        "emoticon_score": profile.emoticon_score,
                    },
                })
        path = _write_json(args.out, "metachar.json", dump)
        print(f"wrote {path}", file=sys.stderr)
        return 0

    wordnet_dir = getattr(args, "wordnet", None) or default_wordnet_dir()
    db = load_wordnet(wordnet_dir)

    if cmd == "emotions":
        stopwords = load_stopwords()
        docs = load_corpus(args.corpus, db)
        if args.use_wsd_sense:
            docs = wsd.annotate_corpus(db, docs, stopwords, jobs=args.jobs)
        seedsets = emotion.emotion_seedsets(emotion.load_seedsets(db, args.seeds))
        csv_text = emotion.emotion_distribution_report(
            docs, db, seedsets, args.level, args.measure, stopwords,
            args.use_wsd_sense, args.histogram,
        )
        path = _write(args.out, "emotions.csv", csv_text)
        print(f"wrote {path}", file=sys.stderr)
        return 0

    if cmd == "domains":
        docs = _annotated_corpus(args, db)
        dist = lexdomain.corpus_domain_distribution(docs, args.group_by)
        path = _write(args.out, "domains.csv", lexdomain.distribution_csv(dist))
        print(f"wrote {path}", file=sys.stderr)
        return 0

    if cmd == "lexicon":
        lex, order = parse_lexicon_specs(args.lexicon or DEFAULT_LEXICON_SPECS)
        policy = EnsemblePolicy(order=order, tau=args.tau, strategy=args.strategy)
        if args.lookup:
            lemma = lexicons.normalize_lemma(args.lookup)
            verdict, score, provenance = lexicons.ensemble_polarity(
                lemma, args.pos, lex, policy
            )
            payload = {
                "lemma": lemma,
                "pos": args.pos,
                "polarity": verdict.value,
                "score": score,
                "provenance": provenance,
                "lexicons": {
                    name: lexicons.word_polarity(lex[name], lemma, args.pos)
                    for name in order
                },
            }
        else:
            docs = load_corpus(args.corpus, db)
            stopwords = load_stopwords()
            payload = []
            for doc in docs:
                for sent in doc.sentences:
                    s = lexicons.sentence_lexicon_score(
                        sent, lex, policy, args.allow_gap, stopwords
                    )
                    payload.append({
                        "id": f"{doc.id}:{sent.index}",
                        "sum_pos": s.sum_pos, "sum_neg": s.sum_neg,
                        "net": s.net, "hits": s.hit_count,
                    })
        path = _write_json(args.out, "lexicon.json", payload)
        print(f"wrote {path}", file=sys.stderr)
        return 0

    ctx = _load_context(args, db)
    docs = _annotated_corpus(args, db)

    if cmd == "extract":
        ids, labels, X = pipeline.corpus_feature_matrix(ctx, docs, args.level, jobs=args.jobs)
        if args.binary:
            keep = [i for i, lab in enumerate(labels) if lab != Polarity.NEU]
            ids = [ids[i] for i in keep]
            labels = [labels[i] for i in keep]
            X = X[keep]
        path = _write(args.out, "features.csv", pipeline.features_csv(ids, labels, X))
        print(f"wrote {path}", file=sys.stderr)
        return 0

    if cmd == "train":
        ids, labels, X = pipeline.corpus_feature_matrix(ctx, docs, args.level, jobs=args.jobs)
        keep = list(range(len(labels)))
        if args.binary:
            keep = [i for i in keep if labels[i] != Polarity.NEU]
        labels_kept = [labels[i] for i in keep]
        train_idx, test_idx = pipeline.stratified_split(labels_kept, args.test_frac, args.seed)
        rows = [keep[i] for i in train_idx]
        model = pipeline.train(X[rows], [labels[i] for i in rows], _hyper(args))
        model_path = args.model or os.path.join(args.out, "model.json")
        os.makedirs(os.path.dirname(model_path) or ".", exist_ok=True)
        pipeline.save_model(model, model_path)
        print(f"wrote {model_path} (final loss {model.loss_history[-1]:.6f})",
              file=sys.stderr)
        return 0

    if cmd == "eval":
        model = pipeline.load_model(args.model)
        metrics = pipeline.evaluate(model, docs, ctx, args.level, args.decode, args.binary)
        path = _write_json(args.out, "metrics.json", metrics.to_dict())
        print(f"wrote {path} (accuracy {metrics.accuracy:.4f})", file=sys.stderr)
        return 0

    if cmd == "report":
        written = pipeline.emit_report(
            ctx, docs, args.out,
            only=set(args.only) if args.only else None,
            alpha=args.alpha,
            group_by=args.group_by,
            level=args.level,
            test_frac=args.test_frac,
            hyper=_hyper(args),
            binary=args.binary,
            histogram_bins=args.histogram,
            jobs=args.jobs,
        )
        for name in sorted(written):
            print(f"wrote {written[name]}", file=sys.stderr)
        return 0

    raise AssertionError(f"unhandled command {cmd}")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
