"""WordNet database (WNDB 3.0 format) loading and taxonomy-based word similarity.

Parses ``data.{noun,verb,adj,adv}`` and ``index.{noun,verb,adj,adv}`` into an
immutable synset graph.  Only hypernym (``@``) and instance-hypernym (``@i``)
pointers are kept; everything else is parsed and dropped.  Optional
``<pos>.exc`` files feed the morphological analyzer used for lemmatization.

Similarity measures (``path``, ``wup``, ``lch``) all return scores in [0, 1].
Depth is counted along the LONGEST hypernym path to a root, with roots at
depth 1, which makes Wu-Palmer deterministic on multi-parent graphs.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field


class WordNetError(Exception):
    """Raised for missing/malformed database files or a cyclic hypernym graph."""


# The 45 lexicographer files, indexed by file number.
LEXFILES = (
    ("adj.all", "all adjective cluster"),
    ("adj.pert", "relational adjectives (pertainyms)"),
    ("adv.all", "all adverbs"),
    ("noun.Tops", "unique beginner for nouns"),
    ("noun.act", "nouns denoting acts or actions"),
    ("noun.animal", "nouns denoting animals"),
    ("noun.artifact", "nouns denoting man-made objects"),
    ("noun.attribute", "nouns denoting attributes of people and objects"),
    ("noun.body", "nouns denoting body parts"),
    ("noun.cognition", "nouns denoting cognitive processes and contents"),
    ("noun.communication", "nouns denoting communicative processes and contents"),
    ("noun.event", "nouns denoting natural events"),
    ("noun.feeling", "nouns denoting feelings and emotions"),
    ("noun.food", "nouns denoting foods and drinks"),
    ("noun.group", "nouns denoting groupings of people or objects"),
    ("noun.location", "nouns denoting spatial position"),
    ("noun.motive", "nouns denoting goals"),
    ("noun.object", "nouns denoting natural objects (not man-made)"),
    ("noun.person", "nouns denoting people"),
    ("noun.phenomenon", "nouns denoting natural phenomena"),
    ("noun.plant", "nouns denoting plants"),
    ("noun.possession", "nouns denoting possession and transfer of possession"),
    ("noun.process", "nouns denoting natural processes"),
    ("noun.quantity", "nouns denoting quantities and units of measure"),
    ("noun.relation", "nouns denoting relations between people or things or ideas"),
    ("noun.shape", "nouns denoting two and three dimensional shapes"),
    ("noun.state", "nouns denoting stable states of affairs"),
    ("noun.substance", "nouns denoting substances"),
    ("noun.time", "nouns denoting time and temporal relations"),
    ("verb.body", "verbs of grooming, dressing and bodily care"),
    ("verb.change", "verbs of size, temperature change, intensifying, etc."),
    ("verb.cognition", "verbs of thinking, judging, analysing, doubting"),
    ("verb.communication", "verbs of telling, asking, ordering, singing"),
    ("verb.competition", "verbs of fighting, athletic activities"),
    ("verb.consumption", "verbs of eating and drinking"),
    ("verb.contact", "verbs of touching, hitting, tying, digging"),
    ("verb.creation", "verbs of sewing, baking, painting, performing"),
    ("verb.emotion", "verbs of feeling"),
    ("verb.motion", "verbs of walking, flying, swimming"),
    ("verb.perception", "verbs of seeing, hearing, feeling"),
    ("verb.possession", "verbs of buying, selling, owning"),
    ("verb.social", "verbs of political and social activities and events"),
    ("verb.stative", "verbs of being, having, spatial relations"),
    ("verb.weather", "verbs of raining, snowing, thawing, thundering"),
    ("adj.ppl", "participial adjectives"),
)

LEXFILE_NAMES = tuple(name for name, _ in LEXFILES)
LEXFILE_BY_NAME = {name: no for no, (name, _) in enumerate(LEXFILES)}

POS_TAGS = ("noun", "verb", "adj", "adv")

_SS_TYPE_POS = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}
_INDEX_POS = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
_ADJ_MARKERS = ("(a)", "(p)", "(ip)")

SynsetId = tuple[str, str]  # (pos, 8-digit offset string)


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    pos: str
    lexfile: int
    words: tuple[str, ...]
    gloss: str
    hypernyms: tuple[SynsetId, ...]

    @property
    def offset(self) -> str:
        return self.id[1]

    @property
    def lexfile_name(self) -> str:
        return LEXFILE_NAMES[self.lexfile]

    def __repr__(self):
        return f"Synset({self.pos}/{self.offset}: {'/'.join(self.words)})"


@dataclass
class WordNetDb:
    """Immutable after :func:`load_wordnet`; safe for concurrent reads."""

    synsets: dict[SynsetId, Synset]
    index: dict[tuple[str, str], tuple[SynsetId, ...]]  # (lemma, pos) -> rank order
    max_depth: dict[str, int]
    exceptions: dict[str, dict[str, tuple[str, ...]]] = field(default_factory=dict)
    depths: dict[SynsetId, int] = field(default_factory=dict)


def _parse_data_line(line: str, pos: str, path: str, lineno: int) -> Synset:
    head, sep, gloss = line.rstrip("\n").partition(" | ")
    if not sep:
        raise WordNetError(f"{path}:{lineno}: missing ' | ' gloss separator")
    fields = head.split()
    try:
        offset = fields[0]
        lexfile = int(fields[1], 10)
        ss_type = fields[2]
        w_cnt = int(fields[3], 16)
        words = []
        for i in range(w_cnt):
            word = fields[4 + 2 * i]
            for marker in _ADJ_MARKERS:
                if word.endswith(marker):
                    word = word[: -len(marker)]
            words.append(word)
        p_base = 4 + 2 * w_cnt
        p_cnt = int(fields[p_base], 10)
        hypernyms = []
        for i in range(p_cnt):
            sym, tgt, tgt_pos = fields[p_base + 1 + 4 * i : p_base + 4 + 4 * i]
            if sym in ("@", "@i"):
                hypernyms.append((_SS_TYPE_POS[tgt_pos], tgt))
    except (IndexError, ValueError, KeyError) as exc:
        raise WordNetError(f"{path}:{lineno}: malformed data line ({exc})") from exc
    if ss_type not in _SS_TYPE_POS or _SS_TYPE_POS[ss_type] != pos:
        raise WordNetError(f"{path}:{lineno}: ss_type {ss_type!r} does not belong in data.{pos}")
    if not 0 <= lexfile < len(LEXFILES):
        raise WordNetError(f"{path}:{lineno}: lex_filenum {lexfile} outside 0-44")
    if not words:
        raise WordNetError(f"{path}:{lineno}: synset has no words")
    return Synset(
        id=(pos, offset),
        pos=pos,
        lexfile=lexfile,
        words=tuple(words),
        gloss=gloss.strip(),
        hypernyms=tuple(hypernyms),
    )


def _parse_index_line(line: str, pos: str, path: str, lineno: int):
    fields = line.split()
    try:
        lemma = fields[0]
        pos_char = fields[1]
        synset_cnt = int(fields[2], 10)
        p_cnt = int(fields[3], 10)
        offsets = fields[4 + p_cnt + 2 :]
    except (IndexError, ValueError) as exc:
        raise WordNetError(f"{path}:{lineno}: malformed index line ({exc})") from exc
    if _INDEX_POS.get(pos_char) != pos:
        raise WordNetError(f"{path}:{lineno}: pos {pos_char!r} does not belong in index.{pos}")
    if len(offsets) != synset_cnt:
        raise WordNetError(
            f"{path}:{lineno}: synset_cnt {synset_cnt} but {len(offsets)} offsets listed"
        )
    return lemma, tuple((pos, off) for off in offsets)


def _check_acyclic_and_depths(synsets: dict[SynsetId, Synset]) -> dict[SynsetId, int]:
    """Verify the hypernym graph is a DAG and compute longest-path depths.

    depth(root) = 1; depth(s) = 1 + max(depth(h) for h in hypernyms).
    Iterative DFS so a full-size WordNet cannot hit the recursion limit.
    """
    depths: dict[SynsetId, int] = {}
    state: dict[SynsetId, int] = {}  # 1 = on stack, 2 = done
    for start in synsets:
        if state.get(start) == 2:
            continue
        stack = [(start, iter(synsets[start].hypernyms))]
        state[start] = 1
        while stack:
            sid, it = stack[-1]
            advanced = False
            for hid in it:
                if hid not in synsets:
                    raise WordNetError(f"dangling hypernym pointer {hid} from {sid}")
                st = state.get(hid)
                if st == 1:
                    raise WordNetError(f"hypernym cycle detected through {hid}")
                if st != 2:
                    state[hid] = 1
                    stack.append((hid, iter(synsets[hid].hypernyms)))
                    advanced = True
                    break
            if not advanced:
                hs = synsets[sid].hypernyms
                depths[sid] = 1 + max((depths[h] for h in hs), default=0)
                state[sid] = 2
                stack.pop()
    return depths


def _load_exceptions(dirpath: str, pos: str) -> dict[str, tuple[str, ...]]:
    path = os.path.join(dirpath, f"{pos}.exc")
    table: dict[str, tuple[str, ...]] = {}
    if not os.path.exists(path):
        return table
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) >= 2:
                table[parts[0]] = tuple(parts[1:])
    return table


def load_wordnet(dirpath: str) -> WordNetDb:
    """Load a WNDB-format directory into an immutable :class:`WordNetDb`.

    Requires ``index.<pos>`` and ``data.<pos>`` for all four parts of speech.
    Lines starting with a space (the license header) are skipped.
    """
    synsets: dict[SynsetId, Synset] = {}
    index: dict[tuple[str, str], tuple[SynsetId, ...]] = {}
    for pos in POS_TAGS:
        for kind in ("data", "index"):
            path = os.path.join(dirpath, f"{kind}.{pos}")
            if not os.path.exists(path):
                raise WordNetError(f"missing WordNet file: {path}")
    for pos in POS_TAGS:
        path = os.path.join(dirpath, f"data.{pos}")
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if line.startswith(" ") or not line.strip():
                    continue
                syn = _parse_data_line(line, pos, path, lineno)
                synsets[syn.id] = syn
    for pos in POS_TAGS:
        path = os.path.join(dirpath, f"index.{pos}")
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if line.startswith(" ") or not line.strip():
                    continue
                lemma, ids = _parse_index_line(line, pos, path, lineno)
                for sid in ids:
                    if sid not in synsets:
                        raise WordNetError(f"{path}:{lineno}: index references unknown synset {sid}")
                index[(lemma, pos)] = ids

    depths = _check_acyclic_and_depths(synsets)
    max_depth = {pos: 0 for pos in POS_TAGS}
    for sid, d in depths.items():
        if d > max_depth[sid[0]]:
            max_depth[sid[0]] = d
    exceptions = {pos: _load_exceptions(dirpath, pos) for pos in POS_TAGS}
    return WordNetDb(synsets=synsets, index=index, max_depth=max_depth,
                     exceptions=exceptions, depths=depths)


def lookup(db: WordNetDb, lemma: str, pos: str) -> list[Synset]:
    """All synsets for (lemma, pos) in WordNet sense-rank order; [] if absent."""
    return [db.synsets[sid] for sid in db.index.get((lemma, pos), ())]


# Standard WordNet suffix-detachment rules, per part of speech.
_DETACHMENT_RULES = {
    "noun": (("s", ""), ("ses", "s"), ("ves", "f"), ("xes", "x"), ("zes", "z"),
             ("ches", "ch"), ("shes", "sh"), ("men", "man"), ("ies", "y")),
    "verb": (("s", ""), ("ies", "y"), ("es", "e"), ("es", ""), ("ed", "e"),
             ("ed", ""), ("ing", "e"), ("ing", "")),
    "adj": (("er", ""), ("est", ""), ("er", "e"), ("est", "e")),
    "adv": (),
}


def morphy(db: WordNetDb, form: str, pos: str) -> str | None:
    """Reduce ``form`` to a lemma present in the index for ``pos``, or None.

    Checks the exception list first, then iterates the detachment rules,
    keeping only candidates attested in the index.
    """
    def known(f: str) -> bool:
        return (f, pos) in db.index

    exc = db.exceptions.get(pos, {})
    if form in exc:
        for cand in (form, *exc[form]):
            if known(cand):
                return cand
        return None

    rules = _DETACHMENT_RULES[pos]

    def apply_rules(forms):
        out = []
        for f in forms:
            for old, new in rules:
                if f.endswith(old) and len(f) > len(old):
                    out.append(f[: -len(old)] + new)
        return out

    forms = apply_rules([form])
    for cand in (form, *forms):
        if known(cand):
            return cand
    while forms:
        forms = apply_rules(forms)
        for cand in forms:
            if known(cand):
                return cand
    return None


def _ancestor_distances(db: WordNetDb, syn: Synset) -> dict[SynsetId, int]:
    """Minimum hypernym-edge distance from ``syn`` to each ancestor (self = 0)."""
    dist = {syn.id: 0}
    frontier = [syn.id]
    while frontier:
        nxt = []
        for sid in frontier:
            d = dist[sid] + 1
            for hid in db.synsets[sid].hypernyms:
                if hid not in dist or d < dist[hid]:
                    dist[hid] = d
                    nxt.append(hid)
        frontier = nxt
    return dist


def lcs_depth(db: WordNetDb, a: Synset, b: Synset):
    """Deepest common hypernym of ``a`` and ``b`` (either synset may subsume the other).

    Returns ``(lcs, depth_a, depth_b, depth_lcs)`` with longest-path depths;
    ``lcs`` is None (depth 0) when the two synsets share no ancestor.
    """
    if a.pos != b.pos:
        raise ValueError(f"pos mismatch: {a.pos} vs {b.pos}")
    depth_a = db.depths[a.id]
    depth_b = db.depths[b.id]
    common = _ancestor_distances(db, a).keys() & _ancestor_distances(db, b).keys()
    if not common:
        return None, depth_a, depth_b, 0
    # Deterministic tie-break on the id so equal-depth ancestors pick stably.
    lcs_id = max(common, key=lambda sid: (db.depths[sid], sid))
    return db.synsets[lcs_id], depth_a, depth_b, db.depths[lcs_id]


def _shortest_path_edges(db: WordNetDb, a: Synset, b: Synset) -> int | None:
    """Shortest hypernym-path length in edges between a and b via a common ancestor."""
    da = _ancestor_distances(db, a)
    dbb = _ancestor_distances(db, b)
    best = None
    for sid, d1 in da.items():
        d2 = dbb.get(sid)
        if d2 is not None and (best is None or d1 + d2 < best):
            best = d1 + d2
    return best


MEASURES = ("path", "wup", "lch")


def similarity(db: WordNetDb, a: Synset, b: Synset, measure: str = "wup") -> float:
    """Taxonomy similarity of two same-pos synsets, in [0, 1].

    Adjectives and adverbs have no hypernym taxonomy: identical synsets
    score 1, everything else 0, under every measure.
    """
    if a.pos != b.pos:
        raise ValueError(f"pos mismatch: {a.pos} vs {b.pos}")
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r} (expected one of {MEASURES})")
    if a.pos in ("adj", "adv"):
        return 1.0 if a.id == b.id else 0.0

    if measure == "wup":
        lcs, depth_a, depth_b, depth_lcs = lcs_depth(db, a, b)
        if lcs is None:
            return 0.0
        return 2.0 * depth_lcs / (depth_a + depth_b)

    length = _shortest_path_edges(db, a, b)
    if length is None:
        return 0.0
    if measure == "path":
        return 1.0 / (1.0 + length)
    # lch, normalized to [0, 1]: -ln(L'/2D) / -ln(1/2D) with L' = max(1, L)
    two_d = 2.0 * db.max_depth[a.pos]
    l_eff = max(1, length)
    score = math.log(two_d / l_eff) / math.log(two_d)
    return min(1.0, max(0.0, score))
