"""CoNLL-U treebank reading, writing, vocabularies and subsampling.

Token lines carry ten tab-separated columns (ID, FORM, LEMMA, UPOS,
XPOS, FEATS, HEAD, DEPREL, DEPS, MISC); sentences are separated by
blank lines.  Only FORM, UPOS, HEAD and DEPREL are consumed.  Comment
lines, multiword-token ranges (id "1-2") and empty nodes (id "1.1")
are skipped.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError

log = logging.getLogger(__name__)

PAD, UNK, ROOT = "<pad>", "<unk>", "<root>"


@dataclass
class Sentence:
    """One annotated sentence; heads are 1-indexed token positions, 0 = root."""

    tokens: list[str]
    upos: list[str]
    heads: list[int]
    deprels: list[str]

    def __len__(self) -> int:
        return len(self.tokens)

    def validate(self) -> bool:
        """True when the gold heads form a tree over the tokens (acyclic, rooted)."""
        n = len(self.tokens)
        if not (len(self.upos) == len(self.heads) == len(self.deprels) == n):
            return False
        for i, h in enumerate(self.heads, start=1):
            if not 0 <= h <= n or h == i:
                return False
        # every token must reach the root without revisiting a node
        for i in range(1, n + 1):
            seen = set()
            j = i
            while j != 0:
                if j in seen:
                    return False
                seen.add(j)
                j = self.heads[j - 1]
        return True


Treebank = list[Sentence]


def read_conllu(path: str | Path) -> Treebank:
    """Parse a CoNLL-U file; sentences with cyclic gold heads are dropped."""
    path = Path(path)
    sentences: Treebank = []
    tokens: list[str] = []
    upos: list[str] = []
    heads: list[int] = []
    deprels: list[str] = []
    pending_line = 0
    dropped = 0

    def flush():
        nonlocal tokens, upos, heads, deprels, dropped
        if not tokens:
            return
        sent = Sentence(tokens, upos, heads, deprels)
        if sent.validate():
            sentences.append(sent)
        else:
            dropped += 1
            log.warning("%s:%d: gold heads do not form a tree; sentence dropped",
                        path, pending_line)
        tokens, upos, heads, deprels = [], [], [], []

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                flush()
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise DataError(f"{path}:{lineno}: expected 10 columns, got {len(cols)}")
            tid = cols[0]
            if "-" in tid or "." in tid:
                continue  # multiword range / empty node
            try:
                int(tid)
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad token id {tid!r}") from None
            try:
                head = int(cols[6])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-integer HEAD {cols[6]!r}") from None
            if not tokens:
                pending_line = lineno
            tokens.append(cols[1])
            upos.append(cols[3])
            heads.append(head)
            deprels.append(cols[7])
    flush()
    if dropped:
        log.warning("%s: dropped %d sentence(s) with invalid gold trees", path, dropped)
    return sentences


def write_conllu(path: str | Path, sentences: Treebank) -> None:
    """Write sentences with FORM/UPOS/HEAD/DEPREL filled, '_' elsewhere."""
    with open(path, "w", encoding="utf-8") as fh:
        for sent in sentences:
            for i in range(len(sent)):
                fh.write("\t".join([
                    str(i + 1), sent.tokens[i], "_", sent.upos[i], "_", "_",
                    str(sent.heads[i]), sent.deprels[i], "_", "_",
                ]) + "\n")
            fh.write("\n")


@dataclass
class Vocab:
    """Frozen string-to-id maps for words, POS tags and dependency labels.

    Word and POS maps reserve <pad>/<unk>/<root>; the label map is exactly
    the set of labels seen in training, so its size is L.
    """

    words: dict[str, int] = field(default_factory=dict)
    pos: dict[str, int] = field(default_factory=dict)
    labels: dict[str, int] = field(default_factory=dict)
    frozen: bool = True

    PAD_ID = 0
    UNK_ID = 1
    ROOT_ID = 2

    @property
    def n_words(self) -> int:
        return len(self.words)

    @property
    def n_pos(self) -> int:
        return len(self.pos)

    @property
    def n_labels(self) -> int:
        return len(self.labels)

    def word_id(self, form: str) -> int:
        return self.words.get(form, self.UNK_ID)

    def pos_id(self, tag: str) -> int:
        return self.pos.get(tag, self.UNK_ID)

    def label_id(self, label: str) -> int:
        """Id of a known label; unseen labels map to -1 (never predicted)."""
        return self.labels.get(label, -1)

    def label_names(self) -> list[str]:
        out = [""] * len(self.labels)
        for name, i in self.labels.items():
            out[i] = name
        return out

    def encode(self, sent: Sentence) -> tuple[np.ndarray, np.ndarray]:
        """Word and POS id arrays with the root position prepended."""
        wids = [self.ROOT_ID] + [self.word_id(w) for w in sent.tokens]
        pids = [self.ROOT_ID] + [self.pos_id(p) for p in sent.upos]
        return np.asarray(wids, dtype=np.intp), np.asarray(pids, dtype=np.intp)


def build_vocab(treebank: Treebank, min_count: int = 1) -> Vocab:
    """First-seen-ordered vocabulary; words under min_count collapse to <unk>."""
    if not treebank:
        raise DataError("build_vocab: empty treebank")
    counts: dict[str, int] = {}
    word_order: list[str] = []
    pos_map: dict[str, int] = {}
    label_map: dict[str, int] = {}
    for sent in treebank:
        for w in sent.tokens:
            if w not in counts:
                word_order.append(w)
            counts[w] = counts.get(w, 0) + 1
        for p in sent.upos:
            if p not in pos_map:
                pos_map[p] = len(pos_map)
        for r in sent.deprels:
            if r not in label_map:
                label_map[r] = len(label_map)
    reserved = [PAD, UNK, ROOT]
    words = {tok: i for i, tok in enumerate(reserved)}
    for w in word_order:
        if counts[w] >= min_count and w not in words:
            words[w] = len(words)
    pos = {tok: i for i, tok in enumerate(reserved)}
    for p in pos_map:
        if p not in pos:
            pos[p] = len(pos)
    return Vocab(words=words, pos=pos, labels=label_map)


def subsample(treebank: Treebank, keep_fraction: float, seed: int) -> Treebank:
    """Deterministic random subset of ceil(fraction * N) sentences, order kept."""
    if not 0.0 < keep_fraction <= 1.0:
        raise DataError(f"subsample: fraction must be in (0, 1], got {keep_fraction}")
    if keep_fraction == 1.0:
        return list(treebank)
    n = len(treebank)
    k = math.ceil(keep_fraction * n)
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n, size=k, replace=False))
    return [treebank[i] for i in idx]
