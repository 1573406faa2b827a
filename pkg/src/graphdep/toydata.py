"""Synthetic treebank generator for demos and end-to-end tests.

Sentences come from a handful of part-of-speech templates with fixed
attachment patterns, so a parser can memorize a small sample quickly
and any decoder/evaluator bug shows up as an attachment error.
"""

from __future__ import annotations

import numpy as np

from .conllu import Sentence, Treebank

_WORDS = {
    "DET": ["the", "a", "this", "every"],
    "ADJ": ["big", "red", "old", "tiny", "loud"],
    "NOUN": ["dog", "cat", "bird", "fish", "tree", "car", "house", "river"],
    "VERB": ["sees", "likes", "chases", "finds", "watches"],
    "ADV": ["quickly", "quietly", "often"],
    "ADP": ["near", "under", "behind"],
}

# (pos sequence, head per token, deprel per token)
_TEMPLATES = [
    (["DET", "NOUN", "VERB", "DET", "NOUN"],
     [2, 3, 0, 5, 3],
     ["det", "nsubj", "root", "det", "obj"]),
    (["DET", "ADJ", "NOUN", "VERB", "ADV"],
     [3, 3, 4, 0, 4],
     ["det", "amod", "nsubj", "root", "advmod"]),
    (["DET", "NOUN", "VERB", "ADP", "DET", "NOUN"],
     [2, 3, 0, 6, 6, 3],
     ["det", "nsubj", "root", "case", "det", "obl"]),
    (["NOUN", "VERB", "DET", "ADJ", "NOUN"],
     [2, 0, 5, 5, 2],
     ["nsubj", "root", "det", "amod", "obj"]),
    (["DET", "NOUN", "ADP", "DET", "NOUN", "VERB"],
     [2, 6, 5, 5, 2, 0],
     ["det", "nsubj", "case", "det", "nmod", "root"]),
    (["NOUN", "VERB", "ADV"],
     [2, 0, 2],
     ["nsubj", "root", "advmod"]),
]


def synthetic_treebank(n_sentences: int = 50, seed: int = 0) -> Treebank:
    """Deterministic toy treebank with template-driven gold trees."""
    rng = np.random.default_rng(seed)
    sentences = []
    for i in range(n_sentences):
        pos, heads, rels = _TEMPLATES[i % len(_TEMPLATES)]
        tokens = [_WORDS[p][rng.integers(len(_WORDS[p]))] for p in pos]
        sentences.append(Sentence(tokens, list(pos), list(heads), list(rels)))
    return sentences
