"""Maximum spanning arborescence decoding and attachment-score evaluation.

`chu_liu_edmonds` finds the arborescence rooted at node 0 maximizing
the total arc score: greedy head selection, cycle contraction,
recursion on the contracted graph, then expansion.  Contraction is the
straightforward recursive variant (O(n^3) worst case), which is ample
at the sentence lengths this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError

NEG_INF = -np.inf


@dataclass
class ParseTree:
    """Heads (per dependent, 0 = root) and label ids for one sentence."""

    heads: list[int]
    labels: list[int]

    def __len__(self) -> int:
        return len(self.heads)


def _find_cycle(best_head: np.ndarray) -> list[int] | None:
    """A cycle in the functional graph {j -> best_head[j]}, if any."""
    n = best_head.shape[0]
    color = np.zeros(n, dtype=np.int8)  # 0 unseen, 1 on path, 2 done
    color[0] = 2
    for start in range(1, n):
        if color[start]:
            continue
        path = []
        j = start
        while color[j] == 0:
            color[j] = 1
            path.append(j)
            j = int(best_head[j])
        if color[j] == 1:
            cycle = path[path.index(j):]
            return cycle
        for v in path:
            color[v] = 2
    return None


def _cle(scores: np.ndarray) -> np.ndarray:
    """Unconstrained maximum arborescence over nodes 0..k-1, root 0.

    `scores[i, j]` is the score of arc i -> j; entries on the diagonal
    and into the root must already be -inf.  Ties break toward the
    lowest head index (argmax convention), keeping decoding
    deterministic.
    """
    k = scores.shape[0]
    best_head = np.zeros(k, dtype=np.intp)
    best_head[1:] = np.argmax(scores[:, 1:], axis=0)
    if not np.all(np.isfinite(scores[best_head[1:], np.arange(1, k)])):
        raise DataError("chu_liu_edmonds: a dependent has no unmasked head candidate")
    cycle = _find_cycle(best_head)
    if cycle is None:
        return best_head

    in_cycle = np.zeros(k, dtype=bool)
    in_cycle[cycle] = True
    rest = np.flatnonzero(~in_cycle)  # includes root, preserves order
    cyc = np.asarray(cycle, dtype=np.intp)
    cycle_score = scores[best_head[cyc], cyc].sum()

    # Contracted graph: nodes = rest + [supernode]; supernode index = len(rest)
    m = len(rest)
    sub = np.full((m + 1, m + 1), NEG_INF)
    sub[:m, :m] = scores[np.ix_(rest, rest)]
    # out of the cycle: best cycle member as head for each outside dependent
    out_choice = cyc[np.argmax(scores[np.ix_(cyc, rest)], axis=0)]
    sub[m, :m] = scores[out_choice, rest]
    # into the cycle: entering at v displaces the cycle arc into v
    gain = scores[np.ix_(rest, cyc)] - scores[best_head[cyc], cyc][None, :]
    enter_choice = cyc[np.argmax(gain, axis=1)]
    sub[:m, m] = gain[np.arange(m), np.argmax(gain, axis=1)]
    sub[:, 0] = NEG_INF
    np.fill_diagonal(sub, NEG_INF)

    sub_heads = _cle(sub)

    heads = np.zeros(k, dtype=np.intp)
    heads[cyc] = best_head[cyc]  # cycle arcs, one broken below
    for dep_pos in range(1, m):
        h = sub_heads[dep_pos]
        heads[rest[dep_pos]] = out_choice[dep_pos] if h == m else rest[h]
    entry_head = rest[sub_heads[m]]
    entry_dep = enter_choice[sub_heads[m]]
    heads[entry_dep] = entry_head
    return heads


def chu_liu_edmonds(scores: np.ndarray, single_root: bool = True) -> list[int]:
    """Best head per dependent (1..T) from a (T+1)x(T+1) arc-score grid.

    Row i / column j holds the score of head i governing dependent j.
    Self-arcs and arcs into the root are ignored regardless of their
    entries.  With `single_root`, exactly one token attaches to the
    root, chosen by re-decoding with each candidate root arc forced and
    keeping the best total.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[0] != scores.shape[1]:
        raise DataError(f"chu_liu_edmonds: grid must be square, got {scores.shape}")
    k = scores.shape[0]
    if k < 2:
        return []
    masked = scores.copy()
    np.fill_diagonal(masked, NEG_INF)
    masked[:, 0] = NEG_INF

    heads = _cle(masked)
    if single_root and int(np.sum(heads[1:] == 0)) > 1:
        best_total, best_heads = NEG_INF, None
        for r in range(1, k):
            forced = masked.copy()
            forced[0, 1:] = NEG_INF
            forced[0, r] = masked[0, r]
            cand = _cle(forced)
            total = masked[cand[1:], np.arange(1, k)].sum()
            if total > best_total:
                best_total, best_heads = total, cand
        heads = best_heads
    return [int(h) for h in heads[1:]]


def tree_is_valid(heads: list[int], single_root: bool = True) -> bool:
    """Structural arborescence check: spanning, acyclic, rooted at 0."""
    n = len(heads)
    if n == 0:
        return True
    if any(not 0 <= h <= n or h == i for i, h in enumerate(heads, start=1)):
        return False
    if single_root and sum(1 for h in heads if h == 0) != 1:
        return False
    for i in range(1, n + 1):
        seen = set()
        j = i
        while j != 0:
            if j in seen:
                return False
            seen.add(j)
            j = heads[j - 1]
    return True


def assign_labels(heads: list[int], label_scores: np.ndarray) -> list[int]:
    """Argmax label per dependent; `label_scores[j-1]` scores dependent j.

    Ties break toward the lowest label id.
    """
    if len(heads) == 0:
        return []
    scores = np.asarray(label_scores, dtype=np.float64)
    if scores.shape[0] != len(heads):
        raise DataError(
            f"assign_labels: {scores.shape[0]} score rows for {len(heads)} tokens")
    return [int(i) for i in np.argmax(scores, axis=1)]


def evaluate(pred: list[ParseTree], gold: list[ParseTree]) -> tuple[float, float]:
    """(UAS, LAS) percentages over all tokens; punctuation is not excluded."""
    if len(pred) != len(gold):
        raise DataError(f"evaluate: {len(pred)} predicted vs {len(gold)} gold sentences")
    total = correct_heads = correct_both = 0
    for p, g in zip(pred, gold):
        if len(p) != len(g):
            raise DataError(
                f"evaluate: sentence length mismatch {len(p)} vs {len(g)}")
        for ph, pl, gh, gl in zip(p.heads, p.labels, g.heads, g.labels):
            total += 1
            if ph == gh:
                correct_heads += 1
                if pl == gl:
                    correct_both += 1
    if total == 0:
        return 100.0, 100.0
    return 100.0 * correct_heads / total, 100.0 * correct_both / total
