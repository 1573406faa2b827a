"""Contextual encoder: embeddings, a single-layer BiLSTM, and the four
view MLPs (arc-head, arc-dep, label-head, label-dep).

Position 0 is a learned root representation (dedicated reserved word
and POS embedding rows) so the decoder always has a root node.  Each
view is one affine layer with ReLU on the BiLSTM output; dropout is
applied independently to each MLP's input during training.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .autodiff import ParamVars, Var
from .errors import DataError


@dataclass
class EncoderConfig:
    """Dimensions and initialization of the encoder stack."""

    n_words: int
    n_pos: int
    word_dim: int = 64
    pos_dim: int = 32
    hidden_dim: int = 64
    arc_dim: int = 400
    label_dim: int = 100
    dropout: float = 0.33
    embed_init: float = 0.1

    def __post_init__(self):
        for name in ("n_words", "n_pos", "word_dim", "pos_dim",
                     "hidden_dim", "arc_dim", "label_dim"):
            if getattr(self, name) < 1:
                raise ValueError(f"EncoderConfig.{name} must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("EncoderConfig.dropout must be in [0, 1)")


@dataclass
class TokenViews:
    """Per-token MLP outputs feeding the classifiers."""

    arc_head: np.ndarray
    arc_dep: np.ndarray
    label_head: np.ndarray
    label_dep: np.ndarray


class Views:
    """Stacked views for one sentence, positions 0 (root) .. len."""

    def __init__(self, arc_head: Var, arc_dep: Var, label_head: Var, label_dep: Var):
        self.arc_head = arc_head
        self.arc_dep = arc_dep
        self.label_head = label_head
        self.label_dep = label_dep

    def __len__(self) -> int:
        return self.arc_head.shape[0]

    def token(self, i: int) -> TokenViews:
        return TokenViews(self.arc_head.value[i], self.arc_dep.value[i],
                          self.label_head.value[i], self.label_dep.value[i])


def _xavier(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-limit, limit, size=(rows, cols))


def init_encoder_params(cfg: EncoderConfig, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Fresh encoder parameters in a deterministic declaration order."""
    d = cfg.word_dim + cfg.pos_dim
    h = cfg.hidden_dim
    params: dict[str, np.ndarray] = {}
    params["emb.word"] = rng.uniform(-cfg.embed_init, cfg.embed_init,
                                     size=(cfg.n_words, cfg.word_dim))
    params["emb.pos"] = rng.uniform(-cfg.embed_init, cfg.embed_init,
                                    size=(cfg.n_pos, cfg.pos_dim))
    for direction in ("fw", "bw"):
        params[f"lstm.{direction}.wx"] = _xavier(rng, 4 * h, d)
        params[f"lstm.{direction}.wh"] = _xavier(rng, 4 * h, h)
        b = np.zeros(4 * h)
        b[h:2 * h] = 1.0  # forget-gate bias
        params[f"lstm.{direction}.b"] = b
    for name, dim in (("arc_head", cfg.arc_dim), ("arc_dep", cfg.arc_dim),
                      ("label_head", cfg.label_dim), ("label_dep", cfg.label_dim)):
        params[f"mlp.{name}.w"] = _xavier(rng, 2 * h, dim)
        params[f"mlp.{name}.b"] = np.zeros(dim)
    return params


def _lstm_direction(ctx: ParamVars, prefix: str, inputs: Var, h: int,
                    reverse: bool) -> list[Var]:
    wx, wh, b = ctx[f"{prefix}.wx"], ctx[f"{prefix}.wh"], ctx[f"{prefix}.b"]
    n = inputs.shape[0]
    # project all steps at once; the recurrence itself must stay sequential
    proj = ad.add_rowvec(ad.matmul(inputs, ad.transpose(wx)), b)
    tape = inputs.tape
    h_prev = tape.node(np.zeros(h))
    c_prev = tape.node(np.zeros(h))
    order = range(n - 1, -1, -1) if reverse else range(n)
    outputs: list[Var] = [None] * n  # type: ignore[list-item]
    for t in order:
        gates = ad.add(ad.row(proj, t), ad.matvec(wh, h_prev))
        i = ad.sigmoid(ad.slice1d(gates, 0, h))
        f = ad.sigmoid(ad.slice1d(gates, h, 2 * h))
        g = ad.tanh(ad.slice1d(gates, 2 * h, 3 * h))
        o = ad.sigmoid(ad.slice1d(gates, 3 * h, 4 * h))
        c_prev = ad.add(ad.mul(f, c_prev), ad.mul(i, g))
        h_prev = ad.mul(o, ad.tanh(c_prev))
        outputs[t] = h_prev
    return outputs


def encode(ctx: ParamVars, cfg: EncoderConfig, word_ids: np.ndarray,
           pos_ids: np.ndarray, train: bool = False,
           rng: np.random.Generator | None = None,
           sentence_index: int | None = None) -> Views:
    """Views for one id sequence (root id already prepended by the vocab)."""
    word_ids = np.asarray(word_ids, dtype=np.intp)
    pos_ids = np.asarray(pos_ids, dtype=np.intp)
    where = "" if sentence_index is None else f" in sentence {sentence_index}"
    if word_ids.size == 0:
        raise DataError(f"encode: empty id sequence{where}")
    if word_ids.min() < 0 or word_ids.max() >= cfg.n_words:
        raise DataError(f"encode: word id out of range{where}")
    if pos_ids.min() < 0 or pos_ids.max() >= cfg.n_pos:
        raise DataError(f"encode: POS id out of range{where}")

    x = ad.hstack(ad.take_rows(ctx["emb.word"], word_ids),
                  ad.take_rows(ctx["emb.pos"], pos_ids))
    fw = _lstm_direction(ctx, "lstm.fw", x, cfg.hidden_dim, reverse=False)
    bw = _lstm_direction(ctx, "lstm.bw", x, cfg.hidden_dim, reverse=True)
    y = ad.hstack(ad.stack_rows(fw), ad.stack_rows(bw))

    views = []
    for name in ("arc_head", "arc_dep", "label_head", "label_dep"):
        inp = y
        if train and cfg.dropout > 0.0:
            if rng is None:
                raise ValueError("encode: training mode requires an rng for dropout")
            keep = 1.0 - cfg.dropout
            mask = rng.binomial(1, keep, size=y.shape) / keep
            inp = ad.mul_const(y, mask)
        views.append(ad.relu(ad.add_rowvec(ad.matmul(inp, ctx[f"mlp.{name}.w"]),
                                           ctx[f"mlp.{name}.b"])))
    return Views(*views)
