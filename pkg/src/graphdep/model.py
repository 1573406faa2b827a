"""Model assembly: configuration, parameters, forward passes, and a
versioned little-endian binary file format for trained models.

One `variant` field selects the kernel for both the arc and the label
classifier; the remaining parameters (embeddings, BiLSTM, MLPs) are
identical across variants, so switching variants changes classifier
parameter counts only.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import autodiff as ad
from .autodiff import ParamVars, Tape, Var
from .conllu import Sentence, Vocab
from .decode import ParseTree, chu_liu_edmonds
from .encoder import EncoderConfig, Views, encode, init_encoder_params
from .errors import DataError
from .scoring import ArcClassifier, LabelClassifier, arc_loss, label_loss

MAGIC = b"GDEP"
FORMAT_VERSION = 1


@dataclass
class ModelConfig:
    """Hyperparameters for the encoder, classifiers and training."""

    variant: str = "dense"
    word_dim: int = 64
    pos_dim: int = 32
    hidden_dim: int = 64
    arc_dim: int = 400
    label_dim: int = 100
    dropout: float = 0.33
    embed_init: float = 0.1
    kernel_init: float = 0.01
    lr: float = 2e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    epochs: int = 20
    batch_size: int = 1
    seed: int = 1
    subsample: float = 1.0
    min_count: int = 1
    max_len: int = 100

    def encoder_config(self, vocab: Vocab) -> EncoderConfig:
        return EncoderConfig(
            n_words=vocab.n_words, n_pos=vocab.n_pos,
            word_dim=self.word_dim, pos_dim=self.pos_dim,
            hidden_dim=self.hidden_dim, arc_dim=self.arc_dim,
            label_dim=self.label_dim, dropout=self.dropout,
            embed_init=self.embed_init)


class Model:
    """Encoder plus one arc and one label classifier with shared variant."""

    def __init__(self, config: ModelConfig, vocab: Vocab,
                 params: dict[str, np.ndarray] | None = None):
        self.config = config
        self.vocab = vocab
        self.enc_cfg = config.encoder_config(vocab)
        self.arc_clf = ArcClassifier(config.variant, config.arc_dim)
        self.label_clf = LabelClassifier(config.variant, config.label_dim,
                                         vocab.n_labels)
        if params is None:
            rng = np.random.default_rng(config.seed)
            params = init_encoder_params(self.enc_cfg, rng)
            params.update(self.arc_clf.init_params(rng, config.kernel_init))
            params.update(self.label_clf.init_params(rng, config.kernel_init))
        self.params = params

    def classifier_param_names(self) -> list[str]:
        return [k for k in self.params if k.startswith(("arc.", "label."))]

    def spectra(self) -> dict[str, np.ndarray]:
        """Current complex spectra of all circulant kernels."""
        if self.config.variant != "circulant":
            return {}
        return {name: ad.pairs_to_complex(self.params[name])
                for name in self.classifier_param_names()
                if name.endswith((".w", ".u"))}

    # -- forward passes ----------------------------------------------------

    def encode_sentence(self, sent: Sentence, tape: Tape | None = None,
                        train: bool = False,
                        rng: np.random.Generator | None = None,
                        sentence_index: int | None = None) -> tuple[ParamVars, Views]:
        tape = tape or Tape()
        ctx = ParamVars(tape, self.params)
        wids, pids = self.vocab.encode(sent)
        views = encode(ctx, self.enc_cfg, wids, pids, train=train, rng=rng,
                       sentence_index=sentence_index)
        return ctx, views

    def loss(self, sent: Sentence, train: bool = True,
             rng: np.random.Generator | None = None,
             sentence_index: int | None = None) -> tuple[Tape, Var, ParamVars]:
        """Arc + label cross-entropy for one sentence on a fresh tape."""
        if len(sent) == 0:
            raise DataError("loss: cannot train on an empty sentence")
        tape = Tape()
        ctx, views = self.encode_sentence(sent, tape, train=train, rng=rng,
                                          sentence_index=sentence_index)
        gold_heads = np.asarray(sent.heads, dtype=np.intp)
        gold_labels = np.asarray([self.vocab.label_id(r) for r in sent.deprels],
                                 dtype=np.intp)
        if gold_labels.min() < 0:
            raise DataError(f"loss: unknown dependency label in sentence "
                            f"{sentence_index if sentence_index is not None else '?'}")
        grid = self.arc_clf.grid_op(ctx, views.arc_head, views.arc_dep)
        l_arc = arc_loss(grid, gold_heads)
        deps = np.arange(1, len(sent) + 1)
        vh_sel = ad.take_rows(views.label_head, gold_heads)
        vd_sel = ad.take_rows(views.label_dep, deps)
        scores = self.label_clf.pairs_op(ctx, vh_sel, vd_sel)
        l_label = label_loss(scores, gold_labels)
        return tape, ad.add(l_arc, l_label), ctx

    def parse(self, sent: Sentence) -> ParseTree:
        """Decode heads with Chu-Liu/Edmonds, then labels at predicted heads."""
        if len(sent) == 0:
            return ParseTree([], [])
        _, views = self.encode_sentence(sent, train=False)
        grid = self.arc_clf.grid_values(self.params, views.arc_head.value,
                                        views.arc_dep.value)
        heads = chu_liu_edmonds(grid)
        vh = views.label_head.value[np.asarray(heads, dtype=np.intp)]
        vd = views.label_dep.value[1:]
        label_scores = self.label_clf.scores_at(self.params, vh, vd)
        labels = [int(i) for i in np.argmax(label_scores, axis=1)]
        return ParseTree(heads, labels)

    def parse_treebank(self, sentences: list[Sentence]) -> list[ParseTree]:
        return [self.parse(s) for s in sentences]

    def gold_tree(self, sent: Sentence) -> ParseTree:
        return ParseTree(list(sent.heads),
                         [self.vocab.label_id(r) for r in sent.deprels])


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _config_payload(model: Model) -> bytes:
    words = [""] * model.vocab.n_words
    for w, i in model.vocab.words.items():
        words[i] = w
    pos = [""] * model.vocab.n_pos
    for p, i in model.vocab.pos.items():
        pos[i] = p
    doc = {
        "config": asdict(model.config),
        "vocab": {"words": words, "pos": pos, "labels": model.vocab.label_names()},
    }
    return json.dumps(doc, ensure_ascii=False).encode("utf-8")


def save_model(model: Model, path: str | Path) -> None:
    """Write magic, version, config JSON, parameters in declared order, CRC32."""
    body = bytearray()
    body += struct.pack("<I", FORMAT_VERSION)
    cfg = _config_payload(model)
    body += struct.pack("<I", len(cfg))
    body += cfg
    body += struct.pack("<I", len(model.params))
    for name, arr in model.params.items():
        encoded = name.encode("utf-8")
        body += struct.pack("<H", len(encoded))
        body += encoded
        body += struct.pack("<B", arr.ndim)
        body += struct.pack(f"<{arr.ndim}I", *arr.shape)
        body += np.ascontiguousarray(arr, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(body)
        fh.write(struct.pack("<I", zlib.crc32(bytes(body)) & 0xFFFFFFFF))


def load_model(path: str | Path) -> Model:
    """Read and verify a model file; raises DataError on any mismatch."""
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != MAGIC:
        raise DataError(f"{path}: not a model file (bad magic)")
    body, (crc,) = raw[4:-4], struct.unpack("<I", raw[-4:])
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise DataError(f"{path}: checksum mismatch")
    off = 0

    def take(fmt: str):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from(fmt, body, off)
        off += size
        return vals

    (version,) = take("<I")
    if version != FORMAT_VERSION:
        raise DataError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    (cfg_len,) = take("<I")
    doc = json.loads(body[off:off + cfg_len].decode("utf-8"))
    off += cfg_len
    config = ModelConfig(**doc["config"])
    vocab = Vocab(words={w: i for i, w in enumerate(doc["vocab"]["words"])},
                  pos={p: i for i, p in enumerate(doc["vocab"]["pos"])},
                  labels={r: i for i, r in enumerate(doc["vocab"]["labels"])})
    (n_params,) = take("<I")
    params: dict[str, np.ndarray] = {}
    for _ in range(n_params):
        (name_len,) = take("<H")
        name = body[off:off + name_len].decode("utf-8")
        off += name_len
        (ndim,) = take("<B")
        shape = take(f"<{ndim}I") if ndim else ()
        count = int(np.prod(shape)) if ndim else 1
        arr = np.frombuffer(body, dtype="<f8", count=count, offset=off)
        off += 8 * count
        params[name] = arr.astype(np.float64).reshape(shape)
    return Model(config, vocab, params=params)
