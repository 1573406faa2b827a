"""Training loop: Adam over per-sentence arc + label losses, per-epoch
dev evaluation, best-LAS checkpointing.

All randomness (subsampling, shuffling, dropout) flows from the seed in
the config, so two runs with identical inputs produce bit-identical
parameters and logs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .conllu import Sentence, Treebank, build_vocab, subsample
from .decode import evaluate
from .errors import DataError, NumericError
from .model import Model, ModelConfig
from .optim import AdamState, adam_step

log = logging.getLogger(__name__)


@dataclass
class EpochLog:
    epoch: int
    train_loss: float
    dev_uas: float
    dev_las: float


@dataclass
class TrainResult:
    model: Model
    history: list[EpochLog] = field(default_factory=list)
    best_epoch: int = 0
    train_size: int = 0


def train_model(config: ModelConfig, train_tb: Treebank, dev_tb: Treebank,
                echo=None) -> TrainResult:
    """Train a fresh model; returns it with the best-dev-LAS parameters."""
    if not train_tb:
        raise DataError("train: empty training treebank")
    if config.subsample < 1.0:
        train_tb = subsample(train_tb, config.subsample, config.seed)
    kept = [s for s in train_tb if len(s) <= config.max_len]
    if len(kept) < len(train_tb):
        log.info("skipping %d sentence(s) longer than %d tokens",
                 len(train_tb) - len(kept), config.max_len)
    if not kept:
        raise DataError(f"train: no sentences within the {config.max_len}-token cap")
    train_tb = kept

    vocab = build_vocab(train_tb, min_count=config.min_count)
    model = Model(config, vocab)
    state = AdamState()
    rng = np.random.default_rng(config.seed + 1)  # shuffling + dropout
    gold_dev = [model.gold_tree(s) for s in dev_tb]

    result = TrainResult(model=model, train_size=len(train_tb))
    if echo:
        echo(f"training on {len(train_tb)} sentences "
             f"({config.variant} classifier, seed {config.seed})")
    best_las = -1.0
    best_params: dict[str, np.ndarray] | None = None

    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(train_tb))
        losses: list[float] = []
        batch_grads: dict[str, np.ndarray] = {}
        batch_count = 0

        def flush_batch():
            nonlocal batch_grads, batch_count
            if not batch_count:
                return
            for g in batch_grads.values():
                g /= batch_count
            adam_step(model.params, batch_grads, state, lr=config.lr,
                      betas=(config.beta1, config.beta2), eps=config.eps)
            batch_grads, batch_count = {}, 0

        for step, idx in enumerate(order, start=1):
            sent = train_tb[idx]
            tape, loss, ctx = model.loss(sent, train=True, rng=rng,
                                         sentence_index=int(idx))
            value = float(loss.value)
            if not np.isfinite(value):
                raise NumericError(
                    f"non-finite loss at epoch {epoch}, step {step}")
            losses.append(value)
            grads = ctx.grads(tape.backward(loss))
            for name, g in grads.items():
                acc = batch_grads.get(name)
                batch_grads[name] = g if acc is None else acc + g
            batch_count += 1
            if batch_count >= config.batch_size:
                flush_batch()
        flush_batch()

        dev_uas, dev_las = evaluate(model.parse_treebank(dev_tb), gold_dev) \
            if dev_tb else (0.0, 0.0)
        entry = EpochLog(epoch, float(np.mean(losses)), dev_uas, dev_las)
        result.history.append(entry)
        if echo:
            echo(f"epoch {entry.epoch:3d}  loss {entry.train_loss:8.4f}  "
                 f"dev UAS {entry.dev_uas:6.2f}  dev LAS {entry.dev_las:6.2f}")
        if dev_tb and dev_las > best_las:
            best_las = dev_las
            result.best_epoch = epoch
            best_params = {k: v.copy() for k, v in model.params.items()}

    if best_params is not None:
        model.params.update(best_params)
    return result


def gold_trees(model: Model, sentences: list[Sentence]):
    return [model.gold_tree(s) for s in sentences]
