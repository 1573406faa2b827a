"""Command-line interface: train, parse, eval, bench, params.

Configuration is a flat key=value text file whose keys are ModelConfig
field names; command-line flags override file values.  Exit codes:
0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import bench as bench_mod
from . import params as params_mod
from .conllu import read_conllu, write_conllu
from .decode import evaluate
from .errors import DataError, NumericError
from .model import ModelConfig, load_model, save_model
from .train import train_model

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


_CONFIG_FIELDS = {f.name: f.type for f in dataclasses.fields(ModelConfig)}


def _coerce(name: str, raw: str):
    kind = _CONFIG_FIELDS[name]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def load_config_file(path: str | Path) -> dict:
    """Flat key=value file; blank lines and '#' comments are ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(),
                                 start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_FIELDS:
            raise DataError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _coerce(key, value.strip())
        except ValueError:
            raise DataError(f"{path}:{lineno}: bad value for {key!r}") from None
    return values


def build_config(args: argparse.Namespace) -> ModelConfig:
    values = load_config_file(args.config) if args.config else {}
    for flag, key in (("variant", "variant"), ("arc_dim", "arc_dim"),
                      ("label_dim", "label_dim"), ("seed", "seed"),
                      ("subsample", "subsample"), ("epochs", "epochs"),
                      ("lr", "lr"), ("dropout", "dropout"),
                      ("hidden_dim", "hidden_dim")):
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    cfg = ModelConfig(**values)
    if cfg.variant not in ("dense", "symmetric", "circulant"):
        raise DataError(f"unknown classifier variant {cfg.variant!r}")
    if not 0.0 < cfg.subsample <= 1.0:
        raise DataError(f"subsample fraction must be in (0, 1], got {cfg.subsample}")
    return cfg


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--variant", choices=("dense", "symmetric", "circulant"))
    p.add_argument("--arc-dim", dest="arc_dim", type=int)
    p.add_argument("--label-dim", dest="label_dim", type=int)
    p.add_argument("--hidden-dim", dest="hidden_dim", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--subsample", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--dropout", type=float)


def cmd_train(args) -> int:
    cfg = build_config(args)
    train_tb = read_conllu(args.train)
    dev_tb = read_conllu(args.dev) if args.dev else []
    result = train_model(cfg, train_tb, dev_tb, echo=print)
    save_model(result.model, args.out)
    print(f"saved best model (epoch {result.best_epoch}) to {args.out}")
    return EXIT_OK


def cmd_parse(args) -> int:
    model = load_model(args.model)
    sentences = read_conllu(args.input)
    labels = model.vocab.label_names()
    parsed = []
    for sent, tree in zip(sentences, model.parse_treebank(sentences)):
        out = dataclasses.replace(sent, heads=list(tree.heads),
                                  deprels=[labels[l] for l in tree.labels])
        parsed.append(out)
    write_conllu(args.output, parsed)
    print(f"parsed {len(parsed)} sentence(s) -> {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    model = load_model(args.model)
    gold_tb = read_conllu(args.gold)
    pred = model.parse_treebank(gold_tb)
    gold = [model.gold_tree(s) for s in gold_tb]
    uas, las = evaluate(pred, gold)
    print(f"UAS {uas:.2f}  LAS {las:.2f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    dims = [int(d) for d in args.dims.split(",") if d]
    variants = args.variants.split(",") if args.variants else None
    try:
        rows = bench_mod.run_bench(dims, variants, repeats=args.repeats,
                                   pairs=args.pairs, seed=args.seed or 0)
    except ValueError as e:
        raise DataError(str(e)) from None
    text = bench_mod.bench_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text, encoding="utf-8")
        print(f"wrote {args.csv}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_params(args) -> int:
    try:
        report = params_mod.reduction_report(shared=args.shared, n=args.arc_dim,
                                             m=args.label_dim, n_labels=args.labels)
    except ValueError as e:
        raise DataError(str(e)) from None
    print(params_mod.format_report(report))
    if args.csv:
        Path(args.csv).write_text(params_mod.report_csv(report), encoding="utf-8")
        print(f"wrote {args.csv}")
    return EXIT_OK


def make_parser() -> _Parser:
    parser = _Parser(prog="graphdep",
                     description="Dependency parsing with dense, symmetric and "
                                 "circulant bilinear classifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a parser on a CoNLL-U treebank")
    p.add_argument("--train", required=True, help="training treebank path")
    p.add_argument("--dev", help="development treebank path")
    p.add_argument("--out", required=True, help="output model path")
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("parse", help="parse a treebank with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="attachment scores against gold annotation")
    p.add_argument("--model", required=True)
    p.add_argument("--gold", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="score-grid timing comparison (CSV)")
    p.add_argument("--dims", default="256,512,1024",
                   help="comma-separated classifier dimensions")
    p.add_argument("--variants", help="comma-separated subset of variants")
    p.add_argument("--repeats", type=int, default=9)
    p.add_argument("--pairs", type=int, default=10_000,
                   help="minimum scored pairs per grid")
    p.add_argument("--seed", type=int)
    p.add_argument("--csv", help="write results to this file instead of stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("params", help="classifier parameter-count report")
    p.add_argument("--arc-dim", dest="arc_dim", type=int, default=400)
    p.add_argument("--label-dim", dest="label_dim", type=int, default=100)
    p.add_argument("--labels", type=int, default=37)
    p.add_argument("--shared", type=int, default=params_mod.DEFAULT_SHARED)
    p.add_argument("--csv", help="also write the report as CSV to this file")
    p.set_defaults(func=cmd_params)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
