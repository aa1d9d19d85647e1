"""Command-line interface: generate | train | detect | stream | eval | bench.

Machine-readable output (JSON / CSV) goes to stdout, diagnostics to
stderr. Exit codes: 0 success / no defect, 2 defect detected (detect and
stream), 1 usage or runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from . import synthgen
from .features import combine, extract_features
from .hough import density_csv
from .image import FramePair, read_pgm
from .mlp import LabeledSample, TrainConfig, load_model, save_model, train
from .pipeline import (Decision, PipelineConfig, StopEvent, benchmark, detect,
                       evaluate, run_stream, view_signature)
from .preproc import PreprocConfig

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DEFECT = 2

_PREPROC_KEYS = {f.name for f in fields(PreprocConfig)}
_PIPELINE_KEYS = {"theta_bins", "decision_threshold"}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2
    # for "defect detected", so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


class CliError(Exception):
    pass


def _load_pipeline_config(args) -> PipelineConfig:
    """Config file first, then CLI flags of the same name override."""
    doc = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise CliError(f"config file not found: {path}")
        doc = json.loads(path.read_text())
    preproc_doc = dict(doc.pop("preproc", {}))
    for key in list(doc):
        if key in _PREPROC_KEYS:
            preproc_doc[key] = doc.pop(key)
        elif key not in _PIPELINE_KEYS:
            raise CliError(f"unknown config key: {key}")
    for key in _PREPROC_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            preproc_doc[key] = value
    pipe_kwargs = {k: doc[k] for k in _PIPELINE_KEYS if k in doc}
    for key in _PIPELINE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            pipe_kwargs[key] = value
    return PipelineConfig(preproc=PreprocConfig(**preproc_doc), **pipe_kwargs)


def _add_config_flags(p):
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--theta-bins", dest="theta_bins", type=int)
    p.add_argument("--decision-threshold", dest="decision_threshold", type=float)
    p.add_argument("--gaussian-sigma", dest="gaussian_sigma", type=float)
    p.add_argument("--gaussian-radius", dest="gaussian_radius", type=int)
    p.add_argument("--binarize-method", dest="binarize_method",
                   choices=["otsu", "fixed"])
    p.add_argument("--fixed-threshold", dest="fixed_threshold", type=int)
    p.add_argument("--skip-noise-filter", dest="skip_noise_filter",
                   action="store_true", default=None)


def _load_model_file(path):
    p = Path(path)
    if not p.is_file():
        raise CliError(f"model file not found: {p}")
    return load_model(p.read_bytes())


def _read_pair(path_a, path_b) -> FramePair:
    for p in (path_a, path_b):
        if not Path(p).is_file():
            raise CliError(f"image file not found: {p}")
    return FramePair(a=read_pgm(Path(path_a).read_bytes()),
                     b=read_pgm(Path(path_b).read_bytes()))


def _corpus_features(corpus, cfg: PipelineConfig):
    samples = []
    for pair, label, _defect in corpus:
        fv = combine(extract_features(view_signature(pair.a, cfg)),
                     extract_features(view_signature(pair.b, cfg)))
        samples.append(LabeledSample(features=fv, label=label))
    return samples


def _cmd_generate(args):
    base = synthgen.SynthSpec()
    if args.spec:
        spec_path = Path(args.spec)
        if not spec_path.is_file():
            raise CliError(f"spec file not found: {spec_path}")
        base = synthgen.SynthSpec(**json.loads(spec_path.read_text()))
    items = synthgen.make_corpus(base, args.n, args.defect_fraction, args.seed)
    synthgen.write_corpus(items, args.out, base, args.seed)
    print(json.dumps({"written": len(items), "out": str(args.out)}))
    return EXIT_OK


def _cmd_train(args):
    cfg = _load_pipeline_config(args)
    corpus = synthgen.load_corpus(args.corpus)
    print(f"extracting features from {len(corpus)} pairs", file=sys.stderr)
    samples = _corpus_features(corpus, cfg)
    tc = TrainConfig(hidden_dim=args.hidden, epochs=args.epochs,
                     seed=args.seed, learning_rate=args.learning_rate,
                     momentum=args.momentum)
    model, history = train(samples, tc)
    Path(args.out).write_bytes(save_model(model))
    print(json.dumps({"epochs": tc.epochs, "initial_loss": history[0],
                      "final_loss": history[-1], "model": str(args.out)}))
    return EXIT_OK


def _cmd_detect(args):
    cfg = _load_pipeline_config(args)
    model = _load_model_file(args.model)
    pair = _read_pair(args.a, args.b)
    if args.dump_density:
        Path(args.dump_density).write_text(
            density_csv(view_signature(pair.a, cfg)))
    decision = detect(pair, model, cfg)
    print(decision.to_json())
    return EXIT_DEFECT if decision.is_defect else EXIT_OK


def _cmd_stream(args):
    cfg = _load_pipeline_config(args)
    model = _load_model_file(args.model)
    corpus = synthgen.load_corpus(args.corpus)
    source = (pair for pair, _label, _defect in corpus)
    defect_seen = False
    for event in run_stream(source, model, cfg, stop_on_defect=not args.no_stop):
        print(event.to_json(), flush=True)
        if isinstance(event, Decision) and event.is_defect:
            defect_seen = True
    return EXIT_DEFECT if defect_seen else EXIT_OK


def _cmd_eval(args):
    cfg = _load_pipeline_config(args)
    model = _load_model_file(args.model)
    corpus = synthgen.load_corpus(args.corpus)
    if args.dump_features:
        lines = []
        for pair, label, _defect in corpus:
            fv = combine(extract_features(view_signature(pair.a, cfg)),
                         extract_features(view_signature(pair.b, cfg)))
            lines.append(",".join(f"{x:.10g}" for x in fv) + f",{label}")
        Path(args.dump_features).write_text("\n".join(lines) + "\n")
    report = evaluate([(p, lbl) for p, lbl, _d in corpus], model, cfg)
    print(json.dumps(report.to_dict()))
    return EXIT_OK


def _cmd_bench(args):
    cfg = _load_pipeline_config(args)
    model = _load_model_file(args.model)
    corpus = synthgen.load_corpus(args.corpus)
    stats = benchmark([(p, lbl) for p, lbl, _d in corpus], model, cfg, args.reps)
    print(json.dumps(stats))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="texqc",
                     description="Jacquard fabric defect-detection toolkit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("generate", help="write a synthetic labeled corpus")
    p.add_argument("--spec", help="SynthSpec JSON file (defaults used if omitted)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--defect-fraction", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", help="train the classifier on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--hidden", type=int, default=8)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--momentum", type=float, default=0.9)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("detect", help="classify one frame pair")
    p.add_argument("--a", required=True, help="camera A PGM")
    p.add_argument("--b", required=True, help="camera B PGM")
    p.add_argument("--model", required=True)
    p.add_argument("--dump-density",
                   help="write camera A's direction density as CSV")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("stream", help="stream a corpus, stopping on defect")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--no-stop", action="store_true",
                   help="keep consuming after a defect decision")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_stream)

    p = sub.add_parser("eval", help="confusion-matrix report over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--dump-features", help="write per-pair feature CSV")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="latency benchmark over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--reps", type=int, required=True)
    _add_config_flags(p)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return EXIT_ERROR
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
