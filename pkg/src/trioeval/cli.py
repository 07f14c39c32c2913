"""``trioeval`` command line.

Reports go to standard output as JSON (or CSV/JSONL for the experiment
commands). Exit status is 2 for usage errors, 1 for bad input data (with a
JSON error object on standard error) and 0 otherwise; evaluator failure modes
are results, not errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import TrioEvalError
from .evaluators import MAJORITY_COMPETENT, PREVALENCE_NEAR
from .forward import materialize_stream, sample_stream
from .harness import ProfileConfig, metadata, profile_failures, scatter_distance_correlation, to_csv, to_jsonl
from .numerics import parse_scalar
from .points import EvaluationPoint
from .reports import (
    blind_spots_document,
    evaluation_report,
    projection_report,
    read_truth,
    synth_document,
    versions,
)
from .sketch import DecisionSketch, ingest_decisions, write_decisions
from .diagnostics import diagnostics_report

MODE_ENV = "TRIOEVAL_MODE"


def _default_exact() -> bool:
    mode = os.environ.get(MODE_ENV, "exact").strip().lower()
    if mode not in ("exact", "float"):
        raise TrioEvalError(f"{MODE_ENV} must be 'exact' or 'float', not {mode!r}")
    return mode == "exact"


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_sketch(path: str) -> DecisionSketch:
    return DecisionSketch.from_dict(_load_json(path))


def _emit(doc, out=None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _mode(args) -> bool:
    return _default_exact() if args.exact is None else args.exact


def cmd_sketch(args) -> None:
    sketch, _ = ingest_decisions(args.decisions)
    _emit(sketch.to_dict(), args.output)


def cmd_eval(args) -> None:
    sketch = _load_sketch(args.sketch)
    value = parse_scalar(args.prevalence) if args.prevalence is not None else None
    if args.decode == PREVALENCE_NEAR and value is None:
        raise TrioEvalError(f"--decode {PREVALENCE_NEAR} needs --prevalence")
    _emit(evaluation_report(sketch, _mode(args), args.decode, value), args.output)


def cmd_synth(args) -> None:
    point, corr = read_truth(_load_json(args.truth))
    _emit(synth_document(point, corr, _mode(args)), args.output)


def cmd_stream(args) -> None:
    point, corr = read_truth(_load_json(args.truth))
    if args.sample:
        if args.n is None:
            raise TrioEvalError("--sample needs --n")
        stream = sample_stream(point, corr, args.n, args.seed)
    else:
        stream = materialize_stream(point, corr, args.n, args.seed)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_decisions(stream, fh)
    else:
        write_decisions(stream, sys.stdout)


def cmd_project(args) -> None:
    sketch = _load_sketch(args.sketch)
    point = EvaluationPoint.from_dict(_load_json(args.point))
    _emit(projection_report(point, sketch, args.grid, args.refinements), args.output)


def cmd_diagnose(args) -> None:
    sketch = _load_sketch(args.sketch)
    doc = diagnostics_report(sketch, _mode(args))
    if args.point:
        point = EvaluationPoint.from_dict(_load_json(args.point))
        doc["blind_spots"] = blind_spots_document(point, sketch, parse_scalar(args.threshold))
    _emit(doc, args.output)


def _experiment(args, runner) -> None:
    config = ProfileConfig.from_json(args.config)
    records = runner(config, jobs=args.jobs)
    meta = metadata(config)
    if args.format == "jsonl":
        text = json.dumps({"_meta": meta}, sort_keys=True) + "\n" + to_jsonl(records)
    else:
        text = to_csv(records)
    if args.output:
        Path(args.output).write_text(text)
        if args.format == "csv":
            Path(args.output + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def cmd_profile(args) -> None:
    _experiment(args, profile_failures)


def cmd_scatter(args) -> None:
    _experiment(args, scatter_distance_correlation)


def _add_mode(p) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="exact", action="store_true", default=None,
                   help=f"rational arithmetic (default unless {MODE_ENV}=float)")
    g.add_argument("--float", dest="exact", action="store_false", help="binary64 arithmetic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trioeval", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true", help="print algorithm identifiers and exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("sketch", help="count voting patterns in a decisions CSV")
    p.add_argument("decisions")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sketch)

    p = sub.add_parser("eval", help="majority-vote and independent evaluation of a sketch")
    p.add_argument("sketch")
    _add_mode(p)
    p.add_argument("--decode", choices=[MAJORITY_COMPETENT, PREVALENCE_NEAR])
    p.add_argument("--prevalence", help="alpha prevalence used by assume-prevalence-near")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="sketch and frequencies of a ground-truth file")
    p.add_argument("truth")
    _add_mode(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("stream", help="labelled decisions CSV from a ground-truth file")
    p.add_argument("truth")
    p.add_argument("--n", type=int, help="test size (default: smallest exact size)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample", action="store_true", help="i.i.d. draws instead of an exact stream")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("project", help="distance of a point to the containing variety")
    p.add_argument("sketch")
    p.add_argument("point")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--refinements", type=int, default=40)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("diagnose", help="agreement-rate diagnostics and blind spots")
    p.add_argument("sketch")
    _add_mode(p)
    p.add_argument("--point", help="evaluation point JSON for the blind-spot report")
    p.add_argument("--threshold", default="0.1")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diagnose)

    for name, func, text in (
        ("profile", cmd_profile, "failure-mode profile over test sizes"),
        ("scatter", cmd_scatter, "correlation vs distance scatter"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("config", help="ProfileConfig JSON")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
        p.add_argument("-o", "--output")
        p.set_defaults(func=func)
    return parser


def _data_error(exc: Exception) -> int:
    doc = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(doc) + "\n")
    return 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.version:
        _emit(versions())
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args.func(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return 0
    except (TrioEvalError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        return _data_error(exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
