"""Command-line surface: synth, enroll, identify, evaluate, dump-features.

Identification is closed-set: every probe is assigned to some enrolled
class. ``--warn-margin`` only flags a suspiciously large winning decision
value; it never rejects.

Exit codes: 0 success, 1 runtime/data failure (including a violated
``--min-accuracy`` threshold), 2 usage or parameter errors.
"""

import argparse
import csv
import sys
from pathlib import Path

from . import dataset, evaluation, fusion
from .config import build_config
from .errors import PalmidError, ParameterError
from .gallery import Gallery, build_template, load_gallery, save_gallery
from .palmline import line_feature
from .wavelet import wavelet_feature

_LINE_FLAGS = ("gaussian_sigma", "gaussian_size", "edge_quantile",
               "min_neighbors", "dilate_radius", "block_size")
_WAVELET_FLAGS = ("levels", "grid")


def _add_config_flags(parser, include_distance=True):
    group = parser.add_argument_group("pipeline configuration")
    group.add_argument("--config", metavar="FILE", help="JSON config file")
    group.add_argument("--gaussian-sigma", type=float, help="smoothing sigma")
    group.add_argument("--gaussian-size", type=int, help="smoothing mask side (odd)")
    group.add_argument("--edge-quantile", type=float,
                       help="gradient-magnitude quantile for the edge threshold")
    group.add_argument("--min-neighbors", type=int,
                       help="neighbors an edge pixel needs to survive pruning")
    group.add_argument("--dilate-radius", type=int, help="edge mask dilation radius")
    group.add_argument("--block-size", type=int, help="line feature block side in pixels")
    group.add_argument("--levels", type=int, help="wavelet decomposition levels")
    group.add_argument("--grid", type=int, help="blocks per side in each detail band")
    if include_distance:
        group.add_argument("--distance-mode", choices=fusion.DISTANCE_MODES,
                           help="distance over bands: one concatenated norm or "
                                "the mean of per-band norms")


def _config_from_args(args):
    line = {name: getattr(args, name) for name in _LINE_FLAGS}
    wavelet = {name: getattr(args, name) for name in _WAVELET_FLAGS}
    return build_config(file_path=args.config, line_overrides=line,
                        wavelet_overrides=wavelet,
                        distance_mode=getattr(args, "distance_mode", None))


def _parse_indices(spec: str):
    indices = set()
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            indices.update(range(int(lo), int(hi) + 1))
        elif part:
            indices.add(int(part))
    if not indices:
        raise ParameterError(f"no sample indices in spec {spec!r}")
    return sorted(indices)


def cmd_synth(args) -> int:
    corpus = dataset.synth_generate(args.subjects, args.samples, args.side, args.seed)
    dataset.write_corpus(corpus, args.out, fmt=args.format)
    n_files = corpus.n_samples * len(dataset.BAND_ORDER)
    print(f"wrote {len(corpus.subject_ids)} subjects x "
          f"{args.samples} samples ({n_files} {args.format} files, "
          f"side {corpus.side}) to {args.out}")
    return 0


def _select_training(corpus, args):
    import numpy as np

    selected = {}
    if args.train_indices is not None:
        wanted = _parse_indices(args.train_indices)
        for subject in corpus.subject_ids:
            by_index = {s.sample_index: s for s in corpus.samples[subject]}
            missing = [i for i in wanted if i not in by_index]
            if missing:
                raise ParameterError(
                    f"subject {subject} lacks sample index(es) {missing}")
            selected[subject] = [by_index[i] for i in wanted]
    else:
        n = args.train_count
        rng = np.random.default_rng(args.seed) if args.seed is not None else None
        for subject in corpus.subject_ids:
            ordered = sorted(corpus.samples[subject], key=lambda s: s.sample_index)
            if len(ordered) < n:
                raise ParameterError(
                    f"subject {subject} has {len(ordered)} samples, need {n}")
            if rng is None:
                selected[subject] = ordered[:n]
            else:
                picks = sorted(rng.permutation(len(ordered))[:n].tolist())
                selected[subject] = [ordered[i] for i in picks]
    return selected


def cmd_enroll(args) -> int:
    config = _config_from_args(args)
    corpus = dataset.load_corpus(args.corpus)
    for warning in corpus.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    selected = _select_training(corpus, args)
    templates = [build_template(subject, samples, config.line, config.wavelet)
                 for subject, samples in sorted(selected.items())]
    gallery = Gallery(templates=tuple(templates), fingerprint=templates[0].fingerprint)
    save_gallery(gallery, args.out)
    print(f"enrolled {len(gallery)} classes "
          f"(n_train={len(next(iter(selected.values())))}, side {gallery.fingerprint.side}) "
          f"-> {args.out}")
    print(f"params hash: {gallery.fingerprint.params_hash}")
    return 0


def cmd_identify(args) -> int:
    gallery = load_gallery(args.gallery)
    sample = dataset.load_sample(args.probe)
    class_id, table = fusion.identify_sample(gallery, sample, args.distance_mode)
    winning_df = table.rows[table.decided_index].df
    print(f"decision: {class_id}")
    print(f"df: {winning_df:.6f}")
    print(f"margin: {table.margin:.6f}")
    if args.warn_margin is not None and winning_df > args.warn_margin:
        print(f"warning: winning df {winning_df:.6f} exceeds --warn-margin "
              f"{args.warn_margin}; probe may not be enrolled", file=sys.stderr)
    if args.scores_out:
        fusion.write_score_csv(table, args.scores_out)
        print(f"scores: {args.scores_out}")
    return 0


def cmd_evaluate(args) -> int:
    config = _config_from_args(args)
    corpus = dataset.load_corpus(args.corpus)
    for warning in corpus.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    if args.train_counts is not None:
        counts = [int(c) for c in args.train_counts.split(",") if c.strip()]
        reports = evaluation.sweep_train_count(corpus, counts, args.repeats,
                                               args.seed, config)
        print(evaluation.format_sweep_table(reports))
        if args.json_out:
            Path(args.json_out).write_text(evaluation.sweep_to_json(reports))
            print(f"report: {args.json_out}")
    else:
        report = evaluation.run_experiment(corpus, args.train_count, args.repeats,
                                           args.seed, config,
                                           scores_csv=args.scores_out)
        print(evaluation.format_report_table(report))
        if args.json_out:
            Path(args.json_out).write_text(report.to_json())
            print(f"report: {args.json_out}")
        reports = [report]

    if args.min_accuracy is not None:
        worst = min(r.mean_accuracy("hybrid") for r in reports)
        if worst < args.min_accuracy:
            print(f"error: hybrid mean accuracy {worst:.4f} below --min-accuracy "
                  f"{args.min_accuracy}", file=sys.stderr)
            return 1
    return 0


def cmd_dump_features(args) -> int:
    config = _config_from_args(args)
    sample = dataset.load_sample(args.probe)
    line = line_feature(sample, config.line).concatenated
    wavelet = wavelet_feature(sample, config.wavelet).concatenated
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["feature", "index", "value"])
        for name, vector in (("line", line), ("wavelet", wavelet)):
            for i, value in enumerate(vector):
                writer.writerow([name, i, repr(float(value))])
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="palmid",
        description="Multispectral palmprint identification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a deterministic synthetic corpus")
    p.add_argument("--subjects", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--side", type=int, required=True, help="image side (multiple of 8)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="corpus output directory")
    p.add_argument("--format", choices=("png", "pgm"), default="png")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("enroll", help="build and save a gallery from a corpus")
    p.add_argument("--corpus", required=True, help="corpus root directory")
    p.add_argument("--out", required=True, help="gallery file to write")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--train-indices",
                       help="sample indices to enroll, e.g. '0..5' or '0,2,4'")
    group.add_argument("--train-count", type=int,
                       help="number of samples per subject to enroll")
    p.add_argument("--seed", type=int,
                   help="random selection seed for --train-count (default: first samples)")
    _add_config_flags(p, include_distance=False)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("identify", help="identify one probe sample against a gallery")
    p.add_argument("--gallery", required=True)
    p.add_argument("--probe", required=True,
                   help="path prefix of the four band files (<prefix>_R.png ...)")
    p.add_argument("--distance-mode", choices=fusion.DISTANCE_MODES, default="concat")
    p.add_argument("--scores-out", help="write the per-class score table as CSV")
    p.add_argument("--warn-margin", type=float,
                   help="warn when the winning decision value exceeds this")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("evaluate", help="run identification experiments on a corpus")
    p.add_argument("--corpus", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--train-count", type=int)
    group.add_argument("--train-counts", help="comma-separated sweep, e.g. '6,5,4'")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, help="master seed (omit for the fixed first-n split)")
    p.add_argument("--json-out", help="write the machine-readable report here")
    p.add_argument("--scores-out", help="per-probe decisions CSV (single train count only)")
    p.add_argument("--min-accuracy", type=float,
                   help="exit nonzero if hybrid mean accuracy falls below this")
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("dump-features",
                       help="emit a sample's line/wavelet feature vectors as CSV")
    p.add_argument("--probe", required=True, help="path prefix of the four band files")
    p.add_argument("--out", help="CSV path (default: stdout)")
    _add_config_flags(p, include_distance=False)
    p.set_defaults(func=cmd_dump_features)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "evaluate" and args.train_counts is not None and args.scores_out:
        parser.error("--scores-out requires a single --train-count")
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except PalmidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
