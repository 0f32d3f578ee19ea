"""Command-line entry point.

Subcommands: generate, fit, features, train-tree, tune-tree,
tune-window, report. Data records go to stdout, diagnostics to stderr;
exit status is 0 on success, 1 on validation errors, 2 on I/O errors.
"""

import argparse
import csv
import os
import sys

from . import datagen, dtree, pipeline, sampling
from .cube import CubeGeometry
from .cubeio import DatasetHandle, FormatError
from .distfit import KIND_SETS


def _parse_dims(text):
    try:
        nz, ny, nx = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise ValueError(f"--dims must look like ZxYxX, got {text!r}")
    return CubeGeometry(points_per_line=nx, lines_per_slice=ny, slice_count=nz)


def _default_threads():
    return int(os.environ.get("PDFCUBE_THREADS", "1"))


def _cmd_generate(args):
    geom = _parse_dims(args.dims)
    config = datagen.GenConfig(
        geometry=geom,
        layers=datagen.cycling_layers(args.layers),
        run_count=args.runs,
        seed=args.seed,
        duplicate_fraction=args.dup_frac,
        spatial_gradient=args.gradient,
    )
    handle, gt = datagen.generate(config, args.out)
    if args.labels_slice is not None:
        labels = datagen.ground_truth_labels(handle, gt, args.labels_slice)
        path = os.path.join(args.out, f"labels_slice{args.labels_slice}.csv")
        datagen.write_labels(path, labels)
        print(f"labels={path}")
    print(f"dataset={args.out},runs={handle.run_count},"
          f"points={geom.total_points}")
    return 0


def _cmd_fit(args):
    with DatasetHandle.open(args.data) as handle:
        model = dtree.load_model(args.model) if args.model else None
        if pipeline.Method(args.method).predicts and model is None:
            raise ValueError(f"--method {args.method} requires --model")
        summary = pipeline.run_slice(
            handle,
            args.slice,
            args.method,
            kind_set=args.types,
            window_lines=args.window_lines,
            thread_count=args.threads,
            model=model,
            bin_count=args.bins,
            out_path=args.out,
            strict_group=args.strict_group,
        )
    line = summary.to_line()
    if args.summary_out:
        with open(args.summary_out, "w") as f:
            f.write(line + "\n")
    print(line)
    return 0


def _cmd_features(args):
    with DatasetHandle.open(args.data) as handle:
        model = dtree.load_model(args.model)
        config = sampling.SamplingConfig(
            rate=args.rate,
            sampler=args.sampler,
            seed=args.seed,
            group_before_predict=args.group,
        )
        feats = sampling.slice_features(
            handle, args.slice, config, model, kinds=KIND_SETS[args.types]
        )
    pct = ",".join(
        f"pct_{k.value}={feats.type_percentages[k]!r}"
        for k in sorted(feats.type_percentages, key=lambda k: k.order)
    )
    print(
        f"slice={args.slice},rate={args.rate!r},sampler={args.sampler},"
        f"sampled={feats.sampled_count},avg_mean={feats.avg_mean!r},"
        f"avg_std={feats.avg_std!r},{pct}"
    )
    return 0


def _cmd_train_tree(args):
    labels = datagen.read_labels(args.labels)
    hp = dtree.Hyperparams(args.depth, args.max_bins)
    import numpy as np

    rng = np.random.default_rng(args.seed)
    order = rng.permutation(len(labels))
    cut = int(len(labels) * args.split)
    if cut == 0 or cut == len(labels):
        raise ValueError("--split leaves an empty partition")
    train_set = [labels[i] for i in order[:cut]]
    test_set = [labels[i] for i in order[cut:]]
    model = dtree.train(train_set, hp, seed=args.seed)
    err = dtree.model_error(model, test_set)
    if args.out:
        dtree.save_model(model, args.out)
    print(f"depth={hp.depth},max_bins={hp.max_bins},model_error={err!r}")
    return 0


def _cmd_tune_tree(args):
    labels = datagen.read_labels(args.labels)
    depth_grid = [int(v) for v in args.depth_grid.split(",")]
    bins_grid = [int(v) for v in args.bins_grid.split(",")]
    hp = dtree.tune(labels, depth_grid, bins_grid, args.split, seed=args.seed)
    model = dtree.train(labels, hp, seed=args.seed)
    err = dtree.model_error(model, labels)
    if args.out:
        dtree.save_model(model, args.out)
    print(f"depth={hp.depth},max_bins={hp.max_bins},training_error={err!r}")
    return 0


def _cmd_tune_window(args):
    with DatasetHandle.open(args.data) as handle:
        candidates = [int(v) for v in args.candidates.split(",")]
        best = pipeline.tune_window(
            handle,
            args.slice,
            args.method,
            candidates,
            args.probe_windows,
            kind_set=args.types,
        )
    print(f"window_lines={best}")
    return 0


_REPORT_COLUMNS = [
    "method", "types", "window_lines", "threads", "points", "group_count",
    "fit_invocations", "reuse_hits", "load_seconds", "compute_seconds",
    "average_error",
]


def _cmd_report(args):
    rows = []
    if os.path.isdir(args.summaries):
        names = sorted(os.listdir(args.summaries))
        for name in names:
            path = os.path.join(args.summaries, name)
            if not os.path.isfile(path):
                continue
            with open(path) as f:
                for line in f:
                    if line.strip():
                        rows.append(pipeline.RunSummary.from_line(line))
    else:
        raise ValueError(f"--summaries must name a directory: {args.summaries}")
    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(_REPORT_COLUMNS)
        for s in rows:
            writer.writerow([
                s.method, s.kind_set, s.window_lines, s.thread_count,
                s.point_count, s.group_count, s.fit_invocations,
                s.reuse_hits, s.load_seconds, s.compute_seconds,
                s.average_error,
            ])
    print(f"report={args.out},rows={len(rows)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pdfcube",
        description="Per-point PDF fitting over volumetric ensemble datasets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic ensemble dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--dims", required=True, help="ZxYxX, e.g. 8x16x16")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--layers", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dup-frac", type=float, default=0.3)
    p.add_argument("--gradient", type=float, default=0.0)
    p.add_argument("--labels-slice", type=int, default=None,
                   help="also write (mean,std,kind) labels for this slice")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("fit", help="fit per-point PDFs over one slice")
    p.add_argument("--data", required=True)
    p.add_argument("--slice", type=int, default=0)
    p.add_argument("--method", default="baseline",
                   choices=[m.value for m in pipeline.Method])
    p.add_argument("--types", default="4", choices=["4", "10"])
    p.add_argument("--window-lines", type=int, default=25)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--model", default=None)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--strict-group", action="store_true")
    p.add_argument("--out", required=True, help="per-point result file")
    p.add_argument("--summary-out", default=None)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("features", help="estimate slice features by sampling")
    p.add_argument("--data", required=True)
    p.add_argument("--slice", type=int, default=0)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--sampler", default="random", choices=["random", "kmeans"])
    p.add_argument("--model", required=True)
    p.add_argument("--types", default="4", choices=["4", "10"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--group", action="store_true")
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("train-tree", help="train a decision tree on labels")
    p.add_argument("--labels", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--max-bins", type=int, required=True)
    p.add_argument("--split", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_train_tree)

    p = sub.add_parser("tune-tree", help="grid-search tree hyperparameters")
    p.add_argument("--labels", required=True)
    p.add_argument("--depth-grid", required=True, help="e.g. 1,2,3,4")
    p.add_argument("--bins-grid", required=True, help="e.g. 8,16,32")
    p.add_argument("--split", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_tune_tree)

    p = sub.add_parser("tune-window", help="probe for the fastest window size")
    p.add_argument("--data", required=True)
    p.add_argument("--slice", type=int, default=0)
    p.add_argument("--method", default="grouping",
                   choices=[m.value for m in pipeline.Method])
    p.add_argument("--types", default="4", choices=["4", "10"])
    p.add_argument("--candidates", required=True, help="e.g. 5,10,25,50")
    p.add_argument("--probe-windows", type=int, default=1)
    p.set_defaults(func=_cmd_tune_window)

    p = sub.add_parser("report", help="collect run summaries into a CSV")
    p.add_argument("--summaries", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, FormatError, OSError) as exc:
        print(f"pdfcube: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"pdfcube: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
