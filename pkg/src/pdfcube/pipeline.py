"""Slice-run orchestration: windowing, method selection, parallel
fitting, per-point result persistence and run metrics.

A run walks the slice window by window: load the window, select the
points to fit (identity, or one representative per stat group), fit
them (best-of-set search, or predict-then-fit for the ML methods),
expand group results back to members and append the per-point lines to
the result file. Results are merged in point-id order, so output files
are byte-identical across worker counts.

Workers are OS processes (fitting is CPU bound); ``thread_count`` names
the worker count to match the loading stage's thread pool.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cube import point_coords, windows_for_slice
from .cubeio import load_window
from .distfit import (
    KIND_SETS,
    DistributionKind,
    fit_best,
    fit_with_kind,
)
from .grouping import PointGroup, ReuseCache, group_window, stat_key, strict_key


class Method(Enum):
    BASELINE = "baseline"
    GROUPING = "grouping"
    REUSE = "reuse"
    ML = "ml"
    GROUPING_ML = "grouping-ml"
    REUSE_ML = "reuse-ml"

    @property
    def groups(self):
        return self in (Method.GROUPING, Method.REUSE, Method.GROUPING_ML, Method.REUSE_ML)

    @property
    def reuses(self):
        return self in (Method.REUSE, Method.REUSE_ML)

    @property
    def predicts(self):
        return self in (Method.ML, Method.GROUPING_ML, Method.REUSE_ML)


@dataclass(frozen=True)
class RunSummary:
    method: str
    kind_set: str
    window_lines: int
    thread_count: int
    point_count: int
    group_count: int
    fit_invocations: int
    reuse_hits: int
    load_seconds: float
    compute_seconds: float
    average_error: float
    results_path: str | None

    def to_line(self):
        fields = [
            f"method={self.method}",
            f"types={self.kind_set}",
            f"window_lines={self.window_lines}",
            f"threads={self.thread_count}",
            f"points={self.point_count}",
            f"group_count={self.group_count}",
            f"fit_invocations={self.fit_invocations}",
            f"reuse_hits={self.reuse_hits}",
            f"load_seconds={self.load_seconds:.6f}",
            f"compute_seconds={self.compute_seconds:.6f}",
            f"average_error={self.average_error!r}",
            f"results={self.results_path or ''}",
        ]
        return ",".join(fields)

    @classmethod
    def from_line(cls, line):
        kv = dict(item.split("=", 1) for item in line.strip().split(","))
        return cls(
            method=kv["method"],
            kind_set=kv["types"],
            window_lines=int(kv["window_lines"]),
            thread_count=int(kv["threads"]),
            point_count=int(kv["points"]),
            group_count=int(kv["group_count"]),
            fit_invocations=int(kv["fit_invocations"]),
            reuse_hits=int(kv["reuse_hits"]),
            load_seconds=float(kv["load_seconds"]),
            compute_seconds=float(kv["compute_seconds"]),
            average_error=float(kv["average_error"]),
            results_path=kv["results"] or None,
        )


def loading_parallelism_cap(worker_count, cores_per_worker):
    """Maximum points in flight for the loading stage."""
    if worker_count < 1 or cores_per_worker < 1:
        raise ValueError("worker and core counts must be >= 1")
    return worker_count * cores_per_worker


def _fit_one(task):
    values, predicted, kinds, bin_count = task
    if predicted is None:
        return fit_best(values, kinds, bin_count)
    return fit_with_kind(values, predicted, bin_count, active_kinds=kinds)


def _result_line(pid, geom, fit):
    x, y, _ = point_coords(pid, geom)
    p = fit.params
    p3 = "" if p.p3 is None else repr(p.p3)
    return f"{pid},{x},{y},{p.kind.value},{p.p1!r},{p.p2!r},{p3},{fit.error!r}"


def run_slice(
    handle,
    slice_index,
    method,
    kind_set="4",
    window_lines=25,
    thread_count=1,
    model=None,
    bin_count=100,
    out_path=None,
    strict_group=False,
    group_digits=9,
    group_epsilon=None,
    parallelism_cap=None,
    max_windows=None,
    load_trace=None,
):
    """Fit every point of a slice under ``method``; returns a RunSummary.

    ``kind_set`` is "4", "10" or an explicit kind sequence. Per-point
    results are appended to ``out_path`` (skipped when None) in point-id
    order as each window completes.
    """
    method = Method(method)
    kinds = KIND_SETS[kind_set] if isinstance(kind_set, str) else tuple(kind_set)
    kind_set_name = kind_set if isinstance(kind_set, str) else "custom"
    if method.predicts and model is None:
        raise ValueError(f"method {method.value} requires a trained model")

    if strict_group:
        key_fn = strict_key
    else:
        key_fn = lambda rec: stat_key(rec, digits=group_digits, epsilon=group_epsilon)

    cache = ReuseCache() if method.reuses else None
    windows = windows_for_slice(handle.geometry, slice_index, window_lines)
    if max_windows is not None:
        windows = windows[:max_windows]

    pool = None
    if thread_count > 1:
        pool = ProcessPoolExecutor(max_workers=thread_count)

    errors = []
    fit_invocations = 0
    group_count = 0
    load_seconds = 0.0
    compute_seconds = 0.0
    point_count = 0
    out = open(out_path, "w") if out_path else None

    try:
        for window in windows:
            t0 = time.monotonic()
            records = load_window(
                handle,
                window,
                thread_count=thread_count,
                parallelism_cap=parallelism_cap,
                trace=load_trace,
            )
            load_seconds += time.monotonic() - t0
            point_count += len(records)

            t0 = time.monotonic()
            if method.groups:
                groups = group_window(records, key_fn=key_fn)
            else:
                groups = [
                    PointGroup(rec.id, rec, (rec.id,)) for rec in records
                ]
            group_count += len(groups)

            # Resolve cache hits up front so workers stay stateless.
            resolved = {}
            to_fit = []
            for group in groups:
                if cache is not None:
                    fit = cache.get(group.key)
                    if fit is not None:
                        resolved[group.key] = fit
                        continue
                rep = group.representative
                predicted = (
                    model.predict(rep.stats.mean, rep.stats.std)
                    if method.predicts
                    else None
                )
                to_fit.append((group.key, (rep.values, predicted, kinds, bin_count)))

            tasks = [task for _, task in to_fit]
            if pool is not None and tasks:
                chunk = max(1, len(tasks) // (thread_count * 4))
                results = list(pool.map(_fit_one, tasks, chunksize=chunk))
            else:
                results = [_fit_one(task) for task in tasks]
            fit_invocations += len(tasks)

            for (key, _), fit in zip(to_fit, results):
                if cache is not None:
                    fit = cache.insert(key, fit)
                resolved[key] = fit

            per_point = {}
            for group in groups:
                for pid in group.member_ids:
                    per_point[pid] = resolved[group.key]
            for pid in sorted(per_point):
                fit = per_point[pid]
                errors.append(fit.error)
                if out is not None:
                    out.write(_result_line(pid, handle.geometry, fit) + "\n")
            compute_seconds += time.monotonic() - t0
    finally:
        if out is not None:
            out.close()
        if pool is not None:
            pool.shutdown()

    return RunSummary(
        method=method.value,
        kind_set=kind_set_name,
        window_lines=window_lines,
        thread_count=thread_count,
        point_count=point_count,
        group_count=group_count if method.groups else 0,
        fit_invocations=fit_invocations,
        reuse_hits=cache.hits if cache is not None else 0,
        load_seconds=load_seconds,
        compute_seconds=compute_seconds,
        average_error=float(np.mean(errors)),
        results_path=out_path,
    )


def tune_window(
    handle,
    slice_index,
    method,
    candidate_sizes,
    probe_windows,
    measure=None,
    **run_kwargs,
):
    """Window size with the smallest measured per-line computation time.

    ``measure`` (size -> seconds per line) is an injectable seam for
    tests; the default probes ``probe_windows`` real windows per size.
    """
    if not candidate_sizes:
        raise ValueError("need at least one candidate size")
    if probe_windows < 1:
        raise ValueError("probe_windows must be >= 1")

    def probe(size):
        summary = run_slice(
            handle,
            slice_index,
            method,
            window_lines=size,
            max_windows=probe_windows,
            out_path=None,
            **run_kwargs,
        )
        lines = summary.point_count / handle.geometry.points_per_line
        return summary.compute_seconds / lines

    measure = measure or probe
    best_size = None
    best_time = None
    for size in sorted(candidate_sizes):
        t = measure(size)
        if best_time is None or t < best_time:
            best_size, best_time = size, t
    return best_size
