#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python twin.

Part 1 times each kernel directly on both backends. Part 2 times a full
pipeline run (synth -> folds + features -> LogitBoost + random forest) in a
subprocess per backend, since the backend is frozen at import time.

Usage: python benchmarks/bench_kernels.py [--skip-pipeline]
"""

import argparse
import os
import random
import subprocess
import sys
import time

import numpy as np

from profilematch._kernels import _pykernels as pyk

try:
    from profilematch._kernels import _ckernels as ck
except ImportError:
    ck = None


def time_call(fn, args_list, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def random_word(rng, lo, hi):
    return "".join(rng.choice("abcdefghijklmnopqrstuvwxyz ") for _ in range(rng.randint(lo, hi)))


def kernel_workloads():
    rng = random.Random(1)
    name_pairs = [(random_word(rng, 8, 24), random_word(rng, 8, 24)) for _ in range(2000)]
    lcs_pairs = [(a, b, 2) for a, b in name_pairs[:500]]
    gen = np.random.default_rng(2)
    split_args = []
    for _ in range(300):
        n = 400
        xs = np.sort(gen.uniform(0, 1, n))
        zs = gen.normal(size=n)
        ws = gen.uniform(0.1, 1.0, n)
        split_args.append((xs, zs, ws))
    gini_args = [
        (xs, (gen.uniform(size=len(xs)) < 0.3).astype(np.float64), ws)
        for xs, _, ws in split_args
    ]
    return {
        "dl_distance (2000 name pairs)": ("dl_distance", name_pairs),
        "jaro_winkler (2000 name pairs)": ("jaro_winkler", name_pairs),
        "lcs_total    (500 name pairs)": ("lcs_total", lcs_pairs),
        "regression_split (300x400 rows)": ("best_regression_split", split_args),
        "gini_split       (300x400 rows)": ("best_gini_split", gini_args),
    }


PIPELINE_SNIPPET = """
import time
from profilematch import BACKEND
from profilematch.synth import SynthConfig, generate_corpora
from profilematch.folds import build_foldset, extract_fold_features
from profilematch.learn import LearnerConfig
from profilematch.evaluate import run_scenario
import logging; logging.disable(logging.WARNING)

t0 = time.perf_counter()
cfg = SynthConfig(n_profiles_per_network=600, n_matched=300, seed=1)
s1, s2, pos, ref = generate_corpora(cfg)
foldset, _ = build_foldset(s1, s2, pos, k=10, n_per_side=5, seed=2)
t1 = time.perf_counter()
fold_data = extract_fold_features(foldset, s1, s2, ref)
t2 = time.perf_counter()
run_scenario(fold_data, LearnerConfig(kind="logitboost", iterations=25, seed=0), "A")
t3 = time.perf_counter()
run_scenario(fold_data, LearnerConfig(kind="random_forest", n_trees=150, seed=0), "A")
t4 = time.perf_counter()
print(f"{BACKEND:>8}: synth+folds {t1-t0:6.2f}s  features {t2-t1:6.2f}s  "
      f"logitboost x10 {t3-t2:6.2f}s  forest x10 {t4-t3:6.2f}s")
"""


def run_pipeline_bench():
    print("\npipeline (600+600 profiles, 300 matches, 10 folds):", flush=True)
    for env_value in ("", "1"):
        env = dict(os.environ)
        if env_value:
            env["PROFILEMATCH_PURE_PYTHON"] = env_value
        else:
            env.pop("PROFILEMATCH_PURE_PYTHON", None)
        subprocess.run([sys.executable, "-c", PIPELINE_SNIPPET], env=env, check=True)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--skip-pipeline", action="store_true")
    args = parser.parse_args()

    if ck is None:
        print("compiled kernels not built; timing the pure backend only")
    print(f"{'kernel':<34} {'pure':>9} {'compiled':>9} {'speedup':>8}")
    for label, (fn_name, workload) in kernel_workloads().items():
        t_pure = time_call(getattr(pyk, fn_name), workload)
        if ck is not None:
            t_c = time_call(getattr(ck, fn_name), workload)
            print(f"{label:<34} {t_pure:8.3f}s {t_c:8.3f}s {t_pure / t_c:7.1f}x", flush=True)
        else:
            print(f"{label:<34} {t_pure:8.3f}s {'-':>9} {'-':>8}", flush=True)

    if not args.skip_pipeline:
        run_pipeline_bench()


if __name__ == "__main__":
    main()
