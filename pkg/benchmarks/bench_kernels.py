#!/usr/bin/env python3
"""Benchmark the training kernels on the numba and pure-numpy backends.

Runs one batched forward+backward step repeatedly for each backend (each in
a fresh subprocess so the backend choice is clean) and reports per-step
timings side by side.

    python3 benchmarks/bench_kernels.py [--batch 64] [--dim 300] [--steps 200]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_backend(backend: str, args) -> dict:
    env = dict(os.environ, DEFINNET_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, __file__, "--worker", "--batch", str(args.batch),
         "--dim", str(args.dim), "--steps", str(args.steps)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def worker(args) -> None:
    import numpy as np

    from definnet import kernels
    from definnet.denn import DennConfig, DennModel, TrainExample, loss_and_grads

    cfg = DennConfig(
        dim=args.dim, pos_vocab=("NN", "NNS", "VB", "JJ"), pos_dim=16,
        hidden1=512, hidden2=512, dropout_p=0.1, seed=0,
    )
    model = DennModel.initialize(cfg)
    rng = np.random.default_rng(0)
    batch = [
        TrainExample(
            vec_h=rng.standard_normal(args.dim).astype(np.float32),
            vec_m=rng.standard_normal(args.dim).astype(np.float32),
            pos_h=0, pos_m=1, pos_c=2,
            target=rng.standard_normal(args.dim).astype(np.float32),
        )
        for _ in range(args.batch)
    ]
    # warmup covers JIT compilation on the numba path
    for _ in range(3):
        loss_and_grads(model, batch, train_mode=True, rng=rng)
    t0 = time.perf_counter()
    for _ in range(args.steps):
        loss_and_grads(model, batch, train_mode=True, rng=rng)
    elapsed = time.perf_counter() - t0
    print(json.dumps({
        "backend": kernels.BACKEND,
        "ms_per_step": 1000.0 * elapsed / args.steps,
        "steps": args.steps,
    }))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=64)
    ap.add_argument("--dim", type=int, default=300)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--worker", action="store_true")
    args = ap.parse_args()
    if args.worker:
        worker(args)
        return
    print(f"batch={args.batch} dim={args.dim} steps={args.steps}")
    results = {}
    for backend in ("numpy", "numba"):
        try:
            results[backend] = run_backend(backend, args)
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: failed ({exc.stderr.strip().splitlines()[-1]})")
    for backend, r in results.items():
        print(f"{backend:>6}: {r['ms_per_step']:8.3f} ms/step")
    if len(results) == 2:
        ratio = results["numpy"]["ms_per_step"] / results["numba"]["ms_per_step"]
        print(f"numba speedup over numpy: {ratio:.2f}x")


if __name__ == "__main__":
    main()
