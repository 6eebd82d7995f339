"""Compiled vs numpy kernels, per kernel and for one full training step.

    python benchmarks/bench_kernels.py [--repeat 20] [--no-step]

Shapes follow the default model: 16 sequences x 128 positions, d_model 128,
d_mlp 512, vocab ~1700.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from knowsan import _kernels

STEP_SNIPPET = """
import time, numpy as np
from knowsan import _kernels
from knowsan.methods.loop import full_grads, make_batch
from knowsan.model import TransformerConfig, init_weights
cfg = TransformerConfig(vocab_size=1700, n_layers=4, d_model=128, n_heads=4, d_mlp=512, context=128)
arrays = init_weights(cfg, 0).mutable_copy()
r = np.random.default_rng(0)
batch = make_batch([r.integers(5, 1700, 100).tolist() for _ in range(16)])
full_grads(cfg, arrays, batch)
t0 = time.perf_counter()
for _ in range({n}):
    full_grads(cfg, arrays, batch)
print(_kernels.BACKEND, (time.perf_counter() - t0) / {n})
"""


def cases(rng):
    rows, d, h, v = 16 * 128, 128, 512, 1700
    x = rng.standard_normal((rows, d)).astype(np.float32)
    g, b = np.ones(d, np.float32), np.zeros(d, np.float32)
    hx = rng.standard_normal((rows, h)).astype(np.float32)
    att = rng.standard_normal((16 * 4 * 128, 128)).astype(np.float32)
    logits = rng.standard_normal((rows, v)).astype(np.float32)
    tg = rng.integers(0, v, rows)
    w = np.ones(rows)
    p = rng.standard_normal(d * h).astype(np.float32)

    def ln(k):
        y, m, r = k.layernorm_forward(x, g, b, 1e-5)
        k.layernorm_backward(x, x, g, m, r)

    def ce(k):
        _, s = k.cross_entropy_forward(logits, tg, w)
        k.cross_entropy_backward(logits, tg, w, s, 1.0)

    def adam(k):
        k.adam_update(p.copy(), p, np.zeros_like(p), np.zeros_like(p), 1e-3, 0.9, 0.999, 1e-8, 1)

    return {
        "layernorm fwd+bwd": ln,
        "gelu fwd+bwd": lambda k: k.gelu_backward(k.gelu_forward(hx), hx),
        "softmax rows": lambda k: k.softmax_rows_backward(att, k.softmax_rows(att)),
        "cross-entropy fwd+bwd": ce,
        "adam update": adam,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--steps", type=int, default=3)
    ap.add_argument("--no-step", action="store_true", help="skip the end-to-end training step")
    args = ap.parse_args()
    if not _kernels.compiled_available():
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
    backends = {name: _kernels.get_backend(name) for name in ("numpy", "cython")}
    print(f"{'kernel':24s}{'numpy ms':>10s}{'cython ms':>11s}{'speedup':>9s}")
    for name, fn in cases(np.random.default_rng(0)).items():
        t = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) * 1e3 for b, k in backends.items()}
        print(f"{name:24s}{t['numpy']:10.2f}{t['cython']:11.2f}{t['numpy'] / t['cython']:8.2f}x")
    if args.no_step:
        return
    step = {}
    for pure in ("1", "0"):
        env = dict(os.environ, KNOWSAN_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", STEP_SNIPPET.format(n=args.steps)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        step[out[0]] = float(out[1]) * 1e3
    print(f"{'training step (full)':24s}{step['numpy']:10.1f}{step['cython']:11.1f}"
          f"{step['numpy'] / step['cython']:8.2f}x")


if __name__ == "__main__":
    main()
