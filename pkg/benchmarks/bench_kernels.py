"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from lsbpls import _kernels_py

try:
    from lsbpls import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

CASES = [
    # (label, pixels, characters)
    ("225x225, 192 chars", 225 * 225, 192),
    ("512x512, 4096 chars", 512 * 512, 4096),
    ("2048x2048, 65536 chars", 2048 * 2048, 65536),
]


def make_case(pixels, chars, seed=0):
    rng = np.random.default_rng(seed)
    flat = rng.integers(0, 256, 3 * pixels, dtype=np.uint8)
    choices = rng.integers(0, pixels - np.arange(3 * chars), dtype=np.int64)
    pls = np.asarray(_kernels_py.partial_shuffle(pixels, choices), dtype=np.int64)
    payload = rng.choice(np.frombuffer(b"0123456789abcdef", np.uint8), chars)
    return flat, choices, pls, payload


def bench(impl, flat, choices, pls, payload, repeat):
    n = len(flat) // 3
    work = flat.copy()
    timings = {
        "shuffle": lambda: impl.partial_shuffle(n, choices),
        "embed": lambda: impl.embed_bits(work, pls, payload),
        "extract": lambda: impl.extract_bits(work, pls),
    }
    return {name: min(timeit.repeat(fn, number=1, repeat=repeat)) for name, fn in timings.items()}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    print(f"{'case':<26}{'kernel':<10}" + "".join(f"{b:>12}" for b, _ in impls) + f"{'speedup':>10}")
    for label, pixels, chars in CASES:
        data = make_case(pixels, chars)
        results = {name: bench(impl, *data, args.repeat) for name, impl in impls}
        for kernel in ("shuffle", "embed", "extract"):
            row = f"{label:<26}{kernel:<10}" + "".join(f"{results[b][kernel] * 1e3:>10.2f}ms" for b, _ in impls)
            if _kernels_c:
                row += f"{results['python'][kernel] / results['cython'][kernel]:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
