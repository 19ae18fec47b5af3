"""Time the compiled kernels against the numpy fallback and check they agree.

Run with ``python benchmarks/bench_kernels.py``; build the extension first
with ``python setup.py build_ext --inplace``.
"""
import time

import numpy as np

from fbcount import _kernels_py as py

try:
    from fbcount import _kernels as cy
except ImportError:
    cy = None


def _curve(n, seed):
    rng = np.random.default_rng(seed)
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    F = np.column_stack([np.cos(t), np.sin(t), 0.3 * np.sin(3 * t + rng.uniform())])
    F /= np.linalg.norm(F, axis=1, keepdims=True)
    return F, np.ones(n)


def _time(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    for n in (512, 1024, 2048):
        a, sa = _curve(n, 1)
        b, sb = _curve(n, 2)
        args = (a, b, sa, sb, 2 * np.pi / n, 4.0, 2, False)
        tp, rp = _time(py.grid_seeds, *args)
        line = f"grid_seeds n={n}: numpy {tp * 1e3:8.1f} ms"
        if cy is not None:
            tc, rc = _time(cy.grid_seeds, *args)
            same = np.array_equal(rp, rc)
            line += f"  compiled {tc * 1e3:8.1f} ms  equal={same}"
        print(line)
    rng = np.random.default_rng(0)
    P = rng.normal(size=(200_001, 3))
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    ci = rng.integers(0, 200_000, 1_000_000)
    cj = rng.integers(0, 200_000, 1_000_000)
    # a segment paired with itself is degenerate; callers never ask for it
    keep = ci != cj
    ci, cj = ci[keep], cj[keep]
    tp, (mp, up, vp) = _time(py.arc_pairs, P, P, ci, cj)
    line = f"arc_pairs 1e6 pairs: numpy {tp * 1e3:8.1f} ms"
    if cy is not None:
        tc, (mc, uc, vc) = _time(cy.arc_pairs, P, P, ci, cj)
        same = np.array_equal(mp, mc) and np.allclose(up[mp], uc[mc], rtol=1e-12)
        line += f"  compiled {tc * 1e3:8.1f} ms  equal={same}"
    print(line)


if __name__ == "__main__":
    main()
