"""Compare the compiled and numpy kernel backends.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Prints one line
per case with the best-of-N wall time of each backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from quantumness import _pykernels, kernels
from quantumness.circuit import ShiftOperator
from quantumness.states import mixed_family
from quantumness.witness import tensor_power_witness

try:
    from quantumness import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _with_backend(impl, fn):
    def run():
        saved = kernels._impl
        kernels._impl = impl
        try:
            return fn()
        finally:
            kernels._impl = saved
    return run


def cases():
    rng = np.random.default_rng(0)
    gate = np.array([[0.3, 0.1 + 0.2j], [0.1 - 0.2j, 0.7]], dtype=np.complex128)
    for q in (10, 14, 18):
        vec = rng.normal(size=2**q) + 1j * rng.normal(size=2**q)
        yield f"apply_gate_all q={q}", lambda v=vec: kernels.apply_gate_all(v, gate)
    for l, d in ((8, 2), (6, 4), (4, 8)):
        mats = rng.normal(size=(l, d, d)) + 1j * rng.normal(size=(l, d, d))
        src = ShiftOperator(l, d).inverse
        yield f"permuted_product_trace l={l} d={d}", lambda m=mats, s=src: kernels.permuted_product_trace(m, s)
    rho_x, rho_z = mixed_family(0.4, "x"), mixed_family(0.4, "z")
    for n in (12, 13):
        yield f"min eigenvalue J^({n}) matrix-free", \
            lambda n=n: tensor_power_witness(rho_x, rho_z, n).min_eigenvalue()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'case':42s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in cases():
        t_py = _best(_with_backend(_pykernels, fn), args.repeat)
        if _ckernels is None:
            print(f"{name:42s} {t_py:11.4f} {'-':>11s} {'-':>8s}")
            continue
        t_c = _best(_with_backend(_ckernels, fn), args.repeat)
        print(f"{name:42s} {t_py:11.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
