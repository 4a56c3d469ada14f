"""Compiled kernels against the pure fallback.

Two views:

* per kernel, in one process: the ``_nb`` function against its ``*_py``
  twin on the same inputs; the first call, which may compile or load
  the numba cache, is timed on its own;
* end to end: a fixed workload run in two subprocesses, one of them with
  ``RAAGMM_DISABLE_NUMBA=1``.

    python benchmarks/bench_kernels.py [--repeat 5] [--skip-e2e]
"""
import argparse
import os
import random
import subprocess
import sys
import time

import numpy as np

from raagmm import _kernels as K
from raagmm.graph import SimplicialGraph
from raagmm.reductivity import _flat, _img_flat, all_partial_conjugations, exponent_classes
from raagmm.verify import random_graph, random_word_set
from raagmm.whitehead import _petal_array, enumerate_partitions, enumerate_whitehead_poset
from raagmm.words import _images


def arr(x):
    return np.asarray(x, dtype=np.int64)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(seed=0):
    rng = random.Random(seed)
    g = random_graph(rng, 8, 0.3)
    words = [[rng.choice((1, -1)) * rng.randint(1, g.n) for _ in range(60)] for _ in range(300)]
    W = random_word_set(g, rng, 40, 30)
    flat, offsets = _flat(W)
    pcs = list(all_partial_conjugations(g))
    factors = tuple(rng.choice(pcs) for _ in range(6))
    img_flat, img_offsets = _img_flat(_images(g, factors))

    e = SimplicialGraph.edgeless(6)
    a = 0
    A = next(P for P in enumerate_partitions(e, a) if P.length == 4)
    petal_of = [-1] * e.n
    for i, P in enumerate(A.petals):
        for v in range(e.n):
            if P >> v & 1:
                petal_of[v] = i
    We = random_word_set(e, rng, 30, 20)
    eflat, eoffsets = _flat(We)
    exps = exponent_classes(A.length, 3)

    p5 = enumerate_whitehead_poset(SimplicialGraph.edgeless(5))
    ca, cb = (_petal_array(enumerate_partitions(SimplicialGraph.edgeless(6), v)) for v in (0, 1))
    strict = p5.strict
    comm = g.commute_matrix
    ecomm = e.commute_matrix

    return {
        "reduce (300 words of length 60)": (
            lambda: [K._reduce_nb(arr(w), comm) for w in words],
            lambda: [K.reduce_py(w, g._adj) for w in words]),
        "height (40 words, 6-factor marking)": (
            lambda: K._height_nb(arr(flat), arr(offsets), arr(img_flat), arr(img_offsets), comm),
            lambda: K.height_py(flat, offsets, img_flat, img_offsets, g._adj)),
        f"carried heights ({len(exps)} exponent classes)": (
            lambda: K._carried_heights_nb(arr(eflat), arr(eoffsets), arr(petal_of), np.int64(a + 1), exps, ecomm),
            lambda: K.carried_heights_py(eflat, eoffsets, petal_of, a + 1, exps, e._adj)),
        f"crossing matrix ({len(ca)}x{len(cb)} partitions)": (
            lambda: K._crossing_matrix_nb(ca, cb, np.int64(1), np.int64(2)),
            lambda: K.crossing_matrix_py(ca, cb, 1, 2)),
        f"cover matrix (poset of {len(p5)})": (
            lambda: K._cover_matrix_nb(strict),
            lambda: K.cover_matrix_py(strict)),
    }


_E2E = """
import random, time
from raagmm.graph import SimplicialGraph
from raagmm.complex import cohomological_dimension
from raagmm.reductivity import find_strictly_reductive, transform, w0, all_partial_conjugations
from raagmm.verify import random_graph, suite_day
from raagmm.words import SymmetricAutomorphism
t0 = time.perf_counter()
cohomological_dimension(SimplicialGraph.edgeless(5))
rng = random.Random(0)
for _ in range(20):
    g = random_graph(rng, 6, 0.3)
    suite_day(g, rng, 200)
g = SimplicialGraph.edgeless(5)
pcs = list(all_partial_conjugations(g))
for _ in range(50):
    a = SymmetricAutomorphism(tuple(rng.choice(pcs) for _ in range(3)))
    find_strictly_reductive(g, transform(g, a, w0(g)))
print(time.perf_counter() - t0)
"""


def end_to_end(disable):
    env = dict(os.environ)
    env.pop("RAAGMM_DISABLE_NUMBA", None)
    if disable:
        env["RAAGMM_DISABLE_NUMBA"] = "1"
    t0 = time.perf_counter()
    out = subprocess.run([sys.executable, "-c", _E2E], env=env, capture_output=True, text=True, check=True)
    return time.perf_counter() - t0, float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()

    if not K.HAS_NUMBA:
        print("numba is not active in this process; only the end-to-end comparison is meaningful")
    print(f"{'kernel':<45}{'numba':>12}{'fallback':>12}{'speedup':>10}{'first call':>12}")
    for name, (nb, py) in workloads().items():
        t0 = time.perf_counter()
        nb()
        first = time.perf_counter() - t0
        t_nb = best_of(nb, args.repeat)
        t_py = best_of(py, args.repeat)
        print(f"{name:<45}{t_nb * 1e3:>10.2f}ms{t_py * 1e3:>10.2f}ms{t_py / max(t_nb, 1e-9):>9.1f}x"
              f"{first:>11.2f}s")

    if args.skip_e2e:
        return
    print()
    print(f"{'end to end':<45}{'wall':>12}{'work':>12}")
    for label, disable in (("numba", False), ("fallback (RAAGMM_DISABLE_NUMBA=1)", True)):
        wall, work = end_to_end(disable)
        print(f"{label:<45}{wall:>11.2f}s{work:>11.2f}s")


if __name__ == "__main__":
    main()
