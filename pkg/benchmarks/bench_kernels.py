"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times dense elimination, Groebner bases and a full ``check`` of each corpus
instance under both backends, and confirms the outputs agree.
"""

import argparse
import random
import time
from math import prod

from fibertool import kernels
from fibertool.cli import corpus_files
from fibertool.groebner import buchberger
from fibertool.instance import parse_instance
from fibertool.poly import PolyRing
from fibertool.verdict import Analysis, full_report

P = 32003


def dense_rank_job():
    rng = random.Random(1)
    rows = [[rng.randrange(P) for _ in range(120)] for _ in range(150)]
    return kernels.rank(rows, 120, P)


def groebner_job():
    """Homogenized cyclic-5."""
    S = PolyRing(tuple("abcdeh"))
    *v, h = S.gens()
    gens = []
    for k in range(1, 5):
        acc = S.zero()
        for i in range(5):
            acc = acc + prod(v[(i + j) % 5] for j in range(k))
        gens.append(acc)
    gens.append(prod(v) - h**5)
    return [str(p) for p in buchberger(gens).polys()]


def check_job():
    out = []
    for path in corpus_files():
        an = Analysis(parse_instance(path.read_text()), 42)
        rep = full_report(an)
        out.append([v.status for v in rep["verdicts"]])
    return out


JOBS = {"dense rank 150x120": dense_rank_job, "cyclic-5 basis": groebner_job, "corpus check": check_job}


def timed(fn, repeat):
    best, result = None, None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels._ckernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'job':<22}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    prev = kernels.BACKEND
    try:
        for name, fn in JOBS.items():
            kernels.use_backend("python")
            tp, rp = timed(fn, args.repeat)
            kernels.use_backend("cython")
            tc, rc = timed(fn, args.repeat)
            assert rp == rc, f"{name}: backends disagree"
            print(f"{name:<22}{tp:>10.3f}{tc:>10.3f}{tp / tc:>8.1f}x")
    finally:
        kernels.use_backend(prev)


if __name__ == "__main__":
    main()
