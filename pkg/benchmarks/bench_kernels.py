"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each case runs on both backends and checks that they agree before timing.
"""

import argparse
import random
import time
from fractions import Fraction

from exdir._backend import kernels
from exdir.expansion import min_out_cut, sparsest_cut
from exdir.flow import FlowState, h_default
from exdir.generators import random_dregular
from exdir.graph import DiGraph


def flow_case(kern, G, seed):
    rng = random.Random(seed)
    n = G.n
    src = [0] * n
    for v in rng.sample(range(n), n // 4):
        src[v] = 4 * G.degree(v)
    st = FlowState(G, 2, src, list(G.deg), h_default(G.e_count(), Fraction(1, 16)),
                   kernels=kern)
    st.remove_vertices(rng.sample(range(n), n // 50))
    st.increase_source({v: 2 * G.degree(v) for v in rng.sample(range(n), n // 50)
                        if st.vin[v]})
    return st.work, list(st.flow)


def cut_case(kern, G):
    a = min_out_cut(G, kernels=kern)
    b = sparsest_cut(G, 1, kernels=kern)
    return a, b


def timed(fn, repeat):
    best = None
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        backends = {"python": kernels("python"), "cython": kernels("cython")}
    except RuntimeError:
        backends = {"python": kernels("python")}
        print("compiled kernels not built; timing the Python kernels only")

    rng = random.Random(1)
    cases = []
    for n in (1024, 4096):
        G = random_dregular(n, 8, n)
        cases.append((f"flow dregular n={n} m={G.e_count()}",
                      lambda k, G=G: flow_case(k, G, 7)))
    for n in (14, 17):
        G = DiGraph(n, [(rng.randrange(n), rng.randrange(n)) for _ in range(4 * n)])
        cases.append((f"cut_scan random n={n} m={G.e_count()}",
                      lambda k, G=G: cut_case(k, G)))

    print(f"{'case':40s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, fn in cases:
        times, outs = {}, {}
        for b, kern in backends.items():
            times[b], outs[b] = timed(lambda: fn(kern), args.repeat)
        if len({repr(o) for o in outs.values()}) != 1:
            raise SystemExit(f"{name}: backends disagree")
        sp = times["python"] / times["cython"] if "cython" in times else 1.0
        print(f"{name:40s} " + " ".join(f"{times[b]:9.3f}s" for b in backends)
              + f"   {sp:6.1f}x")


if __name__ == "__main__":
    main()
