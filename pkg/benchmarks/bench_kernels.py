"""Benchmark: compiled kernels vs the NumPy fallback.

Times the two hot kernels in isolation and a full condensed solve driven
through each backend.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hemicontact._kernels import _fallback

try:
    from hemicontact._kernels import _core
except ImportError:
    _core = None

from hemicontact.problem import E5, DiscreteProblem
from hemicontact.solvers.direct_opt import ReducedObjective
from hemicontact.solvers.powell import PowellConfig, powell_minimize


def _time(fn, *args, repeat=5, number=200):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench_micro(n_c=128, seed=0):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.005, 0.01, n_c)
    unu = rng.uniform(-0.05, 0.05, n_c)
    utx = rng.uniform(-0.05, 0.05, n_c)
    dnu = rng.uniform(-1, 1, n_c)
    dtx = rng.uniform(-1, 1, n_c)
    law = (0.3, 2.0, 0.5)

    rows = []
    for name, mod in (("python", _fallback),) + ((("compiled", _core),) if _core else ()):
        t_energy = _time(mod.boundary_energy, w, unu, utx, *law, number=2000)
        t_ls = _time(mod.line_search, 0.8, -0.3, 0.0, w, unu, dnu, utx, dtx,
                     *law, 1.0, 2.0, 60, 1e-10, number=200)
        rows.append((name, t_energy, t_ls))
    return rows


def bench_solve(denominator=64):
    prob = DiscreteProblem(E5, h_denominator=denominator)
    rows = []
    backends = [("python", _fallback)] + ([("compiled", _core)] if _core else [])
    for name, mod in backends:
        import hemicontact._kernels as kernels
        saved = (kernels.boundary_energy, kernels.line_search)
        kernels.boundary_energy = mod.boundary_energy
        kernels.line_search = mod.line_search
        try:
            obj = ReducedObjective(prob.reduced, prob.law, prob.geometry.node_weights)
            t0 = time.perf_counter()
            res = powell_minimize(obj, np.zeros(obj.dim), PowellConfig(),
                                  line_minimizer=obj.line_minimizer)
            elapsed = time.perf_counter() - t0
        finally:
            kernels.boundary_energy, kernels.line_search = saved
        rows.append((name, elapsed, res.f, obj.n_evaluations))
    return rows


def main():
    print(f"compiled extension available: {_core is not None}\n")

    print("micro-kernels (contact nodes = 128, best of 5):")
    print(f"  {'backend':<10} {'boundary_energy':>18} {'line_search':>15}")
    micro = bench_micro()
    for name, te, tl in micro:
        print(f"  {name:<10} {te * 1e6:>15.2f} us {tl * 1e6:>12.2f} us")
    if len(micro) == 2:
        print(f"  speedup    {micro[0][1] / micro[1][1]:>15.1f} x"
              f" {micro[0][2] / micro[1][2]:>12.1f} x")

    print("\nfull condensed minimization (h = 1/64, cold start):")
    print(f"  {'backend':<10} {'wall time':>12} {'final energy':>18} {'evaluations':>13}")
    solve = bench_solve()
    for name, t, f, nev in solve:
        print(f"  {name:<10} {t:>10.2f} s {f:>18.12f} {nev:>13}")
    if len(solve) == 2:
        print(f"  speedup    {solve[0][1] / solve[1][1]:>10.1f} x")


if __name__ == "__main__":
    main()
