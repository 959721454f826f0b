"""Experiment drivers: warm-started mesh sequences, the bundled example
runs, the cross-method convergence study, inequality verification at a
solution, and method comparison.

Solves on a mesh sequence are warm started: the first level (h = 1/2)
starts from zero, every finer level from the interpolated solution of
the previous one (the multiplier method also interpolates multipliers).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from hemicontact import artifacts
from hemicontact.assembly import v_error
from hemicontact.mesh import nodal_field, prolong
from hemicontact.problem import (E5, EXAMPLES, METHODS, ConfigError,
                                 DiscreteProblem, ProblemConfig, SolveResult)
from hemicontact.solvers.augmented_lagrangian import (MultiplierField,
                                                      prolong_multipliers,
                                                      solve_al)
from hemicontact.solvers.direct_opt import solve_direct
from hemicontact.solvers.pdas import solve_pdas

__all__ = [
    "solve_with_method",
    "chain_solve",
    "solve_at",
    "run_example",
    "ErrorReport",
    "convergence_study",
    "HviReport",
    "verify_hvi",
    "compare_methods",
]


def solve_with_method(problem: DiscreteProblem, method: str,
                      warm_start: Optional[np.ndarray] = None,
                      warm_multipliers: Optional[MultiplierField] = None) -> SolveResult:
    """Dispatch one solve."""
    if method == "opt":
        return solve_direct(problem, warm_start=warm_start)
    if method == "al":
        return solve_al(problem, warm_start=warm_start, warm_multipliers=warm_multipliers)
    if method == "pdas":
        return solve_pdas(problem, warm_start=warm_start)
    raise ConfigError(f"unknown method {method!r}")


def _chain_denominators(target: int) -> list[int]:
    if target < 2 or target & (target - 1):
        raise ConfigError(f"h_denominator must be a power of two >= 2, got {target}")
    return [2 << k for k in range((target // 2).bit_length())]


def chain_solve(config: ProblemConfig, method: str, target_denominator: int,
                problems: Optional[dict] = None) -> tuple[dict, dict]:
    """Warm-started solves on h = 1/2, 1/4, ..., 1/target.

    Returns ({denominator: SolveResult}, {denominator: DiscreteProblem});
    pass a `problems` dict to share assembled systems between methods.
    """
    problems = problems if problems is not None else {}
    results: dict[int, SolveResult] = {}
    warm_u = None
    warm_mult = None
    for denom in _chain_denominators(target_denominator):
        if denom not in problems:
            problems[denom] = DiscreteProblem(config, h_denominator=denom)
        problem = problems[denom]
        res = solve_with_method(problem, method, warm_start=warm_u,
                                warm_multipliers=warm_mult)
        results[denom] = res
        if 2 * denom <= target_denominator:
            fine_denom = 2 * denom
            if fine_denom not in problems:
                problems[fine_denom] = DiscreteProblem(config, h_denominator=fine_denom)
            fine = problems[fine_denom]
            f = prolong(problem.mesh, fine.mesh,
                        nodal_field(problem.mesh, problem.dof_map, res.u))
            warm_u = f[fine.dof_map.free_nodes].ravel()
            warm_mult = None
            if method == "al" and res.multipliers is not None:
                warm_mult = prolong_multipliers(MultiplierField(*res.multipliers),
                                                fine.dof_map.n_c)
    return results, problems


def solve_at(config: ProblemConfig, method: str, denominator: int,
             problems: Optional[dict] = None) -> tuple[SolveResult, DiscreteProblem]:
    """Warm-chained solve when the mesh sequence reaches the target
    (power-of-two denominators), cold start from zero otherwise."""
    problems = problems if problems is not None else {}
    if denominator >= 2 and not denominator & (denominator - 1):
        results, problems = chain_solve(config, method, denominator, problems)
        return results[denominator], problems[denominator]
    if denominator not in problems:
        problems[denominator] = DiscreteProblem(config, h_denominator=denominator)
    problem = problems[denominator]
    return solve_with_method(problem, method), problem


def run_example(example, method: Optional[str] = None,
                h_denominator: Optional[int] = None,
                out_dir=None) -> tuple[SolveResult, DiscreteProblem]:
    """Solve one bundled example (id 1..4) or an explicit configuration
    and write displacement/contact CSVs plus the deformed-mesh SVG."""
    if isinstance(example, ProblemConfig):
        config = example
    else:
        try:
            config = EXAMPLES[int(example)]
        except (KeyError, TypeError, ValueError):
            raise ConfigError(f"unknown example id {example!r}; expected 1..4")
    if method is not None:
        config = config.with_method(method)
    if h_denominator is not None:
        config = config.with_h(h_denominator)

    result, problem = solve_at(config, config.method, config.h_denominator)

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        artifacts.write_displacements_csv(out / "displacements.csv",
                                          problem.mesh, problem.dof_map, result.u)
        artifacts.write_contact_csv(out / "contact.csv", problem.mesh,
                                    problem.dof_map, result)
        artifacts.svg_deformed(out / "deformed.svg", problem.mesh,
                               problem.dof_map, result)
        (out / "config.txt").write_text(config.to_text())
        if not result.converged:
            (out / "FAILED").write_text(f"method={result.method} status={result.status}\n")
    return result, problem


@dataclass
class ErrorReport:
    """Cross-method energy-norm error grid and its log-log slopes."""

    entries: list = field(default_factory=list)   # (ms, mr, denom, err)
    slopes: dict = field(default_factory=dict)    # (ms, mr) -> slope
    reference_denominator: int = 0
    chains: dict = field(default_factory=dict)    # method -> {denom: SolveResult}
    problems: dict = field(default_factory=dict)  # denom -> DiscreteProblem

    def curve(self, ms: str, mr: str) -> list[tuple[float, float]]:
        pts = [(1.0 / d, e) for s, r, d, e in self.entries if s == ms and r == mr]
        return sorted(pts)

    def curves(self) -> dict[str, list[tuple[float, float]]]:
        labels = sorted({(s, r) for s, r, _, _ in self.entries})
        return {f"{s} vs {r}": self.curve(s, r) for s, r in labels}


def _loglog_slope(points: list[tuple[float, float]], tail: int = 3) -> float:
    pts = sorted(points)[:tail]  # finest h first after sorting ascending
    lx = np.log([p[0] for p in pts])
    ly = np.log([max(p[1], 1e-300) for p in pts])
    A = np.column_stack([lx, np.ones_like(lx)])
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    return float(coef[0])


def convergence_study(config: ProblemConfig = E5,
                      methods: Iterable[str] = METHODS,
                      h_denominators: Iterable[int] = (2, 4, 8, 16, 32),
                      reference_denominator: int = 128,
                      out_dir=None,
                      progress=None) -> ErrorReport:
    """Cross-examined error study: each method's solution sequence is
    measured in the energy norm against each method's reference solution
    on the finest mesh, giving len(methods)^2 curves."""
    methods = list(methods)
    h_denominators = sorted(set(int(d) for d in h_denominators))
    if any(d >= reference_denominator for d in h_denominators):
        raise ConfigError("reference mesh must be strictly finer than every studied mesh")

    problems: dict[int, DiscreteProblem] = {}
    chains: dict[str, dict] = {}
    for m in methods:
        t0 = time.perf_counter()
        chains[m], _ = chain_solve(config, m, reference_denominator, problems)
        if progress:
            progress(f"chain {m}: {time.perf_counter() - t0:.1f}s")

    ref = problems[reference_denominator]
    report = ErrorReport(reference_denominator=reference_denominator,
                         chains=chains, problems=problems)
    for ms in methods:
        for denom in h_denominators:
            ph = problems[denom]
            u_h = chains[ms][denom].u
            for mr in methods:
                err = v_error(ph.mesh, ph.dof_map, u_h,
                              ref.mesh, ref.dof_map, ref.system.M_V,
                              chains[mr][reference_denominator].u)
                report.entries.append((ms, mr, denom, err))
    for ms in methods:
        for mr in methods:
            report.slopes[(ms, mr)] = _loglog_slope(report.curve(ms, mr))

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        artifacts.write_errors_csv(out / "errors.csv", report.entries)
        artifacts.svg_loglog(out / "convergence.svg", report.curves())
    return report


@dataclass
class HviReport:
    min_value: float
    tolerance_scale: float     # Euclidean norm of the load vector
    n_directions: int
    worst_index: int

    @property
    def passed(self) -> bool:
        return self.min_value >= -1e-4 * max(self.tolerance_scale, 1e-300)


def verify_hvi(problem: DiscreteProblem, u: np.ndarray,
               n_random: int = 200, rng: Optional[np.random.Generator] = None,
               include_coordinates: bool = True, snap: float = 1e-7) -> HviReport:
    """Check the discrete inequality at a candidate solution.

    For unit directions v the quantity

        (Ku - F) . v + sum_i w_i [ j_nu^0(u_nu_i; v_nu_i) + h_tau j_tau^0(u_tau_i; v_tau_i) ]

    is nonnegative at the exact solution; the minimum over the sampled
    directions is reported.  Traces within `snap` of a kink are treated
    as at the kink, widening the subdifferential by the solver tolerance
    (otherwise a 1e-12 penetration collapses [0, q_max] to a point and
    the check is vacuously fragile).
    """
    rng = rng if rng is not None else np.random.default_rng(problem.config.seed)
    law = problem.law
    dm = problem.dof_map
    w = problem.geometry.node_weights
    r0 = problem.system.K @ u - problem.system.F
    trace = problem.trace(u)
    u_nu, u_tx = trace[:, 0].copy(), trace[:, 1].copy()
    u_nu[np.abs(u_nu) <= snap] = 0.0
    u_tx[np.abs(u_tx) <= snap] = 0.0

    def value(v: np.ndarray) -> float:
        v_nu = -v[dm.contact_ydofs]
        v_tx = v[dm.contact_xdofs]
        # j_nu^0: {0} below the kink, [0, q_max] at it, single slope above
        lo = np.where(u_nu > 0.0, law.p_const * u_nu + law.q_max, 0.0)
        hi = np.where(u_nu >= 0.0, law.p_const * u_nu + law.q_max, 0.0)
        jnu = np.where(v_nu >= 0.0, hi * v_nu, lo * v_nu)
        jtau = np.where(u_tx == 0.0, np.abs(v_tx), np.sign(u_tx) * v_tx)
        return float(r0 @ v + w @ (jnu + law.h_tau * jtau))

    dirs = []
    if include_coordinates:
        for dof in dm.contact_dofs:
            e = np.zeros(dm.n_dofs)
            e[dof] = 1.0
            dirs.append(e)
            dirs.append(-e)
    for _ in range(n_random):
        v = rng.standard_normal(dm.n_dofs)
        dirs.append(v / np.linalg.norm(v))

    values = [value(v) for v in dirs]
    worst = int(np.argmin(values))
    return HviReport(min_value=float(values[worst]),
                     tolerance_scale=float(np.linalg.norm(problem.system.F)),
                     n_directions=len(dirs),
                     worst_index=worst)


def compare_methods(config: ProblemConfig, h_denominator: Optional[int] = None,
                    out_dir=None) -> tuple[list, dict]:
    """Run all three methods on one configuration and tabulate pairwise
    relative energy-norm differences plus wall-clock times."""
    if h_denominator is not None:
        config = config.with_h(h_denominator)
    problems: dict[int, DiscreteProblem] = {}
    results: dict[str, SolveResult] = {}
    failures: dict[str, str] = {}
    for m in METHODS:
        try:
            res, _ = solve_at(config, m, config.h_denominator, problems)
            if res.converged:
                results[m] = res
            else:
                failures[m] = res.status
        except Exception as exc:  # comparison proceeds among the successes
            failures[m] = str(exc)

    problem = problems[config.h_denominator]
    rows = []
    names = sorted(results)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            ua, ub = results[a].u, results[b].u
            scale = max(problem.v_norm(ua), problem.v_norm(ub), 1e-300)
            rows.append((a, b, problem.v_norm(ua - ub) / scale,
                         results[a].wall_time, results[b].wall_time))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        artifacts.write_compare_csv(out / "compare.csv", rows)
        if failures:
            (out / "FAILED").write_text(
                "".join(f"method={m} status={s}\n" for m, s in sorted(failures.items())))
    return rows, {"results": results, "failures": failures, "problem": problem}
