"""Command-line interface.

Subcommands:

    solve     one configuration or bundled example -> CSVs + deformed SVG
    converge  cross-method convergence study       -> errors.csv + SVG
    compare   run all methods, tabulate agreement  -> compare.csv
    verify    check the inequality at a stored solution

Exit codes: 0 success, 2 solver not converged / verification failed,
3 invalid configuration or usage.  HEMI_SEED overrides the seed used for
randomized directions and property sampling.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from hemicontact import harness
from hemicontact.problem import E5, EXAMPLES, METHODS, ConfigError, DiscreteProblem, ProblemConfig

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_BAD_CONFIG = 3


def _load_config(args) -> ProblemConfig:
    if getattr(args, "config", None):
        config = ProblemConfig.from_file(args.config)
    elif getattr(args, "example", None):
        try:
            config = EXAMPLES[args.example]
        except KeyError:
            raise ConfigError(f"unknown example {args.example}; expected 1..4")
    else:
        raise ConfigError("either --config or --example is required")
    if getattr(args, "method", None):
        config = config.with_method(args.method)
    if getattr(args, "h_denominator", None):
        config = config.with_h(args.h_denominator)
    seed = os.environ.get("HEMI_SEED")
    if seed is not None:
        from dataclasses import replace
        config = replace(config, seed=int(seed))
    return config


def _cmd_solve(args) -> int:
    config = _load_config(args)
    result, problem = harness.run_example(config, out_dir=args.out)
    print(f"method={result.method} h=1/{problem.config.h_denominator} "
          f"converged={result.converged} iterations={result.iterations} "
          f"status='{result.status}'")
    if result.objective is not None:
        print(f"objective={result.objective:.12g}")
    if result.residual_norm is not None:
        print(f"residual_norm={result.residual_norm:.3e}")
    print(f"max_penetration={result.trace[:, 0].max():.6g} "
          f"max_pressure={(-result.tractions[:, 0]).max():.6g}")
    if args.out:
        print(f"artifacts written to {args.out}")
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _cmd_converge(args) -> int:
    config = _load_config(args) if (args.config or args.example) else E5
    if args.method:
        methods = [args.method]
    else:
        methods = [m.strip() for m in args.methods.split(",")] if args.methods else list(METHODS)
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}")
    h_list = [int(v) for v in args.h_list.split(",")] if args.h_list else [2, 4, 8, 16, 32]
    report = harness.convergence_study(
        config, methods=methods, h_denominators=h_list,
        reference_denominator=args.reference, out_dir=args.out,
        progress=lambda msg: print(msg, file=sys.stderr))
    print("method_solution,method_reference,h_denominator,v_error")
    for ms, mr, hd, err in sorted(report.entries, key=lambda e: (e[0], e[1], -e[2])):
        print(f"{ms},{mr},{hd},{err:.6e}")
    print("slopes (finest three points):")
    for (ms, mr), slope in sorted(report.slopes.items()):
        print(f"  {ms} vs {mr}: {slope:.3f}")
    if args.out:
        print(f"artifacts written to {args.out}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    config = _load_config(args)
    rows, info = harness.compare_methods(config, out_dir=args.out)
    print("method_a,method_b,rel_v_norm_diff,wall_time_a,wall_time_b")
    for a, b, d, ta, tb in rows:
        print(f"{a},{b},{d:.6e},{ta:.3f},{tb:.3f}")
    for m, status in sorted(info["failures"].items()):
        print(f"FAILED {m}: {status}", file=sys.stderr)
    return EXIT_OK if not info["failures"] else EXIT_NOT_CONVERGED


def _cmd_verify(args) -> int:
    config = _load_config(args)
    from hemicontact.artifacts import read_displacements_csv
    coords, disp = read_displacements_csv(args.solution)
    problem = DiscreteProblem(config)
    if coords.shape[0] != problem.mesh.n_nodes:
        raise ConfigError(
            f"solution has {coords.shape[0]} nodes but the configured mesh has "
            f"{problem.mesh.n_nodes}; check h_denominator")
    u = disp[problem.dof_map.free_nodes].ravel()
    rng = np.random.default_rng(config.seed)
    report = harness.verify_hvi(problem, u, n_random=args.directions, rng=rng)
    print(f"directions={report.n_directions} min_value={report.min_value:.6e} "
          f"load_norm={report.tolerance_scale:.6e} passed={report.passed}")
    return EXIT_OK if report.passed else EXIT_NOT_CONVERGED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hemicontact",
        description="Frictional contact on a nonmonotone foundation: "
                    "three cross-validated solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, method_flag=True):
        p.add_argument("--config", type=Path, help="flat key=value configuration file")
        p.add_argument("--example", type=int, choices=sorted(EXAMPLES),
                       help="bundled example id")
        if method_flag:
            p.add_argument("--method", choices=METHODS)
        p.add_argument("--h-denominator", type=int, dest="h_denominator",
                       help="mesh refinement 1/h")
        p.add_argument("--out", type=Path, help="artifact output directory")

    p = sub.add_parser("solve", help="solve one configuration")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("converge", help="cross-method convergence study")
    common(p)
    p.add_argument("--methods", help="comma-separated subset of opt,al,pdas")
    p.add_argument("--h-list", help="comma-separated mesh denominators (default 2,4,8,16,32)")
    p.add_argument("--reference", type=int, default=128,
                   help="reference mesh denominator (default 128)")
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("compare", help="run all methods and compare")
    common(p, method_flag=False)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("verify", help="verify the inequality at a stored solution")
    common(p)
    p.add_argument("--solution", type=Path, required=True,
                   help="displacements CSV written by `solve`")
    p.add_argument("--directions", type=int, default=200)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
