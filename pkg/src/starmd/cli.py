"""Command-line interface.

Subcommands:
    run        execute an experiment config and write its CSV trace
    fit        log-log rate fit of a trace file
    adversary  play a lower-bound game and verify the counterexample
    certify    run the star-convexity / weak-smoothness certifiers
    suite      run the acceptance battery and emit a JSON verdict

Exit code is 0 only when every check the invocation performed passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .harness import ExperimentConfig, fit_rate, run_adversary_game, run_experiment
from .objectives import certify_star_convexity, certify_weak_smoothness, problem_from_id


def _add_run_flags(sub):
    sub.add_argument("--config", help="JSON config file; flags override fields")
    sub.add_argument("--out", help="trace CSV path")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--T", type=int)
    sub.add_argument("--mode", choices=["general", "smooth"])
    sub.add_argument("--problem", help="catalog id, e.g. pnormpow:p=1.5,k=1.5")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--p", type=float, help="run geometry p-norm exponent")
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--B", type=float)


def _config_from_args(args) -> ExperimentConfig:
    overrides = dict(out=args.out, seed=args.seed, T=args.T, mode=args.mode,
                     problem=args.problem, dim=args.dim, alpha=args.alpha,
                     B=args.B)
    if args.p is not None:
        overrides["geometry"] = {"p": args.p}
    if args.config:
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig(**{k: v for k, v in overrides.items()
                               if v is not None})


def cmd_run(args) -> int:
    config = _config_from_args(args)
    result = run_experiment(config)
    gap = result.gaps[-1] if result.gaps is not None else None
    print(f"ran {config.problem} ({config.mode}, T={config.T}); "
          f"value calls {result.counter.value_calls}, "
          f"grad calls {result.counter.grad_calls}"
          + (f", final gap {gap:.6e}" if gap is not None else ""))
    if config.out:
        print(f"trace written to {config.out}")
    return 0


def cmd_fit(args) -> int:
    fit = fit_rate(args.trace)
    print(f"slope {fit.slope:.6f}, intercept {fit.intercept:.6f}, "
          f"window t in [{fit.window[0]}, {fit.window[1]}], "
          f"residual {fit.residual:.3e}")
    return 0


def cmd_adversary(args) -> int:
    report = run_adversary_game(args.C, args.eps, args.Lstar, args.strategy,
                                args.N)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json())
    print(f"budget log5 {report.budget:.2f}, queries {report.n_queries}, "
          f"final phi {report.phi_history[-1]:.4g}; {report.detail}")
    return 0 if report.verified else 1


def cmd_certify(args) -> int:
    problem = problem_from_id(args.problem, args.dim)
    tau = args.tau if args.tau is not None else problem.tau
    L = args.L if args.L is not None else problem.L
    kappa = args.kappa if args.kappa is not None else problem.kappa
    star = certify_star_convexity(problem, tau, args.samples, args.radius,
                                  args.seed)
    smooth = certify_weak_smoothness(problem, L, kappa, args.samples,
                                     args.seed + 1)
    print(f"star-convexity (tau={tau}): "
          f"{'PASS' if star.passed else 'FAIL'} worst violation {star.worst:.3e}")
    print(f"weak smoothness (L={L:.6g}, kappa={kappa}): "
          f"{'PASS' if smooth.passed else 'FAIL'} worst ratio {smooth.worst:.6g}")
    return 0 if star.passed and smooth.passed else 1


def cmd_suite(args) -> int:
    from .acceptance import run_all

    results = run_all()
    verdict = {
        "all_passed": all(r.passed for r in results),
        "criteria": [asdict(r) for r in results],
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(verdict, fh, indent=2)
        print(f"verdict written to {args.out}")
    print("suite: " + ("ALL PASS" if verdict["all_passed"] else "FAILURES"))
    return 0 if verdict["all_passed"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="starmd",
        description="accelerated mirror descent with a certifying binary search")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    _add_run_flags(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_fit = sub.add_parser("fit", help="rate-fit a trace CSV")
    p_fit.add_argument("trace")
    p_fit.set_defaults(fn=cmd_fit)

    p_adv = sub.add_parser("adversary", help="play a lower-bound game")
    p_adv.add_argument("--C", type=float, default=1.0)
    p_adv.add_argument("--eps", type=float, default=1e-3)
    p_adv.add_argument("--Lstar", type=float, default=1e6)
    p_adv.add_argument("--strategy", choices=["bisection", "grid"],
                       default="bisection")
    p_adv.add_argument("--N", type=int, default=8)
    p_adv.add_argument("--out", help="write the game transcript JSON here")
    p_adv.set_defaults(fn=cmd_adversary)

    p_cert = sub.add_parser("certify", help="certify declared constants")
    p_cert.add_argument("--problem", default="quad")
    p_cert.add_argument("--dim", type=int, default=2)
    p_cert.add_argument("--tau", type=float)
    p_cert.add_argument("--L", type=float)
    p_cert.add_argument("--kappa", type=float)
    p_cert.add_argument("--samples", type=int, default=10000)
    p_cert.add_argument("--radius", type=float, default=10.0)
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.set_defaults(fn=cmd_certify)

    p_suite = sub.add_parser("suite", help="run the acceptance battery")
    p_suite.add_argument("--out", help="write the JSON verdict here")
    p_suite.set_defaults(fn=cmd_suite)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
