"""Command-line front end: rate constants, trajectory simulation, the two
reference experiments, and moment validation.

Exit codes: 0 success, 2 usage error, 3 I/O failure, 4 validation failure.
The default master seed comes from ERCONSENSUS_SEED when set, overridden by
--seed; every CSV starts with ``# key=value`` lines echoing the resolved
configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._backend import set_threads
from .consensus import RunConfig, run
from .experiments import ESTIMATORS, moment_validation, prob_experiment, vdiff_experiment
from .moments import moment_set
from .rng import DEFAULT_SEED, RandomSource
from .svgplot import write_line_plot

ENV_SEED = "ERCONSENSUS_SEED"

# Steps shown in the expected-decrease SVG; the curves are visually flat at
# zero beyond this, so the full horizon lives only in the CSV.
_VDIFF_PLOT_STEPS = 100


def _env_seed(parser: argparse.ArgumentParser) -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        parser.error(f"{ENV_SEED} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erconsensus",
        description="Consensus over G(n, p) random graphs: simulation, "
                    "rate constants, and convergence-rate bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, seed=True, threads=True):
        if seed:
            sp.add_argument("--seed", type=int, default=None,
                            help=f"master seed (default: ${ENV_SEED} or {DEFAULT_SEED})")
        if threads:
            sp.add_argument("--threads", type=int, default=None,
                            help="cap kernel parallelism (results are identical "
                                 "for any value)")

    p_mu = sub.add_parser(
        "mu", help="rate constant and contraction eigenvalue as JSON",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_mu.add_argument("--n", type=int, required=True, help="node count (>= 2)")
    p_mu.add_argument("--p", type=float, required=True, help="edge probability in [0, 1]")
    p_mu.add_argument("--delta", type=float, default=None,
                      help="hold interval (default: 1/n)")
    p_mu.set_defaults(func=cmd_mu)

    p_sim = sub.add_parser(
        "simulate", help="simulate one trajectory and write its trace CSV",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--p", type=float, required=True)
    p_sim.add_argument("--delta", type=float, default=None, help="default: 1/n")
    p_sim.add_argument("--steps", type=int, required=True)
    p_sim.add_argument("--dims", type=int, default=None,
                       help="state dimensions (default: from --init)")
    p_sim.add_argument("--init", default="circle:100",
                       help="circle:<radius> | gaussian:<sd> | explicit:v1,v2,...")
    p_sim.add_argument("--out", required=True, help="trace CSV path")
    p_sim.add_argument("--dump-states", default=None,
                       help="also write per-agent state snapshots to this CSV")
    add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_vd = sub.add_parser(
        "fig-vdiff", help="expected-decrease experiment (empirical vs bound)",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_vd.add_argument("--n", type=int, default=50)
    p_vd.add_argument("--p", type=float, default=0.03)
    p_vd.add_argument("--delta", type=float, default=None, help="default: 1/n")
    p_vd.add_argument("--steps", type=int, default=1000)
    p_vd.add_argument("--inner-samples", type=int, default=1000)
    p_vd.add_argument("--init", default="circle:100")
    p_vd.add_argument("--estimator", choices=list(ESTIMATORS), default="double-step",
                      help="inner propagator for the conditional-decrease estimate")
    p_vd.add_argument("--out", required=True, help="CSV path (k,empirical,bound,V)")
    p_vd.add_argument("--svg", default=None, help="optional SVG plot path")
    add_common(p_vd)
    p_vd.set_defaults(func=cmd_fig_vdiff)

    p_pr = sub.add_parser(
        "fig-prob", help="tail-probability experiment (empirical vs bound)",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_pr.add_argument("--n", type=int, default=10)
    p_pr.add_argument("--p", type=float, default=0.01)
    p_pr.add_argument("--delta", type=float, default=None, help="default: 1/n")
    p_pr.add_argument("--gamma", type=float, default=3.0,
                      help="squared-disagreement threshold")
    p_pr.add_argument("--trials", type=int, default=1000)
    p_pr.add_argument("--horizon", type=int, default=1000)
    p_pr.add_argument("--init", default="circle:100")
    p_pr.add_argument("--out", required=True,
                      help="CSV path (N,empirical,bound_capped,bound_raw)")
    p_pr.add_argument("--svg", default=None, help="optional SVG plot path")
    add_common(p_pr)
    p_pr.set_defaults(func=cmd_fig_prob)

    p_vm = sub.add_parser(
        "validate-moments", help="closed forms vs enumeration or Monte Carlo oracle",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_vm.add_argument("--n", type=int, required=True)
    p_vm.add_argument("--p", type=float, required=True)
    p_vm.add_argument("--delta", type=float, default=None, help="default: 1/n")
    p_vm.add_argument("--mode", choices=["exhaustive", "mc"], required=True)
    p_vm.add_argument("--samples", type=int, default=20000, help="mc mode only")
    p_vm.add_argument("--tol", type=float, default=None,
                      help="override the eigenvalue pass tolerance")
    add_common(p_vm)
    p_vm.set_defaults(func=cmd_validate_moments)

    return parser


def _resolve_seed(args, parser) -> int:
    seed = args.seed if getattr(args, "seed", None) is not None else _env_seed(parser)
    if seed < 0:
        parser.error("--seed must be non-negative")
    return seed


def _apply_threads(args) -> None:
    if getattr(args, "threads", None) is not None:
        set_threads(args.threads)


def cmd_mu(args, parser) -> int:
    if args.n < 2:
        parser.error("--n must be at least 2")
    if not 0.0 <= args.p <= 1.0:
        parser.error("--p must lie in [0, 1]")
    if args.delta is not None and args.delta <= 0:
        parser.error("--delta must be positive")
    print(json.dumps(moment_set(args.n, args.p, args.delta).to_json()))
    return 0


def _run_config(args, parser) -> RunConfig:
    if args.n < 1:
        parser.error("--n must be positive")
    if not 0.0 <= args.p <= 1.0:
        parser.error("--p must lie in [0, 1]")
    if args.delta is not None and args.delta <= 0:
        parser.error("--delta must be positive")
    steps = args.steps if hasattr(args, "steps") else args.horizon
    if steps < 1:
        parser.error("--steps must be at least 1"
                     if hasattr(args, "steps") else "--horizon must be at least 1")
    return RunConfig(
        n=args.n, p=args.p, steps=steps, delta=args.delta,
        dims=getattr(args, "dims", None), init=args.init,
        master_seed=_resolve_seed(args, parser))


def cmd_simulate(args, parser) -> int:
    _apply_threads(args)
    config = _run_config(args, parser)
    trace = run(config, record_states=args.dump_states is not None)
    trace.write_csv(args.out)
    if args.dump_states is not None:
        trace.write_states_csv(args.dump_states)
    reached = trace.steps_below(1e-6)
    print(f"final_V={trace.final_v():.17g}")
    print(f"steps_to_1e-6={'not reached' if reached is None else reached}")
    print(f"trace={args.out}")
    return 0


def cmd_fig_vdiff(args, parser) -> int:
    _apply_threads(args)
    if args.inner_samples < 1:
        parser.error("--inner-samples must be at least 1")
    config = _run_config(args, parser)
    result = vdiff_experiment(config, args.inner_samples, estimator=args.estimator)
    result.write_csv(args.out)
    if args.svg:
        shown = min(_VDIFF_PLOT_STEPS, len(result.k))
        write_line_plot(
            args.svg, result.k[:shown],
            [("empirical expected decrease", result.empirical[:shown], False),
             ("closed-form bound", result.bound[:shown], True)],
            xlabel="step k", ylabel="expected decrease of V",
            title="Expected one-step decrease vs bound")
    print(f"rows={len(result.k)} out={args.out}")
    return 0


def cmd_fig_prob(args, parser) -> int:
    _apply_threads(args)
    if args.gamma <= 0:
        parser.error("--gamma must be positive")
    if args.trials < 1:
        parser.error("--trials must be at least 1")
    if args.horizon < 1:
        parser.error("--horizon must be at least 1")
    config = _run_config(args, parser)
    result = prob_experiment(config, args.gamma, args.trials, args.horizon)
    result.write_csv(args.out)
    if args.svg:
        write_line_plot(
            args.svg, result.N,
            [("empirical suffix probability", result.empirical, False),
             ("tail bound (capped)", result.bound_capped, True)],
            xlabel="N", ylabel="P[sup disagreement² over k ≥ N reaches γ]",
            title="Tail probability vs bound")
    print(f"rows={len(result.N)} out={args.out}")
    return 0


def cmd_validate_moments(args, parser) -> int:
    _apply_threads(args)
    if args.n < 2:
        parser.error("--n must be at least 2")
    if not 0.0 <= args.p <= 1.0:
        parser.error("--p must lie in [0, 1]")
    if args.mode == "mc" and args.samples < 2:
        parser.error("--samples must be at least 2 in mc mode")
    report = moment_validation(
        args.n, args.p, args.mode,
        samples=args.samples if args.mode == "mc" else None,
        delta=args.delta,
        rng=None if args.mode == "exhaustive"
        else RandomSource(_resolve_seed(args, parser)),
        tol=args.tol)
    print(json.dumps(report.to_json()))
    return 0 if report.passed else 4


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args, parser)
    except SystemExit as exc:  # parser.error() inside handlers
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
