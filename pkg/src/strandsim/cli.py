"""Command-line front end.

Subcommands: simulate (seeded trial batches), sweep (declarative
experiment files), bounds (closed-form table), oracle (linear-solve
absorption tables), compare (basic vs waiting on shared seeds).

Exit codes: 0 success, 1 configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .agents import Population, Variant
from .bounds import (
    GamblerParams,
    decision_prob_closed_form,
    expected_steps_upper_bound,
    expected_time_views,
    majority_prob_lower_bound,
    strong_majority_lower_bound,
    update_step_probs,
)
from .chain import BirthDeathChain, absorption_probs, absorption_times, exact_decision_prob
from .harness import (
    ExperimentSpec,
    average_trajectories,
    compare_variants,
    load_experiment_spec,
    run_experiment,
    run_trials,
    summarize_config,
    write_comparison_csv,
    write_mean_trajectory_csv,
    write_trials_csv,
)
from .scheduler import DEFAULT_EXTRA_STEP_PROB, TrialConfig


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="strandsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run seeded trials of one config")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--w0", type=int, required=True)
    sim.add_argument("--w1", type=int, required=True)
    sim.add_argument("--variant", default="basic",
                     choices=["naive", "basic", "waiting", "self-stabilizing", "active-inactive"])
    sim.add_argument("--trials", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-steps", type=int, default=None)
    sim.add_argument("--epsilon", type=float, default=None)
    sim.add_argument("--k1", type=int, default=None)
    sim.add_argument("--k2", type=int, default=None)
    sim.add_argument("--jitter", type=float, default=DEFAULT_EXTRA_STEP_PROB,
                     help="per-round probability of a second agent step")
    sim.add_argument("--initial", default=None, help="initial strand, e.g. 0011V1")
    sim.add_argument("--trace", action="store_true", help="also write the averaged trajectory")
    sim.add_argument("--out", required=True, help="output path")
    sim.add_argument("--format", choices=["csv", "json"], default="csv")

    swp = sub.add_parser("sweep", help="run a declarative experiment file")
    swp.add_argument("--config", required=True)
    swp.add_argument("--outdir", default=".")

    bnd = sub.add_parser("bounds", help="closed-form bound table for one population")
    bnd.add_argument("--n", type=int, required=True)
    bnd.add_argument("--w0", type=int, required=True)
    bnd.add_argument("--w1", type=int, required=True)
    bnd.add_argument("--format", choices=["table", "csv"], default="table")

    orc = sub.add_parser("oracle", help="linear-solve absorption tables")
    orc.add_argument("--n", type=int, required=True)
    orc.add_argument("--w0", type=int, required=True)
    orc.add_argument("--w1", type=int, required=True)
    orc.add_argument("--start", type=int, default=None, help="print a single start state")
    orc.add_argument("--format", choices=["table", "csv"], default="table")

    cmp = sub.add_parser("compare", help="basic vs waiting on shared seeds")
    cmp.add_argument("--n", type=int, required=True)
    cmp.add_argument("--w0", type=int, required=True)
    cmp.add_argument("--w1", type=int, required=True)
    cmp.add_argument("--trials", type=int, required=True)
    cmp.add_argument("--seed", type=int, default=0)
    cmp.add_argument("--max-steps", type=int, default=None)
    cmp.add_argument("--out", default=None, help="comparison CSV path")
    return parser


def _simulate(args) -> int:
    variant = Variant.from_name(args.variant, epsilon=args.epsilon, k1=args.k1, k2=args.k2)
    config = TrialConfig(
        n=args.n, population=Population(args.w0, args.w1), variant=variant,
        seed=args.seed, max_big_steps=args.max_steps,
        record_trajectory=args.trace, extra_step_prob=args.jitter,
        initial_strand=args.initial,
    )
    results = run_trials(config, args.trials, args.seed)
    summary = summarize_config("simulate", config, results)
    out = Path(args.out)
    if args.format == "csv":
        write_trials_csv(out, results)
    else:
        import json

        payload = summary.to_dict()
        payload["trials_table"] = [
            {"seed": r.seed,
             "decision": "timeout" if r.decision is None else r.decision,
             "big_steps": r.big_steps}
            for r in results
        ]
        out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.trace:
        avg = average_trajectories(config.n, results)
        write_mean_trajectory_csv(out.with_suffix(".trajectory.csv"), avg)
    decided = [r for r in results if r.decided]
    mean = f"{summary.mean_steps:.1f}" if summary.mean_steps is not None else "n/a"
    print(f"{len(decided)}/{len(results)} decided, mean big steps {mean}, wrote {out}")
    return 0


def _sweep(args) -> int:
    spec: ExperimentSpec = load_experiment_spec(args.config)
    report = run_experiment(spec, outdir=args.outdir)
    for s in report.summaries:
        mean = f"{s.mean_steps:.1f}" if s.mean_steps is not None else "n/a"
        print(f"{spec.name}/{s.label}: decided {s.decided}/{s.trials}, mean big steps {mean}")
    print(f"artifacts in {args.outdir}")
    return 0


def _bounds(args) -> int:
    w0, w1, n = args.w0, args.w1, args.n
    probs = update_step_probs(w0, w1)
    rows: list[tuple[str, str]] = [
        ("n", str(n)),
        ("w0", str(w0)),
        ("w1", str(w1)),
        ("win_prob", f"{probs.win:.10g}"),
        ("lose_prob", f"{probs.lose:.10g}"),
        ("tie_prob", f"{probs.tie:.10g}"),
    ]
    hi, lo = max(w0, w1), min(w0, w1)
    if w1 != w0 and lo > 0:
        rows.append(("majority_lower_bound", f"{majority_prob_lower_bound(lo, hi, n):.10g}"))
        if hi >= 3 * lo:
            rows.append(("strong_majority_bound", f"{strong_majority_lower_bound(n):.10g}"))
    if w1 != w0:
        rows.append(("expected_steps_bound", f"{expected_steps_upper_bound(lo, hi, n):.10g}"))
    if args.format == "csv":
        print("quantity,value")
        for name, value in rows:
            print(f"{name},{value}")
    else:
        width = max(len(name) for name, _ in rows)
        for name, value in rows:
            print(f"{name:<{width}}  {value}")
    return 0


def _oracle(args) -> int:
    w0, w1, n = args.w0, args.w1, args.n
    if w0 == w1:
        print("oracle needs w0 != w1", file=sys.stderr)
        return 1
    chain = BirthDeathChain.from_populations(w0, w1, n)
    h = absorption_probs(chain)
    t = absorption_times(chain)
    gp = GamblerParams(p=chain.up, q=chain.down, r=chain.stay)
    states = [args.start] if args.start is not None else range(n + 1)
    sep = "," if args.format == "csv" else "  "
    header = sep.join(["i", "absorb_prob", "closed_form_prob", "time_solve", "time_closed_form"])
    print(header)
    for i in states:
        if not 0 <= i <= n:
            print(f"start {i} outside [0, {n}]", file=sys.stderr)
            return 1
        closed_p = decision_prob_closed_form(i, n, w0, w1)
        views = expected_time_views(i, n, gp)
        print(sep.join([
            str(i), f"{h[i]:.12g}", f"{closed_p:.12g}",
            f"{t[i]:.12g}", f"{views.closed_form:.12g}",
        ]))
    exact = exact_decision_prob(w0, w1, n)
    if args.format == "csv":
        print(f"exact_decision_prob,{exact:.12g}")
    else:
        print(f"exact decision probability (binomial start): {exact:.12g}")
        print("note: time_closed_form carries a 1/(win+lose) tie factor relative to time_solve")
    return 0


def _compare(args) -> int:
    base = TrialConfig(
        n=args.n, population=Population(args.w0, args.w1),
        variant=Variant.basic(), seed=0, max_big_steps=args.max_steps,
    )
    cmp = compare_variants(base, replace(base, variant=Variant.waiting()),
                           args.trials, args.seed)
    if args.out:
        write_comparison_csv(args.out, cmp)
    print(f"basic mean {cmp.mean_a:.1f}, waiting mean {cmp.mean_b:.1f}, "
          f"waiting faster in {cmp.b_faster_wins}/{len(cmp.seeds)} trials, "
          f"sign test p = {cmp.sign_test_p:.3g}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _simulate,
        "sweep": _sweep,
        "bounds": _bounds,
        "oracle": _oracle,
        "compare": _compare,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, KeyError) as exc:
        print(f"strandsim: configuration error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"strandsim: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
