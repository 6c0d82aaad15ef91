"""Command-line interface.

Subcommands: generate, sample, cluster, evaluate, bounds, sweep,
reproduce-paper.  Exit codes: 0 success, 2 invalid arguments or config,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import bounds, harness, io
from .clustering import evaluate_recovery, incomplete_agglomerative
from .sampling import sample_mask
from .synth import TREE_KINDS, TreeShape, generate_tc_similarities, generate_tree

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparseclust",
        description=(
            "Hierarchical clustering from randomly observed pairwise "
            "similarities, with sampling-rate bounds and Monte Carlo sweeps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a ground-truth tree and similarities")
    p.add_argument("--shape", choices=TREE_KINDS, default="random_unbalanced")
    p.add_argument("--n", type=int, required=True, help="number of items")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=float, default=0.5)
    p.add_argument("--out-tree", required=True)
    p.add_argument("--out-sim", required=True, help=".csv for CSV, else binary")

    p = sub.add_parser("sample", help="draw a Bernoulli observation mask")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("cluster", help="cluster from observed similarities")
    p.add_argument("--sim", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=("scan", "heap"), default="scan")

    p = sub.add_parser("evaluate", help="score a forest against the true tree")
    p.add_argument("--truth", required=True)
    p.add_argument("--forest", required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bounds", help="evaluate a closed-form bound")
    p.add_argument(
        "--theorem",
        required=True,
        choices=("1", "2", "3", "prop2", "prop3", "gilbert", "lemma1"),
    )
    p.add_argument("--n-items", type=int)
    p.add_argument("--cluster-size", type=int)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--kappa", type=float, default=3.0)
    p.add_argument("--delta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--p", type=float, help="edge probability (gilbert)")
    p.add_argument("--q", type=float, help="miss probability (lemma1)")

    p = sub.add_parser("sweep", help="Monte Carlo sweep over sampling rates")
    p.add_argument("--config", help="JSON config (fields of ExperimentConfig)")
    p.add_argument("--n-items", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--tree-shape", choices=TREE_KINDS)
    p.add_argument("--trials", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--master-seed", type=int)
    p.add_argument("--out", help="output CSV path")
    p.add_argument(
        "--independent-draws",
        action="store_true",
        help="fresh mask randomness per grid rate instead of common random numbers",
    )

    sub.add_parser("reproduce-paper", help="recompute the built-in worked examples")
    return parser


def _cmd_generate(args) -> int:
    shape = TreeShape(args.shape, args.n, args.seed)
    tree = generate_tree(shape)
    sim = generate_tc_similarities(tree, seed=args.seed, jitter=args.jitter)
    io.save_tree(args.out_tree, tree)
    io.save_similarity(args.out_sim, sim)
    print(f"wrote {args.out_tree} and {args.out_sim} (n={args.n}, shape={args.shape})")
    return EXIT_OK


def _cmd_sample(args) -> int:
    mask = sample_mask(args.n, args.p, args.seed)
    io.save_mask(args.out, mask)
    observed = int(np.triu(mask, 1).sum())
    total = args.n * (args.n - 1) // 2
    print(f"wrote {args.out}: {observed}/{total} pairs observed (p={args.p})")
    return EXIT_OK


def _cmd_cluster(args) -> int:
    sim = io.load_similarity(args.sim)
    mask = io.load_mask(args.mask, sim.shape[0])
    forest = incomplete_agglomerative(sim, mask, method=args.method)
    io.save_forest(args.out, forest)
    print(
        f"wrote {args.out}: {forest.n_merges} merges, {len(forest.roots)} root(s)"
        + (", halted on unobserved data" if forest.forced_halt else "")
    )
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    truth = io.load_tree(args.truth)
    forest = io.load_forest(args.forest)
    report = evaluate_recovery(truth, forest, args.n_min)
    io.save_report(args.out, report)
    print(
        f"recovered {report.recovered}/{report.total_clusters} clusters of size "
        f">= {args.n_min}: {'FULL' if report.fully_recovered else 'PARTIAL'}"
    )
    return EXIT_OK


def _require_args(args, names: list[str]) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise ValueError(
            f"--theorem {args.theorem} requires: " + ", ".join(f"--{n}" for n in missing)
        )


def _cmd_bounds(args) -> int:
    out: dict = {"rate": None, "expected_samples": None, "min_n_ok": None}
    t = args.theorem
    if t in ("1", "prop2", "prop3"):
        _require_args(args, ["n-items", "cluster-size"])
        fn = {
            "1": bounds.recovery_rate,
            "prop2": bounds.intra_rate,
            "prop3": bounds.inter_rate,
        }[t]
        rate = fn(args.n_items, args.cluster_size, args.alpha)
        out["rate"] = rate
        out["expected_samples"] = bounds.expected_samples(args.n_items, rate)
    elif t == "2":
        _require_args(args, ["n-items", "delta", "beta"])
        raw = bounds.power_law_rate(
            args.n_items, args.delta, args.beta, args.kappa, clamp=False
        )
        out["rate"] = bounds.clamp_unit(raw)
        out["raw_rate"] = raw
        out["expected_samples"] = bounds.expected_samples(args.n_items, out["rate"])
        out["cluster_size"] = args.delta * args.n_items**args.beta
        out["min_items"] = bounds.power_law_min_items(
            args.alpha, args.delta, args.beta, args.kappa
        )
        out["min_n_ok"] = args.n_items >= out["min_items"]
    elif t == "3":
        _require_args(args, ["n-items", "delta"])
        raw = bounds.linear_rate(args.n_items, args.delta, args.kappa, clamp=False)
        out["rate"] = bounds.clamp_unit(raw)
        out["raw_rate"] = raw
        out["expected_samples"] = bounds.expected_samples(args.n_items, out["rate"])
        out["cluster_size"] = args.delta * args.n_items
        out["min_items"] = bounds.linear_min_items(args.alpha, args.delta, args.kappa)
        out["min_n_ok"] = args.n_items >= out["min_items"]
    elif t == "gilbert":
        _require_args(args, ["n-items", "p"])
        raw = bounds.connectivity_lower_bound(args.n_items, args.p)
        out["rate"] = bounds.clamp_unit(raw)
        out["raw_rate"] = raw
        out["expected_samples"] = bounds.expected_samples(args.n_items, args.p)
    else:  # lemma1
        _require_args(args, ["n-items", "q"])
        check = bounds.middle_term_inequality(args.n_items, args.q)
        out.update({"lhs": check.lhs, "rhs": check.rhs, "holds": check.holds})
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.config:
        config = harness.load_config(args.config)
    else:
        if args.n_items is None or args.n_min is None:
            raise ValueError("sweep needs --config or both --n-items and --n-min")
        config = harness.ExperimentConfig(n_items=args.n_items, n_min=args.n_min)
    overrides = {}
    for flag, name in [
        ("n_items", "n_items"),
        ("n_min", "n_min"),
        ("tree_shape", "tree_shape"),
        ("trials", "trials"),
        ("alpha", "alpha"),
        ("kappa", "kappa"),
        ("master_seed", "master_seed"),
        ("out", "output_path"),
    ]:
        value = getattr(args, flag)
        if value is not None:
            overrides[name] = value
    if args.independent_draws:
        overrides["common_random_numbers"] = False
    if overrides:
        config = replace(config, **overrides)
    result = harness.sweep(config)
    if config.output_path:
        print(f"wrote {config.output_path} ({len(result.rows)} grid points)")
    else:
        sys.stdout.write(result.to_csv())
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    report = harness.reference_examples()
    power, linear = report["power_law_example"], report["linear_example"]

    def flag(ok: bool) -> str:
        return "PASS" if ok else "FAIL"

    print(
        f"power-law example (N={power['n_items']}, clusters >= "
        f"{power['cluster_size']}, kappa={power['kappa']:g}, alpha={power['alpha']:g}):"
    )
    print(f"  rate            {power['rate']:.6f}  [{flag(power['rate_ok'])}]")
    print(
        f"  expected pairs  {power['expected_samples']:.1f} of "
        f"{power['total_pairs']}  [{flag(power['samples_ok'])}]"
    )
    print(
        f"  minimum N       {power['min_items']} <= {power['n_items']}  "
        f"[{flag(power['min_items_ok'])}]"
    )
    print(
        f"linear example (N={linear['n_items']}, clusters >= "
        f"{linear['cluster_size']}, kappa={linear['kappa']:g}, alpha={linear['alpha']:g}):"
    )
    print(f"  rate            {linear['rate']:.6f}  [{flag(linear['rate_ok'])}]")
    print(
        f"  expected pairs  {linear['expected_samples']:.1f} of "
        f"{linear['total_pairs']}"
    )
    print(
        f"  minimum N       {linear['min_items']} <= {linear['n_items']}  "
        f"[{flag(linear['min_items_ok'])}]"
    )
    print("all checks passed" if report["all_ok"] else "SOME CHECKS FAILED")
    return EXIT_OK if report["all_ok"] else 1


_COMMANDS = {
    "generate": _cmd_generate,
    "sample": _cmd_sample,
    "cluster": _cmd_cluster,
    "evaluate": _cmd_evaluate,
    "bounds": _cmd_bounds,
    "sweep": _cmd_sweep,
    "reproduce-paper": _cmd_reproduce,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
