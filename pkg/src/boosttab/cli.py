"""Command-line interface: one subcommand per pipeline stage.

Every subcommand reads declared files, performs exactly one operation, and
emits machine-readable JSON on stdout (plus optional output files).  Exit
codes: 0 success, 2 validation/parse error, 3 numerical error.  Errors are
reported as a one-line JSON object on stderr.  All randomness enters through
``generate``'s seed; every report embeds the tool version and input digests.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import analytic_weights
from .boosting import load_model, model_to_dict, save_model, train_adaboost
from .data import (
    GENERATOR_NAME,
    GaussianSpec,
    generate_gaussian,
    outcome_matrix,
    read_dataset,
    read_outcomes,
    write_dataset,
)
from .errors import NonConvergenceError, NumericalError, ValidationError
from .risk import euler_residual_p3, minimize_risk, risk_from_tree
from .tree import build_tree, load_tree, save_tree, tree_to_dict, truth_table_csv_p3


def _sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def _write_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def _parse_mean(text: str | None):
    if text is None:
        return None
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad mean vector {text!r}: {exc}") from exc


def cmd_generate(args) -> int:
    spec = GaussianSpec(
        n=args.n,
        d=args.d,
        mean_pos=_parse_mean(args.mean_pos),
        mean_neg=_parse_mean(args.mean_neg),
        covariance_scale=args.scale,
        seed=args.seed,
    )
    dataset = generate_gaussian(spec)
    write_dataset(dataset, args.out)
    _emit(
        {
            "out": str(args.out),
            "n": dataset.n,
            "d": dataset.d,
            "seed": args.seed,
            "generator": GENERATOR_NAME,
            "sha256": _sha256(args.out),
        }
    )
    return 0


def cmd_train(args) -> int:
    dataset = read_dataset(args.data)
    model = train_adaboost(dataset, args.p)
    save_model(model, args.out)
    _emit(
        {
            "out": str(args.out),
            "status": model.status,
            "steps": model.steps,
            "betas": [float(b) for b in model.betas],
            "input_digests": {str(args.data): _sha256(args.data)},
        }
    )
    return 0


def cmd_table(args) -> int:
    digests = {}
    if args.outcomes is not None:
        outcomes = read_outcomes(args.outcomes)
        digests[str(args.outcomes)] = _sha256(args.outcomes)
    else:
        if args.data is None or args.model is None:
            raise ValidationError("table needs either --outcomes or --data + --model")
        dataset = read_dataset(args.data)
        model = load_model(args.model)
        outcomes = outcome_matrix(dataset, model.stumps)
        digests[str(args.data)] = _sha256(args.data)
        digests[str(args.model)] = _sha256(args.model)
    tree = build_tree(outcomes)
    save_tree(tree, args.out)
    if args.table_csv is not None:
        Path(args.table_csv).write_text(truth_table_csv_p3(tree))
    _emit(
        {
            "out": str(args.out),
            "p": tree.depth,
            "n": tree.n,
            "input_digests": digests,
        }
    )
    return 0


def cmd_analytic(args) -> int:
    tree = load_tree(args.tree)
    state = analytic_weights(tree)
    report = state.to_report_fragment()
    report["p"] = tree.depth
    report["n"] = tree.n
    report["tool_version"] = __version__
    report["input_digests"] = {str(args.tree): _sha256(args.tree)}
    if args.out is not None:
        _write_json(report, args.out)
    _emit(report)
    return 0


def cmd_minimize(args) -> int:
    tree = load_tree(args.tree)
    analytic = analytic_weights(tree).betas
    init = None if args.init is None else _parse_mean(args.init)
    beta_min, rep = minimize_risk(tree, init=init, tol=args.tol, max_iters=args.max_iters)
    report = _risk_report_dict(tree, analytic, beta_min.to_array(), rep)
    report["tool_version"] = __version__
    report["input_digests"] = {str(args.tree): _sha256(args.tree)}
    if args.out is not None:
        _write_json(report, args.out)
    _emit(report)
    if not rep.converged:
        raise NonConvergenceError(
            f"Newton did not reach tolerance {args.tol} in {args.max_iters} iterations"
        )
    return 0


def _risk_report_dict(tree, betas_analytic, beta_min, rep) -> dict:
    risk_analytic = risk_from_tree(tree, betas_analytic)
    euler_analytic = (
        [float(r) for r in euler_residual_p3(tree, betas_analytic)]
        if tree.depth == 3
        else None
    )
    euler_min = (
        [float(r) for r in rep.euler_residual] if rep.euler_residual is not None else None
    )
    return {
        "risk_at_analytic": risk_analytic,
        "risk_at_min": rep.risk_value,
        "gap": risk_analytic - rep.risk_value,
        "euler_residual_at_analytic": euler_analytic,
        "euler_residual_at_min": euler_min,
        "beta_min": [float(b) for b in beta_min],
        "converged": rep.converged,
        "iterations": rep.iterations,
    }


def cmd_compare(args) -> int:
    timings: dict[str, int] = {}
    digests: dict[str, str] = {}
    seed_info = None
    if args.data is not None:
        dataset = read_dataset(args.data)
        digests[str(args.data)] = _sha256(args.data)
        seed = None
    else:
        if args.n is None or args.d is None or args.seed is None:
            raise ValidationError("compare needs either --data or --n/--d/--seed")
        spec = GaussianSpec(
            n=args.n,
            d=args.d,
            mean_pos=_parse_mean(args.mean_pos),
            mean_neg=_parse_mean(args.mean_neg),
            covariance_scale=args.scale,
            seed=args.seed,
        )
        t0 = time.perf_counter_ns()
        dataset = generate_gaussian(spec)
        timings["generate"] = time.perf_counter_ns() - t0
        seed = args.seed
        seed_info = {"seed": seed, "generator": GENERATOR_NAME}

    t0 = time.perf_counter_ns()
    model = train_adaboost(dataset, args.p, seed_info=seed_info)
    timings["train"] = time.perf_counter_ns() - t0
    if model.steps == 0:
        raise NumericalError(
            f"training halted at step {model.status_step} ({model.status}): "
            "no finite weights to compare"
        )

    t0 = time.perf_counter_ns()
    tree = build_tree(outcome_matrix(dataset, model.stumps))
    timings["table"] = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    state = analytic_weights(tree)
    timings["analytic"] = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    beta_min, rep = minimize_risk(tree)
    timings["minimize"] = time.perf_counter_ns() - t0

    mae = float(np.mean(np.abs(model.betas - state.betas)))
    report = {
        "tool_version": __version__,
        "n": dataset.n,
        "d": dataset.d,
        "p": args.p,
        "steps_completed": model.steps,
        "train_status": model.status,
        "seed": seed,
        "seed_info": seed_info,
        "betas_iterative": [float(b) for b in model.betas],
        "betas_analytic": [float(b) for b in state.betas],
        "betas_min": [float(b) for b in beta_min.to_array()],
        "mae_iter_vs_analytic": mae,
        "risk_at_analytic": risk_from_tree(tree, state.betas),
        "risk_at_min": rep.risk_value,
        "gap": risk_from_tree(tree, state.betas) - rep.risk_value,
        "counts": tree_to_dict(tree)["counts"],
        "timings_ns": timings,
        "input_digests": digests,
        "converged": rep.converged,
        "iterations": rep.iterations,
    }
    if args.out is not None:
        _write_json(report, args.out)
    _emit(report)
    if not rep.converged:
        raise NonConvergenceError("risk minimization did not converge")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boosttab",
        description="Boosting weights from truth tables, and the exact risk minimum.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded two-class Gaussian dataset CSV")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--mean-pos", default=None, help="comma-separated class mean")
    g.add_argument("--mean-neg", default=None)
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("train", help="run the boosting loop on a dataset CSV")
    t.add_argument("--data", required=True)
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_train)

    tb = sub.add_parser("table", help="build the configuration-count tree")
    tb.add_argument("--data")
    tb.add_argument("--model")
    tb.add_argument("--outcomes", help="outcome CSV instead of --data/--model")
    tb.add_argument("--table-csv", help="also write the p=3 truth table CSV")
    tb.add_argument("--out", required=True)
    tb.set_defaults(func=cmd_table)

    a = sub.add_parser("analytic", help="closed-form weights from a tree JSON")
    a.add_argument("--tree", required=True)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analytic)

    m = sub.add_parser("minimize", help="exact risk minimizer from a tree JSON")
    m.add_argument("--tree", required=True)
    m.add_argument("--init", default=None, help="comma-separated starting point")
    m.add_argument("--tol", type=float, default=1e-12)
    m.add_argument("--max-iters", type=int, default=100)
    m.add_argument("--out")
    m.set_defaults(func=cmd_minimize)

    c = sub.add_parser("compare", help="end-to-end run: train, table, analytic, minimize")
    c.add_argument("--data")
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--mean-pos", default=None)
    c.add_argument("--mean-neg", default=None)
    c.add_argument("--scale", type=float, default=1.0)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        _print_error(exc)
        return 2
    except NumericalError as exc:
        _print_error(exc)
        return 3
    except FileNotFoundError as exc:
        _print_error(exc)
        return 2


def _print_error(exc: Exception) -> None:
    json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
