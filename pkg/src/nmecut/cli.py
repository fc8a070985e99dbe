"""Command-line interface: ``nmecut {verify,kappa,cut,sweep}``.

Exit status: 0 on success, 1 on usage or validation errors, 2 when an
identity check fails.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .channels import harada_cut, identity_deviation, kappa_nme, nme_cut
from .entangle import (
    DomainError,
    haar_random_unitary,
    k_from_robustness,
    robustness_of_k,
)
from .estimator import MODES, estimate_distribution, l2_error, shots_for_accuracy
from .experiment import (
    DEFAULT_ROBUSTNESS,
    DEFAULT_SHOTS,
    ExperimentConfig,
    monotonicity_violations,
    run_sweep,
    write_records,
)
from .qmath import H, S, PureState

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2
DEFAULT_VERIFY_K = (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 10.0)

NAMED_STATES = {
    "zero": np.array([1, 0], dtype=complex),
    "one": np.array([0, 1], dtype=complex),
    "plus": H @ np.array([1, 0], dtype=complex),
    "minus": H @ np.array([0, 1], dtype=complex),
    "i": S @ H @ np.array([1, 0], dtype=complex),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _resolve_k(args) -> float:
    if args.robustness is not None:
        return k_from_robustness(args.robustness)
    return float(args.k)


def cmd_verify(args) -> int:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    failures = []
    dev = identity_deviation(harada_cut())
    print(f"{'cut':<16} {'kappa':>8} {'max |choi - choi_id|':>22}  status")
    status = "ok" if dev <= args.tol else "FAIL"
    print(f"{'harada':<16} {3.0:>8.4f} {dev:>22.3e}  {status}")
    if dev > args.tol:
        failures.append(("harada", dev))
    for k in args.k:
        d = nme_cut(k)
        dev = identity_deviation(d)
        status = "ok" if dev <= args.tol else "FAIL"
        print(f"{f'nme k={k:g}':<16} {d.kappa:>8.4f} {dev:>22.3e}  {status}")
        if dev > args.tol:
            failures.append((f"k={k:g}", dev))
    if failures:
        for name, dev in failures:
            print(f"verification failed for {name}: deviation {dev:.3e} > tol {args.tol:g}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_kappa(args) -> int:
    if args.robustness is not None:
        ks = [k_from_robustness(r) for r in args.robustness]
    else:
        ks = args.k
    header = f"{'k':>10} {'R':>10} {'c':>10} {'kappa':>10} {'shots(eps=' + format(args.epsilon, 'g') + ')':>18}"
    print(header)
    for k in ks:
        r = robustness_of_k(k)
        kap = kappa_nme(k)
        n = shots_for_accuracy(kap, args.epsilon)
        print(f"{k:>10.6g} {r:>10.6g} {1 - r:>10.6g} {kap:>10.6g} {n:>18d}")
    return EXIT_OK


def _input_state(spec: str) -> PureState:
    if spec in NAMED_STATES:
        return PureState.normalized(NAMED_STATES[spec])
    try:
        seed = int(spec)
    except ValueError:
        raise UsageError(
            f"--state must be one of {sorted(NAMED_STATES)} or an integer Haar seed, got {spec!r}"
        )
    if seed < 0:
        raise UsageError("Haar seed must be non-negative")
    u = haar_random_unitary(2, np.random.default_rng(seed))
    return PureState.normalized(u[:, 0])


def cmd_cut(args) -> int:
    psi = _input_state(args.state)
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    k = _resolve_k(args)
    d = nme_cut(k)
    rng = np.random.default_rng(args.seed)
    exact = np.abs(psi.amplitudes) ** 2
    est = estimate_distribution(d, psi, args.shots, args.mode, rng, clip=args.clip)
    print(f"k = {k:.6g}  R = {robustness_of_k(k):.6g}  kappa = {d.kappa:.6g}  mode = {args.mode}")
    print(f"shot plan (tele, comp1, comp2) = {est.shots_used}")
    print(f"exact     P(0), P(1) = {exact[0]:.6f}, {exact[1]:.6f}")
    print(f"estimated P(0), P(1) = {est.probs[0]:.6f}, {est.probs[1]:.6f}")
    print(f"L2 error = {l2_error(est.probs, exact):.6g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = ExperimentConfig(
        robustness_levels=tuple(args.robustness),
        shot_budgets=tuple(args.shots),
        n_states=args.states,
        master_seed=args.seed,
        allocation_mode=args.mode,
        clip=args.clip,
    )
    records = run_sweep(config, workers=args.workers)
    fmt = args.format
    if fmt is None:
        fmt = "json" if str(args.output).endswith(".json") else "csv"
    if args.output == "-":
        write_records(records, fmt, sys.stdout)
        summary = sys.stderr
    else:
        write_records(records, fmt, args.output)
        summary = sys.stdout
    bad = monotonicity_violations(records)
    for shots in sorted({r.shots for r in records}):
        row = sorted((r for r in records if r.shots == shots), key=lambda r: r.robustness)
        flag = "monotone" if not any(b[0] == shots for b in bad) else "NOT monotone"
        means = " ".join(f"{r.mean_l2:.4g}" for r in row)
        print(f"shots={shots:<7d} mean L2 by robustness: {means}  [{flag}]", file=summary)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="nmecut", description="Wire cutting with non-maximally entangled resource states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", formatter_class=fmt, help="check that each cut reproduces the identity channel")
    p.add_argument("--k", type=_float_list, default=",".join(f"{k:g}" for k in DEFAULT_VERIFY_K), help="comma-separated resource parameters")
    p.add_argument("--tol", type=float, default=1e-10, help="max allowed entrywise Choi deviation")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kappa", formatter_class=fmt, help="tabulate R, c and kappa")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", type=_float_list, default="0,0.5,1", help="comma-separated resource parameters")
    g.add_argument("--robustness", type=_float_list, default=None, help="comma-separated robustness values in [0, 1]")
    p.add_argument("--epsilon", type=float, default=0.01, help="target accuracy for the nominal shot count")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("cut", formatter_class=fmt, help="estimate one state's distribution through the cut")
    p.add_argument("--state", default="plus", help=f"one of {', '.join(NAMED_STATES)} or an integer seed for a Haar-random state")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", type=float, default=1.0, help="resource parameter k >= 0")
    g.add_argument("--robustness", type=float, default=None, help="resource robustness in [0, 1] (k taken in [0, 1])")
    p.add_argument("--shots", type=int, default=4096, help="total shot budget shared by the three terms")
    p.add_argument("--seed", type=int, default=0, help="seed for shot sampling")
    p.add_argument("--mode", choices=MODES, default="proportional", help="shot allocation mode")
    p.add_argument("--clip", action="store_true", help="clip and renormalize the quasi-probabilities")
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("sweep", formatter_class=fmt, help="robustness x shots sweep over Haar-random states")
    p.add_argument("--robustness", type=_float_list, default=",".join(f"{r:g}" for r in DEFAULT_ROBUSTNESS), help="comma-separated robustness levels")
    p.add_argument("--shots", type=_int_list, default=",".join(str(n) for n in DEFAULT_SHOTS), help="comma-separated shot budgets")
    p.add_argument("--states", type=int, default=500, help="number of Haar-random input states")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--mode", choices=MODES, default="proportional", help="shot allocation mode")
    p.add_argument("--clip", action="store_true", help="clip and renormalize the quasi-probabilities")
    p.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on this)")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format; inferred from the extension when omitted, else csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"nmecut {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nmecut {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
