"""Command-line front end.

    tracedist validate  SPEC.json
    tracedist distance  SPEC.json [--method lanczos|oracle|both] [--steps N]
                        [--cutoff C] [--lower-bound] [--trial TRIAL.json]
                        [--out PATH]
    tracedist reproduce FIGURE --out DIR [--grid N]

Spec files are JSON state descriptions (see `statespec`).  Exit codes:
0 success, 2 validation/usage failure, 3 exponential-cost refusal.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fock, gauss
from .errors import CostGuardError, TraceDistError
from .figures import DEFAULT_GRID, FIGURES, SweepTable, reproduce, write_csv
from .lanczos import (
    DEFAULT_STEPS_DIFFERENCE,
    DEFAULT_STEPS_PURE_MIXED,
    trace_distance_lower_bound,
    trace_distance_pure_mixed,
)
from .moments import LinearCombinationKet, LinearCombinationOperator
from .statespec import load_spec, realize

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_COST = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracedist",
        description="Trace distances of bosonic Gaussian states from their moment data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check every state in a spec file")
    p_val.add_argument("spec", help="JSON spec file")

    p_dist = sub.add_parser("distance", help="trace distance between the two states of a spec file")
    p_dist.add_argument("spec", help="JSON spec file with exactly two states")
    p_dist.add_argument("--method", choices=("lanczos", "oracle", "both"), default="lanczos")
    p_dist.add_argument("--steps", type=int, default=None, help="iteration steps")
    p_dist.add_argument("--cutoff", type=int, default=100, help="oracle Fock cutoff")
    p_dist.add_argument(
        "--lower-bound",
        action="store_true",
        help="treat both states as mixed and compute a certified lower bound",
    )
    p_dist.add_argument("--trial", default=None, help="spec file with the trial ket (lower bound)")
    p_dist.add_argument("--out", default=None, help="CSV output path (default stdout)")

    p_rep = sub.add_parser("reproduce", help="run a reference figure sweep to CSV")
    p_rep.add_argument("figure", choices=FIGURES)
    p_rep.add_argument("--out", required=True, help="output directory")
    p_rep.add_argument("--grid", type=int, default=DEFAULT_GRID, help="grid density")
    p_rep.add_argument("--jobs", type=int, default=1, help="concurrent grid workers")
    return parser


def _emit(table: SweepTable, out: str | None) -> None:
    if out is None:
        sys.stdout.write("# " + ",".join(table.columns) + "\n")
        for row in table.rows:
            sys.stdout.write(
                ",".join(str(int(v)) if isinstance(v, int) else format(float(v), ".17g") for v in row)
                + "\n"
            )
    else:
        write_csv(table, out)


def _cmd_validate(args) -> int:
    states = [realize(s) for s in load_spec(args.spec)]
    status = EXIT_OK
    for i, state in enumerate(states):
        if isinstance(state, (LinearCombinationKet, LinearCombinationOperator)):
            # Construction already certified normalization and Hermiticity.
            print(f"state {i}: {type(state).__name__} with {len(state.kets)} kets: ok")
            continue
        base = state.base if isinstance(state, gauss.PureGaussianKet) else state
        report = gauss.validate(base)
        print(
            f"state {i}: symmetric={report.symmetric} uncertainty_ok={report.uncertainty_ok} "
            f"positive_definite={report.positive_definite} "
            f"purity_defect={report.purity_defect:.6g} "
            f"min_uncertainty_eig={report.min_uncertainty_eig:.6g}"
        )
        if not report.ok:
            status = EXIT_INVALID
    return status


def _as_pure(state):
    """First-state coercion for the exact estimator."""
    if isinstance(state, (gauss.PureGaussianKet, LinearCombinationKet)):
        return state
    if isinstance(state, gauss.GaussianState):
        return gauss.PureGaussianKet(state)  # raises DomainError when mixed
    raise TraceDistError(
        "exact mode needs a pure first state (the estimator targets the single positive "
        "eigenvalue of a pure-vs-mixed difference); pass --lower-bound for two mixed states"
    )


def _oracle_matrix(state, cutoff: int) -> fock.FockOperator:
    if isinstance(state, (LinearCombinationKet, LinearCombinationOperator)):
        if state.num_modes != 1:
            raise TraceDistError("the oracle is single-mode only")
        return fock.lincomb_to_fock(state, cutoff)
    base = state.base if isinstance(state, gauss.PureGaussianKet) else state
    if base.num_modes != 1:
        raise TraceDistError("the oracle is single-mode only")
    return fock.gaussian_to_fock(base, cutoff)


def _mean_vector(state) -> np.ndarray:
    if isinstance(state, gauss.PureGaussianKet):
        return state.base.r
    if isinstance(state, gauss.GaussianState):
        return state.r
    raise TraceDistError("pass --trial to choose the trial ket for linear-combination pairs")


def _cmd_distance(args) -> int:
    specs = load_spec(args.spec)
    if len(specs) != 2:
        raise TraceDistError(f"distance needs exactly two states, spec has {len(specs)}")
    first, second = (realize(s) for s in specs)

    columns: list[str] = []
    row: list = []
    if args.method in ("lanczos", "both"):
        if args.lower_bound:
            steps = args.steps or DEFAULT_STEPS_DIFFERENCE
            if isinstance(first, gauss.PureGaussianKet):
                first = first.base
            if isinstance(second, gauss.PureGaussianKet):
                second = second.base
            if args.trial is not None:
                trial_states = [realize(s) for s in load_spec(args.trial)]
                if len(trial_states) != 1:
                    raise TraceDistError("the trial spec must contain exactly one state")
                trial = trial_states[0]
            else:
                mid = (_mean_vector(first) + _mean_vector(second)) / 2.0
                hbar = specs[0].hbar
                trial = gauss.PureGaussianKet(
                    gauss.GaussianState(mid, (hbar / 2.0) * np.eye(mid.shape[0]), hbar)
                )
            est = trace_distance_lower_bound(first, second, trial, steps=steps)
        else:
            steps = args.steps or DEFAULT_STEPS_PURE_MIXED
            psi = _as_pure(first)
            rho = second.base if isinstance(second, gauss.PureGaussianKet) else second
            est = trace_distance_pure_mixed(psi, rho, steps=steps)
        columns += ["estimate_lanczos", "kind", "steps", "breakdown_step"]
        row += [
            est.value,
            est.kind,
            est.steps_used,
            -1 if est.breakdown_step is None else est.breakdown_step,
        ]
    if args.method in ("oracle", "both"):
        d_or = fock.trace_distance_exact(
            _oracle_matrix(first, args.cutoff), _oracle_matrix(second, args.cutoff)
        )
        columns += ["estimate_oracle", "cutoff"]
        row += [d_or, args.cutoff]

    if args.out is None:
        print("# " + ",".join(columns))
        print(",".join(str(v) if isinstance(v, (int, str)) else format(float(v), ".17g") for v in row))
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# " + ",".join(columns) + "\n")
            fh.write(
                ",".join(str(v) if isinstance(v, (int, str)) else format(float(v), ".17g") for v in row)
                + "\n"
            )
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    path = reproduce(args.figure, args.out, grid=args.grid, jobs=args.jobs)
    print(path)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "distance":
            return _cmd_distance(args)
        if args.command == "reproduce":
            return _cmd_reproduce(args)
    except CostGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COST
    except (TraceDistError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
