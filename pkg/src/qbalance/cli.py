"""Command-line front end: gen, run, evaluate, plot, and repro.

Exit codes: 0 on success, 1 for usage or input errors, 2 when a
computation or reproduction check fails. All randomness flows from the
single --seed flag, so repeated invocations with identical flags produce
byte-identical JSON and SVG outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import core, datasets, gsw, plotting, vqa

__all__ = ["main", "build_parser", "InputError", "ComputationError"]

VALUE_TOL = 5e-4


class InputError(Exception):
    """Bad flags, files, or literals; exits with code 1."""


class ComputationError(Exception):
    """A computation or reproduction check failed; exits with code 2."""


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let option values like -3,3 (component means) parse as values
        self._negative_number_matcher = re.compile(r"^-\d+[\d.,]*$")

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbalance",
                     description="Covariate balancing and Euclidean discrepancy "
                                 "via Ising encodings: variational solvers, the "
                                 "Gram-Schmidt walk, exhaustive search, and a "
                                 "uniform-random baseline.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="draw covariates from Gaussian components")
    gen.add_argument("--m", type=int, default=12, help="number of subjects (default 12)")
    gen.add_argument("--mean", action="append", dest="means", metavar="C1,C2,...",
                     help="component mean; repeat per component (default -3,3 and 3,3)")
    gen.add_argument("--sigma", type=float, default=1.0,
                     help="per-coordinate standard deviation (default 1)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="covariate CSV to write")
    gen.set_defaults(func=cmd_gen)

    run = sub.add_parser("run", help="produce an assignment with one method")
    run.add_argument("--method", required=True,
                     choices=["random", "gsw", "vqe", "qaoa", "exhaustive"])
    run.add_argument("--phi", type=float, default=0.5,
                     help="balance-robustness parameter in [0, 1] (default 0.5)")
    run.add_argument("--shots", type=int, default=vqa.DEFAULT_SHOTS,
                     help="final sampling shots for vqe/qaoa (default 65536)")
    run.add_argument("--reps", type=int, default=3, help="two-local layers (default 3)")
    run.add_argument("--p", type=int, default=8, help="cost/mixer layers (default 8)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--input", help="covariate CSV (bundled example when omitted)")
    run.add_argument("--out", required=True, help="result JSON to write")
    run.add_argument("--equal-split", action="store_true",
                     help="exhaustive only: restrict to groups of equal size")
    run.add_argument("--shots-during-opt", action="store_true",
                     help="vqe/qaoa only: estimate expectations from shots "
                          "during optimization instead of exact amplitudes")
    run.set_defaults(func=cmd_run)

    ev = sub.add_parser("evaluate", help="score one assignment against a dataset")
    ev.add_argument("--input", help="covariate CSV (bundled example when omitted)")
    ev.add_argument("--phi", type=float, default=0.5)
    ev.add_argument("--omega", required=True,
                    help="comma- or space-separated +-1 entries")
    ev.set_defaults(func=cmd_evaluate)

    plot = sub.add_parser("plot", help="render a 2-D scatter of an assignment")
    plot.add_argument("--input", help="covariate CSV (bundled example when omitted)")
    plot.add_argument("--result", help="result JSON; plain data scatter when omitted")
    plot.add_argument("--out", required=True, help="SVG file to write")
    plot.set_defaults(func=cmd_plot)

    repro = sub.add_parser(
        "repro", help="re-evaluate the bundled example and print a pass/fail table")
    repro.add_argument("--out", help="directory for summary.csv and the figures")
    repro.set_defaults(func=cmd_repro)

    return parser


def _load_covariates(path: str | None) -> core.CovariateSet:
    if path is None:
        return datasets.bundled_covariates()
    try:
        return core.load_covariates_csv(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _check_phi(phi: float) -> float:
    if not 0.0 <= phi <= 1.0:
        raise InputError(f"--phi must lie in [0, 1], got {phi}")
    return float(phi)


def _parse_omega(text: str, m: int) -> np.ndarray:
    fields = [f for f in re.split(r"[,\s]+", text.strip()) if f]
    try:
        values = [int(f) for f in fields]
    except ValueError:
        raise InputError(f"--omega entries must be integers +-1, got {text!r}") from None
    if any(v not in (-1, 1) for v in values):
        raise InputError("--omega entries must be exactly -1 or +1")
    if len(values) != m:
        raise InputError(f"--omega has {len(values)} entries, dataset has {m} subjects")
    return np.asarray(values, dtype=float)


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _write_bytes(path: str, payload: bytes) -> None:
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def cmd_gen(args) -> int:
    mean_texts = args.means or ["-3,3", "3,3"]
    try:
        means = [[float(v) for v in text.split(",")] for text in mean_texts]
    except ValueError:
        raise InputError(f"--mean must be comma-separated numbers, got {mean_texts}") from None
    if len({len(mean) for mean in means}) != 1:
        raise InputError("all --mean options must share one dimension")
    try:
        spec = datasets.GaussianMixtureSpec(m=args.m, means=np.asarray(means),
                                            sigma=args.sigma, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    x = datasets.gen_data(spec)
    try:
        core.save_covariates_csv(x, args.out)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {x.m} subjects x {x.n} covariates to {args.out}")
    return 0


def cmd_run(args) -> int:
    phi = _check_phi(args.phi)
    for name, value in (("--shots", args.shots), ("--reps", args.reps), ("--p", args.p)):
        if value < 1:
            raise InputError(f"{name} must be at least 1, got {value}")
    if args.equal_split and args.method != "exhaustive":
        raise InputError("--equal-split applies to --method exhaustive only")
    x = _load_covariates(args.input)
    design = core.build_augmented(x, phi)

    if args.method == "random":
        w = core.uniform_random_assignment(x.m, np.random.default_rng(args.seed))
        result = vqa.RunResult(method="random", best_assignment=w, best_objective=0.0,
                               expectation=None, evaluations=0, histogram=None,
                               seed=args.seed, phi=phi, shots=None)
    elif args.method == "gsw":
        w = gsw.gsw_sample(design, np.random.default_rng(args.seed))
        result = vqa.RunResult(method="gsw", best_assignment=w, best_objective=0.0,
                               expectation=None, evaluations=0, histogram=None,
                               seed=args.seed, phi=phi, shots=None)
    elif args.method == "exhaustive":
        if args.equal_split and x.m % 2 != 0:
            raise InputError(f"--equal-split needs an even subject count, got {x.m}")
        try:
            search = core.exhaustive_search(core.augmented_gram(design),
                                            equal_split=args.equal_split)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        scanned = (math.comb(x.m - 1, x.m // 2) if args.equal_split
                   else 1 << (x.m - 1))
        result = vqa.RunResult(method="exhaustive", best_assignment=search.argmin,
                               best_objective=0.0, expectation=None,
                               evaluations=scanned, histogram=None, seed=args.seed,
                               phi=phi, shots=None,
                               ansatz={"kind": "exhaustive",
                                       "equal_split": bool(args.equal_split)})
    elif args.method == "vqe":
        result = vqa.run_vqe(x, phi, reps=args.reps, shots=args.shots,
                             seed=args.seed, shots_during_opt=args.shots_during_opt)
    else:
        result = vqa.run_qaoa(x, phi, p=args.p, shots=args.shots,
                              seed=args.seed, shots_during_opt=args.shots_during_opt)

    # the written imbalance always comes from a fresh evaluation
    result.best_objective = core.assignment_imbalance(design, result.best_assignment)
    doc = json.dumps(result.to_json_dict(), indent=2, sort_keys=True) + "\n"
    _write_text(args.out, doc)
    print(f"{args.method}: imbalance = {result.best_objective:.4f} (wrote {args.out})")
    return 0


def cmd_evaluate(args) -> int:
    phi = _check_phi(args.phi)
    x = _load_covariates(args.input)
    w = _parse_omega(args.omega, x.m)
    design = core.build_augmented(x, phi)
    floor = math.sqrt(phi * x.m)
    print(f"subjects          = {x.m}")
    print(f"discrepancy       = {core.coloring_discrepancy(x, w):.4f}")
    print(f"imbalance         = {core.assignment_imbalance(design, w):.4f}")
    print(f"floor sqrt(phi*m) = {floor:.4f}")
    return 0


def cmd_plot(args) -> int:
    x = _load_covariates(args.input)
    if x.n != 2:
        raise InputError(f"plotting requires 2-D covariates, got n = {x.n}")
    w = None
    method = None
    imbalance = None
    if args.result is not None:
        try:
            doc = json.loads(Path(args.result).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {args.result}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.result}: malformed JSON: {exc}") from None
        try:
            w = core.as_signs(doc["omega"], x.m)
            method = str(doc.get("method", "assignment"))
            phi = _check_phi(float(doc.get("phi", 0.5)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.result}: bad result document: {exc}") from None
        imbalance = core.assignment_imbalance(core.build_augmented(x, phi), w)
    svg = plotting.render_svg(plotting.assignment_figure(x, w, method=method,
                                                         imbalance=imbalance))
    _write_bytes(args.out, svg)
    print(f"wrote {args.out}")
    return 0


def cmd_repro(args) -> int:
    x = datasets.bundled_covariates()
    phi = datasets.BUNDLED_PHI
    design = core.build_augmented(x, phi)
    floor = math.sqrt(phi * x.m)

    def imbalance_of(method: str) -> float:
        return core.assignment_imbalance(design, datasets.reference_assignment(method))

    search = core.exhaustive_search(core.augmented_gram(design))
    optimum = math.sqrt(max(search.min_value, 0.0))
    reference_optimal = datasets.reference_assignment("optimal")
    argmin_matches = (np.array_equal(search.argmin, reference_optimal)
                      or np.array_equal(search.argmin, -reference_optimal))
    values = {method: imbalance_of(method) for method in datasets.REFERENCE_ASSIGNMENTS}
    pair_value = values["vqe"]
    pair_matches = [recorded for recorded in (datasets.RECORDED_IMBALANCES["vqe"],
                                              datasets.RECORDED_IMBALANCES["qaoa"])
                    if abs(pair_value - recorded) <= 1e-3]

    rows = [
        ("exhaustive optimum equals recorded value",
         f"{datasets.RECORDED_OPTIMUM:.4f}", f"{optimum:.4f}",
         abs(optimum - datasets.RECORDED_OPTIMUM) <= VALUE_TOL),
        ("exhaustive argmin equals recorded assignment (up to sign)",
         "match", "match" if argmin_matches else "differ", argmin_matches),
        ("optimum stays above floor sqrt(phi*m)",
         f">= {floor:.4f}", f"{optimum:.4f}", optimum >= floor - 1e-9),
        ("random assignment evaluates to",
         "-", f"{values['random']:.4f}", True),
        ("optimal assignment evaluates to recorded value",
         f"{datasets.RECORDED_IMBALANCES['optimal']:.4f}", f"{values['optimal']:.4f}",
         abs(values["optimal"] - datasets.RECORDED_IMBALANCES["optimal"]) <= VALUE_TOL),
        ("gsw assignment evaluates to recorded value",
         f"{datasets.RECORDED_IMBALANCES['gsw']:.4f}", f"{values['gsw']:.4f}",
         abs(values["gsw"] - datasets.RECORDED_IMBALANCES["gsw"]) <= VALUE_TOL),
        ("vqe assignment evaluates to recorded value",
         f"{datasets.RECORDED_IMBALANCES['vqe']:.4f}", f"{values['vqe']:.4f}",
         abs(values["vqe"] - datasets.RECORDED_IMBALANCES["vqe"]) <= VALUE_TOL),
        ("qaoa assignment evaluates to recorded value",
         f"{datasets.RECORDED_IMBALANCES['qaoa']:.4f}", f"{values['qaoa']:.4f}",
         abs(values["qaoa"] - datasets.RECORDED_IMBALANCES["qaoa"]) <= VALUE_TOL),
        ("identical vqe/qaoa assignments match a recorded value",
         "2.4497 or 2.4516", f"{pair_value:.4f}", bool(pair_matches)),
    ]

    width = max(len(row[0]) for row in rows)
    print(f"{'check'.ljust(width)}  {'expected':>16}  {'computed':>8}  status")
    for name, expected, computed, ok in rows:
        status = "ok" if ok else "MISMATCH"
        print(f"{name.ljust(width)}  {expected:>16}  {computed:>8}  {status}")
    if pair_matches:
        print(f"note: the identical vqe/qaoa assignments evaluate to {pair_value:.4f}, "
              f"matching the recorded {pair_matches[0]:.4f}")
    print("note: the recorded gsw value 2.4720 is attainable on this dataset, "
          "but not by the recorded gsw assignment, which evaluates to "
          f"{values['gsw']:.4f}")

    if args.out is not None:
        out_dir = Path(args.out)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            with open(out_dir / "summary.csv", "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["check", "expected", "computed", "status"])
                for name, expected, computed, ok in rows:
                    writer.writerow([name, expected, computed,
                                     "ok" if ok else "mismatch"])
            figures = {"data": None}
            figures.update({method: datasets.reference_assignment(method)
                            for method in datasets.REFERENCE_ASSIGNMENTS})
            for name, w in figures.items():
                imbalance = None if w is None else values[name]
                fig = plotting.assignment_figure(x, w, method=name, imbalance=imbalance)
                (out_dir / f"{name}.svg").write_bytes(plotting.render_svg(fig))
        except OSError as exc:
            raise InputError(f"cannot write into {args.out}: {exc}") from None
        print(f"wrote summary.csv and {len(figures)} figures to {out_dir}")

    failed = [name for name, _, _, ok in rows if not ok]
    if failed:
        raise ComputationError(
            f"{len(failed)} of {len(rows)} reproduction checks failed: "
            + "; ".join(failed))
    print(f"all {len(rows)} reproduction checks passed")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except InputError as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputationError as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
