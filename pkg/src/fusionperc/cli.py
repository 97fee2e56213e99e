"""Command-line frontend: sweeps, thresholds, component sizes, optimization,
classical validation, fusion-algebra verification, and lattice dumps.

Every command writes its artifacts plus a ``manifest.json`` into ``--out``;
rerunning with the same manifest parameters reproduces the data files
byte-for-byte.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import (COMPONENT_COLUMNS, EDGE_COLUMNS, SWEEP_COLUMNS,
                        RunManifest, sweep_rows, write_csv, write_json)
from .fusioncheck import run_fusion_checks
from .lattice import (BOUNDARIES, LatticeError, build_lattice,
                      family_uses_diamond_filter, load_lattice_spec,
                      normalize_family, vectors_for_family)
from .optimizer import (EvalFidelity, OptimizerError, default_search_fidelity,
                        optimize)
from .percolation import largest_component_fraction
from .refvalues import default_validation_entries, validation_entry
from .sampling import DEFAULT_FUSION_SUCCESS, MODELS, FusionModelParams
from .threshold import ThresholdError, estimate_threshold, sweep
from .validation import run_validation

USAGE_ERROR = 2


def parse_range(text: str) -> np.ndarray:
    """Parse inclusive ``start:stop:step`` grids."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError("need step > 0 and stop >= start")
    n = int(round((stop - start) / step)) + 1
    return np.linspace(start, start + (n - 1) * step, n)


def parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected L1,L2,..., got {text!r}") from None


def parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return lo, hi


def _resolve_lattice_args(args):
    """(vector set, diamond_filter, family label) from --family or --spec."""
    if args.spec:
        doc = load_lattice_spec(args.spec)
        return doc.vectors, doc.diamond_filter, Path(args.spec).stem
    if not args.family:
        raise LatticeError("provide either --family or --spec")
    family = normalize_family(args.family)
    if args.dim is None:
        raise LatticeError("--family needs --dim")
    return (vectors_for_family(family, args.dim),
            family_uses_diamond_filter(family), family)


def _manifest_params(args, skip=("func",)) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        if isinstance(value, np.ndarray):
            value = [float(x) for x in value]
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def _add_lattice_options(p: argparse.ArgumentParser, dim_required: bool = False):
    p.add_argument("--family", help="named lattice family (hc, fcc, bcc, fcc+hc, bcc+hc, diamond)")
    p.add_argument("--dim", type=int, required=dim_required, help="lattice dimension d")
    p.add_argument("--spec", help="JSON lattice spec file (alternative to --family)")
    p.add_argument("--boundary", choices=BOUNDARIES, default="open",
                   help="boundary policy (default open)")


def _add_common_options(p: argparse.ArgumentParser, trials_default: int = 1000):
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads (default: available parallelism)")
    p.add_argument("--out", required=True, help="output directory for artifacts")
    p.add_argument("--trials", type=int, default=trials_default,
                   help=f"Monte Carlo trials per grid point (default {trials_default})")


def _model_grid(args) -> tuple[str, np.ndarray]:
    model = args.model
    if model in ("spin", "photon"):
        if args.eta is None:
            raise LatticeError("fusion models sweep --eta start:stop:step")
        return model, args.eta
    if args.p is None:
        raise LatticeError("classical models sweep --p start:stop:step")
    return model, args.p


def cmd_sweep(args) -> int:
    spec, diamond, family = _resolve_lattice_args(args)
    model, grid = _model_grid(args)
    curves = []
    for li, length in enumerate(args.sizes):
        lattice = build_lattice(spec, length, args.boundary, diamond_filter=diamond)
        curves.append(sweep(lattice, model, grid, args.trials, args.seed,
                            p_s=args.p_s, key=(li, 0), span_axis=args.span_axis,
                            threads=args.threads, descriptor=family))
    manifest = RunManifest("sweep", _manifest_params(args), args.seed)
    out = Path(args.out)
    manifest.register(write_csv(out / "sweep.csv", SWEEP_COLUMNS,
                                sweep_rows(curves, family, spec.dimension, args.seed)))
    manifest.write(out)
    return 0


def cmd_threshold(args) -> int:
    spec, diamond, family = _resolve_lattice_args(args)
    model = args.model
    estimate = estimate_threshold(
        spec, model, args.sizes, args.trials, args.seed, p_s=args.p_s,
        boundary=args.boundary, diamond_filter=diamond, window=args.window,
        resolution=args.resolution, span_axis=args.span_axis,
        threads=args.threads, descriptor=family)
    manifest = RunManifest("threshold", _manifest_params(args), args.seed)
    out = Path(args.out)
    manifest.register(write_csv(out / "curves.csv", SWEEP_COLUMNS,
                                sweep_rows(estimate.curves, family, spec.dimension,
                                           args.seed)))
    manifest.register(write_json(out / "threshold.json", estimate.as_dict()))
    manifest.write(out)
    if estimate.percolates:
        print(f"lambda_c = {estimate.lambda_c:.4f} +- {estimate.error:.4f} "
              f"({estimate.fit_form})")
    else:
        print("no percolation inside the sweep window")
    return 0


def cmd_component_size(args) -> int:
    spec, diamond, family = _resolve_lattice_args(args)
    if args.model not in ("spin", "photon"):
        print("component-size uses the fusion models (spin|photon)", file=sys.stderr)
        return USAGE_ERROR
    rows = []
    for li, length in enumerate(args.sizes):
        lattice = build_lattice(spec, length, args.boundary, diamond_filter=diamond)
        for gi, eta in enumerate(args.eta):
            params = FusionModelParams(eta=float(eta), p_s=args.p_s,
                                       central_qubit=args.model, seed=args.seed)
            mean, err = largest_component_fraction(lattice, params, args.trials,
                                                   key=(li, gi), threads=args.threads)
            rows.append((args.model, family, spec.dimension, length, float(eta),
                         mean, err, args.trials, args.seed))
    manifest = RunManifest("component-size", _manifest_params(args), args.seed)
    out = Path(args.out)
    manifest.register(write_csv(out / "component_size.csv", COMPONENT_COLUMNS, rows))
    manifest.write(out)
    return 0


def cmd_optimize(args) -> int:
    fidelity = default_search_fidelity(args.dim)
    if args.search_sizes:
        fidelity = EvalFidelity(sizes=args.search_sizes, trials=args.search_trials,
                                grid_lo=args.grid_lo)
    result = optimize(args.dim, args.k, model=args.model, p_s=args.p_s,
                      budget=args.budget, seed=args.seed, fidelity=fidelity,
                      final_trials=args.final_trials, kappa=args.kappa,
                      direction=args.direction, threads=args.threads)
    manifest = RunManifest("optimize", _manifest_params(args), args.seed)
    out = Path(args.out)
    manifest.register(write_json(out / "search_log.json", result.as_dict()))
    manifest.write(out)
    final = result.final_estimate
    print(f"best vectors: {[list(v) for v in result.best.positive_half]}")
    if final.percolates:
        print(f"final lambda_c = {final.lambda_c:.4f} +- {final.error:.4f}")
    else:
        print("final set does not percolate inside the evaluation window")
    if result.truncated:
        print("note: evaluation budget exhausted before the reservoir was")
    return 0


def cmd_validate_classical(args) -> int:
    if args.family or args.mode:
        if not (args.family and args.dim and args.mode):
            print("single-entry validation needs --family, --dim and --mode",
                  file=sys.stderr)
            return USAGE_ERROR
        entries = [validation_entry(normalize_family(args.family), args.dim, args.mode)]
    else:
        entries = default_validation_entries()
    report = run_validation(entries, trials=args.trials, seed=args.seed,
                            threads=args.threads)
    for line in report.lines():
        print(line)
    print(f"{report.n_passed}/{len(report.results)} entries within combined 3 sigma")
    manifest = RunManifest("validate-classical", _manifest_params(args), args.seed)
    out = Path(args.out)
    manifest.register(write_json(out / "validation.json", report.as_dict()))
    manifest.write(out)
    required = args.min_pass if args.min_pass is not None else len(report.results)
    return 0 if report.n_passed >= required else 1


def cmd_verify_fusion(args) -> int:
    report = run_fusion_checks(n_leaves=args.leaves)
    print(report.text())
    if args.out:
        manifest = RunManifest("verify-fusion", _manifest_params(args), None)
        out = Path(args.out)
        manifest.register(write_json(out / "fusion_verification.json", report.as_dict()))
        manifest.write(out)
    return 0 if report.passed else 1


def cmd_build_lattice(args) -> int:
    spec, diamond, family = _resolve_lattice_args(args)
    lattice = build_lattice(spec, args.size, args.boundary, diamond_filter=diamond)
    manifest = RunManifest("build-lattice", _manifest_params(args), None)
    out = Path(args.out)
    rows = zip(lattice.edges_u.tolist(), lattice.edges_v.tolist(),
               lattice.edge_vector_id.tolist())
    manifest.register(write_csv(out / "edges.csv", EDGE_COLUMNS, rows))
    manifest.register(write_json(out / "lattice.json", {
        "family": family, "dimension": spec.dimension, "L": args.size,
        "boundary": args.boundary, "diamond_filter": diamond,
        "n_nodes": lattice.n_nodes, "n_edges": lattice.n_edges,
        "vectors": [list(v) for v in spec.vectors],
    }))
    manifest.write(out)
    print(lattice.describe())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fusionperc",
        description="Percolation Monte Carlo for loss-tolerant fusion lattices")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="spanning probability over a parameter grid")
    _add_lattice_options(p)
    _add_common_options(p)
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--sizes", type=parse_sizes, required=True, help="L1,L2,...")
    p.add_argument("--eta", type=parse_range, help="eta grid start:stop:step (fusion models)")
    p.add_argument("--p", type=parse_range, help="p grid start:stop:step (classical models)")
    p.add_argument("--p-s", type=float, default=DEFAULT_FUSION_SUCCESS,
                   help="fusion success probability")
    p.add_argument("--span-axis", type=int, default=0, help="axis for spanning detection")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="estimate a percolation threshold")
    _add_lattice_options(p)
    _add_common_options(p)
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--sizes", type=parse_sizes, default=(12, 16, 24, 32),
                   help="finite sizes for the extrapolation")
    p.add_argument("--window", type=parse_window, help="sweep window lo:hi")
    p.add_argument("--resolution", type=float, default=1e-3,
                   help="target grid resolution near the crossing")
    p.add_argument("--p-s", type=float, default=DEFAULT_FUSION_SUCCESS)
    p.add_argument("--span-axis", type=int, default=0)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("component-size",
                       help="largest-component fraction over an eta grid")
    _add_lattice_options(p)
    _add_common_options(p, trials_default=100)
    p.set_defaults(boundary="periodic")
    p.add_argument("--model", choices=("spin", "photon"), default="spin")
    p.add_argument("--sizes", type=parse_sizes, required=True)
    p.add_argument("--eta", type=parse_range, required=True)
    p.add_argument("--p-s", type=float, default=DEFAULT_FUSION_SUCCESS)
    p.set_defaults(func=cmd_component_size)

    p = sub.add_parser("optimize", help="greedy search for loss-tolerant lattices")
    _add_common_options(p, trials_default=200)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, default=1, help="max |z_i| of candidate vectors")
    p.add_argument("--model", choices=("spin", "photon"), default="spin")
    p.add_argument("--budget", type=int, default=200, help="threshold evaluations allowed")
    p.add_argument("--p-s", type=float, default=DEFAULT_FUSION_SUCCESS)
    p.add_argument("--kappa", type=float, default=1.0,
                   help="improvement must exceed kappa combined sigmas")
    p.add_argument("--direction", choices=("grow", "shrink"), default="grow")
    p.add_argument("--search-sizes", type=parse_sizes,
                   help="override search-fidelity lattice sizes")
    p.add_argument("--search-trials", type=int, default=200)
    p.add_argument("--grid-lo", type=float, default=0.82,
                   help="lower edge of the fixed search eta grid")
    p.add_argument("--final-trials", type=int, default=800,
                   help="trials per point for the final re-score")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("validate-classical",
                       help="compare classical thresholds against reference values")
    _add_common_options(p)
    p.add_argument("--family", help="single entry: lattice family")
    p.add_argument("--dim", type=int, help="single entry: dimension")
    p.add_argument("--mode", choices=("bond", "site"), help="single entry: model")
    p.add_argument("--min-pass", type=int, default=None,
                   help="entries required to pass (default: all)")
    p.set_defaults(func=cmd_validate_classical)

    p = sub.add_parser("verify-fusion",
                       help="verify the fusion stabilizer algebra; nonzero exit on mismatch")
    p.add_argument("--leaves", type=int, default=3, help="leaves per star resource state")
    p.add_argument("--out", help="optional directory for a JSON report")
    p.set_defaults(func=cmd_verify_fusion)

    p = sub.add_parser("build-lattice", help="dump the edge list of a lattice")
    _add_lattice_options(p)
    p.add_argument("--size", type=int, required=True, help="side length L")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_lattice)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LatticeError, ThresholdError, OptimizerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
