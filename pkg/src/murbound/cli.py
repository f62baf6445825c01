"""Command-line front end.

Subcommands: constant, table, wasserstein, groundstate, simulate, region.
Exit codes: 0 success, 1 usage error, 2 numeric-tolerance failure,
3 I/O error.  Reports are delimited text (CSV/JSON); `--plot` additionally
renders matplotlib figures next to the data files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import covariant, io, reference
from .covariant import (CovariantError, DensityOperator, husimi,
                        marginal_by_convolution, noise_marginals,
                        observable_distance_covariant, state_density_grid)
from .oscillator import BasisSpec
from .quadrature import QuadratureError
from .spectral import (KSpec, admissible_region, ground_state_wavefunction,
                       optimal_constant)
from .transport import (DiscreteMeasure, GridDensity, MeasureError,
                        kantorovich_lp, wasserstein1_1d)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2
EXIT_IO = 3


class ToleranceFailure(RuntimeError):
    """A computed quantity missed its documented tolerance."""


class UsageFailure(ValueError):
    """Invalid flag combination detected after parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _figure():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _basis(args, sector: str = "auto") -> BasisSpec:
    return BasisSpec(args.dim, args.basis, args.hbar, sector)


def _add_basis_flags(parser, default_n=128):
    parser.add_argument("--dim", type=int, default=1,
                        help="dimension d (default 1)")
    parser.add_argument("--basis", type=int, default=default_n,
                        help=f"basis truncation N (default {default_n})")
    parser.add_argument("--hbar", type=float, default=1.0)


def cmd_constant(args) -> int:
    spec = KSpec(args.a, args.b, _basis(args))
    result = optimal_constant(spec)
    if args.format == "json":
        text = io.dumps_json(result.to_json_dict()) + "\n"
    else:
        d = result.to_json_dict()
        d["convergence"] = ";".join(
            f"{n}:{io.format_float(e)}" for n, e in result.convergence)
        del d["coefficients"]
        text = "".join(f"{k},{d[k] if isinstance(d[k], (int, str)) else io.format_float(d[k])}\n"
                       for k in d)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_table(args) -> int:
    rows = reference.compute_table()
    print(f"{'d':>3} {'C':>12} {'target':>10} {'C_prime':>12} "
          f"{'target':>10} {'trace |dE0|':>14} {'status':>7}")
    failures = []
    for row in rows:
        trace = [e for _, e in row.convergence]
        drift = abs(trace[-1] - trace[-2]) if len(trace) > 1 else 0.0
        status = "ok" if row.ok else "FAIL"
        print(f"{row.dimension:>3} {row.C:>12.7f} {row.C_target:>10.6f} "
              f"{row.C_prime:>12.7f} {row.C_prime_target:>10.6f} "
              f"{drift:>14.3e} {status:>7}")
        if not row.ok:
            failures.append(row)
    for row in failures:
        print(f"d={row.dimension}: C error {row.C_error:.3e}, "
              f"C' error {row.C_prime_error:.3e}", file=sys.stderr)
    return EXIT_TOLERANCE if failures else EXIT_OK


def cmd_wasserstein(args) -> int:
    mu1 = io.read_measure_csv(args.fileA)
    mu2 = io.read_measure_csv(args.fileB)
    discrete = isinstance(mu1, DiscreteMeasure)
    if discrete and mu1.dimension > 1:
        value, _ = kantorovich_lp(mu1, mu2, args.metric)
    else:
        value = wasserstein1_1d(mu1, mu2)
        if args.oracle and discrete:
            lp_value, _ = kantorovich_lp(mu1, mu2, args.metric)
            print(f"lp,{io.format_float(lp_value)}")
            if abs(lp_value - value) > 1e-9:
                raise ToleranceFailure(
                    f"CDF value {value!r} and LP value {lp_value!r} "
                    f"disagree beyond 1e-9")
    print(io.format_float(value))
    return EXIT_OK


def cmd_groundstate(args) -> int:
    spec = KSpec(args.a, args.b, _basis(args))
    result = optimal_constant(spec)
    radial = spec.basis.sector == "radial"
    origin = 0.0 if radial else -12.0
    count = 769 if radial else 1537
    table = ground_state_wavefunction(result, origin=origin,
                                      step=1.0 / 64, count=count)
    prefix = Path(args.output)
    payload = result.to_json_dict()
    payload["gaussian_overlap"] = table.gaussian_overlap
    io.write_json(prefix.with_suffix(".json"), payload)
    io.write_columns_csv(f"{prefix}_wavefunction.csv", "x,psi,density",
                         table.x, table.psi, table.density.values)
    print(f"E0,{io.format_float(result.E0)}")
    print(f"C,{io.format_float(result.C)}")
    print(f"gaussian_overlap,{io.format_float(table.gaussian_overlap)}")
    if args.plot:
        plt = _figure()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(table.x, table.psi, label="ground state")
        ax.plot(table.x, table.density.values, label="density")
        ax.set_xlabel("r" if radial else "x")
        ax.legend()
        ax.set_title(f"K ground state, d={args.dim}, N={args.basis}")
        fig.savefig(f"{prefix}.png", dpi=150)
        plt.close(fig)
    return EXIT_OK


def _named_operator(name: str, basis: BasisSpec) -> DensityOperator:
    if name == "ground":
        return covariant.ground_operator(basis)
    if name == "optimal":
        return covariant.optimal_operator(basis)
    if name.startswith("excited-"):
        return covariant.excited_operator(int(name.split("-", 1)[1]), basis)
    if name.startswith("squeezed-"):
        return covariant.squeezed_operator(float(name.split("-", 1)[1]),
                                           basis)
    if name.startswith("file:"):
        coeff = io.read_coefficients(name[5:])
        if len(coeff) < basis.size:
            coeff = np.concatenate(
                [coeff, np.zeros(basis.size - len(coeff))])
        return covariant.state_operator(coeff[:basis.size], basis)
    raise UsageFailure(
        f"unknown state {name!r}; use ground, excited-N, squeezed-L, "
        f"optimal or file:PATH")


def cmd_simulate(args) -> int:
    basis = BasisSpec(1, args.basis, args.hbar, "full")
    rho = _named_operator(args.state, basis)
    m = _named_operator(args.noise, basis)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    ideal_q, ideal_p = state_density_grid(rho)
    noise = noise_marginals(m)
    conv_q = marginal_by_convolution(ideal_q, noise.mQ)
    conv_p = marginal_by_convolution(ideal_p, noise.mP)
    pair = observable_distance_covariant(m)
    phase = husimi(rho, m)

    io.write_grid_csv(out / "ideal_q.csv", ideal_q)
    io.write_grid_csv(out / "ideal_p.csv", ideal_p)
    io.write_grid_csv(out / "noise_q.csv", noise.mQ)
    io.write_grid_csv(out / "noise_p.csv", noise.mP)
    io.write_grid_csv(out / "marginal_q.csv", conv_q)
    io.write_grid_csv(out / "marginal_p.csv", conv_p)
    p_grid, q_grid = phase.p_grid, phase.q_grid
    io.write_columns_csv(out / "husimi.csv", "p,q,value",
                         np.repeat(p_grid, len(q_grid)),
                         np.tile(q_grid, len(p_grid)),
                         phase.values.ravel())
    io.write_json(out / "husimi.json", {
        "schema": 1,
        "pGrid": {"origin": phase.p_origin, "step": phase.p_step,
                  "count": len(p_grid)},
        "qGrid": {"origin": phase.q_origin, "step": phase.q_step,
                  "count": len(q_grid)},
        "rows": [list(row) for row in phase.values],
    })

    res_q = _marginal_residual(phase.q_marginal(), conv_q)
    res_p = _marginal_residual(phase.p_marginal(), conv_p)
    summary = {
        "schema": 1,
        "state": args.state,
        "noise": args.noise,
        "N": args.basis,
        "hbar": args.hbar,
        "dQ": pair.deltaQ,
        "dP": pair.deltaP,
        "product": pair.product,
        "husimi_mass": phase.total_mass,
        "marginal_residual_q": res_q,
        "marginal_residual_p": res_p,
    }
    io.write_json(out / "summary.json", summary)
    print(f"dQ,{io.format_float(pair.deltaQ)}")
    print(f"dP,{io.format_float(pair.deltaP)}")
    print(f"product,{io.format_float(pair.product)}")
    print(f"marginal_residual_q,{io.format_float(res_q)}")
    print(f"marginal_residual_p,{io.format_float(res_p)}")
    if args.plot:
        plt = _figure()
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        axes[0].imshow(phase.values, origin="lower", aspect="auto",
                       extent=[q_grid[0], q_grid[-1], p_grid[0], p_grid[-1]])
        axes[0].set_xlabel("q")
        axes[0].set_ylabel("p")
        axes[0].set_title("joint outcome density")
        axes[1].plot(conv_q.grid, conv_q.values, label="conv marginal q")
        hq = phase.q_marginal()
        axes[1].plot(hq.grid, hq.values, "--", label="Husimi marginal q")
        axes[1].legend()
        fig.savefig(out / "simulate.png", dpi=150)
        plt.close(fig)
    if max(res_q, res_p) > 2e-4:
        raise ToleranceFailure(
            f"marginal identity residual {max(res_q, res_p):.3e} > 2e-4")
    return EXIT_OK


def _marginal_residual(marginal: GridDensity, conv: GridDensity) -> float:
    interp = np.interp(marginal.grid, conv.grid, conv.values,
                       left=0.0, right=0.0)
    return float(np.abs(marginal.values - interp).max())


def cmd_region(args) -> int:
    spec = KSpec(basis=BasisSpec(1, args.basis, args.hbar, "even"))
    result = optimal_constant(spec)
    boundary, cloud = admissible_region(args.samples, spec, seed=args.seed)
    bound = result.C * args.hbar
    rows = [("boundary", p) for p in boundary] + [("random", p)
                                                 for p in cloud]
    lines = ["# kind,deltaQ,deltaP,product"]
    for kind, p in rows:
        lines.append(f"{kind},{io.format_float(p.deltaQ)},"
                     f"{io.format_float(p.deltaP)},"
                     f"{io.format_float(p.product)}")
    Path(args.output).write_text("\n".join(lines) + "\n")
    worst = min(p.product for _, p in rows)
    print(f"C,{io.format_float(result.C)}")
    print(f"rows,{len(rows)}")
    print(f"min_product,{io.format_float(worst)}")
    if args.plot:
        plt = _figure()
        fig, ax = plt.subplots(figsize=(5, 5))
        bq = [p.deltaQ for p in boundary]
        bp = [p.deltaP for p in boundary]
        ax.plot(bq, bp, "-o", ms=3, label="dilation family")
        ax.scatter([p.deltaQ for p in cloud], [p.deltaP for p in cloud],
                   s=8, alpha=0.5, label="random densities")
        qs = np.geomspace(min(bq) / 2, max(bq) * 2, 200)
        ax.plot(qs, bound / qs, "k--", lw=1, label="hyperbola")
        ax.set_xlabel("deltaQ")
        ax.set_ylabel("deltaP")
        ax.legend()
        fig.savefig(Path(args.output).with_suffix(".png"), dpi=150)
        plt.close(fig)
    if worst < bound - 1e-6:
        raise ToleranceFailure(
            f"sampled product {worst!r} below the bound {bound!r}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="murbound",
                     description="Measurement uncertainty bound toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", help="optimal constant C for one spec")
    _add_basis_flags(p)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("table",
                       help="recompute the constants table for d=1,2,3,42")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("wasserstein", help="distance between two measures")
    p.add_argument("fileA")
    p.add_argument("fileB")
    p.add_argument("--metric", choices=("euclidean", "l1", "linf"),
                   default="euclidean")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check the 1d CDF formula against the LP")
    p.set_defaults(func=cmd_wasserstein)

    p = sub.add_parser("groundstate",
                       help="ground state of K with wavefunction export")
    _add_basis_flags(p)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--output", default="groundstate")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_groundstate)

    p = sub.add_parser("simulate",
                       help="covariant measurement simulation bundle")
    p.add_argument("--state", default="ground")
    p.add_argument("--noise", default="ground")
    p.add_argument("--basis", type=int, default=64)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--output-dir", default="simulate_out")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("region",
                       help="admissible (deltaQ, deltaP) region samples")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--basis", type=int, default=64)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--output", default="region.csv")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_region)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageFailure as exc:
        print(f"murbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ToleranceFailure as exc:
        print(f"murbound: tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (io.IOFormatError, OSError) as exc:
        print(f"murbound: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (MeasureError, CovariantError, QuadratureError, ValueError) as exc:
        print(f"murbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
