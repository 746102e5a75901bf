"""Command-line front end: evaluate, optimize, sweep, and reproduce targets.

Physical lengths cross this boundary in meters and are converted to
wavelengths on the way in; CSV columns suffixed _wl are wavelengths.  Exit
codes: 0 success, 2 usage/parse error, 3 numerical failure, 4 exhausted
grid or evaluation budget.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .model import (
    ArrayGeometry,
    DirectionCosine,
    SingularCouplingError,
    coupling_matrix,
    directivity,
    optimal_excitation,
)
from .optimize import (
    BudgetExceededError,
    GridExhaustedError,
    InvalidGridError,
    OptimizerConfig,
    build_grid,
    exhaustive_search,
    gradient_descent,
    greedy_search,
    gs_gd,
    ulah_positions,
)
from .svgplot import line_chart
from .sweep import (
    Algorithm,
    SweepRecord,
    SweepSpec,
    reproduce_fig2,
    reproduce_table1,
    run_sweep,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_BUDGET = 4

SWEEP_HEADER = "theta_deg,u,algorithm,d_max_wl,directivity,positions_wl,termination,wall_ms"
REPRO_HEADER = "theta_deg,u,algorithm,d_max_wl,directivity,positions_wl,termination"

DEFAULT_WAVELENGTH_M = 0.3
_TABLE2 = {
    "n_antennas": 5,
    "d_min_m": 0.03,
    "d_max_m": 1.2,
    "d_g_m": 0.015,
    "max_iters": 5,
    "alpha0": 1.0,
    "epsilon": 1e-3,
}


def fmt(value: float) -> str:
    """Fixed-notation number with 9 significant digits (CSV cell format)."""
    if math.isnan(value):
        return "nan"
    return np.format_float_positional(
        value, precision=9, unique=False, fractional=False, trim="k"
    )


def _positions_cell(positions_wl) -> str:
    return ";".join(fmt(p) for p in sorted(positions_wl))


def _record_row(rec: SweepRecord, with_wall: bool) -> str:
    cells = [
        fmt(rec.theta_deg),
        fmt(rec.u),
        rec.algorithm.value,
        fmt(rec.d_max),
        fmt(rec.directivity),
        _positions_cell(rec.positions),
        rec.termination,
    ]
    if with_wall:
        cells.append(fmt(rec.wall_time_ms))
    return ",".join(cells)


def _write_records_csv(path: Path, records: list[SweepRecord], with_wall: bool) -> None:
    header = SWEEP_HEADER if with_wall else REPRO_HEADER
    lines = [header] + [_record_row(r, with_wall) for r in records]
    path.write_text("\n".join(lines) + "\n", newline="\n")


def _records_svg(records: list[SweepRecord], title: str, n_antennas: int) -> str:
    series_keys = []
    for rec in records:
        key = (rec.algorithm, rec.d_max)
        if key not in series_keys:
            series_keys.append(key)
    multiple_apertures = len({d for _, d in series_keys}) > 1
    series = []
    for algo, d_max in series_keys:
        pts = [
            (r.theta_deg, r.directivity)
            for r in records
            if r.algorithm is algo and r.d_max == d_max
        ]
        label = f"{algo.value}, d_max={d_max:g}" if multiple_apertures else algo.value
        series.append((label, [p[0] for p in pts], [p[1] for p in pts]))
    return line_chart(
        series,
        title=title,
        x_label="theta (degrees)",
        y_label="directivity",
        reference_y=float(n_antennas),
        reference_label=f"N = {n_antennas}",
    )


def _parse_positions_m(text: str, wavelength_m: float) -> np.ndarray:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"positions must be comma-separated numbers: {exc}") from None
    if not values:
        raise ValueError("positions list is empty")
    return np.asarray(values, dtype=float) / wavelength_m


def cmd_eval(args: argparse.Namespace) -> int:
    wl = args.wavelength
    try:
        positions = _parse_positions_m(args.positions, wl)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    geom = ArrayGeometry(positions, d_min=args.dmin / wl, d_max=args.dmax / wl)
    if not geom.is_feasible() and not args.allow_infeasible:
        print(
            "error: geometry violates the spacing limits (use --allow-infeasible to override)",
            file=sys.stderr,
        )
        return EXIT_USAGE
    u = DirectionCosine.from_theta_deg(args.theta)
    try:
        coupling = coupling_matrix(geom)
        gain = directivity(u, geom, coupling)
        excitation = optimal_excitation(u, geom, coupling)
    except SingularCouplingError as exc:
        print(f"SingularCouplingError: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"theta_deg: {fmt(args.theta)}")
    print(f"u: {fmt(u.u)}")
    print(f"positions_wl: {_positions_cell(positions.tolist())}")
    print(f"directivity: {fmt(gain)}")
    print(f"excitation_norm: {fmt(excitation.norm)}")
    print(f"norm_check: {'ok' if abs(excitation.norm - 1.0) <= 1e-12 else 'FAIL'}")
    print(f"jitter_applied: {fmt(coupling.jitter_applied)}")
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    wl = args.wavelength
    u = DirectionCosine.from_theta_deg(args.theta)
    try:
        grid = build_grid(args.dmin / wl, args.dmax / wl, args.dg / wl)
        cfg = OptimizerConfig(
            n_antennas=args.N,
            u=u,
            grid=grid,
            max_iters=args.T,
            alpha0=args.alpha0,
            epsilon=args.eps,
        )
    except (InvalidGridError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        if args.algo == "gs":
            result = greedy_search(cfg)
        elif args.algo == "gd":
            result = gradient_descent(u, ulah_positions(args.N, grid.d_min, grid.d_max), cfg)
        elif args.algo == "gsgd":
            result = gs_gd(cfg)
        else:
            result = exhaustive_search(cfg, max_configs=args.es_budget)
    except (GridExhaustedError, BudgetExceededError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SingularCouplingError as exc:
        print(f"SingularCouplingError: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    wall_ms = (time.perf_counter() - start) * 1e3

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    algo_name = {"gs": "GS", "gd": "GD", "gsgd": "GS-GD", "es": "ES"}[args.algo]
    record = SweepRecord(
        theta_deg=args.theta,
        u=u.u,
        algorithm=Algorithm(algo_name),
        d_max=grid.d_max,
        directivity=result.directivity,
        positions=tuple(sorted(result.geometry.positions.tolist())),
        wall_time_ms=wall_ms,
        termination=result.termination.value,
    )
    _write_records_csv(out_dir / "optimize.csv", [record], with_wall=True)
    if args.trace:
        lines = ["iteration,directivity,step_size"]
        for step in result.trace:
            step_cell = fmt(step.step_size) if step.step_size is not None else ""
            lines.append(f"{step.iteration},{fmt(step.directivity)},{step_cell}")
        (out_dir / "optimize_trace.csv").write_text("\n".join(lines) + "\n", newline="\n")
    print(f"wrote {out_dir / 'optimize.csv'} (directivity {fmt(result.directivity)})")
    return EXIT_OK


def _load_toml(path: str) -> dict:
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def _sweep_spec_from_config(cfg: dict) -> tuple[SweepSpec, dict]:
    wl = float(cfg.get("wavelength_m", DEFAULT_WAVELENGTH_M))
    if wl <= 0:
        raise ValueError("wavelength_m must be positive")
    thetas = cfg.get("thetas_deg")
    if thetas is None:
        thetas = [float(t) for t in range(0, 91)]
    algorithms = tuple(Algorithm(str(a)) for a in cfg.get("algorithms", ["GS-GD", "ULAH"]))
    n = int(cfg.get("n_antennas", 5))
    apertures_m = cfg.get("apertures_m")
    if apertures_m is None:
        apertures = ((n - 1) / 2.0, float(n - 1), 2.0 * (n - 1))
    else:
        apertures = tuple(float(a) / wl for a in apertures_m)
    spec = SweepSpec(
        thetas_deg=tuple(float(t) for t in thetas),
        algorithms=algorithms,
        n_antennas=n,
        apertures=apertures,
        d_min=float(cfg.get("d_min_m", _TABLE2["d_min_m"])) / wl,
        d_g=float(cfg.get("d_g_m", _TABLE2["d_g_m"])) / wl,
        max_iters=int(cfg.get("max_iters", 5)),
        gd_max_iters=int(cfg.get("gd_max_iters", 30)),
        alpha0=float(cfg.get("alpha0", 1.0)),
        epsilon=float(cfg.get("epsilon", 1e-3)),
        es_budget=int(cfg.get("es_budget", 50_000_000)),
    )
    meta = {
        "wavelength_m": wl,
        "output_dir": cfg.get("output_dir", "."),
        "formats": list(cfg.get("formats", ["csv", "svg"])),
    }
    return spec, meta


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        config = _load_toml(args.config)
        spec, meta = _sweep_spec_from_config(config)
    except (OSError, tomllib.TOMLDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out or meta["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    records = run_sweep(spec)
    if "csv" in meta["formats"]:
        _write_records_csv(out_dir / "sweep.csv", records, with_wall=True)
        print(f"wrote {out_dir / 'sweep.csv'}")
    if "svg" in meta["formats"]:
        svg = _records_svg(records, "Directivity versus wave direction", spec.n_antennas)
        (out_dir / "sweep.svg").write_text(svg, newline="\n")
        print(f"wrote {out_dir / 'sweep.svg'}")
    return EXIT_OK


def _default_thetas() -> tuple[float, ...]:
    return tuple(float(t) for t in range(0, 91))


def _reproduce_table1(out_dir: Path) -> None:
    lines = ["N,exact,approx"]
    for n, exact, approx in reproduce_table1():
        lines.append(f"{n},{fmt(exact)},{fmt(approx)}")
    (out_dir / "table1.csv").write_text("\n".join(lines) + "\n", newline="\n")


def _reproduce_fig2(out_dir: Path) -> None:
    lines = ["n,d_wl,exact_sq_mag,approx_sq_mag,u"]
    for n in (2, 3):
        for d, exact, approx, u in reproduce_fig2(n):
            lines.append(f"{n},{fmt(d)},{fmt(exact)},{fmt(approx)},{fmt(u)}")
    (out_dir / "fig2.csv").write_text("\n".join(lines) + "\n", newline="\n")


def _reproduce_fig34(out_dir: Path, name: str, with_es: bool) -> None:
    n = 5
    if name == "fig3":
        algorithms: tuple = (Algorithm.GS_GD, Algorithm.ULAH)
        apertures = ((n - 1) / 2.0, float(n - 1), 2.0 * (n - 1))
    else:
        algorithms = (Algorithm.GS_GD, Algorithm.GS, Algorithm.GD, Algorithm.ULAH)
        apertures = (float(n - 1),)
    if with_es:
        algorithms = algorithms + (Algorithm.ES,)
    spec = SweepSpec(
        thetas_deg=_default_thetas(),
        algorithms=algorithms,
        n_antennas=n,
        apertures=apertures,
    )
    records = run_sweep(spec)
    _write_records_csv(out_dir / f"{name}.csv", records, with_wall=False)
    title = (
        "Optimized coupled array versus half-wavelength baseline"
        if name == "fig3"
        else "Position-optimization algorithm comparison"
    )
    (out_dir / f"{name}.svg").write_text(_records_svg(records, title, n), newline="\n")


def cmd_reproduce(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if args.target == "table1":
            _reproduce_table1(out_dir)
        elif args.target == "fig2":
            _reproduce_fig2(out_dir)
        else:
            _reproduce_fig34(out_dir, args.target, args.with_es)
    except BudgetExceededError as exc:
        print(f"BudgetExceededError: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"wrote {args.target} outputs under {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupled-array",
        description="Directivity of mutually coupled movable-antenna arrays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a fixed geometry")
    p_eval.add_argument("--positions", required=True, help="comma-separated meters")
    p_eval.add_argument("--theta", type=float, default=90.0, help="degrees in [0, 180]")
    p_eval.add_argument("--wavelength", type=float, default=DEFAULT_WAVELENGTH_M)
    p_eval.add_argument("--dmin", type=float, default=_TABLE2["d_min_m"], help="meters")
    p_eval.add_argument("--dmax", type=float, default=_TABLE2["d_max_m"], help="meters")
    p_eval.add_argument("--allow-infeasible", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_opt = sub.add_parser("optimize", help="optimize positions for one direction")
    p_opt.add_argument("--algo", choices=("gs", "gd", "gsgd", "es"), default="gsgd")
    p_opt.add_argument("--N", type=int, default=_TABLE2["n_antennas"])
    p_opt.add_argument("--theta", type=float, default=90.0)
    p_opt.add_argument("--dmax", type=float, default=_TABLE2["d_max_m"], help="meters")
    p_opt.add_argument("--dmin", type=float, default=_TABLE2["d_min_m"], help="meters")
    p_opt.add_argument("--dg", type=float, default=_TABLE2["d_g_m"], help="meters")
    p_opt.add_argument("--T", type=int, default=_TABLE2["max_iters"])
    p_opt.add_argument("--alpha0", type=float, default=_TABLE2["alpha0"])
    p_opt.add_argument("--eps", type=float, default=_TABLE2["epsilon"])
    p_opt.add_argument("--wavelength", type=float, default=DEFAULT_WAVELENGTH_M)
    p_opt.add_argument("--es-budget", type=int, default=50_000_000)
    p_opt.add_argument("--out", default=".")
    p_opt.add_argument("--trace", action="store_true", help="also write the step trace")
    p_opt.set_defaults(func=cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="run a direction sweep from a TOML config")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=None, help="override the config output_dir")
    p_sweep.set_defaults(func=cmd_sweep)

    p_rep = sub.add_parser("reproduce", help="regenerate a table/figure dataset")
    p_rep.add_argument("target", choices=("table1", "fig2", "fig3", "fig4"))
    p_rep.add_argument("--out", default=".")
    p_rep.add_argument(
        "--with-es",
        action="store_true",
        help="include exhaustive search (slow at the full grid scale)",
    )
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
