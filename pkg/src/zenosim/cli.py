"""Command-line experiment runner.

Subcommands reproduce the package's reference experiments as CSV or JSON
data files with full provenance metadata, rendering a companion PNG figure
next to the delimited output (suppress with --no-plot).

Parameter precedence: command-line flags override a plain-text key-value
config file (--config), which overrides built-in defaults.  The default
master seed can also come from the ZENOSIM_SEED environment variable.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, continuous, io, pulsed, qmath

DEFAULT_SEED = 20260825
SEED_ENV_VAR = "ZENOSIM_SEED"

#: Reference drive strengths: pulsed convention (population period 2pi/omega)
#: and continuous convention (period pi/omega), both for a 1 MHz drive.
OMEGA_PULSED_DEFAULT = qmath.angular_frequency(1.0)
OMEGA_CONTINUOUS_DEFAULT = qmath.angular_frequency(1.0)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        args.handler(args)
    except ValueError as exc:
        print(f"error: invalid-argument: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenosim",
        description="Quantum Zeno effect experiments for a driven phase qubit.",
    )
    parser.add_argument("--version", action="version", version=f"zenosim {__version__}")
    sub = parser.add_subparsers(dest="command")
    parser.set_defaults(command=None)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master RNG seed")
        p.add_argument("--output", type=Path, default=None, help="output data file")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument("--config", type=Path, default=None, help="key=value config file")
        p.add_argument("--no-plot", action="store_true", help="skip the PNG figure")

    p = sub.add_parser("fig2", help="survival vs number of probes (pulsed)")
    p.add_argument("--n-max", type=int, default=None)
    common(p)
    p.set_defaults(handler=run_fig2)

    p = sub.add_parser("fig3", help="survival vs time for several probe spacings")
    p.add_argument("--omega", type=float, default=None, help="pulsed drive, rad/us")
    p.add_argument(
        "--dt", type=float, action="append", default=None,
        help="probe interval in us (repeatable)",
    )
    p.add_argument("--t-max", type=float, default=None)
    common(p)
    p.set_defaults(handler=run_fig3)

    p = sub.add_parser("fig4", help="MCWF no-jump counts vs tunneling rate")
    p.add_argument("--omega", type=float, default=None, help="continuous drive, rad/us")
    p.add_argument("--window", type=float, default=None, help="evolution window, us")
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--gamma-steps", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument(
        "--stepping", choices=["first-order", "exact"], default=None,
        help="no-jump update rule",
    )
    common(p)
    p.set_defaults(handler=run_fig4)

    p = sub.add_parser("pulsed-sim", help="stochastic pulsed-measurement ensemble")
    p.add_argument("--n-probes", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--epsilon0", type=float, default=None, help="false-switch probability")
    p.add_argument("--eta", type=float, default=None, help="missed-detection probability")
    common(p)
    p.set_defaults(handler=run_pulsed_sim)

    p = sub.add_parser("equivalence", help="pulsed vs continuous decay-rate matching")
    p.add_argument("--omega-pulsed", type=float, default=None)
    p.add_argument("--dt-min", type=float, default=None)
    p.add_argument("--dt-max", type=float, default=None)
    p.add_argument("--dt-steps", type=int, default=None)
    common(p)
    p.set_defaults(handler=run_equivalence)

    p = sub.add_parser("validate", help="oracle cross-checks and coefficient report")
    common(p)
    p.set_defaults(handler=run_validate)

    return parser


def load_config(path: Path) -> dict:
    """Plain key = value lines; '#' starts a comment; dashes equal underscores."""
    values = {}
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def resolve(args, defaults: dict) -> dict:
    """Merge flag > config-file > default for every parameter of a subcommand."""
    config = load_config(args.config) if args.config else {}
    out = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in config:
            raw = config[key]
            if isinstance(default, int) and not isinstance(default, bool):
                out[key] = int(raw)
            elif isinstance(default, float):
                out[key] = float(raw)
            elif isinstance(default, list):
                out[key] = [float(v) for v in raw.split(",")]
            else:
                out[key] = raw
            del config[key]
        else:
            out[key] = default
    return out


def resolve_seed(args) -> tuple[int, str]:
    if args.seed is not None:
        return args.seed, "flag"
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env), f"env:{SEED_ENV_VAR}"
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer: {env!r}") from exc
    return DEFAULT_SEED, "default"


def _emit(args, default_name, metadata, columns, rows, extra=None):
    """Write the data file in the chosen format; returns the path written."""
    fmt = args.format or "csv"
    out = args.output or Path(f"{default_name}.{fmt}")
    if fmt == "csv":
        io.write_csv(out, metadata, columns, rows)
    else:
        io.write_json(out, metadata, columns, rows, extra=extra)
    return out


def _plot_path(data_path: Path) -> Path:
    return data_path.with_suffix(".png")


def run_fig2(args) -> None:
    params = resolve(args, {"n_max": 100})
    n_max = params["n_max"]
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    rows = []
    for n in range(1, n_max + 1):
        exact = pulsed.survival_exact(n)
        approx = pulsed.survival_approx(n)
        rows.append((n, exact, approx, abs(exact - approx)))
    metadata = {"experiment": "fig2", "n_max": n_max}
    out = _emit(args, "fig2", metadata, ["n", "survival_exact", "survival_approx", "abs_diff"], rows)
    if not args.no_plot:
        from . import plots

        plots.plot_probe_count_scan(rows, _plot_path(out))


def run_fig3(args) -> None:
    omega_default = OMEGA_PULSED_DEFAULT
    params = resolve(
        args,
        {
            "omega": omega_default,
            "dt": [math.pi / (50 * omega_default), math.pi / (100 * omega_default)],
            "t_max": math.pi / omega_default,
        },
    )
    omega, dts, t_max = params["omega"], list(params["dt"]), params["t_max"]
    if omega <= 0 or t_max <= 0 or not dts:
        raise ValueError("omega, t_max and at least one dt are required")
    dt_coarse = max(dts)
    for dt in dts:
        if abs(dt_coarse / dt - round(dt_coarse / dt)) > 1e-9:
            raise ValueError(f"dt = {dt} does not divide the coarsest dt = {dt_coarse}")
    n_rows = round(t_max / dt_coarse)
    times = [k * dt_coarse for k in range(n_rows + 1)]
    columns = ["t", "rabi_undamped"]
    for i in range(len(dts)):
        columns += [f"stepwise_exact_{i + 1}", f"exponential_approx_{i + 1}"]
    rows = []
    for t in times:
        row = [t, math.cos(omega * t / 2.0) ** 2]
        for dt in dts:
            row.append(pulsed.survival_vs_time(omega, dt, t, "exact"))
            row.append(pulsed.survival_vs_time(omega, dt, t, "approx"))
        rows.append(tuple(row))
    metadata = {"experiment": "fig3", "omega": omega, "t_max": t_max}
    for i, dt in enumerate(dts):
        metadata[f"dt_{i + 1}"] = dt
    out = _emit(args, "fig3", metadata, columns, rows)
    if not args.no_plot:
        from . import plots

        per_dt = {}
        for i, dt in enumerate(dts):
            per_dt[f"$\\delta t$={dt:.4g}"] = (
                [r[2 + 2 * i] for r in rows],
                [r[3 + 2 * i] for r in rows],
            )
        plots.plot_time_decay(times, [r[1] for r in rows], per_dt, _plot_path(out))


def run_fig4(args) -> None:
    omega_default = OMEGA_CONTINUOUS_DEFAULT
    params = resolve(
        args,
        {
            "omega": omega_default,
            "window": math.pi / (2 * omega_default),
            "gamma_min": 50.0,
            "gamma_max": 500.0,
            "gamma_steps": 10,
            "runs": 1000,
            "stepping": "exact",
        },
    )
    seed, seed_source = resolve_seed(args)
    threads = args.threads or os.cpu_count() or 1
    stepping = {
        "exact": continuous.EXACT_EXPONENTIAL,
        "first-order": continuous.FIRST_ORDER,
        "first_order": continuous.FIRST_ORDER,
    }.get(params["stepping"])
    if stepping is None:
        raise ValueError(f"unknown stepping mode {params['stepping']!r}")
    if params["gamma_steps"] < 1:
        raise ValueError("gamma_steps must be >= 1")
    grid = np.linspace(params["gamma_min"], params["gamma_max"], params["gamma_steps"])
    sweep = continuous.sweep_gamma(
        params["omega"], params["window"], grid, params["runs"], seed,
        stepping=stepping, threads=threads,
    )
    rows = []
    for r in sweep:
        h = continuous.hamiltonian(params["omega"], r.gamma)
        u = qmath.mat_exp(h, params["window"])
        oracle_count = params["runs"] * abs(u[0, 0]) ** 2
        rows.append(
            (r.gamma, r.no_jump_count, r.ci_low, r.ci_high, r.analytic_count, oracle_count)
        )
    metadata = {
        "experiment": "fig4",
        "omega": params["omega"],
        "window": params["window"],
        "gamma_min": params["gamma_min"],
        "gamma_max": params["gamma_max"],
        "gamma_steps": params["gamma_steps"],
        "runs": params["runs"],
        "stepping": stepping,
        "step_policy": "min(0.01/gamma, 0.01/omega, window/100), last step shortened",
        "survival_coefficient": "gamma/(4h)",
        "seed": seed,
        "seed_source": seed_source,
    }
    out = _emit(
        args, "fig4", metadata,
        ["gamma", "no_jump_count", "ci_low", "ci_high", "analytic_count", "oracle_count"],
        rows,
    )
    if not args.no_plot:
        from . import plots

        plots.plot_gamma_sweep(rows, params["runs"], _plot_path(out))


def run_pulsed_sim(args) -> None:
    params = resolve(
        args, {"n_probes": 10, "runs": 100_000, "epsilon0": 0.0, "eta": 0.0}
    )
    seed, seed_source = resolve_seed(args)
    imperfections = None
    if params["epsilon0"] or params["eta"]:
        imperfections = pulsed.ProbeImperfections(params["epsilon0"], params["eta"])
    protocol = pulsed.PulsedProtocol(
        omega=OMEGA_PULSED_DEFAULT,
        n_probes=params["n_probes"],
        imperfections=imperfections,
    )
    survived = pulsed.simulate_pulsed_ensemble(protocol, params["runs"], seed)
    fraction = survived / params["runs"]
    ci_low, ci_high = analysis.binomial_ci(survived, params["runs"], 0.95)
    rows = [
        (
            params["n_probes"], params["runs"], survived, fraction,
            ci_low, ci_high, pulsed.survival_exact(params["n_probes"]),
        )
    ]
    metadata = {
        "experiment": "pulsed-sim",
        "omega": protocol.omega,
        "window": protocol.window,
        "n_probes": params["n_probes"],
        "runs": params["runs"],
        "epsilon0": params["epsilon0"],
        "eta": params["eta"],
        "seed": seed,
        "seed_source": seed_source,
    }
    _emit(
        args, "pulsed_sim", metadata,
        ["n_probes", "runs", "survived", "fraction", "ci_low", "ci_high", "ideal_closed_form"],
        rows,
    )


def _equivalence_rows(omega_pulsed, dt_min, dt_max, dt_steps):
    dts = np.geomspace(dt_min, dt_max, dt_steps)
    rows = []
    for dt in dts:
        r = analysis.equivalence_check(omega_pulsed, float(dt))
        rows.append(
            (float(dt), r.gamma_matched, r.rate_pulsed, r.rate_continuous, r.relative_gap)
        )
    return rows


def run_equivalence(args) -> None:
    omega_default = 2.0 * OMEGA_CONTINUOUS_DEFAULT
    dt_max_default = 4.0 / (20.0 * (omega_default / 2.0))
    params = resolve(
        args,
        {
            "omega_pulsed": omega_default,
            "dt_min": dt_max_default / 100.0,
            "dt_max": dt_max_default,
            "dt_steps": 21,
        },
    )
    if params["dt_steps"] < 2 or params["dt_min"] <= 0 or params["dt_max"] <= params["dt_min"]:
        raise ValueError("need dt_steps >= 2 and 0 < dt_min < dt_max")
    rows = _equivalence_rows(
        params["omega_pulsed"], params["dt_min"], params["dt_max"], params["dt_steps"]
    )
    metadata = {
        "experiment": "equivalence",
        "omega_pulsed": params["omega_pulsed"],
        "omega_continuous": params["omega_pulsed"] / 2.0,
        "dt_min": params["dt_min"],
        "dt_max": params["dt_max"],
        "dt_steps": params["dt_steps"],
        "convention_bridge": "omega_pulsed = 2*omega_continuous",
    }
    out = _emit(
        args, "equivalence", metadata,
        ["dt", "gamma", "rate_pulsed", "rate_continuous", "relative_gap"],
        rows,
    )
    if not args.no_plot:
        from . import plots

        plots.plot_equivalence(rows, _plot_path(out))


#: Parameter grid shared by the validate report and the oracle tests.
VALIDATION_OMEGAS = (math.pi, 2 * math.pi, 4 * math.pi)
VALIDATION_GAMMAS = (0.0, 10.0, 50.0, 200.0, 500.0)
VALIDATION_TIMES = (0.0, 0.05, 0.25)


def validation_report(fine_steps: int = 10_000) -> dict:
    """Oracle agreement, survival-coefficient decision, equivalence table."""
    dev_prop_series = 0.0
    dev_prop_fine = 0.0
    dev_series_fine = 0.0
    dev_derived = 0.0
    dev_printed = 0.0
    for omega in VALIDATION_OMEGAS:
        for gamma in VALIDATION_GAMMAS:
            h = continuous.hamiltonian(omega, gamma)
            for t in VALIDATION_TIMES:
                closed = continuous.propagator(omega, gamma, t)
                series = qmath.mat_exp(h, t)
                fine = qmath.propagator_by_integration(h, t, fine_steps)
                dev_prop_series = max(dev_prop_series, float(np.max(np.abs(closed - series))))
                dev_prop_fine = max(dev_prop_fine, float(np.max(np.abs(closed - fine))))
                dev_series_fine = max(dev_series_fine, float(np.max(np.abs(series - fine))))
                derived = continuous.survival_amplitude(omega, gamma, t, "derived").value
                printed = continuous.survival_amplitude(omega, gamma, t, "printed").value
                dev_derived = max(dev_derived, abs(derived - series[0, 0]))
                dev_printed = max(dev_printed, abs(printed - series[0, 0]))

    shipped = "gamma/(4h)" if dev_derived <= dev_printed else "gamma/(2h)"
    example_omega, example_gamma, example_t = 2 * math.pi, 50.0, 0.25
    series_ex = qmath.mat_exp(
        continuous.hamiltonian(example_omega, example_gamma), example_t
    )[0, 0]
    dt_max = 4.0 / (20.0 * example_omega)
    equivalence = [
        {
            "dt": row[0],
            "gamma": row[1],
            "rate_pulsed": row[2],
            "rate_continuous": row[3],
            "relative_gap": row[4],
        }
        for row in _equivalence_rows(2 * example_omega, dt_max / 100.0, dt_max, 21)
    ]
    return {
        "oracle_grid": {
            "omegas": list(VALIDATION_OMEGAS),
            "gammas": list(VALIDATION_GAMMAS),
            "times": list(VALIDATION_TIMES),
            "fine_steps": fine_steps,
            "max_dev_propagator_vs_series": dev_prop_series,
            "max_dev_propagator_vs_fine_step": dev_prop_fine,
            "max_dev_series_vs_fine_step": dev_series_fine,
        },
        "survival_coefficient": {
            "shipped": shipped,
            "rejected": "gamma/(2h)" if shipped == "gamma/(4h)" else "gamma/(4h)",
            "max_dev_derived_vs_series": dev_derived,
            "max_dev_printed_vs_series": dev_printed,
            "example": {
                "omega": example_omega,
                "gamma": example_gamma,
                "t": example_t,
                "derived": abs(
                    continuous.survival_amplitude(
                        example_omega, example_gamma, example_t, "derived"
                    ).value
                ),
                "printed": abs(
                    continuous.survival_amplitude(
                        example_omega, example_gamma, example_t, "printed"
                    ).value
                ),
                "oracle": abs(series_ex),
            },
        },
        "equivalence": equivalence,
    }


def run_validate(args) -> None:
    report = validation_report()
    metadata = {"experiment": "validate"}
    fmt = args.format or "json"
    out = args.output or Path(f"validate.{fmt}")
    if fmt == "csv":
        raise ValueError("validate emits a structured report; use --format json")
    io.write_json(out, metadata, [], [], extra=report)


if __name__ == "__main__":
    sys.exit(main())
