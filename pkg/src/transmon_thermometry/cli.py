"""Command-line front end.

Four subcommands:

    rates    quasiparticle and dephasing rates versus temperature
    sweep    full protocol simulation over a temperature grid
    fisher   Cramer-Rao relative-error floors and NET
    fit      thermalization fits from a sweep file (or matching CSV)

Every command takes --config/--preset/--seed/--out/--format and honors the
determinism contract: identical configuration and seed give bit-identical
output.  All numbers are written with 17 significant digits; CSV files
carry a '#'-prefixed header block with the resolved configuration and seed.
Pass --plot to render a matplotlib figure next to the delimited output.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .config import ConfigError, RunConfig, load_config, parse_config, serialize
from .constants import kelvin_to_mk, lifetime_from_rate, s_to_us
from .errors import net, qfi_bound_three_level, qfi_bound_two_level
from .estimators import KINDS
from .experiment import sweep as run_sweep
from .experiment import weighted_linear_fit
from .quasiparticle import gamma1_qp, gamma_phi_andreev, gamma_phi_qp_tunneling

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_table(cfg: RunConfig, command: str, columns: list[str], rows: list[list],
                 out_path: str | None, out_format: str) -> None:
    if out_format == "json":
        payload = {
            "command": command,
            "config": json.loads(serialize(cfg)),
            "seed": cfg.seed,
            "columns": columns,
            "rows": [[(v if isinstance(v, str) else float(v)) for v in row]
                     for row in rows],
        }
        text = json.dumps(payload, indent=1)
    else:
        lines = [
            f"# transmon-thermometry {command}",
            f"# config: {serialize(cfg)}",
            f"# seed: {cfg.seed if cfg.seed is not None else 'none'}",
            "# columns: " + ",".join(columns),
        ]
        for row in rows:
            lines.append(",".join(_format_value(v) for v in row))
        text = "\n".join(lines) + "\n"
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _columns_to_arrays(columns: list[str], rows: list[list]) -> dict[str, np.ndarray]:
    table = {}
    for j, name in enumerate(columns):
        col = [row[j] for row in rows]
        if all(isinstance(v, str) for v in col):
            table[name] = np.array(col)
        else:
            table[name] = np.array([float(v) for v in col])
    return table


def _plot_path(out_path: str | None, command: str) -> str:
    if out_path is None or out_path == "-":
        raise ConfigError("--plot requires --out PATH to name the figure file")
    stem = out_path.rsplit(".", 1)[0]
    return f"{stem}_{command}.png"


def cmd_rates(cfg: RunConfig, args) -> int:
    device = cfg.device
    if device.junction is None:
        raise ConfigError("device has no junction parameters")
    columns = ["T_mK", "gamma1_qp", "tau1_qp_us", "tau1_total_us",
               "gamma_phi_tunneling", "gamma_phi_andreev"]
    rows = []
    for t in cfg.temperatures:
        g_qp = gamma1_qp(device, device.junction, t)
        total = g_qp + device.gamma1_base
        rows.append([
            kelvin_to_mk(t),
            g_qp,
            s_to_us(lifetime_from_rate(g_qp)) if g_qp > 0 else math.inf,
            s_to_us(lifetime_from_rate(total)),
            gamma_phi_qp_tunneling(device.junction, t),
            gamma_phi_andreev(device, device.junction, t),
        ])
    _write_table(cfg, "rates", columns, rows, args.out or cfg.out_path,
                 args.format or cfg.out_format)
    if args.plot:
        from . import plots
        plots.plot_rates(_columns_to_arrays(columns, rows),
                         _plot_path(args.out or cfg.out_path, "rates"))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    records = run_sweep(
        cfg.temperatures, cfg.device, cfg.protocol, phi=cfg.responses,
        noise=cfg.noise, seed=cfg.seed, extra_baths=cfg.extra_baths,
        include_quasiparticle=cfg.include_quasiparticle,
        ef_rate_factor=cfg.ef_rate_factor, error_column=cfg.error_column,
        t_meas=cfg.t_meas,
    )
    columns = ["T_set_mK", "gamma1_rad_s", "tau1_ge_us",
               "x0", "x1", "x2", "y0", "y1", "y2"]
    for key in KINDS:
        columns += [f"ratio_{key}", f"T_{key}_mK", f"status_{key}"]
    columns += ["rel_T_A", "rel_T_B", "rel_T_C", "net_mK_rtHz"]
    rows = []
    for rec in records:
        row = [
            kelvin_to_mk(rec.temperature),
            rec.gamma1_ge,
            s_to_us(lifetime_from_rate(rec.gamma1_ge)),
            *rec.outcomes.as_tuple(),
        ]
        for key in KINDS:
            est = rec.estimates.entries[key]
            row += [est.ratio, kelvin_to_mk(est.temperature), est.status]
        err = rec.errors
        row += [err.rel_T_A, err.rel_T_B, err.rel_T_C, kelvin_to_mk(err.net)]
        rows.append(row)
    _write_table(cfg, "sweep", columns, rows, args.out or cfg.out_path,
                 args.format or cfg.out_format)
    if args.plot:
        from . import plots
        plots.plot_sweep(_columns_to_arrays(columns, rows),
                         _plot_path(args.out or cfg.out_path, "sweep"))
    return EXIT_OK


def cmd_fisher(cfg: RunConfig, args) -> int:
    from .constants import HBAR, KB

    device = cfg.device
    shots = cfg.fisher_shots
    columns = ["T_mK", "rel_error_2lvl", "rel_error_3lvl",
               f"rel_error_N{cfg.fisher_degeneracy}", "NET_K_rtHz"]
    rows = []
    for t in cfg.temperatures:
        x_ge = HBAR * device.omega_ge / (KB * t)
        x_gf = HBAR * device.omega_gf / (KB * t)
        rel2 = math.sqrt(qfi_bound_two_level(x_ge, 2) / shots)
        rel3 = math.sqrt(qfi_bound_three_level(x_ge, x_gf) / shots)
        reln = math.sqrt(qfi_bound_two_level(x_ge, cfg.fisher_degeneracy) / shots)
        rows.append([
            kelvin_to_mk(t), rel2, rel3, reln,
            net(rel2 * t, cfg.t_meas),
        ])
    _write_table(cfg, "fisher", columns, rows, args.out or cfg.out_path,
                 args.format or cfg.out_format)
    if args.plot:
        from . import plots
        table = _columns_to_arrays(columns, rows)
        table["rel_error_N10"] = table[f"rel_error_N{cfg.fisher_degeneracy}"]
        plots.plot_fisher(table, _plot_path(args.out or cfg.out_path, "fisher"))
    return EXIT_OK


def _read_table(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        raise
    if path.endswith(".json") or text.lstrip().startswith("{"):
        payload = json.loads(text)
        for key in ("columns", "rows"):
            if key not in payload:
                raise ConfigError(f"{path}: JSON table missing {key!r}")
        return payload["columns"], payload["rows"]
    columns = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.startswith("columns:"):
                columns = [c.strip() for c in body[len("columns:"):].split(",")]
            continue
        if columns is None:
            raise ConfigError(f"{path}: no '# columns:' header before data")
        cells = line.split(",")
        if len(cells) != len(columns):
            raise ConfigError(
                f"{path}: row {lineno} has {len(cells)} fields, expected {len(columns)}"
            )
        rows.append(cells)
    if columns is None or not rows:
        raise ConfigError(f"{path}: no data rows found")
    return columns, rows


def cmd_fit(cfg: RunConfig, args) -> int:
    from .bath import bose_einstein

    columns, raw_rows = _read_table(args.input)
    est = cfg.fit_estimator
    needed = ["T_set_mK", "gamma1_rad_s", f"T_{est}_mK", f"status_{est}"]
    for name in needed:
        if name not in columns:
            raise ConfigError(
                f"{args.input}: missing column {name!r}; found {', '.join(columns)}"
            )
    idx = {name: columns.index(name) for name in needed}
    t_set, t_eff, gamma1 = [], [], []
    for lineno, row in enumerate(raw_rows, start=1):
        status = row[idx[f"status_{est}"]]
        if status != "ok":
            continue
        try:
            ts = float(row[idx["T_set_mK"]]) * 1e-3
            te = float(row[idx[f"T_{est}_mK"]]) * 1e-3
            g1 = float(row[idx["gamma1_rad_s"]])
        except (TypeError, ValueError):
            raise ConfigError(f"{args.input}: row {lineno}: non-numeric field")
        if ts < cfg.fit_cutoff:
            t_set.append(ts)
            t_eff.append(te)
            gamma1.append(g1)
    if len(t_set) < 3:
        raise ConfigError(
            f"{args.input}: only {len(t_set)} usable rows below the"
            f" {cfg.fit_cutoff * 1e3:.0f} mK cutoff; need at least 3"
        )
    omega = cfg.device.omega_ge
    n_eff = np.array([bose_einstein(omega, t) for t in t_eff])
    n_set = np.array([bose_einstein(omega, t) for t in t_set])
    fit_gamma = weighted_linear_fit(n_eff, gamma1)
    fit_mixing = weighted_linear_fit(n_set, n_eff)
    out_columns = ["fit", "slope", "slope_error", "offset", "offset_error"]
    rows = [
        ["gamma1_vs_n", fit_gamma.slope, fit_gamma.slope_error,
         fit_gamma.offset, fit_gamma.offset_error],
        ["n_eff_vs_n_set", fit_mixing.slope, fit_mixing.slope_error,
         fit_mixing.offset, fit_mixing.offset_error],
    ]
    _write_table(cfg, "fit", out_columns, rows, args.out or cfg.out_path,
                 args.format or cfg.out_format)
    if args.plot:
        from . import plots
        plots.plot_fit(
            {"n_eff": n_eff, "n_set": n_set, "gamma1": np.array(gamma1)},
            (fit_gamma, fit_mixing),
            _plot_path(args.out or cfg.out_path, "fit"),
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transmon-thermometry",
        description="Three-level transmon thermometry simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("rates", "quasiparticle and dephasing rates vs temperature"),
        ("sweep", "simulate the measurement protocol over a temperature grid"),
        ("fisher", "Cramer-Rao error floors and noise-equivalent temperature"),
        ("fit", "thermalization fits from a sweep table"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="JSON run configuration")
        p.add_argument("--preset", metavar="NAME",
                       help="device preset (R2-I, R4-I, R3-II, Q2-III)")
        p.add_argument("--seed", type=int, metavar="U64",
                       help="master seed overriding the config")
        p.add_argument("--out", metavar="PATH",
                       help="output file ('-' or omitted: stdout)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (default csv)")
        p.add_argument("--plot", action="store_true",
                       help="render a matplotlib figure next to the output")
        if name == "fit":
            p.add_argument("input", metavar="INPUT",
                           help="sweep output (csv or json) or matching table")
    return parser


def _resolve_config(args) -> RunConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = parse_config({})
    if args.preset:
        base = dict(cfg.resolved)
        base["device"] = args.preset
        cfg = parse_config(base)
    if args.seed is not None:
        base = dict(cfg.resolved)
        base["seed"] = args.seed
        cfg = parse_config(base)
    return cfg


COMMANDS = {
    "rates": cmd_rates,
    "sweep": cmd_sweep,
    "fisher": cmd_fisher,
    "fit": cmd_fit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
