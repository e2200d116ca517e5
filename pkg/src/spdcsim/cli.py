"""Command-line front end: config files, dispatch and output formats.

Configs are flat ``section.key = value`` text; angles are accepted in
degrees at this boundary (with explicit ``deg``/``rad`` suffixes honored)
and converted to radians immediately.  Output files are plain LF-terminated
text whose ``#`` headers echo the full configuration, so any result file
can be parsed back into the RunConfig that produced it.  Identical inputs
produce byte-identical files.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import analytic, cone, numeric, optimize
from .analytic import NoConeError
from .crystal import SELLMEIER_SETS, CrystalConfig
from .grids import GridAxis, SpectrumGrid
from .numeric import DegeneratePeakError
from .optimize import BracketError
from .pump import PumpConfig

VERSION = "0.1.0"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Crystal + pump + engine + default grid window for one job."""

    crystal: CrystalConfig
    pump: PumpConfig
    engine: str = "exact"
    grid_x: GridAxis = GridAxis(-1.0, 1.0, 256)
    grid_y: GridAxis = GridAxis(-1.0, 1.0, 256)
    idler: tuple[float, float] | None = None

    def __post_init__(self):
        if self.engine not in ("exact", "analytic"):
            raise ConfigError(f"engine must be exact or analytic, got {self.engine!r}")


def parse_angle(text: str) -> float:
    """Angle in radians from '29.3', '29.3 deg' or '0.511 rad'.

    Bare numbers are degrees (the CLI boundary convention).
    """
    t = text.strip().lower()
    if t.endswith("rad"):
        return float(t[:-3])
    if t.endswith("deg"):
        return math.radians(float(t[:-3]))
    return math.radians(float(t))


def _parse_floats(text: str, n: int, key: str) -> tuple[float, ...]:
    parts = text.split()
    if len(parts) != n:
        raise ConfigError(f"{key} expects {n} values, got {len(parts)}")
    return tuple(float(p) for p in parts)


def parse_config_lines(lines) -> RunConfig:
    """RunConfig from 'section.key = value' lines (comments/blanks skipped)."""
    kv: dict[str, str] = {}
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"malformed config line: {line!r}")
        key, _, value = line.partition("=")
        kv[key.strip()] = value.strip()

    def pop(key, default=None):
        return kv.pop(key, default)

    name = pop("crystal.sellmeier")
    o_text = pop("crystal.sellmeier_o")
    e_text = pop("crystal.sellmeier_e")
    if o_text and e_text:
        sell_o = _parse_floats(o_text, 4, "crystal.sellmeier_o")
        sell_e = _parse_floats(e_text, 4, "crystal.sellmeier_e")
        name = name or "custom"
    elif name:
        if name not in SELLMEIER_SETS:
            raise ConfigError(
                f"unknown Sellmeier set {name!r}; known: {sorted(SELLMEIER_SETS)}")
        sell_o, sell_e = SELLMEIER_SETS[name]
    else:
        raise ConfigError("config must name crystal.sellmeier or give both "
                          "crystal.sellmeier_o and crystal.sellmeier_e")

    required = ("crystal.cut_angle", "crystal.length", "pump.wavelength")
    missing = [k for k in required if k not in kv]
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")

    waist = pop("pump.waist")
    wx = pop("pump.waist_x", waist)
    wy = pop("pump.waist_y", waist)
    if wx is None or wy is None:
        raise ConfigError("config must give pump.waist or pump.waist_x/waist_y")

    try:
        crystal = CrystalConfig(
            sell_o, sell_e,
            cut_angle=parse_angle(pop("crystal.cut_angle")),
            length=float(pop("crystal.length")),
            sellmeier_name=name,
        )
        pump = PumpConfig(
            wavelength=float(pop("pump.wavelength")),
            waist_x=float(wx), waist_y=float(wy),
            focal_offset=float(pop("pump.focal_offset", "0")),
        )
        grid_x = GridAxis(*_axis_spec(pop("grid.kx", "-1 1 256"), "grid.kx"))
        grid_y = GridAxis(*_axis_spec(pop("grid.ky", "-1 1 256"), "grid.ky"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    idler = None
    idler_text = pop("cas.idler")
    if idler_text:
        parts = idler_text.replace(",", " ").split()
        if len(parts) != 2:
            raise ConfigError("cas.idler expects 'kx,ky'")
        idler = (float(parts[0]), float(parts[1]))

    engine = pop("engine", "exact")
    if kv:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(kv))}")
    return RunConfig(crystal, pump, engine, grid_x, grid_y, idler)


def _axis_spec(text: str, key: str):
    parts = text.split()
    if len(parts) != 3:
        raise ConfigError(f"{key} expects 'min max count'")
    return float(parts[0]), float(parts[1]), int(parts[2])


def load_config(path: str) -> RunConfig:
    return parse_config_lines(Path(path).read_text().splitlines())


def load_preset(name: str) -> RunConfig:
    ref = resources.files("spdcsim").joinpath(f"presets/{name}.cfg")
    if not ref.is_file():
        raise ConfigError(f"unknown preset {name!r}")
    return parse_config_lines(ref.read_text().splitlines())


def config_echo_lines(cfg: RunConfig) -> list[str]:
    """Config serialized as key = value lines; parses back identically."""
    lines = []
    if cfg.crystal.sellmeier_name in SELLMEIER_SETS:
        lines.append(f"crystal.sellmeier = {cfg.crystal.sellmeier_name}")
    else:
        o = " ".join(repr(v) for v in cfg.crystal.sellmeier_o)
        e = " ".join(repr(v) for v in cfg.crystal.sellmeier_e)
        lines.append(f"crystal.sellmeier_o = {o}")
        lines.append(f"crystal.sellmeier_e = {e}")
    lines.append(f"crystal.cut_angle = {cfg.crystal.cut_angle!r} rad")
    lines.append(f"crystal.length = {cfg.crystal.length!r}")
    lines.append(f"pump.wavelength = {cfg.pump.wavelength!r}")
    lines.append(f"pump.waist_x = {cfg.pump.waist_x!r}")
    lines.append(f"pump.waist_y = {cfg.pump.waist_y!r}")
    lines.append(f"pump.focal_offset = {cfg.pump.focal_offset!r}")
    lines.append(f"engine = {cfg.engine}")
    for tag, ax in (("kx", cfg.grid_x), ("ky", cfg.grid_y)):
        lines.append(f"grid.{tag} = {ax.lo!r} {ax.hi!r} {ax.n}")
    if cfg.idler is not None:
        lines.append(f"cas.idler = {cfg.idler[0]!r},{cfg.idler[1]!r}")
    return lines


def _fmt(v: float) -> str:
    """Nine significant digits, trailing zeros kept."""
    return "%#.9g" % v


def write_grid(grid: SpectrumGrid, path) -> None:
    """Write a spectrum grid as LF-terminated 8-bit text.

    Header lines start with '#': tool version, engine tag, config echo and
    axis specs; the body holds axis_y.n rows of axis_x.n values at 9
    significant digits, row index increasing along k_y.
    """
    lines = [f"# spdcsim {VERSION}"]
    for key in ("kind", "engine"):
        if key in grid.meta:
            lines.append(f"# {key} = {grid.meta[key]}")
    lines.append(f"# normalization = {grid.normalization}")
    for key, val in grid.meta.items():
        if key in ("kind", "engine", "config_echo"):
            continue
        lines.append(f"# {key} = {val!r}" if isinstance(val, float)
                     else f"# {key} = {val}")
    for echo in grid.meta.get("config_echo", ()):
        lines.append(f"# {echo}")
    for tag, ax in (("x", grid.axis_x), ("y", grid.axis_y)):
        lines.append(f"# axis-{tag} {ax.lo!r} {ax.hi!r} {ax.n}")
    body = "\n".join(" ".join(_fmt(v) for v in row) for row in grid.values)
    Path(path).write_text("\n".join(lines) + "\n" + body + "\n",
                          encoding="ascii", newline="\n")


def read_grid(path):
    """Parse a grid file back into (values, axes, header dict, RunConfig).

    The RunConfig is reconstructed from the header's config echo.
    """
    text = Path(path).read_text(encoding="ascii")
    header: dict[str, str] = {}
    config_lines = []
    axes = {}
    rows = []
    for line in text.splitlines():
        if line.startswith("#"):
            stripped = line[1:].strip()
            if stripped.startswith("axis-"):
                tag, lo, hi, n = stripped.split()
                axes[tag[5:]] = GridAxis(float(lo), float(hi), int(n))
            elif "=" in stripped:
                key = stripped.partition("=")[0].strip()
                if "." in key or key == "engine":
                    config_lines.append(stripped)
                else:
                    header[key] = stripped.partition("=")[2].strip()
        elif line.strip():
            rows.append([float(v) for v in line.split()])
    cfg = parse_config_lines(config_lines) if config_lines else None
    values = np.array(rows)
    return values, axes, header, cfg


def write_table(path, columns: list[str], rows, echo_lines) -> None:
    """Tab-separated table with the shared '#' header convention."""
    lines = [f"# spdcsim {VERSION}"]
    lines.extend(f"# {e}" for e in echo_lines)
    lines.append("\t".join(columns))
    for row in rows:
        lines.append("\t".join(
            v if isinstance(v, str) else _fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii",
                          newline="\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdcsim",
        description="Angular spectra of type-I degenerate SPDC photon pairs.")
    parser.add_argument("--version", action="version",
                        version=f"spdcsim {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="path to a run config file")
        src.add_argument("--preset", help="built-in preset name (e.g. w185)")
        p.add_argument("--engine", choices=("exact", "analytic"))
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("as", help="angular spectrum grid")
    common(p)
    p = sub.add_parser("cas", help="conditional angular spectrum grid")
    common(p)
    p.add_argument("--idler", help="idler kx,ky in rad/um (default: peak idler)")
    p = sub.add_parser("slice", help="one-component conditional map")
    common(p)
    p.add_argument("--axis", choices=("x", "y"), default="y")
    p = sub.add_parser("cone", help="on-cone angular correlation grid")
    common(p)
    p = sub.add_parser("aperture", help="cone radius and aperture statistics")
    common(p)
    p = sub.add_parser("sweep-angle", help="cut-angle sweep table")
    common(p)
    p.add_argument("--from", dest="lo", required=True,
                   help="start cut angle (deg unless suffixed)")
    p.add_argument("--to", dest="hi", required=True,
                   help="end cut angle (deg unless suffixed)")
    p.add_argument("--steps", type=int, required=True)
    p = sub.add_parser("sweep-lambda", help="pump-wavelength sweep table")
    common(p)
    p.add_argument("--from", dest="lo", type=float, required=True,
                   help="start wavelength, um")
    p.add_argument("--to", dest="hi", type=float, required=True,
                   help="end wavelength, um")
    p.add_argument("--steps", type=int, required=True)
    p = sub.add_parser("match-lambda", help="wavelength equivalent of a cut angle")
    common(p)
    p.add_argument("--target", required=True,
                   help="target cut angle (deg unless suffixed)")
    p = sub.add_parser("peak-idler", help="idler maximizing coincidence counts")
    common(p)
    return parser


def _load(args) -> RunConfig:
    cfg = load_preset(args.preset) if args.preset else load_config(args.config)
    if args.engine:
        cfg = RunConfig(cfg.crystal, cfg.pump, args.engine, cfg.grid_x,
                        cfg.grid_y, cfg.idler)
    return cfg


def _grid_radius_estimate(grid: SpectrumGrid) -> float:
    iy, ix = np.unravel_index(int(np.argmax(grid.values)), grid.values.shape)
    return math.hypot(grid.axis_x.points[ix], grid.axis_y.points[iy])


def _finish_grid(grid, cfg, out, name) -> Path:
    grid.meta["config_echo"] = config_echo_lines(cfg)
    path = Path(out) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    write_grid(grid.peak_normalized(), path)
    return path


def _cone_row(theta_a, lam, point):
    c = point.cone
    if c is None:
        return [theta_a, lam] + ["nan"] * 6 + [1]
    return [theta_a, lam, c.r_as, c.radial_width, c.theta_mean,
            c.dtheta_max, c.dtheta_min,
            point.brightness if point.brightness is not None else "nan", 0]


_TABLE_COLUMNS = ["theta_a_rad", "lambda_um", "r_as", "radial_width",
                  "theta_mean", "dtheta_max", "dtheta_min", "brightness",
                  "no_cone"]


def _run(args) -> int:
    cfg = _load(args)
    crystal, pump = cfg.crystal, cfg.pump
    out = args.out

    if args.command == "as":
        if cfg.engine == "exact":
            grid = numeric.as_grid(crystal, pump, cfg.grid_x, cfg.grid_y)
        else:
            grid = analytic.as_grid(crystal, pump, cfg.grid_x, cfg.grid_y)
        path = _finish_grid(grid, cfg, out, f"as_{cfg.engine}.grid")
        print(f"wrote {path}; ring radius estimate "
              f"{_grid_radius_estimate(grid):.4f} rad/um")

    elif args.command == "cas":
        if args.idler:
            parts = args.idler.replace(",", " ").split()
            idler = (float(parts[0]), float(parts[1]))
        elif cfg.idler:
            idler = cfg.idler
        else:
            idler = tuple(numeric.find_peak_idler(crystal, pump))
        cfg = RunConfig(crystal, pump, cfg.engine, cfg.grid_x, cfg.grid_y,
                        idler)
        if cfg.engine == "exact":
            grid = numeric.cas_grid(idler, crystal, pump)
        else:
            grid = analytic.cas_grid(idler, crystal, pump)
        path = _finish_grid(grid, cfg, out, f"cas_{cfg.engine}.grid")
        print(f"wrote {path}; idler = ({idler[0]:.4f}, {idler[1]:.4f}) rad/um")

    elif args.command == "slice":
        grid = numeric.slice_correlation(args.axis, crystal, pump)
        path = _finish_grid(grid, cfg, out, f"slice_{args.axis}_exact.grid")
        print(f"wrote {path}")

    elif args.command == "cone":
        corr = cone.cone_correlation_grid(crystal, pump)
        deg_x = GridAxis(math.degrees(corr.theta_plus.lo),
                         math.degrees(corr.theta_plus.hi), corr.theta_plus.n)
        deg_y = GridAxis(math.degrees(corr.theta_minus.lo),
                         math.degrees(corr.theta_minus.hi), corr.theta_minus.n)
        grid = SpectrumGrid(deg_x, deg_y, corr.values, "raw",
                            {"kind": "cone", "engine": "exact",
                             "axis_unit": "deg",
                             "cone_radius": corr.radius})
        path = _finish_grid(grid, cfg, out, "cone.grid")
        print(f"wrote {path}; cone radius {corr.radius:.4f} rad/um")

    elif args.command == "aperture":
        stats = analytic.aperture_stats(crystal, pump)
        lines = [f"r_as = {_fmt(stats.r_as)}",
                 f"sigma_as = {_fmt(stats.sigma_as)}",
                 f"radial_width = {_fmt(stats.radial_width)}",
                 f"theta_mean = {_fmt(stats.theta_mean)}",
                 f"dtheta_max = {_fmt(stats.dtheta_max)}",
                 f"dtheta_min = {_fmt(stats.dtheta_min)}"]
        path = Path(out) / "aperture.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        echo = "\n".join(f"# {e}" for e in config_echo_lines(cfg))
        path.write_text(f"# spdcsim {VERSION}\n" + echo + "\n"
                        + "\n".join(lines) + "\n", encoding="ascii",
                        newline="\n")
        print("\n".join(lines))

    elif args.command == "sweep-angle":
        res = optimize.sweep_cut_angle(parse_angle(args.lo), parse_angle(args.hi),
                                       args.steps, crystal, pump)
        rows = [_cone_row(p.theta_a, p.lambda_p, p) for p in res.points]
        path = Path(out) / "sweep_angle.tsv"
        path.parent.mkdir(parents=True, exist_ok=True)
        write_table(path, _TABLE_COLUMNS, rows,
                    [f"objective = {res.objective}"] + config_echo_lines(cfg))
        print(f"wrote {path} ({len(rows)} rows)")

    elif args.command == "sweep-lambda":
        res = optimize.sweep_wavelength(args.lo, args.hi, args.steps,
                                        crystal, pump)
        rows = [_cone_row(p.theta_a, p.lambda_p, p) for p in res.points]
        path = Path(out) / "sweep_lambda.tsv"
        path.parent.mkdir(parents=True, exist_ok=True)
        write_table(path, _TABLE_COLUMNS, rows,
                    [f"objective = {res.objective}"] + config_echo_lines(cfg))
        print(f"wrote {path} ({len(rows)} rows)")

    elif args.command == "match-lambda":
        lam = optimize.match_wavelength_to_angle(parse_angle(args.target),
                                                 crystal, pump)
        path = Path(out) / "match_lambda.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(f"lambda_um = {lam!r}\n", encoding="ascii",
                        newline="\n")
        print(f"matched wavelength: {lam:.6f} um")

    elif args.command == "peak-idler":
        ki = numeric.find_peak_idler(crystal, pump)
        path = Path(out) / "peak_idler.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(f"idler = {ki[0]!r},{ki[1]!r}\n", encoding="ascii",
                        newline="\n")
        print(f"peak idler: ({ki[0]:.4f}, {ki[1]:.4f}) rad/um")

    return EXIT_OK


def dispatch(argv) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except (ConfigError, NoConeError, FileNotFoundError, ValueError) as exc:
        print(f"spdcsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegeneratePeakError, BracketError, RuntimeError) as exc:
        print(f"spdcsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
