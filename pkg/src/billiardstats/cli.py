"""Command-line front end: deterministic CSV/JSON emission of
characteristic functions, densities, samples, verification tables, figure
data series, and moments.

Exit codes: 0 success, 2 validation failure, 3 numerical non-convergence.
Errors print a machine-readable JSON record to stderr.  Identical
invocations produce byte-identical outputs (fixed seed default, no
timestamps, 17-significant-digit formatting).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .billiards import BilliardSpec, Domain, Mode, Shape, amplitude, domain_of
from .distributions import (cf_closed, cf_numeric, closed_cdf,
                            distribution_form, Family, gaussian_rwm_pdf,
                            has_closed_form, moment, pdf_asymptotic,
                            pdf_closed, pdf_via_ft, support_edge)
from .errors import (BilliardStatsError, NoClosedFormError,
                     NonConvergenceError, SingularPointError,
                     UnsupportedShapeError, ValidationError)
from .mcstats import (chi_square, chi_square_quantile, ks_statistic,
                      sample_amplitudes)

_COMMANDS = ("cf", "pdf", "sample", "verify", "figure", "moments")
_DEFAULT_SEED = 42
_SINGULAR = "singular"
_FMT = "%.16e"


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one command, one eigenstate, one output."""

    command: str
    shape: Shape = Shape.RECTANGLE
    m: int = 1
    n: int = 1
    mode: Mode = Mode.NA
    grid: tuple[float, float, int] = (0.0, 20.0, 201)
    n_samples: int = 100_000
    seed: int = _DEFAULT_SEED
    tol: float = 1e-7
    output_path: str | None = None
    fmt: str = "csv"
    which: tuple[str, ...] = ()
    with_oracle: bool = True

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        lo, hi, pts = self.grid
        if pts < 2:
            raise ValidationError("grid needs at least 2 points")
        if not lo < hi:
            raise ValidationError("grid min must be below grid max")
        if self.fmt not in ("csv", "json"):
            raise ValidationError(f"unknown format {self.fmt!r}")
        if self.n_samples < 1:
            raise ValidationError("sample count must be positive")
        if self.tol <= 0:
            raise ValidationError("tol must be positive")

    def spec(self) -> BilliardSpec:
        mode = self.mode
        if self.shape is Shape.EQUILATERAL and mode is Mode.NA:
            mode = Mode.COS
        if self.shape is Shape.HEMIEQUILATERAL and mode is Mode.NA:
            mode = Mode.SIN
        return BilliardSpec(self.shape, self.m, self.n, mode)


def _out_dir() -> Path:
    return Path(os.environ.get("BILLIARDSTATS_OUTDIR", "."))


def _meta(config: RunConfig) -> list[tuple[str, str]]:
    return [
        ("tool", f"billiardstats {__version__}"),
        ("command", config.command),
        ("spec", f"shape={config.shape.value} m={config.m} n={config.n} "
                 f"mode={config.mode.value}"),
        ("seed", str(config.seed)),
    ]


def _cell_str(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return _FMT % v


def write_table(path: Path, meta, columns, rows, fmt: str) -> None:
    """Emit one table; CSV carries '#'-prefixed metadata lines and a single
    header row, JSON mirrors the same structure with tagged singular cells."""
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [f"# {k}: {v}" for k, v in meta]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_cell_str(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
    else:
        def cell(v):
            if isinstance(v, str):
                return {"tag": v}
            return v
        doc = {
            "meta": dict(meta),
            "columns": list(columns),
            "rows": [[cell(v) for v in row] for row in rows],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n")


def read_table(path: Path) -> tuple[dict, list[str], list[list]]:
    """Parse a table written by :func:`write_table` (either format)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        rows = [[c["tag"] if isinstance(c, dict) else c for c in row]
                for row in doc["rows"]]
        return doc["meta"], doc["columns"], rows
    meta = {}
    columns: list[str] = []
    rows = []
    for line in text.splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].partition(":")
            meta[k.strip()] = v.strip()
        elif not columns:
            columns = line.split(",")
        elif line:
            row = [c if c == _SINGULAR or c == "" else float(c)
                   for c in line.split(",")]
            rows.append(row)
    return meta, columns, rows


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _default_path(config: RunConfig, stem: str | None = None) -> Path:
    if config.output_path:
        return Path(config.output_path)
    name = stem or (f"{config.command}_{config.shape.value}"
                    f"_{config.m}_{config.n}")
    return _out_dir() / f"{name}.{config.fmt}"


def _cmd_cf(config: RunConfig) -> int:
    spec = config.spec()
    lo, hi, pts = config.grid
    xi = np.linspace(lo, hi, pts)
    if has_closed_form(spec):
        values = np.asarray(cf_closed(spec, xi))
    else:
        values = np.asarray(cf_numeric(spec, xi, tol=min(config.tol, 1e-8)))
    rows = [[x, v.real, v.imag, abs(v)] for x, v in zip(xi, values)]
    write_table(_default_path(config), _meta(config),
                ["xi", "re", "im", "abs"], rows, config.fmt)
    return 0


def _cmd_pdf(config: RunConfig) -> int:
    spec = config.spec()
    lo, hi, pts = config.grid
    grid = np.linspace(lo, hi, pts)
    rows = []
    for p in grid:
        try:
            closed = pdf_closed(spec, float(p))
        except SingularPointError:
            closed = _SINGULAR
        if config.with_oracle and closed != _SINGULAR:
            try:
                oracle = pdf_via_ft(spec, float(p), tol=1e-4)
            except (NonConvergenceError, SingularPointError):
                oracle = None
        else:
            oracle = None
        try:
            asym = pdf_asymptotic(spec, float(p)) if p != 0 else _SINGULAR
        except (UnsupportedShapeError, NoClosedFormError):
            asym = None
        rows.append([float(p), closed, oracle, asym])
    write_table(_default_path(config), _meta(config),
                ["psi", "closed", "ft_oracle", "asymptotic"], rows, config.fmt)
    return 0


def _cmd_sample(config: RunConfig) -> int:
    spec = config.spec()
    emp = sample_amplitudes(spec, config.n_samples, config.seed)
    widths = np.diff(emp.bin_edges)
    rows = [[lo_, hi_, m_, m_ / w_] for lo_, hi_, m_, w_ in
            zip(emp.bin_edges[:-1], emp.bin_edges[1:], emp.bin_masses, widths)]
    meta = _meta(config) + [("samples", str(emp.samples_count))]
    write_table(_default_path(config), meta,
                ["bin_lo", "bin_hi", "mass", "density"], rows, config.fmt)
    return 0


def _verify_rows(config: RunConfig) -> tuple[list[list], bool]:
    spec = config.spec()
    rows = []
    ok_all = True

    def record(check: str, dev: float, thresh: float):
        nonlocal ok_all
        status = "PASS" if dev <= thresh else "FAIL"
        ok_all = ok_all and dev <= thresh
        rows.append([check, dev, thresh, status])

    if has_closed_form(spec) and spec.shape is not Shape.CIRCLE:
        xi = np.arange(0.0, 10.5, 0.5)
        closed = np.asarray(cf_closed(spec, xi))
        numeric = np.asarray(cf_numeric(spec, xi, tol=1e-9))
        if spec.shape is Shape.EQUILATERAL:
            dev = float(np.max(np.abs(closed.real - numeric.real)
                               / np.maximum(1.0, np.abs(numeric.real))))
        else:
            dev = float(np.max(np.abs(closed - numeric)
                               / np.maximum(1.0, np.abs(numeric))))
        record("cf closed vs numeric", dev, config.tol)

        edge = support_edge(spec)
        pdf_grid = np.linspace(0.12 * edge, 0.9 * edge, 8)
        dev = max(abs(pdf_via_ft(spec, float(p), tol=1e-4)
                      - pdf_closed(spec, float(p))) for p in pdf_grid)
        record("pdf closed vs fourier oracle", dev, 1e-3)

        emp = sample_amplitudes(spec, config.n_samples, config.seed)
        cdf, total = closed_cdf(spec)
        record("pdf normalization", abs(total - 1.0), 1e-5)
        ks = ks_statistic(emp, cdf)
        record("monte carlo ks", ks,
               2.0 / math.sqrt(config.n_samples))
        m2_mc = float(np.mean(emp.samples ** 2))
        sigma = float(np.std(emp.samples ** 2)) / math.sqrt(emp.samples_count)
        record("second moment (mc vs series)",
               abs(m2_mc - moment(spec, 2)), 4.0 * sigma)
    else:
        xi = np.arange(0.0, 5.5, 0.5)
        vals_pos = np.asarray(cf_numeric(spec, xi, tol=1e-8))
        vals_neg = np.asarray(cf_numeric(spec, -xi, tol=1e-8))
        record("cf hermitian symmetry",
               float(np.max(np.abs(vals_neg - np.conj(vals_pos)))), 1e-8)
        emp = sample_amplitudes(spec, config.n_samples, config.seed)
        m2_mc = float(np.mean(emp.samples ** 2))
        sigma = float(np.std(emp.samples ** 2)) / math.sqrt(emp.samples_count)
        record("second moment (mc vs quadrature)",
               abs(m2_mc - moment(spec, 2, method="quadrature")), 4.0 * sigma)
    return rows, ok_all


def _cmd_verify(config: RunConfig) -> int:
    rows, ok = _verify_rows(config)
    write_table(_default_path(config), _meta(config),
                ["check", "max_deviation", "threshold", "status"],
                rows, config.fmt)
    for check, dev, thresh, status in rows:
        print(f"{status:4s}  {check:34s} dev={_FMT % dev}  thresh={_FMT % thresh}")
    return 0 if ok else 3


def _cmd_moments(config: RunConfig) -> int:
    spec = config.spec()
    rows = []
    for k in (1, 2):
        try:
            series: float | None = moment(spec, k, method="series")
        except NoClosedFormError:
            series = None
        quad = moment(spec, k, method="quadrature")
        rows.append([k, series, quad])
        series_txt = "n/a" if series is None else _FMT % series
        print(f"moment {k}: series={series_txt} quadrature={_FMT % quad}")
    write_table(_default_path(config), _meta(config),
                ["order", "series", "quadrature"], rows, config.fmt)
    return 0


# ---------------------------------------------------------------------------
# figure data series
# ---------------------------------------------------------------------------

def _fig_cf(config, name, specs, hi, pts=401, part="abs"):
    xi = np.linspace(0.0, hi, pts)
    cols = ["xi"] + [f"state_{s.m}_{s.n}" for s in specs]
    series = []
    for s in specs:
        v = np.asarray(cf_closed(s, xi))
        series.append(np.abs(v) if part == "abs" else v.real)
    rows = [[xi[i]] + [float(se[i]) for se in series] for i in range(pts)]
    write_table(_out_dir() / f"{name}.{config.fmt}", _meta(config),
                cols, rows, config.fmt)


def _fig_pdf(config, name, spec, n_mc=100_000):
    lo, hi = distribution_form(spec).support
    grid = np.linspace(lo, hi, 401)
    rows = []
    for p in grid:
        try:
            val = pdf_closed(spec, float(p))
        except SingularPointError:
            val = _SINGULAR
        rows.append([float(p), val])
    write_table(_out_dir() / f"{name}.{config.fmt}", _meta(config),
                ["psi", "closed"], rows, config.fmt)
    emp = sample_amplitudes(spec, n_mc, config.seed)
    widths = np.diff(emp.bin_edges)
    rows = [[l_, h_, m_ / w_] for l_, h_, m_, w_ in
            zip(emp.bin_edges[:-1], emp.bin_edges[1:], emp.bin_masses, widths)]
    write_table(_out_dir() / f"{name}_hist.{config.fmt}", _meta(config),
                ["bin_lo", "bin_hi", "density"], rows, config.fmt)


def _fig_wavefunction(config, name, spec, pts=101):
    dom = domain_of(spec)
    if spec.shape is Shape.CIRCLE:
        lo_x = lo_y = -math.pi
        hi_x = hi_y = math.pi
    else:
        lo_x = lo_y = 0.0
        hi_x = math.pi
        hi_y = math.pi if spec.shape is Shape.RECTANGLE else math.sqrt(3) * math.pi / 2
    xs = np.linspace(lo_x, hi_x, pts)
    ys = np.linspace(lo_y, hi_y, pts)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    inside = dom.contains(X, Y)
    Z = np.where(inside, amplitude(spec, X, Y), np.nan)
    rows = [[X[i, j], Y[i, j], (None if math.isnan(Z[i, j]) else Z[i, j])]
            for i in range(pts) for j in range(pts)]
    write_table(_out_dir() / f"{name}.{config.fmt}", _meta(config),
                ["x", "y", "psi"], rows, config.fmt)


def _cmd_figure(config: RunConfig) -> int:
    which = set(config.which or
                ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"))
    if "fig1" in which:
        specs = [BilliardSpec(Shape.BOX1D, m) for m in (1, 2, 3)]
        _fig_cf(config, "fig1a_cf_box1d", specs, 25.0)
        for m in (1, 2, 3):
            _fig_pdf(config, f"fig1{'bcd'[m-1]}_pdf_box1d_m{m}",
                     BilliardSpec(Shape.BOX1D, m))
    if "fig2" in which:
        specs = [BilliardSpec(Shape.RECTANGLE, *mn)
                 for mn in ((1, 1), (2, 1), (3, 3))]
        _fig_cf(config, "fig2a_cf_square", specs, 25.0)
        for s in specs:
            _fig_pdf(config, f"fig2b_pdf_square_{s.m}{s.n}", s)
    if "fig3" in which:
        for mn in ((1, 1), (3, 2), (3, 3)):
            _fig_wavefunction(config, f"fig3_wavefunction_square_{mn[0]}{mn[1]}",
                              BilliardSpec(Shape.RECTANGLE, *mn))
    if "fig4" in which:
        specs = [BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 2),
                 BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 3)]
        _fig_cf(config, "fig4a_cf_isosceles", specs, 25.0)
        for s in specs:
            _fig_pdf(config, f"fig4b_pdf_isosceles_{s.m}{s.n}", s, n_mc=50_000)
    if "fig5" in which:
        for mn in ((1, 2), (1, 3), (2, 6)):
            _fig_wavefunction(config,
                              f"fig5_wavefunction_isosceles_{mn[0]}{mn[1]}",
                              BilliardSpec(Shape.ISOSCELES_RIGHT, *mn))
    if "fig6" in which:
        ground = BilliardSpec(Shape.EQUILATERAL, 1, 2, Mode.COS)
        _fig_cf(config, "fig6a_cf_equilateral", [ground], 25.0, part="re")
        _fig_pdf(config, "fig6b_pdf_equilateral", ground)
    if "fig7" in which:
        for mn, label in (((1, 3), "ground"), ((1, 4), "excited")):
            spec = BilliardSpec(Shape.HEMIEQUILATERAL, *mn, Mode.SIN)
            emp = sample_amplitudes(spec, config.n_samples, config.seed)
            widths = np.diff(emp.bin_edges)
            rows = [[l_, h_, m_ / w_] for l_, h_, m_, w_ in
                    zip(emp.bin_edges[:-1], emp.bin_edges[1:],
                        emp.bin_masses, widths)]
            write_table(_out_dir() / f"fig7_hist_hemi_{label}.{config.fmt}",
                        _meta(config), ["bin_lo", "bin_hi", "density"],
                        rows, config.fmt)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="billiardstats",
        description="Amplitude statistics of integrable-billiard "
                    "eigenfunctions: closed forms, quadrature oracles, and "
                    "Monte Carlo cross-checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, grid_default):
        p.add_argument("--shape", default="rectangle",
                       choices=[s.value for s in Shape])
        p.add_argument("-m", type=int, default=1)
        p.add_argument("-n", type=int, default=1)
        p.add_argument("--mode", default="na",
                       choices=[m.value for m in Mode])
        p.add_argument("--grid", nargs=3, type=float, default=grid_default,
                       metavar=("MIN", "MAX", "POINTS"))
        p.add_argument("-N", "--samples", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
        p.add_argument("--tol", type=float, default=1e-7)
        p.add_argument("-o", "--output", default=None)
        p.add_argument("--format", default="csv", choices=("csv", "json"))

    add_common(sub.add_parser("cf", help="characteristic function table"),
               [0.0, 20.0, 201])
    pdf_p = sub.add_parser("pdf", help="amplitude density table")
    add_common(pdf_p, [-1.0, 1.0, 201])
    pdf_p.add_argument("--no-oracle", action="store_true",
                       help="skip the Fourier-inversion oracle column")
    add_common(sub.add_parser("sample", help="Monte Carlo histogram"),
               [0.0, 1.0, 2])
    add_common(sub.add_parser("verify",
                              help="run the closed-form/oracle/Monte Carlo "
                                   "cross-check table"),
               [0.0, 1.0, 2])
    add_common(sub.add_parser("moments", help="first and second moments"),
               [0.0, 1.0, 2])
    fig_p = sub.add_parser("figure", help="emit figure data series")
    add_common(fig_p, [0.0, 1.0, 2])
    fig_p.add_argument("--which", nargs="*", default=None,
                       metavar="FIGN",
                       help="subset of fig1..fig7 (default: all)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        shape=Shape(args.shape),
        m=args.m,
        n=args.n,
        mode=Mode(args.mode),
        grid=(args.grid[0], args.grid[1], int(args.grid[2])),
        n_samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        output_path=args.output,
        fmt=args.format,
        which=tuple(args.which) if getattr(args, "which", None) else (),
        with_oracle=not getattr(args, "no_oracle", False),
    )


def run(config: RunConfig) -> int:
    """Dispatch one command; returns the process exit status."""
    handler = {
        "cf": _cmd_cf,
        "pdf": _cmd_pdf,
        "sample": _cmd_sample,
        "verify": _cmd_verify,
        "figure": _cmd_figure,
        "moments": _cmd_moments,
    }[config.command]
    return handler(config)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except (ValidationError, NoClosedFormError, UnsupportedShapeError) as exc:
        json.dump({"error": {"kind": "validation", "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (NonConvergenceError, SingularPointError) as exc:
        json.dump({"error": {"kind": "numerical", "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 3
    except BilliardStatsError as exc:  # pragma: no cover
        json.dump({"error": {"kind": "other", "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
