"""Command-line front end.

Exit codes: 0 success, 1 selftest failure, 2 breaking or other physics
error, 3 input/output or schema error. ``RUNUP_LOG`` sets the log level
(``DEBUG``, ``INFO``, ``WARNING``, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .abel import DEFAULT_QUADRATURE
from .direct import DirectConfig, direct_solution, shoreline_equation_residual
from .errors import (
    BreakingError,
    DataError,
    DomainError,
    InvalidParametersError,
    RunupError,
    SchemaError,
)
from .hodograph import PhysicalInitialData, ShorelineRecord
from .inversion import InversionConfig, invert_record
from .io import DIMENSIONLESS, file_digest, read_table, write_table
from .sampled import SampledFunction
from .scaling import DimensionalProfile, ScalingParameters, to_dimensional, to_dimensionless
from .selftest import waveeq_check

log = logging.getLogger("runup")

EXIT_OK, EXIT_SELFTEST, EXIT_PHYSICS, EXIT_IO = 0, 1, 2, 3

DEFAULT_TOLERANCE = {"roundtrip": 1e-2, "waveeq-check": 1e-2}


class InputError(RunupError):
    """Bad command-line input (missing file, unwritable directory, unit clash)."""


# -- parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="runup",
        description="Long-wave runup on a plane beach: shoreline motion from an "
        "initial displacement and back.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        sp.add_argument("--input", required=needs_input, type=Path, help="input CSV file")
        sp.add_argument("--outdir", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--h0", type=float, help="reference height H0 in m")
        sp.add_argument("--alpha", type=float, help="beach slope")
        sp.add_argument("--g", type=float, default=9.81, help="gravity in m/s^2 (default 9.81)")
        sp.add_argument("--n-sigma", type=int, default=2048,
                        help="hodograph sigma nodes (default 2048)")
        sp.add_argument("--n-tau", type=int, default=1024,
                        help="tau samples of the trace (default 1024)")
        sp.add_argument("--sigma-max", type=float, default=None,
                        help="outer sigma of the hodograph grid (default: from the data)")
        sp.add_argument("--tolerance", type=float, default=None,
                        help="pass threshold for roundtrip and waveeq-check")

    def smoothing(sp):
        sp.add_argument("--smooth-window", type=int, default=11,
                        help="odd window length; 0 disables smoothing")
        sp.add_argument("--smooth-degree", type=int, default=2,
                        help="local polynomial degree (default 2)")

    common(sub.add_parser("direct", help="initial profile -> shoreline record"))
    sp = sub.add_parser("inverse", help="shoreline record -> initial profile")
    common(sp)
    smoothing(sp)
    sp = sub.add_parser("roundtrip", help="direct then inverse, with an error report")
    common(sp)
    smoothing(sp)
    sp = sub.add_parser("selftest", help="run built-in analytic and oracle checks")
    common(sp, needs_input=False)
    sp.add_argument("--perturb-abel-weights", type=float, default=0.0,
                    help=argparse.SUPPRESS)
    sp = sub.add_parser("waveeq-check", help="Poisson boundary vs finite differences")
    common(sp)
    sp.add_argument("--fd-n-sigma", type=int, default=2001,
                    help="finite-difference sigma nodes (default 2001)")
    sp.add_argument("--tau-max", type=float, default=None,
                    help="comparison horizon (default: half the sigma extent)")
    sp.add_argument("--write-field", action="store_true", help="also write field.csv")
    return p


def _scaling(args) -> ScalingParameters | None:
    if args.h0 is None and args.alpha is None:
        return None
    if args.h0 is None or args.alpha is None:
        raise InvalidParametersError("--h0 and --alpha must be given together")
    return ScalingParameters(args.h0, args.alpha, args.g)


def _direct_config(args) -> DirectConfig:
    return DirectConfig(sigma_max=args.sigma_max, n_sigma=args.n_sigma, n_tau=args.n_tau)


def _inversion_config(args) -> InversionConfig:
    window = args.smooth_window or None
    return InversionConfig(smooth_window=window, smooth_degree=args.smooth_degree,
                           n_tau=args.n_tau)


def _config_dict(args, scale) -> dict:
    d = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    d["scaling"] = None if scale is None else {"H0": scale.H0, "alpha": scale.alpha, "g": scale.g}
    return d


# -- input ------------------------------------------------------------------


def _check_units(table, scale, path):
    if table.dimensional and scale is None:
        raise SchemaError(
            f"file declares SI units {table.units}; pass --h0 and --alpha to convert", path
        )


def load_profile(path, scale) -> PhysicalInitialData:
    t = read_table(path, "profile")
    _check_units(t, scale, path)
    if scale is not None:
        f = to_dimensionless(DimensionalProfile(t["x"], t["eta0"], "elevation"), scale)
    else:
        f = SampledFunction(t["x"], t["eta0"])
    return PhysicalInitialData(SampledFunction(f.grid, f.values, name="eta0"))


def load_record(path, scale) -> ShorelineRecord:
    t = read_table(path, "record")
    _check_units(t, scale, path)
    x0, v0 = t["x0"], t.get("v0")
    if scale is None:
        return ShorelineRecord(t["t"], x0, v0)
    xs = to_dimensionless(DimensionalProfile(t["t"], x0, "position-series"), scale)
    vs = None
    if v0 is not None:
        vs = to_dimensionless(DimensionalProfile(t["t"], v0, "velocity"), scale).values
    return ShorelineRecord(xs.grid, xs.values, vs)


# -- output -----------------------------------------------------------------


def _outdir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise InputError(f"output directory {path} is not writable")
    return path


def _si(values, kind, axis, scale):
    f = SampledFunction(axis, values)
    return to_dimensional(f, scale, kind)


def write_record(outdir, rec: ShorelineRecord, scale, written):
    p = outdir / "shoreline_record.csv"
    write_table(p, "record", {"t": rec.t, "x0": rec.x0, "v0": rec.v0})
    written.append(p.name)
    if scale is not None:
        xs = _si(rec.x0, "position-series", rec.t, scale)
        cols = {"t": xs.abscissa, "x0": xs.values}
        if rec.v0 is not None:
            cols["v0"] = _si(rec.v0, "velocity", rec.t, scale).values
        p = outdir / "shoreline_record_si.csv"
        write_table(p, "record", cols, {"t": "s", "x0": "m", "v0": "m/s"})
        written.append(p.name)


def write_trace(outdir, tr, written):
    p = outdir / "trace.csv"
    write_table(p, "trace", {"tau": tr.tau, "Psi": tr.Psi, "V": tr.V})
    written.append(p.name)


def write_profile(outdir, name, d: PhysicalInitialData, scale, written):
    p = outdir / f"{name}.csv"
    write_table(p, "profile", {"x": d.eta0.grid, "eta0": d.eta0.values})
    written.append(p.name)
    if scale is not None:
        prof = to_dimensional(d.eta0, scale, "elevation")
        p = outdir / f"{name}_si.csv"
        write_table(p, "profile", {"x": prof.abscissa, "eta0": prof.values},
                    {"x": "m", "eta0": "m"})
        written.append(p.name)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_summary(outdir: Path, summary: dict):
    with open(outdir / "summary.json", "w") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _norms(values) -> dict:
    v = np.asarray(values, dtype=float)
    return {"max": float(np.abs(v).max()), "rms": float(np.sqrt(np.mean(v**2)))}


def _base_summary(args, scale) -> dict:
    s = {
        "command": args.command,
        "version": __version__,
        "config": _config_dict(args, scale),
        "units": DIMENSIONLESS if scale is None else "dimensionless and SI",
    }
    if getattr(args, "input", None) is not None:
        s["input"] = {"path": str(args.input), "sha256": file_digest(args.input)}
    return s


# -- commands ---------------------------------------------------------------


def _direct_stage(d, args, outdir, scale, summary, written):
    cfg = _direct_config(args)
    summary["direct_config"] = cfg.as_dict()
    res = direct_solution(d, cfg)
    summary["breaking"] = res.breaking.as_dict()
    summary["sigma_max"] = res.sigma_max
    summary["support_radius"] = res.support_radius
    summary["extrema"] = {
        "runup_max": float(-res.record.x0.min()),
        "rundown_max": float(res.record.x0.max()),
        "t_end": float(res.record.t[-1]),
    }
    resid = shoreline_equation_residual(res.hodograph, res.trace)
    summary["shoreline_residual"] = _norms(resid.values)
    write_record(outdir, res.record, scale, written)
    write_trace(outdir, res.trace, written)
    return res


def _inverse_stage(rec, args, outdir, scale, summary, written, name="eta0_recovered"):
    cfg = _inversion_config(args)
    summary["inversion_config"] = cfg.as_dict()
    res = invert_record(rec, cfg)
    diag = dict(res.diagnostics)
    summary["record_breaking"] = diag.pop("breaking")
    summary["covered_x"] = list(res.covered_x)
    summary["inversion"] = diag
    summary["shoreline_residual"] = {"max": diag["shoreline_residual_max"]}
    if scale is not None:
        summary["covered_x_si"] = [v * scale.length for v in res.covered_x]
    write_profile(outdir, name, res.initial, scale, written)
    return res


def run_direct(args) -> int:
    scale = _scaling(args)
    outdir = _outdir(args.outdir)
    summary = _base_summary(args, scale)
    written: list[str] = []
    d = load_profile(args.input, scale)
    try:
        _direct_stage(d, args, outdir, scale, summary, written)
    finally:
        summary["outputs"] = written
        write_summary(outdir, summary)
    return EXIT_OK


def run_inverse(args) -> int:
    scale = _scaling(args)
    outdir = _outdir(args.outdir)
    summary = _base_summary(args, scale)
    written: list[str] = []
    rec = load_record(args.input, scale)
    try:
        _inverse_stage(rec, args, outdir, scale, summary, written)
    finally:
        summary["outputs"] = written
        write_summary(outdir, summary)
    return EXIT_OK


def roundtrip_errors(recovered: PhysicalInitialData, truth: PhysicalInitialData) -> dict:
    """Errors of ``recovered`` against ``truth`` where both are defined."""
    lo = max(recovered.eta0.domain[0], truth.eta0.domain[0])
    hi = min(recovered.eta0.domain[1], truth.eta0.domain[1])
    xs = recovered.eta0.grid
    xs = xs[(xs >= lo) & (xs <= hi)]
    diff = recovered.eta0(xs) - truth.eta0(xs)
    scale = float(np.abs(truth.eta0.values).max())
    rel = scale if scale > 0 else 1.0
    return {
        "linf": float(np.abs(diff).max()),
        "l2": float(np.sqrt(np.mean(diff**2))),
        "rel_linf": float(np.abs(diff).max() / rel),
        "rel_l2": float(np.sqrt(np.mean(diff**2)) / rel),
        "compared_x": [float(xs[0]), float(xs[-1])],
    }


def run_roundtrip(args) -> int:
    scale = _scaling(args)
    outdir = _outdir(args.outdir)
    summary = _base_summary(args, scale)
    written: list[str] = []
    d = load_profile(args.input, scale)
    tol = args.tolerance if args.tolerance is not None else DEFAULT_TOLERANCE["roundtrip"]
    try:
        fwd = _direct_stage(d, args, outdir, scale, summary, written)
        summary["direct_shoreline_residual"] = summary.pop("shoreline_residual")
        inv = _inverse_stage(fwd.record, args, outdir, scale, summary, written)
        err = roundtrip_errors(inv.initial, d)
        err["tolerance"] = tol
        err["passed"] = err["rel_linf"] <= tol
        summary["roundtrip"] = err
    finally:
        summary["outputs"] = written
        write_summary(outdir, summary)
    print(json.dumps(_jsonable(summary["roundtrip"])))
    return EXIT_OK


def run_selftest(args) -> int:
    from .selftest import run_selftest as _run

    outdir = _outdir(args.outdir)
    quad = DEFAULT_QUADRATURE
    if args.perturb_abel_weights:
        quad = quad.perturbed(args.perturb_abel_weights)
    checks = _run(quad)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} value={c.value:.3g} tol={c.tolerance:g}")
    summary = _base_summary(args, None)
    summary["checks"] = [c.as_dict() for c in checks]
    summary["passed"] = all(c.passed for c in checks)
    write_summary(outdir, summary)
    return EXIT_OK if summary["passed"] else EXIT_SELFTEST


def run_waveeq_check(args) -> int:
    from .hodograph import initial_to_hodograph
    from .wave_reference import WaveConfig, evolve

    scale = _scaling(args)
    outdir = _outdir(args.outdir)
    summary = _base_summary(args, scale)
    d = load_profile(args.input, scale)
    cover = float(np.sqrt(max(d.depth[-1], 0.0)))
    sigma_max = args.sigma_max or cover
    if sigma_max > cover:
        raise DomainError(f"--sigma-max {sigma_max:.6g} exceeds profile coverage {cover:.6g}")
    h = initial_to_hodograph(d, np.linspace(0.0, sigma_max, args.n_sigma))
    tau_max = args.tau_max if args.tau_max is not None else 0.5 * sigma_max
    rep = waveeq_check(h, tau_max, n_sigma=args.fd_n_sigma, n_tau=args.n_tau)
    tol = args.tolerance if args.tolerance is not None else DEFAULT_TOLERANCE["waveeq-check"]
    rep["tolerance"] = tol
    rep["passed"] = rep["v_max_diff"] <= tol
    summary["waveeq"] = rep
    if args.write_field:
        f = evolve(h, WaveConfig(sigma_max, tau_max, args.fd_n_sigma, store_every=10))
        f.to_csv(outdir / "field.csv", every=10)
        summary["outputs"] = ["field.csv"]
    write_summary(outdir, summary)
    print(json.dumps(_jsonable(rep)))
    return EXIT_OK if rep["passed"] else EXIT_SELFTEST


COMMANDS = {
    "direct": run_direct,
    "inverse": run_inverse,
    "roundtrip": run_roundtrip,
    "selftest": run_selftest,
    "waveeq-check": run_waveeq_check,
}


def _setup_logging():
    level = os.environ.get("RUNUP_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _write_failure(args, code, exc):
    outdir = getattr(args, "outdir", None)
    if outdir is None or not Path(outdir).is_dir():
        return
    summary = {"command": args.command, "version": __version__, "error": str(exc),
               "exit_code": code}
    report = getattr(exc, "report", None)
    if report is not None:
        summary["breaking"] = report.as_dict()
    path = Path(outdir) / "summary.json"
    if path.exists():
        try:
            with open(path) as fh:
                summary = {**json.load(fh), **summary}
        except (OSError, ValueError):
            pass
    try:
        write_summary(Path(outdir), summary)
    except OSError:
        pass


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except (BreakingError, DomainError) as exc:
        code = EXIT_PHYSICS
        print(f"error: {exc}", file=sys.stderr)
        _write_failure(args, code, exc)
    except (SchemaError, DataError, InputError, InvalidParametersError, OSError) as exc:
        code = EXIT_IO
        print(f"error: {exc}", file=sys.stderr)
        _write_failure(args, code, exc)
    except RunupError as exc:
        code = EXIT_PHYSICS
        print(f"error: {exc}", file=sys.stderr)
        _write_failure(args, code, exc)
    log.info("%s finished in %.2f s with exit code %d", args.command,
             time.perf_counter() - start, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
