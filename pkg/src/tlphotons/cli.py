"""Command-line front end: pulse analysis with deterministic CSV output.

Subcommands: ``analyze``, ``sweep``, ``window-scan``, ``oracle``.  Every run
writes RFC-4180-style CSVs (LF endings, 17 significant digits) plus a
``manifest.json`` recording the command, input digest, parameters and
outputs; identical inputs and parameters produce byte-identical CSV bodies.

Exit codes: 0 success (a divergent photon number is a physical finding, not
a failure), 2 usage/parse/validation errors, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NotConverged, OverlappingSubPulses, PulseError, PulseFileError
from .kgrid import KGrid
from .line import LineParams
from .mode_oracle import (
    default_spec,
    energy_classical,
    energy_modes,
    oracle_beta2_levels,
    oracle_time_invariance,
)
from .photon_content import (
    DIVERGENT,
    NOT_APPLICABLE,
    analyze_pulse,
    fit_log_slope,
    mode_amplitude,
    split_pulse_sweep,
)
from .pulsefile import parse_pulse_file
from .transforms import (
    coefficient_functions_general,
    coefficient_functions_rightmover,
    hilbert_pcw,
    hilbert_sampled,
)
from .waveform import (
    PiecewiseConstantWaveform,
    SampledWaveform,
    bipolarity_check,
    fields_from_snapshot,
    right_mover_fields,
)
from .detection import capture_scan, fit_exponential, fit_power_law
from .kgrid import default_energy_grid


def _fmt(value) -> str:
    if value is DIVERGENT:
        return "divergent"
    if value is NOT_APPLICABLE:
        return "n/a"
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "ok" if value else "violated"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_atomic(path: Path, data: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    _write_atomic(path, "\n".join(lines) + "\n")


def _write_manifest(out: Path, command: str, digest: str, parameters: dict,
                    outputs: list[str], extras: dict | None = None):
    payload = {
        "command": command,
        "input_digest": digest,
        "tool_version": __version__,
        "parameters": parameters,
        "outputs": outputs,
    }
    if extras:
        payload["extras"] = extras
    _write_atomic(out / "manifest.json",
                  json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _digest(path: str | None) -> str:
    if path is None:
        return ""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(path: str, natural_units: bool):
    pulse = parse_pulse_file(path)
    if not pulse.had_line_record and not natural_units:
        raise PulseFileError(1, "no line record and --no-natural-units given")
    return pulse


def _probe_grid(lo: float, hi: float, jumps: np.ndarray, n: int = 1201) -> np.ndarray:
    width = max(hi - lo, 1.0)
    a, b = lo - 1.5 * width, hi + 1.5 * width
    dx = (b - a) / n
    xs = a + (np.arange(n) + 0.5) * dx
    if jumps.size:
        # half-step offset from every jump abscissa to dodge log divergences
        while np.min(np.abs(xs[:, None] - jumps[None, :])) < 1e-9 * width:
            xs = xs + 0.25 * dx
    return xs


def _flags_string(report) -> str:
    return ";".join([
        f"charge_neutral={'ok' if report.charge_neutral else 'violated'}",
        f"flux_decay={'ok' if report.flux_decays else 'violated'}",
        f"bipolar={'ok' if report.bipolar else 'violated'}",
    ])


def cmd_analyze(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pulse = _load(args.pulse_file, args.natural_units)
    line, V, I = pulse.line, pulse.voltage, pulse.current

    if isinstance(V, SampledWaveform):
        return _analyze_sampled(args, out, pulse)

    report = analyze_pulse(V, line, current=I, tol=args.tol)
    methods = {
        "general": report.beta2_general,
        "rightmover": report.beta2_rightmover,
        "logkernel": report.beta2_logkernel,
    }
    selected = list(methods) if args.method == "all" else [args.method]
    flags = _flags_string(report)
    rows = [[m, methods[m], flags, report.ir_coefficient, report.naive_estimate]
            for m in selected]
    _write_csv(out / "report.csv",
               ["method", "beta2", "flags", "ir_coefficient", "naive_estimate"], rows)

    fields = right_mover_fields(V, line) if I is None else fields_from_snapshot(V, I, line)
    jumps, _ = V.jumps()
    lo, hi = V.support if V.support else (-1.0, 1.0)
    xs = _probe_grid(lo, hi, jumps)
    q_vals = np.asarray(fields.q(xs))
    phi_vals = np.asarray(fields.phi(xs))
    re_q = -line.c * hilbert_pcw(V, xs) if I is None else None
    try:
        theta = (coefficient_functions_rightmover(V, line, tol=args.tol) if I is None
                 else coefficient_functions_general(fields, line, tol=args.tol))
        re_q = np.asarray(theta.re_theta_q(xs))
        re_phi = np.asarray(theta.re_theta_phi(xs))
    except PulseError:
        # no photonic representation; H[V] still exists for the q side
        if re_q is None:
            re_q = np.full(xs.size, np.nan)
        re_phi = np.full(xs.size, np.nan)
    field_rows = [[x, vv, qq, pp, rq, iq, rp, ip] for x, vv, qq, pp, rq, iq, rp, ip
                  in zip(xs, np.asarray(V(xs)), q_vals, phi_vals,
                         re_q, q_vals, re_phi, phi_vals)]
    _write_csv(out / "fields.csv",
               ["x", "V", "q", "phi", "re_theta_q", "im_theta_q",
                "re_theta_phi", "im_theta_phi"], field_rows)

    _write_manifest(out, "analyze", _digest(args.pulse_file),
                    {"method": args.method, "tol": args.tol,
                     "natural_units": args.natural_units},
                    ["report.csv", "fields.csv"],
                    {"divergent": report.beta2_general is DIVERGENT})
    return 0


def _analyze_sampled(args, out: Path, pulse) -> int:
    """Sampled-body path: grid transforms only, closed-form methods n/a."""
    line, V = pulse.line, pulse.voltage
    fields = right_mover_fields(V, line)
    modes = mode_amplitude(fields, line, tol=args.tol) if \
        bipolarity_check(V, tol=max(args.tol, 1e-6)).bipolar else None
    beta2 = modes.norm_sq if modes is not None else DIVERGENT
    from .photon_content import ir_divergence_coefficient
    flags = ";".join([
        f"charge_neutral={'ok' if fields.charge_neutral else 'violated'}",
        f"flux_decay={'ok' if fields.flux_decays else 'violated'}",
        f"bipolar={'ok' if modes is not None else 'violated'}",
    ])
    rows = [["general", beta2, flags, ir_divergence_coefficient(V, line), ""]]
    _write_csv(out / "report.csv",
               ["method", "beta2", "flags", "ir_coefficient", "naive_estimate"], rows)
    ht = hilbert_sampled(V)
    xs = V.positions
    rows = [[x, vv, line.c * vv, pp, -line.c * hh, line.c * vv, np.nan, pp]
            for x, vv, hh, pp in zip(xs, V.samples, ht.samples,
                                     np.asarray(fields.phi(xs)))]
    _write_csv(out / "fields.csv",
               ["x", "V", "q", "phi", "re_theta_q", "im_theta_q",
                "re_theta_phi", "im_theta_phi"], rows)
    _write_manifest(out, "analyze", _digest(args.pulse_file),
                    {"method": args.method, "tol": args.tol,
                     "natural_units": args.natural_units},
                    ["report.csv", "fields.csv"],
                    {"sampled_body": True})
    return 0


def cmd_sweep(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.points < 3:
        print("sweep needs at least 3 points", file=sys.stderr)
        return 2
    line = LineParams()
    ws = np.geomspace(args.min_w, args.max_w, args.points)
    rows = split_pulse_sweep(ws, line)
    _write_csv(out / "sweep.csv", ["w", "beta2"], [list(r) for r in rows])
    slope, intercept = fit_log_slope(rows)
    extras = {"slope_vs_ln_w": slope, "intercept": intercept}
    if args.points < 4:
        extras["warning"] = "degenerate fit: fewer than 4 points"
    _write_manifest(out, "sweep", "",
                    {"min_w": args.min_w, "max_w": args.max_w, "points": args.points},
                    ["sweep.csv"], extras)
    return 0


def cmd_window_scan(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pulse = _load(args.pulse_file, args.natural_units)
    line, V = pulse.line, pulse.voltage
    if not isinstance(V, PiecewiseConstantWaveform):
        print("window scan needs a segment-based pulse file", file=sys.stderr)
        return 2
    if not V.segments or V.abs_area() == 0.0:
        print("no photons: the pulse is identically zero", file=sys.stderr)
        return 2
    check = bipolarity_check(V, tol=args.tol)
    if not check.bipolar:
        print(f"unipolar pulse (net area {check.net_area:g}): "
              "no photon mode exists to capture", file=sys.stderr)
        return 2
    lo, hi = V.support
    need = 0.5 * (hi - lo)
    if args.min_l is not None and args.min_l < need:
        print(f"window halfwidth {args.min_l:g} is smaller than the pulse "
              f"support (edges at {lo:g} and {hi:g}; need >= {need:g})",
              file=sys.stderr)
        return 2
    start = args.min_l if args.min_l is not None else 2.0 * need
    halfwidths = [start * 2.0**j for j in range(args.levels)
                  if start * 2.0**j <= args.max_l]
    if not halfwidths:
        print("no windows: raise --max-L or lower --min-L", file=sys.stderr)
        return 2
    theta = coefficient_functions_rightmover(V, line, tol=args.tol)
    kgrid = KGrid.uniform_symmetric(256.0, 16384)
    reports = capture_scan(theta, halfwidths, line, kgrid)
    _write_csv(out / "capture.csv",
               ["L", "epsilon", "counter_rotating_weight"],
               [[r.halfwidth, r.epsilon, r.counter_rotating_weight] for r in reports])
    ls = [r.halfwidth for r in reports]
    eps = [r.epsilon for r in reports]
    extras = {}
    if len(reports) >= 3:
        exponent, r2_pow = fit_power_law(ls, eps)
        _, r2_exp = fit_exponential(ls, eps)
        extras = {"power_law_exponent": exponent, "power_law_r2": r2_pow,
                  "exponential_r2": r2_exp}
    _write_manifest(out, "window-scan", _digest(args.pulse_file),
                    {"max_l": args.max_l, "levels": args.levels,
                     "min_l": args.min_l, "tol": args.tol},
                    ["capture.csv"], extras)
    return 0


def cmd_oracle(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.refine < 2:
        print("oracle needs at least 2 refinement levels", file=sys.stderr)
        return 2
    pulse = _load(args.pulse_file, args.natural_units)
    line, V, I = pulse.line, pulse.voltage, pulse.current
    if not isinstance(V, PiecewiseConstantWaveform):
        print("oracle needs a segment-based pulse file", file=sys.stderr)
        return 2
    if args.standing:
        fields = fields_from_snapshot(V, PiecewiseConstantWaveform(()), line)
    elif I is not None:
        fields = fields_from_snapshot(V, I, line)
    else:
        fields = right_mover_fields(V, line)

    spec = default_spec(fields)
    levels = oracle_beta2_levels(fields, line, spec, levels=args.refine)
    e_classical = energy_classical(fields, line)
    e_modes = ""
    deviation = ""
    converged = True
    if abs(levels[-1][1] - levels[-2][1]) > 0.5e-3 * abs(levels[-1][1]):
        converged = False
    try:
        modes = mode_amplitude(fields, line, kgrid=default_energy_grid())
        e_modes = energy_modes(modes, line)
    except PulseError:
        e_modes = "n/a"
    lo, hi = V.support if V.support else (0.0, 1.0)
    horizon = max(hi - lo, 1.0) / line.v
    try:
        deviation = oracle_time_invariance(fields, line, [0.5 * horizon, 2.0 * horizon],
                                           levels=args.refine)
    except NotConverged:
        deviation = "n/a"
        converged = False
    rows = [[lvl, b2, e_classical, e_modes, deviation] for lvl, b2 in levels]
    _write_csv(out / "oracle.csv",
               ["refinement_level", "beta2", "energy_classical", "energy_modes",
                "max_time_invariance_deviation"], rows)
    _write_manifest(out, "oracle", _digest(args.pulse_file),
                    {"refine": args.refine, "standing": args.standing},
                    ["oracle.csv"], {"converged": converged})
    return 0 if converged else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlphotons",
        description="Photon content of classical transmission-line pulses.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("pulse_file", help="pulse description file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="relative tolerance for validity checks")
        p.add_argument("--natural-units", dest="natural_units",
                       action="store_true", default=True,
                       help="use c = v = hbar = 1 when the file has no line record (default)")
        p.add_argument("--no-natural-units", dest="natural_units", action="store_false")

    p = sub.add_parser("analyze", help="photon-number report and field table")
    common(p)
    p.add_argument("--method", choices=["general", "rightmover", "logkernel", "all"],
                   default="all")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("sweep", help="split-pulse brightness vs separation")
    common(p, with_file=False)
    p.add_argument("--min-w", type=float, default=1e2, dest="min_w")
    p.add_argument("--max-w", type=float, default=1e4, dest="max_w")
    p.add_argument("--points", type=int, default=25)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("window-scan", help="capture residual vs coupler window size")
    common(p)
    p.add_argument("--max-L", type=float, default=512.0, dest="max_l")
    p.add_argument("--min-L", type=float, default=None, dest="min_l")
    p.add_argument("--levels", type=int, default=8)
    p.set_defaults(fn=cmd_window_scan)

    p = sub.add_parser("oracle", help="discretized-grid cross-check of the analysis")
    common(p)
    p.add_argument("--refine", type=int, default=2,
                   help="number of grid-doubling levels")
    p.add_argument("--standing", action="store_true",
                   help="treat the pulse as a standing snapshot (zero current)")
    p.set_defaults(fn=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PulseFileError as exc:
        print(f"pulse file error: {exc}", file=sys.stderr)
        return 2
    except OverlappingSubPulses as exc:
        print(f"invalid sweep: {exc}", file=sys.stderr)
        return 2
    except NotConverged as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return 3
    except PulseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
