"""Command line interface: scenario runs, sweeps, deterministic artifacts.

Every run writes CSV files with byte-stable contents (shortest
round-trip float formatting, fixed row order) plus a JSON manifest
recording parameters, tolerances, truncations and wall time.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .continuous import (
    DriveProfile,
    RampedSinusoidDrive,
    SinusoidDrive,
    ZeroDrive,
    make_semiopen_far_kernel,
    make_semiopen_near_dirichlet_kernel,
)
from .entanglement import NegativityScanConfig, negativity_scan
from .mirror import (
    AccelerationProfile,
    NegativeAccelerationWarning,
    make_mirror_kernel,
    uniform_mirror_exact,
)
from .modes import cavity_eigenvalues
from .scenario import Scenario, ScenarioError, load_scenario
from .spectra import FluxConfig, TruncationNotConverged, compare_spectra
from .sudden import (
    cavity_sudden_far,
    semiopen_sudden_far,
    semiopen_sudden_near_dirichlet,
)
from .verify import (
    cavity_near_dirichlet_quadratic_report,
    check_linear,
    check_linear_kernel,
    report_csv_rows,
    report_lines,
    semiopen_near_dirichlet_composition_report,
)

COMMANDS = ("flux", "negativity", "sudden", "modes", "mirror-exact",
            "verify-identities")

OUT_ENV_VAR = "ROBINDCE_OUT"


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats, plain text otherwise."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_csv(path: Path, comments: list[str], columns: list[str], rows) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _scenario_comments(scn: Scenario) -> list[str]:
    out = [f"robindce {__version__}", "units: lengths mm, wavenumbers mm^-1, v = 1"]
    for label, block in (("geometry", scn.geometry), ("regime", scn.regime),
                         ("analysis", scn.analysis), ("numerics", scn.numerics)):
        for key in sorted(block):
            out.append(f"{label}.{key} = {block[key]}")
    for i, d in enumerate(scn.drives):
        label = "drive" if len(scn.drives) == 1 else f"drive{i + 1}"
        for key in sorted(d):
            out.append(f"{label}.{key} = {d[key]}")
    return out


def build_drive(entries: dict) -> DriveProfile:
    t0, tf = entries["t0"], entries["tf"]
    dtype = entries["type"]
    if dtype == "zero":
        return ZeroDrive(t0, tf)
    if dtype == "sinusoid":
        return SinusoidDrive(entries["epsilon"], entries["omega_d"], t0, tf)
    return RampedSinusoidDrive(entries["epsilon"], entries["omega_d"], t0, tf,
                               entries["ramp"])


def build_kernel_pair(scn: Scenario):
    """Robin kernel plus the drive-matched mirror kernel for semiopen scenarios.

    Returns (robin, mirror, omega_d, k_max_hint). The mirror acceleration is
    the second time derivative of the boundary's effective displacement.
    """
    if scn.geometry["kind"] != "semiopen":
        raise ValueError("flux and negativity need a semiopen scenario")
    drive = build_drive(scn.drive)
    mu = scn.regime.get("mass", 0.0)
    omega_d = scn.drive.get("omega_d", 0.0)
    kind = scn.regime["kind"]
    if kind == "robin_far":
        lam = scn.regime["lambda"]
        robin = make_semiopen_far_kernel(lam, mu, drive)
        accel = AccelerationProfile.from_drive_second_derivative(drive, -lam)
        return robin, make_mirror_kernel(accel), omega_d, 10.0 / lam
    if kind == "robin_near_dirichlet":
        b_amp = scn.regime["b_amplitude"]
        robin = make_semiopen_near_dirichlet_kernel(mu, drive.scaled(b_amp))
        accel = AccelerationProfile.from_drive_second_derivative(drive, b_amp)
        return robin, make_mirror_kernel(accel), omega_d, None
    raise ValueError("mirror-only scenarios have no Robin kernel to compare")


def _tol(scn: Scenario, key: str, default: float, scale: float) -> float:
    return scn.numerics.get(key, default) * scale


def cmd_flux(scn: Scenario, out_dir: Path, opts) -> dict:
    robin_kernel, mirror_kernel, omega_d, k_max_hint = build_kernel_pair(scn)
    cfg = FluxConfig(
        kbar_points=scn.analysis.get("kbar_points", 400),
        kbar_max=scn.analysis.get("kbar_max", 2.0),
        convergence_threshold=_tol(scn, "convergence_threshold", 1e-3,
                                   opts.tolerance_scale),
        threads=opts.threads,
        k_max_override=opts.k_max_override,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NegativeAccelerationWarning)
        robin, mirror = compare_spectra(robin_kernel, mirror_kernel, omega_d,
                                        config=cfg, k_max_hint=k_max_hint)
    rows = []
    for i, kb in enumerate(robin.kbar_grid):
        nr = float(robin.n_values[i])
        nm = float(mirror.n_values[i])
        ratio = nr / nm if nm != 0.0 else math.nan
        err = max(float(robin.inner_quad_error[i]), float(mirror.inner_quad_error[i]))
        rows.append((float(kb), nr, nm, ratio, err))
    _write_csv(out_dir / "flux.csv", _scenario_comments(scn),
               ["kbar", "n_robin", "n_mirror", "ratio", "inner_error"], rows)
    return {
        "artifact": "flux.csv",
        "total_N_robin": robin.total_N,
        "total_N_mirror": mirror.total_N,
        "peak_n_robin": float(np.max(robin.n_values)),
        "peak_n_mirror": float(np.max(mirror.n_values)),
        "k_max_used": {"robin": robin.k_max_used, "mirror": mirror.k_max_used},
        "convergence_ratio": {"robin": robin.convergence_ratio,
                              "mirror": mirror.convergence_ratio},
        "convergence_threshold": cfg.convergence_threshold,
        "warnings": sorted({str(w.message) for w in caught}),
    }


def cmd_negativity(scn: Scenario, out_dir: Path, opts) -> dict:
    robin_kernel, mirror_kernel, omega_d, _ = build_kernel_pair(scn)
    cfg = NegativityScanConfig(
        omega_d=omega_d,
        delta_k=scn.analysis.get("delta_k_fraction", 1.0 / 200.0) * omega_d,
        n_points=scn.analysis.get("scan_points", 80),
        max_fraction=scn.analysis.get("max_detuning_fraction", 0.4),
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NegativeAccelerationWarning)
        rows = negativity_scan(robin_kernel, mirror_kernel, cfg)
    _write_csv(out_dir / "negativity.csv", _scenario_comments(scn),
               ["delta_omega_over_omega_d", "Bhat_robin", "Bhat_mirror",
                "negativity_robin", "negativity_mirror"], rows)
    peak_r = max((r[1] for r in rows), default=0.0)
    peak_m = max((r[2] for r in rows), default=0.0)
    return {
        "artifact": "negativity.csv",
        "delta_k": cfg.resolved_delta_k(),
        "scan_points": len(rows),
        "peak_Bhat_robin": peak_r,
        "peak_Bhat_mirror": peak_m,
        "warnings": sorted({str(w.message) for w in caught}),
    }


def cmd_sudden(scn: Scenario, out_dir: Path, opts) -> dict:
    if scn.geometry["kind"] == "cavity":
        n_modes = scn.analysis.get("n_modes", 10)
        table = cavity_eigenvalues(scn.regime["kappa1"], scn.regime["kappa2"],
                                   n_modes, scn.geometry["length"])
        mat = cavity_sudden_far(table, scn.analysis.get("sudden_eta", 0.01),
                                scn.analysis.get("sudden_eta2", 0.0))
        _write_csv(out_dir / "sudden.csv", _scenario_comments(scn),
                   ["regime", "m", "n", "re_alpha", "im_alpha", "re_beta",
                    "im_beta", "order"], mat.to_rows())
        return {"artifact": "sudden.csv", "n_modes": n_modes, "order": mat.order}

    grid = np.linspace(scn.numerics.get("k_grid_min", 0.2),
                       scn.numerics.get("k_grid_max", 3.0),
                       scn.numerics.get("grid_points", 25))
    mu = scn.regime.get("mass", 0.0)
    kind = scn.regime["kind"]
    rows = []
    for kp in grid:
        for k in grid:
            if kind == "robin_far":
                sample, beta = semiopen_sudden_far(
                    kp, k, scn.regime["lambda"],
                    scn.analysis.get("sudden_eta", 0.01), mu, order=2)
            else:
                sample, beta = semiopen_sudden_near_dirichlet(
                    kp, k, scn.regime["b_amplitude"], mu, order=2)
            rows.append((kind, float(kp), float(k), sample.delta_coeff,
                         sample.pv_coefficient, beta, 2))
    _write_csv(out_dir / "sudden.csv", _scenario_comments(scn),
               ["regime", "k_prime", "k", "alpha_delta_coeff",
                "alpha_pv_coefficient", "beta", "order"], rows)
    return {"artifact": "sudden.csv", "grid_points": int(grid.size), "order": 2}


def cmd_modes(scn: Scenario, out_dir: Path, opts) -> dict:
    if scn.geometry["kind"] != "cavity":
        raise ValueError("the modes table requires a cavity scenario")
    m_max = scn.analysis.get("m_max", 10)
    table = cavity_eigenvalues(scn.regime["kappa1"], scn.regime["kappa2"],
                               m_max, scn.geometry["length"])
    rows = [(m + 1, q, table.omega(q), dq, F, phi)
            for m, (q, dq, F, phi) in enumerate(table.to_rows())]
    _write_csv(out_dir / "modes.csv", _scenario_comments(scn),
               ["m", "q", "omega", "delta_q", "F", "parity"], rows)
    return {"artifact": "modes.csv", "m_max": m_max}


def cmd_mirror_exact(scn: Scenario, out_dir: Path, opts) -> dict:
    a_values = scn.analysis.get("a_values", (0.04, 0.02, 0.01))
    k_pairs = scn.analysis.get("k_pairs", ((1.0, 1.0), (1.0, 2.0)))
    rows = []
    for a in a_values:
        for kp, k in k_pairs:
            res = uniform_mirror_exact(kp, k, a)
            rows.append((kp, k, a, res.alpha, res.beta, res.alpha_error,
                         res.beta_error, res.epsilon_reg))
    _write_csv(out_dir / "mirror_exact.csv", _scenario_comments(scn),
               ["k_prime", "k", "a", "alpha", "beta", "alpha_error",
                "beta_error", "epsilon_reg"], rows)
    return {"artifact": "mirror_exact.csv", "rows": len(rows)}


def cmd_verify_identities(scn: Scenario, out_dir: Path, opts) -> dict:
    lin_tol = _tol(scn, "linear_tolerance", 1e-10, opts.tolerance_scale)
    quad_tol = _tol(scn, "quadratic_tolerance", 1e-6, opts.tolerance_scale)
    eta1 = scn.analysis.get("sudden_eta", 0.01)
    eta2 = scn.analysis.get("sudden_eta2", 0.007)
    window = scn.numerics.get("identity_window", 12)
    inner = scn.numerics.get("inner_modes", 40)

    reports = []
    reports += cavity_near_dirichlet_quadratic_report(
        eta1, eta2, window=window, n_inner=inner, tolerance=quad_tol)
    if scn.geometry["kind"] == "cavity":
        table = cavity_eigenvalues(scn.regime["kappa1"], scn.regime["kappa2"],
                                   scn.analysis.get("n_modes", 10),
                                   scn.geometry["length"])
        mat = cavity_sudden_far(table, eta1, eta2)
        alpha1 = mat.alpha - np.eye(mat.n_modes)
        reports += check_linear(alpha1, mat.beta, tolerance=1e-12 * opts.tolerance_scale,
                                regime=mat.regime)
    else:
        grid = np.linspace(scn.numerics.get("k_grid_min", 0.2),
                           scn.numerics.get("k_grid_max", 3.0),
                           scn.numerics.get("grid_points", 25))
        robin_kernel, mirror_kernel, _, _ = build_kernel_pair(scn)
        reports += check_linear_kernel(robin_kernel, grid, tolerance=lin_tol)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NegativeAccelerationWarning)
            reports += check_linear_kernel(mirror_kernel, grid, tolerance=lin_tol)
        if scn.regime["kind"] == "robin_near_dirichlet":
            reports.append(semiopen_near_dirichlet_composition_report(
                grid, b=abs(scn.regime["b_amplitude"]),
                tolerance=1e-4 * opts.tolerance_scale))

    _write_csv(out_dir / "identities.csv", _scenario_comments(scn),
               ["regime", "check", "max_violation", "tolerance", "status"],
               report_csv_rows(reports))
    (out_dir / "identities.txt").write_text("\n".join(report_lines(reports)) + "\n")
    failures = [r for r in reports if r.status == "FAIL"]
    return {
        "artifact": "identities.csv",
        "checks": len(reports),
        "failures": len(failures),
        "inconclusive": sum(1 for r in reports if r.inconclusive),
        "linear_tolerance": lin_tol,
        "quadratic_tolerance": quad_tol,
    }


_RUNNERS = {
    "flux": cmd_flux,
    "negativity": cmd_negativity,
    "sudden": cmd_sudden,
    "modes": cmd_modes,
    "mirror-exact": cmd_mirror_exact,
    "verify-identities": cmd_verify_identities,
}


def run(scn: Scenario, command: str, out_dir, opts) -> int:
    """Run one command on a validated scenario; returns the exit status."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t_start = time.monotonic()
    manifest = {
        "version": __version__,
        "command": command,
        "scenario": scn.source,
        "parameters": _scenario_comments(scn),
        "tolerance_scale": opts.tolerance_scale,
        "threads": opts.threads,
        "k_max_override": opts.k_max_override,
    }
    status = 0
    try:
        result = _RUNNERS[command](scn, out, opts)
        manifest.update(result)
        if result.get("failures"):
            status = 1
    except (TruncationNotConverged, ValueError, RuntimeError) as exc:
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        status = 1
    manifest["wall_time_s"] = round(time.monotonic() - t_start, 3)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return status


def _override_scenario(scn: Scenario, axis: str, value: float) -> Scenario:
    section, _, key = axis.partition(".")
    blocks = {
        "geometry": dict(scn.geometry),
        "regime": dict(scn.regime),
        "analysis": dict(scn.analysis),
        "numerics": dict(scn.numerics),
    }
    drives = [dict(d) for d in scn.drives]
    if section in blocks:
        if key not in blocks[section]:
            raise ValueError(f"sweep axis {axis!r} does not name an existing parameter")
        blocks[section][key] = value
    elif section == "drive" and len(drives) == 1 and key in drives[0]:
        drives[0][key] = value
    else:
        raise ValueError(f"sweep axis {axis!r} does not name an existing parameter")
    return Scenario(geometry=blocks["geometry"], regime=blocks["regime"],
                    drives=tuple(drives), analysis=blocks["analysis"],
                    numerics=blocks["numerics"], source=scn.source)


def sweep(scn: Scenario, command: str, axis: str, values, out_dir, opts) -> int:
    """Run the command once per axis value; failures are recorded, not fatal."""
    if not values:
        raise ValueError("sweep needs a non-empty list of values")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    worst = 0
    for i, value in enumerate(values):
        sub = out / f"run_{i:02d}_{_fmt(float(value))}"
        try:
            sub_scn = _override_scenario(scn, axis, float(value))
            status = run(sub_scn, command, sub, opts)
        except ValueError as exc:
            sub.mkdir(parents=True, exist_ok=True)
            (sub / "manifest.json").write_text(json.dumps(
                {"error": str(exc), "command": command}, indent=2, sort_keys=True) + "\n")
            status = 1
        worst = max(worst, status)
        manifest = json.loads((sub / "manifest.json").read_text())
        summary.append((
            float(value),
            "ok" if status == 0 else "error",
            manifest.get("total_N_robin", math.nan),
            manifest.get("total_N_mirror", math.nan),
            manifest.get("peak_n_robin", math.nan),
            manifest.get("peak_n_mirror", math.nan),
            manifest.get("peak_Bhat_robin", math.nan),
            manifest.get("peak_Bhat_mirror", math.nan),
        ))
    _write_csv(out / "summary.csv",
               [f"robindce {__version__}", f"sweep axis {axis}", f"command {command}"],
               ["value", "status", "total_N_robin", "total_N_mirror",
                "peak_n_robin", "peak_n_mirror", "peak_Bhat_robin",
                "peak_Bhat_mirror"], summary)
    return worst


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robindce",
        description="Photon creation and entanglement for driven Robin "
                    "boundaries versus moving mirrors.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    def add_common(p):
        p.add_argument("command", choices=COMMANDS)
        p.add_argument("scenario", help="scenario file path or bundled name")
        p.add_argument("--out", default=None,
                       help=f"output directory (default ${OUT_ENV_VAR} or ./robindce_out)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--tolerance-scale", type=float, default=1.0,
                       dest="tolerance_scale")
        p.add_argument("--k-max-override", type=float, default=None,
                       dest="k_max_override")

    run_p = sub.add_parser("run", help="run one command on a scenario")
    add_common(run_p)
    sweep_p = sub.add_parser("sweep", help="run a command across parameter values")
    add_common(sweep_p)
    sweep_p.add_argument("--axis", required=True,
                         help="parameter path, e.g. regime.lambda")
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated numeric values")
    return parser


def main(argv=None) -> int:
    opts = _build_parser().parse_args(argv)
    out_dir = opts.out or os.environ.get(OUT_ENV_VAR) or "robindce_out"
    try:
        scn = load_scenario(opts.scenario)
    except (ScenarioError, FileNotFoundError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if opts.mode == "sweep":
        try:
            values = [float(v) for v in opts.values.split(",") if v.strip()]
            return sweep(scn, opts.command, opts.axis, values, out_dir, opts)
        except ValueError as exc:
            print(str(exc), file=sys.stderr)
            return 2
    return run(scn, opts.command, out_dir, opts)


if __name__ == "__main__":
    sys.exit(main())
