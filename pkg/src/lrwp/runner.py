"""Run orchestration and deterministic CSV serialization.

Output files are written atomically (temp file + rename) with LF line
endings and a fixed 17-significant-digit scientific format, so identical
configurations produce byte-identical files. Column orders are frozen:

    observables.csv   t,norm,x_mean,p_mean,dx,dp,dxdp,inv_re,inv_im,l2_err_ss,l2_err_cn
    snapshots.csv     t,x,psi_re,psi_im,prob
    comparison.csv    t,max_abs_diff
    sweep_summary.csv param,value,final_l2_err_ss,final_l2_err_cn,min_dxdp,t_star,status
"""

import concurrent.futures
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classical import ClassicalState, KineticActionTable, p_c, x_c
from .config import RunConfig, RunMode, apply_sweep_value, check_containment
from .errors import AcceptanceViolation, AliasingError, LrwpError
from .fields import conjugate_momentum_grid, l2_error
from .forcing import Quadratures
from .invariant import PacketMode, coeffs_at, eigenvalue
from .oracle import observables, propagate_cranknicolson, propagate_splitstep
from .wavepacket import (
    analytic_norm_sq,
    delta_p,
    delta_x,
    fourier_bridge,
    min_uncertainty_time,
    plane_wave_psi,
    sample_gaussian_momentum,
    sample_gtwp,
    uncertainty_product,
)

__all__ = [
    "OBSERVABLES_HEADER",
    "SNAPSHOTS_HEADER",
    "COMPARISON_HEADER",
    "SWEEP_HEADER",
    "run_analytic",
    "run_validate",
    "run_momentum",
    "run_sweep",
    "write_csv_atomic",
]

OBSERVABLES_HEADER = [
    "t", "norm", "x_mean", "p_mean", "dx", "dp", "dxdp",
    "inv_re", "inv_im", "l2_err_ss", "l2_err_cn",
]
SNAPSHOTS_HEADER = ["t", "x", "psi_re", "psi_im", "prob"]
COMPARISON_HEADER = ["t", "max_abs_diff"]
SWEEP_HEADER = [
    "param", "value", "final_l2_err_ss", "final_l2_err_cn", "min_dxdp", "t_star", "status",
]

L2_THRESHOLD = 1e-4
INV_DRIFT_THRESHOLD = 1e-6
NORM_THRESHOLD = 1e-10


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isnan(v):
        return "nan"
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return f"{v:.16e}"


def write_csv_atomic(path: Path, header: list[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _snapshot_times(cfg: RunConfig) -> np.ndarray:
    g = cfg.grid
    count = g.n_steps // g.output_every
    return g.dt * g.output_every * np.arange(count + 1)


def _action_table(cfg: RunConfig) -> KineticActionTable:
    cl = ClassicalState(m=cfg.m, x0=cfg.packet.x0, p0=cfg.packet.p0)
    return KineticActionTable(cl, Quadratures.closed_form(cfg.profile), cfg.grid.t_max, cfg.grid.dt / 4.0)


def run_analytic(cfg: RunConfig, out_dir) -> dict:
    """Closed-form observables and snapshots, no propagation."""
    out = Path(out_dir)
    q = Quadratures.closed_form(cfg.profile)
    packet = cfg.packet
    cl = packet.classical
    lam = eigenvalue(packet.spec, cl)
    times = _snapshot_times(cfg)
    grid = cfg.grid.grid
    gtwp = packet.mode is PacketMode.GTWP
    table = _action_table(cfg) if gtwp else None

    obs_rows = []
    snap_rows = []
    nan = float("nan")
    for t in times:
        t = float(t)
        xc = float(x_c(cl, q, t))
        pc = float(p_c(cl, q, t))
        if gtwp:
            row = [t, analytic_norm_sq(packet), xc, pc, delta_x(packet, t),
                   delta_p(packet), uncertainty_product(packet, t), lam.real, lam.imag, nan, nan]
            field = sample_gtwp(packet, q, grid, t, action=table(t))
        else:
            row = [t, nan, nan, pc, nan, nan, nan, lam.real, lam.imag, nan, nan]
            field = None
        obs_rows.append(row)
        values = field.values if field is not None else plane_wave_psi(
            packet, q, lam, grid.points, t
        )
        prob = np.abs(values) ** 2
        for j, xj in enumerate(grid.points):
            snap_rows.append([t, float(xj), values[j].real, values[j].imag, prob[j]])

    write_csv_atomic(out / "observables.csv", OBSERVABLES_HEADER, obs_rows)
    write_csv_atomic(out / "snapshots.csv", SNAPSHOTS_HEADER, snap_rows)
    return {"times": times, "lambda": lam}


@dataclass
class ValidateSummary:
    max_l2_ss: float
    max_l2_cn: float
    inv_drift: float
    max_norm_dev: float
    violations: list[str]


def run_validate(cfg: RunConfig, out_dir) -> ValidateSummary:
    """Propagate the packet with both oracles and compare to the closed form.

    Observables are measured on the split-step field (the sharper oracle);
    the Crank–Nicolson field contributes its own L2-error column. Raises
    AcceptanceViolation (after writing the full file) if any quality
    threshold fails.
    """
    out = Path(out_dir)
    check_containment(cfg)
    q = Quadratures.closed_form(cfg.profile)
    packet = cfg.packet
    lam = eigenvalue(packet.spec, packet.classical)
    table = _action_table(cfg)
    grid = cfg.grid.grid
    initial = sample_gtwp(packet, q, grid, 0.0, action=0.0)

    rows = []
    records = []
    max_l2_cn = 0.0
    stream_ss = propagate_splitstep(initial, cfg.profile, cfg.m, cfg.hbar, cfg.grid)
    stream_cn = propagate_cranknicolson(initial, cfg.profile, cfg.m, cfg.hbar, cfg.grid)
    for f_ss, f_cn in zip(stream_ss, stream_cn):
        t = f_ss.t
        analytic = sample_gtwp(packet, q, grid, t, action=table(t))
        coeffs = coeffs_at(packet.spec, cfg.m, q, t)
        rec = observables(f_ss, cfg.m, cfg.hbar, coeffs, analytic=analytic)
        l2_cn = l2_error(f_cn, analytic)
        max_l2_cn = max(max_l2_cn, l2_cn)
        records.append(rec)
        rows.append([
            t, rec.norm, rec.x_mean, rec.p_mean, rec.dx, rec.dp, rec.dxdp,
            rec.inv_expect.real, rec.inv_expect.imag, rec.l2_err_vs_analytic, l2_cn,
        ])
    write_csv_atomic(out / "observables.csv", OBSERVABLES_HEADER, rows)

    max_l2_ss = max(r.l2_err_vs_analytic for r in records)
    # invariant drift relative to |lambda| or, when that vanishes, to the
    # natural operator scale |A0|·dp + |B0|·dx at t = 0
    spec = packet.spec
    scale = max(
        abs(lam), abs(spec.A0) * delta_p(packet) + abs(spec.B0) * delta_x(packet, 0.0)
    )
    inv0 = records[0].inv_expect
    inv_drift = max(abs(r.inv_expect - inv0) for r in records) / scale
    max_norm_dev = max(abs(r.norm - 1.0) for r in records)

    violations = []
    if max_l2_ss >= L2_THRESHOLD:
        violations.append(f"split-step L2 error {max_l2_ss:.3e} >= {L2_THRESHOLD:g}")
    if max_l2_cn >= L2_THRESHOLD:
        violations.append(f"crank-nicolson L2 error {max_l2_cn:.3e} >= {L2_THRESHOLD:g}")
    if inv_drift >= INV_DRIFT_THRESHOLD:
        violations.append(f"invariant drift {inv_drift:.3e} >= {INV_DRIFT_THRESHOLD:g}")
    if max_norm_dev >= NORM_THRESHOLD:
        violations.append(f"norm deviation {max_norm_dev:.3e} >= {NORM_THRESHOLD:g}")
    summary = ValidateSummary(max_l2_ss, max_l2_cn, inv_drift, max_norm_dev, violations)
    if violations:
        raise AcceptanceViolation("; ".join(violations), summary=summary)
    return summary


def run_momentum(cfg: RunConfig, out_dir) -> dict:
    """Momentum-route comparison: transform the momentum-space Gaussian and
    measure the pointwise gap to the packet closed form per output time."""
    out = Path(out_dir)
    q = Quadratures.closed_form(cfg.profile)
    params = cfg.gaussian
    packet = cfg.packet
    grid = cfg.grid.grid
    pgrid = conjugate_momentum_grid(grid, cfg.hbar)
    table = _action_table(cfg)
    rows = []
    worst = 0.0
    for t in _snapshot_times(cfg):
        t = float(t)
        action = table(t)
        phi = sample_gaussian_momentum(params, cfg.m, cfg.hbar, q, pgrid, t, action=action)
        bridged = fourier_bridge(phi, cfg.hbar, position_grid=grid)
        if "aliasing" in bridged.flags:
            raise AliasingError(f"momentum samples not contained on the grid at t={t:g}")
        direct = sample_gtwp(packet, q, grid, t, action=action)
        diff = float(np.max(np.abs(bridged.values - direct.values)))
        worst = max(worst, diff)
        rows.append([t, diff])
    write_csv_atomic(out / "comparison.csv", COMPARISON_HEADER, rows)
    return {"max_abs_diff": worst}


def _packet_metrics(cfg: RunConfig) -> tuple[float, float]:
    if cfg.packet.mode is not PacketMode.GTWP:
        return float("nan"), float("nan")
    t_star = min_uncertainty_time(cfg.packet, cfg.grid.t_max)
    return uncertainty_product(cfg.packet, t_star), t_star


def _run_sweep_case(args) -> list:
    axis, value, cfg, case_dir = args
    nan = float("nan")
    try:
        case = apply_sweep_value(cfg, axis, value)
        min_dxdp, t_star = _packet_metrics(case)
        l2_ss = l2_cn = nan
        if case.mode is RunMode.VALIDATE:
            summary = run_validate(case, case_dir)
            l2_ss, l2_cn = summary.max_l2_ss, summary.max_l2_cn
        elif case.mode is RunMode.ANALYTIC:
            run_analytic(case, case_dir)
        elif case.mode is RunMode.MOMENTUM:
            run_momentum(case, case_dir)
        return [axis, value, l2_ss, l2_cn, min_dxdp, t_star, "ok"]
    except AcceptanceViolation as exc:
        # the run completed and wrote its file; keep the measured figures
        s = exc.summary
        return [axis, value, s.max_l2_ss, s.max_l2_cn, min_dxdp, t_star, "acceptance_violation"]
    except (LrwpError, ValueError) as exc:
        return [axis, value, nan, nan, nan, nan, f"error:{type(exc).__name__}"]


def run_sweep(cfg: RunConfig, out_dir, jobs: int | None = None) -> list[list]:
    """Repeat the configured sweep_mode once per axis value, concurrently.

    Each case writes into its own subdirectory; per-case failures are
    recorded in the summary and do not abort the sweep.
    """
    out = Path(out_dir)
    axis = cfg.sweep_axis
    tasks = []
    for value in cfg.sweep_values:
        case_dir = out / f"{axis}={value:g}"
        tasks.append((axis, value, cfg, str(case_dir)))
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1 or len(tasks) == 1:
        results = [_run_sweep_case(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_sweep_case, tasks))
    write_csv_atomic(out / "sweep_summary.csv", SWEEP_HEADER, results)
    return results
