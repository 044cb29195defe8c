"""Experiment runner: Monte Carlo sweeps, trade-off curves, CSV output.

Per-trial randomness is keyed by (seed, trial index), and aggregation
always walks the trials in index order, so the emitted CSV bytes do not
depend on how many workers computed them.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import asympt, beamform, channel, optim, satpower
from .satpower import SaturationBand
from .sysmodel import (SystemConfig, derive_power_model, load_config,
                       transmit_power_from_dbm, transmit_power_to_dbm)

KINDS = ("sweep", "tradeoff", "saturation", "compare", "toy")
CSV_HEADER = "scheme,P_dbm,sum_rate,total_power,ee,stderr,trials"
LN2 = math.log(2.0)


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything one CLI invocation needs."""

    kind: str
    config_path: str | None = None
    pmin_dbm: float = -10.0
    pmax_dbm: float = 46.0
    pstep_db: float = 2.0
    trials: int = 100
    seed: int = 1
    out: str | None = None
    workers: int = 1
    bits: bool = False
    p_static: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if self.workers < 1:
            raise ValueError(f"need at least one worker, got {self.workers}")
        if self.pstep_db <= 0.0 or self.pmax_dbm < self.pmin_dbm:
            raise ValueError("power grid must be increasing")


@dataclass(frozen=True)
class EePoint:
    """One CSV row: a scheme evaluated at one budget."""

    scheme: str
    P_dbm: float
    sum_rate: float
    total_power: float
    ee: float
    stderr: float
    trials: int


def dbm_grid(spec: ExperimentSpec) -> np.ndarray:
    count = int(math.floor((spec.pmax_dbm - spec.pmin_dbm) / spec.pstep_db + 1e-9)) + 1
    return spec.pmin_dbm + spec.pstep_db * np.arange(count)


def _mean_std(values: np.ndarray) -> tuple[float, float]:
    """Mean and standard error over trials, walked in index order."""
    n = values.shape[0]
    mean = float(np.sum(values, axis=0) / n)
    if n < 2:
        return mean, 0.0
    var = float(np.sum((values - mean) ** 2, axis=0)) / (n - 1)
    return mean, math.sqrt(var / n)


def _mc_point(scheme: str, p_dbm: float, rates: np.ndarray,
              ees: np.ndarray, trials: int) -> EePoint:
    mean_rate, _ = _mean_std(rates)
    mean_ee, err = _mean_std(ees)
    # Effective power keeps every row self-consistent even when the
    # consumed power varies across trials.
    return EePoint(scheme=scheme, P_dbm=float(p_dbm), sum_rate=mean_rate,
                   total_power=mean_rate / mean_ee, ee=mean_ee, stderr=err,
                   trials=trials)


def _analytic_point(scheme: str, p_dbm: float, rate: float,
                    consumed: float) -> EePoint:
    return EePoint(scheme=scheme, P_dbm=float(p_dbm), sum_rate=float(rate),
                   total_power=float(consumed), ee=float(rate) / float(consumed),
                   stderr=0.0, trials=0)


# ----------------------------------------------------------------- sweep

def _sweep_chunk(cfg: SystemConfig, p_list: np.ndarray, band: SaturationBand,
                 seed: int, t0: int, t1: int) -> dict[str, np.ndarray]:
    """Per-trial metrics for trials [t0, t1): rate and EE arrays of shape
    (trials, n_powers) for each Monte Carlo scheme."""
    pm = derive_power_model(cfg)
    n_p = len(p_list)
    out = {name: np.empty((t1 - t0, n_p, 2))
           for name in ("mrt_mc", "noiui_mc", "proposed", "baseline")}
    for row, trial in enumerate(range(t0, t1)):
        ch = channel.generate(cfg, seed, trial)
        dirs = beamform.mrt(ch)
        norms2 = np.sum(np.abs(ch.h) ** 2, axis=1)
        for ip, p in enumerate(p_list):
            consumed_full = cfg.xi * p + pm.Pconst
            sol = beamform.BeamformingSolution(v=dirs,
                                               p=beamform.equal_power(cfg.N, p))
            r_mrt = beamform.sum_rate(beamform.sinr(ch, sol, pm.n0))
            out["mrt_mc"][row, ip] = (r_mrt, r_mrt / consumed_full)

            r_free = float(np.sum(np.log1p(norms2 * (p / cfg.N) / pm.n0)))
            out["noiui_mc"][row, ip] = (r_free, r_free / consumed_full)

            sol_p = satpower.proposed_scheme(ch, cfg, p, band)
            r_p = beamform.sum_rate(beamform.sinr(ch, sol_p, pm.n0))
            cons_p = cfg.xi * float(np.sum(sol_p.p)) + pm.Pconst
            out["proposed"][row, ip] = (r_p, r_p / cons_p)

            base = optim.dinkelbach_ee(ch, cfg, p)
            r_b = float(np.sum(np.log1p(
                beamform.sinr(ch, base.solution, pm.n0))))
            cons_b = cfg.xi * float(np.sum(base.solution.p)) + pm.Pconst
            out["baseline"][row, ip] = (r_b, r_b / cons_b)
    return out


def _run_trials(worker, spec: ExperimentSpec, args: tuple) -> dict[str, np.ndarray]:
    """Run a per-trial worker over the trial range, possibly in parallel,
    and reassemble the chunks in trial order."""
    if spec.workers == 1:
        return worker(*args, spec.seed, 0, spec.trials)
    bounds = np.linspace(0, spec.trials, spec.workers + 1).astype(int)
    chunks = []
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        futures = [pool.submit(worker, *args, spec.seed, int(a), int(b))
                   for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        chunks = [f.result() for f in futures]
    return {key: np.concatenate([c[key] for c in chunks], axis=0)
            for key in chunks[0]}


def run_sweep(spec: ExperimentSpec) -> list[EePoint]:
    """Efficiency versus budget for every scheme on the configured grid."""
    cfg, extras = load_config(spec.config_path)
    band = satpower.compute_band(cfg, beta=extras.get("beta", satpower.DEFAULT_BETA),
                                 alpha=extras.get("rzf_alpha"))
    grid = dbm_grid(spec)
    p_list = np.array([transmit_power_from_dbm(d, cfg) for d in grid])
    pm = derive_power_model(cfg)

    mc = _run_trials(_sweep_chunk, spec, (cfg, p_list, band))

    points: list[EePoint] = []
    for ip, (d, p) in enumerate(zip(grid, p_list)):
        consumed = cfg.xi * p + pm.Pconst
        points.append(_mc_point("mrt_mc", d, mc["mrt_mc"][:, ip, 0],
                                mc["mrt_mc"][:, ip, 1], spec.trials))
        rate_mrt = cfg.N * math.log1p(
            asympt.sinr_mrt_asymptotic(p, cfg, pm.n0))
        points.append(_analytic_point("mrt_asym", d, rate_mrt, consumed))
        points.append(_analytic_point("lb", d,
                                      float(asympt.rate_lower_bound(p, cfg)),
                                      consumed))
        points.append(_mc_point("noiui_mc", d, mc["noiui_mc"][:, ip, 0],
                                mc["noiui_mc"][:, ip, 1], spec.trials))
        points.append(_analytic_point("ub", d,
                                      float(asympt.rate_upper_bound(p, cfg)),
                                      consumed))
        de = asympt.det_equiv_rzf(cfg, beamform.mmse_loading_alpha(cfg, p))
        rate_rzf = cfg.N * math.log1p(
            asympt.sinr_rzf_asymptotic(p, de, pm.n0))
        points.append(_analytic_point("rzf_asym", d, rate_rzf, consumed))
        points.append(_mc_point("proposed", d, mc["proposed"][:, ip, 0],
                                mc["proposed"][:, ip, 1], spec.trials))
        points.append(_mc_point("baseline", d, mc["baseline"][:, ip, 0],
                                mc["baseline"][:, ip, 1], spec.trials))
    return points


# -------------------------------------------------------------- tradeoff

def _tradeoff_chunk(cfg: SystemConfig, p_list: np.ndarray, seed: int,
                    t0: int, t1: int) -> dict[str, np.ndarray]:
    out = {"se_mc": np.empty((t1 - t0, len(p_list), 2))}
    pm = derive_power_model(cfg)
    for row, trial in enumerate(range(t0, t1)):
        ch = channel.generate(cfg, seed, trial)
        for ip, p in enumerate(p_list):
            res = optim.wmmse(ch, cfg, p)
            consumed = cfg.xi * res.p_sum + pm.Pconst
            out["se_mc"][row, ip] = (res.sum_rate, res.sum_rate / consumed)
    return out


def run_tradeoff(spec: ExperimentSpec) -> list[EePoint]:
    """Rate versus consumed power for the two envelopes and the Monte
    Carlo spectral-efficiency solver."""
    cfg, _ = load_config(spec.config_path)
    grid = dbm_grid(spec)
    p_list = np.array([transmit_power_from_dbm(d, cfg) for d in grid])
    pm = derive_power_model(cfg)
    mc = _run_trials(_tradeoff_chunk, spec, (cfg, p_list))
    points: list[EePoint] = []
    for ip, (d, p) in enumerate(zip(grid, p_list)):
        consumed = cfg.xi * p + pm.Pconst
        points.append(_analytic_point("lb", d,
                                      float(asympt.rate_lower_bound(p, cfg)),
                                      consumed))
        points.append(_mc_point("se_mc", d, mc["se_mc"][:, ip, 0],
                                mc["se_mc"][:, ip, 1], spec.trials))
        points.append(_analytic_point("ub", d,
                                      float(asympt.rate_upper_bound(p, cfg)),
                                      consumed))
    return points


# ------------------------------------------------------------ saturation

def run_saturation(spec: ExperimentSpec) -> list[EePoint]:
    """Band summary encoded in the common row format.

    Each quantity gets a row: powers carry their W/Hz value in the
    total_power column with unit efficiency fields; efficiencies carry
    their value in the ee column.
    """
    cfg, extras = load_config(spec.config_path)
    band = satpower.compute_band(cfg, beta=extras.get("beta", satpower.DEFAULT_BETA),
                                 alpha=extras.get("rzf_alpha"))
    rows = []
    for name, p in (("p_lb", band.p_lb), ("p_rzf", band.p_rzf),
                    ("p_prop", band.p_prop), ("p_ub", band.p_ub)):
        rows.append(EePoint(scheme=name, P_dbm=transmit_power_to_dbm(p, cfg),
                            sum_rate=0.0, total_power=p, ee=0.0, stderr=0.0,
                            trials=0))
    for name, g in (("gamma_lb", band.gamma_lb), ("gamma_rzf", band.gamma_rzf),
                    ("gamma_se_est", band.gamma_se_est),
                    ("gamma_ub", band.gamma_ub)):
        rows.append(EePoint(scheme=name, P_dbm=0.0, sum_rate=0.0,
                            total_power=0.0, ee=g, stderr=0.0, trials=0))
    rows.append(EePoint(scheme="omega", P_dbm=0.0, sum_rate=0.0,
                        total_power=0.0, ee=band.omega, stderr=0.0, trials=0))
    return rows


# --------------------------------------------------------------- compare

@dataclass(frozen=True)
class CompareReport:
    band: SaturationBand
    budget_dbm: float
    mean_ee_proposed: float
    mean_ee_baseline: float
    ee_ratio: float
    seconds_proposed: float
    seconds_baseline: float
    speedup: float


def compare_schemes(cfg: SystemConfig, budget: float, trials: int, seed: int,
                    beta: float = satpower.DEFAULT_BETA,
                    alpha: float | None = None,
                    delta: float = 1e-3) -> tuple[CompareReport, np.ndarray, np.ndarray]:
    """Timed head-to-head of the one-shot scheme against the fractional
    baseline over identical channel draws, single worker.

    Returns the report plus the per-trial (rate, ee) arrays of both
    schemes in trial order.
    """
    pm = derive_power_model(cfg)
    prop = np.empty((trials, 2))
    base = np.empty((trials, 2))

    tic = time.perf_counter()
    band = satpower.compute_band(cfg, beta=beta, alpha=alpha)
    for t in range(trials):
        ch = channel.generate(cfg, seed, t)
        sol = satpower.proposed_scheme(ch, cfg, budget, band)
        rate = float(np.sum(np.log1p(beamform.sinr(ch, sol, pm.n0))))
        prop[t] = (rate, rate / (cfg.xi * float(np.sum(sol.p)) + pm.Pconst))
    t_prop = time.perf_counter() - tic

    tic = time.perf_counter()
    for t in range(trials):
        ch = channel.generate(cfg, seed, t)
        res = optim.dinkelbach_ee(ch, cfg, budget, delta=delta)
        rate = float(np.sum(np.log1p(beamform.sinr(ch, res.solution, pm.n0))))
        base[t] = (rate, rate / (cfg.xi * float(np.sum(res.solution.p)) + pm.Pconst))
    t_base = time.perf_counter() - tic

    mean_p, _ = _mean_std(prop[:, 1])
    mean_b, _ = _mean_std(base[:, 1])
    report = CompareReport(
        band=band,
        budget_dbm=float(np.round(10.0 * math.log10(budget * cfg.W * 1000.0), 9)),
        mean_ee_proposed=mean_p,
        mean_ee_baseline=mean_b,
        ee_ratio=mean_p / mean_b,
        seconds_proposed=t_prop,
        seconds_baseline=t_base,
        speedup=t_base / t_prop,
    )
    return report, prop, base


def run_compare(spec: ExperimentSpec) -> tuple[list[EePoint], CompareReport]:
    """CSV rows plus the timing report at the top budget of the grid."""
    cfg, extras = load_config(spec.config_path)
    budget = transmit_power_from_dbm(spec.pmax_dbm, cfg)
    report, prop, base = compare_schemes(
        cfg, budget, spec.trials, spec.seed,
        beta=extras.get("beta", satpower.DEFAULT_BETA),
        alpha=extras.get("rzf_alpha"))
    points = [
        _mc_point("proposed", spec.pmax_dbm, prop[:, 0], prop[:, 1], spec.trials),
        _mc_point("baseline", spec.pmax_dbm, base[:, 0], base[:, 1], spec.trials),
    ]
    return points, report


# ------------------------------------------------------------------- toy

def run_toy(spec: ExperimentSpec) -> list[EePoint]:
    """Single-link toy curves; the grid values are read as dB over unit
    power, full-power versus clamped-at-saturation policies."""
    p_sat = satpower.p_ee_toy(spec.p_static)
    points: list[EePoint] = []
    for d in dbm_grid(spec):
        p = 10.0 ** ((d - 30.0) / 10.0)
        rate = float(satpower.toy_rate(p))
        points.append(EePoint(scheme="full", P_dbm=float(d), sum_rate=rate,
                              total_power=p + spec.p_static,
                              ee=rate / (p + spec.p_static), stderr=0.0,
                              trials=0))
        pc = min(p, p_sat)
        rate_c = float(satpower.toy_rate(pc))
        points.append(EePoint(scheme="clamped", P_dbm=float(d), sum_rate=rate_c,
                              total_power=pc + spec.p_static,
                              ee=rate_c / (pc + spec.p_static), stderr=0.0,
                              trials=0))
    return points


# ------------------------------------------------------------------- io

def format_csv(points: list[EePoint], bits: bool = False) -> str:
    """Render rows; rates and efficiencies switch to base-2 units when
    bits is set.  Full float precision so rows re-parse exactly."""
    scale = 1.0 / LN2 if bits else 1.0
    lines = [CSV_HEADER]
    for pt in points:
        lines.append(",".join((
            pt.scheme,
            format(pt.P_dbm, ".17g"),
            format(pt.sum_rate * scale, ".17g"),
            format(pt.total_power, ".17g"),
            format(pt.ee * scale, ".17g"),
            format(pt.stderr * scale, ".17g"),
            str(pt.trials),
        )))
    return "\n".join(lines) + "\n"


def write_csv(points: list[EePoint], path: str | Path, bits: bool = False) -> None:
    Path(path).write_text(format_csv(points, bits=bits))


def describe_report(report: CompareReport) -> str:
    band = report.band
    return "\n".join([
        f"budget: {report.budget_dbm:.2f} dBm",
        (f"band [W/Hz]: p_lb={band.p_lb:.6e} p_rzf={band.p_rzf:.6e} "
         f"p_prop={band.p_prop:.6e} p_ub={band.p_ub:.6e}"),
        f"omega={band.omega:.6f} beta={band.beta}",
        (f"mean EE: proposed={report.mean_ee_proposed:.6e} "
         f"baseline={report.mean_ee_baseline:.6e} "
         f"ratio={report.ee_ratio:.4f}"),
        (f"wall clock [s]: proposed={report.seconds_proposed:.3f} "
         f"baseline={report.seconds_baseline:.3f} "
         f"speedup={report.speedup:.2f}x"),
    ])


def run(spec: ExperimentSpec) -> tuple[list[EePoint], str | None]:
    """Dispatch one experiment; returns rows plus an optional stdout note."""
    if spec.kind == "sweep":
        return run_sweep(spec), None
    if spec.kind == "tradeoff":
        return run_tradeoff(spec), None
    if spec.kind == "saturation":
        return run_saturation(spec), None
    if spec.kind == "compare":
        points, report = run_compare(spec)
        return points, describe_report(report)
    return run_toy(spec), None
