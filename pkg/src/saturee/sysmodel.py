"""System configuration and the power / energy-efficiency arithmetic.

Unit conventions, used everywhere in this package:

* transmit and circuit powers are carried as spectral densities in W/Hz
  (total watts divided by the bandwidth W), so the symbol-time and
  bandwidth normalizations cancel out of every efficiency ratio;
* rates are in nat/s/Hz (natural logarithm);
* energy efficiency is their ratio, nat/J (the CLI can rescale to bits).

Config files and CLI flags speak dBm and Hz; the conversion into densities
happens exactly once, in :func:`derive_power_model`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path


def dbm_to_watt(dbm: float) -> float:
    """Convert a dBm figure to watts."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watt_to_dbm(watt: float) -> float:
    """Convert watts to dBm. Requires a strictly positive argument."""
    if watt <= 0.0:
        raise ValueError(f"cannot express {watt} W in dBm")
    return 10.0 * math.log10(watt) + 30.0


@dataclass(frozen=True)
class SystemConfig:
    """Static description of one downlink cell.

    M / N are transmit antenna and single-antenna user counts.  W is the
    bandwidth in Hz and T the transmission interval in seconds; both are
    kept only for bookkeeping because every internal quantity is already
    normalized per second and per Hz.  Powers are dBm figures over the
    whole band: Pc_prime_dbm is the per-antenna circuit power and
    Po_prime_dbm the static overhead.  xi >= 1 is the amplifier
    inefficiency multiplying the radiated power.
    """

    M: int
    N: int
    W: float = 20e6
    T: float = 1e-3
    noise_psd_dbm_per_hz: float = -174.0
    noise_figure_db: float = 7.0
    xi: float = 1.0
    Pc_prime_dbm: float = 30.0
    Po_prime_dbm: float = 40.0

    def __post_init__(self) -> None:
        if not isinstance(self.M, int) or not isinstance(self.N, int):
            raise ValueError("antenna and user counts must be integers")
        if self.M < 1 or self.N < 1:
            raise ValueError(f"need M >= 1 and N >= 1, got M={self.M}, N={self.N}")
        if not (self.W > 0.0 and math.isfinite(self.W)):
            raise ValueError(f"bandwidth must be positive and finite, got {self.W}")
        if not (self.T > 0.0 and math.isfinite(self.T)):
            raise ValueError(f"transmission interval must be positive, got {self.T}")
        if not (self.xi >= 1.0 and math.isfinite(self.xi)):
            raise ValueError(f"amplifier inefficiency must be >= 1, got {self.xi}")
        for name in ("noise_psd_dbm_per_hz", "noise_figure_db",
                     "Pc_prime_dbm", "Po_prime_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.noise_figure_db < 0.0:
            raise ValueError("noise figure cannot be negative")


@dataclass(frozen=True)
class DerivedPowerModel:
    """Per-Hz power densities derived from a :class:`SystemConfig`.

    n0 is the effective noise spectral density (thermal PSD plus receiver
    noise figure), Pc the per-antenna circuit density, Po the static
    density and Pconst = M * Pc + Po the total power consumed before a
    single symbol is radiated.  All in W/Hz.
    """

    n0: float
    Pc: float
    Po: float
    Pconst: float


def derive_power_model(cfg: SystemConfig) -> DerivedPowerModel:
    """Fold dBm figures and the noise figure into W/Hz densities."""
    n0 = dbm_to_watt(cfg.noise_psd_dbm_per_hz + cfg.noise_figure_db)
    pc = dbm_to_watt(cfg.Pc_prime_dbm) / cfg.W
    po = dbm_to_watt(cfg.Po_prime_dbm) / cfg.W
    return DerivedPowerModel(n0=n0, Pc=pc, Po=po, Pconst=cfg.M * pc + po)


def total_power(p_sum: float, pm: DerivedPowerModel, xi: float):
    """Total consumed power density xi * p_sum + Pconst, in W/Hz.

    p_sum is the radiated sum power density; accepts arrays transparently.
    """
    return xi * p_sum + pm.Pconst


def energy_efficiency(sum_rate: float, consumed: float):
    """Rate over consumed power; nat/J for per-Hz inputs."""
    return sum_rate / consumed


def transmit_power_from_dbm(dbm: float, cfg: SystemConfig) -> float:
    """Map a dBm transmit budget over the whole band to a W/Hz density."""
    return dbm_to_watt(dbm) / cfg.W


def transmit_power_to_dbm(p: float, cfg: SystemConfig) -> float:
    """Inverse of :func:`transmit_power_from_dbm`."""
    return watt_to_dbm(p * cfg.W)


def normalized_config(M: int, N: int, Pconst: float, xi: float = 1.0) -> SystemConfig:
    """Dimensionless setup: unit bandwidth, unit noise density.

    Convenient for trade-off studies quoted in normalized units where the
    static consumption is a plain number.  The per-antenna circuit density
    is pinned at 1, so Pconst must exceed M; the remainder goes into the
    static term.
    """
    if Pconst <= M:
        raise ValueError(f"normalized Pconst must exceed M={M}, got {Pconst}")
    return SystemConfig(
        M=M,
        N=N,
        W=1.0,
        T=1.0,
        noise_psd_dbm_per_hz=30.0,   # 1 W/Hz
        noise_figure_db=0.0,
        xi=xi,
        Pc_prime_dbm=30.0,           # 1 W over a 1 Hz band
        Po_prime_dbm=watt_to_dbm(float(Pconst - M)),
    )


_CONFIG_FIELDS = {f.name for f in fields(SystemConfig)}
# Knobs read by the experiment layer rather than the system model itself.
_EXTRA_FIELDS = {"beta", "rzf_alpha", "p_static"}


def load_config(path: str | Path) -> tuple[SystemConfig, dict]:
    """Read a flat JSON config file.

    Returns the :class:`SystemConfig` plus a dict of recognized extras
    (band interpolation weight "beta", fixed regularizer "rzf_alpha",
    toy-model "p_static").  Unknown keys are an error so typos never pass
    silently.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    unknown = set(raw) - _CONFIG_FIELDS - _EXTRA_FIELDS
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
    kwargs = {k: v for k, v in raw.items() if k in _CONFIG_FIELDS}
    for name in ("M", "N"):
        if name in kwargs:
            if not isinstance(kwargs[name], int):
                raise ValueError(f"{name} must be a JSON integer in {path}")
    if "M" not in kwargs or "N" not in kwargs:
        raise ValueError(f"config file {path} must set M and N")
    extras = {k: v for k, v in raw.items() if k in _EXTRA_FIELDS}
    return SystemConfig(**kwargs), extras
