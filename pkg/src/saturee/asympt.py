"""Large-system expressions: asymptotic SINRs, rate bounds, RZF equivalents.

Everything here is a function of the configuration only, no channel draws,
except for the empirical estimator at the bottom which exists to validate
the analytic fixed point against one very large realization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import beamform, channel
from .errors import NumericalError
from .sysmodel import SystemConfig, derive_power_model

_FP_RESIDUAL = 1e-10


def sinr_mrt_asymptotic(p, cfg: SystemConfig, n0: float):
    """Deterministic MRT SINR under equal power, M P / ((N - 1) P + N n0)."""
    return cfg.M * p / ((cfg.N - 1) * p + cfg.N * n0)


def ee_mrt_asymptotic(p, cfg: SystemConfig):
    """Efficiency along the asymptotic MRT rate curve."""
    pm = derive_power_model(cfg)
    rate = cfg.N * np.log1p(sinr_mrt_asymptotic(p, cfg, pm.n0))
    return rate / (cfg.xi * p + pm.Pconst)


def rate_lower_bound(p, cfg: SystemConfig):
    """Closed-form lower envelope N M P / ((N + M - 1) P + N n0)."""
    pm = derive_power_model(cfg)
    return cfg.N * cfg.M * p / ((cfg.N + cfg.M - 1) * p + cfg.N * pm.n0)


def ee_lower_bound(p, cfg: SystemConfig):
    pm = derive_power_model(cfg)
    return rate_lower_bound(p, cfg) / (cfg.xi * p + pm.Pconst)


def rate_upper_bound(p, cfg: SystemConfig):
    """Interference-free envelope N log(1 + M P / (N n0))."""
    pm = derive_power_model(cfg)
    return cfg.N * np.log1p(cfg.M * p / (cfg.N * pm.n0))


def ee_upper_bound(p, cfg: SystemConfig):
    pm = derive_power_model(cfg)
    return rate_upper_bound(p, cfg) / (cfg.xi * p + pm.Pconst)


@dataclass(frozen=True)
class DetEquivParams:
    """Deterministic-equivalent constants for RZF at a fixed loading.

    m0 is the limiting normalized trace of the regularized resolvent,
    gamma0 the interference coefficient, psi0 the normalization
    coefficient, alpha the loading they were computed for, and ratio the
    user-to-antenna ratio N / M.
    """

    m0: float
    gamma0: float
    psi0: float
    alpha: float
    ratio: float


def _fixed_point_m(alpha: float, ratio: float) -> float:
    """Solve m = 1 / (alpha + ratio / (1 + m)) by damped iteration.

    The quadratic it implies seeds the iteration, which then certifies
    the residual below 1e-10.
    """
    b = alpha + ratio - 1.0
    m = (-b + math.sqrt(b * b + 4.0 * alpha)) / (2.0 * alpha)
    damp = 0.7
    for _ in range(500):
        g = 1.0 / (alpha + ratio / (1.0 + m))
        if abs(m - g) <= _FP_RESIDUAL * max(1.0, m):
            return m
        m = (1.0 - damp) * m + damp * g
    raise NumericalError(
        f"resolvent fixed point stalled at alpha={alpha}, ratio={ratio}")


def det_equiv_rzf(cfg: SystemConfig, alpha: float) -> DetEquivParams:
    """Analytic deterministic equivalents for uncorrelated channels.

    With c = N / M and m0 the fixed point of m = 1 / (alpha + c / (1 + m)),
    the derivative quantity m2 = m0^2 / (1 - c m0^2 / (1 + m0)^2) yields

        gamma0 = m0 - alpha m2,      psi0 = c m2 / (1 + m0)^2.
    """
    if not alpha > 0.0:
        raise ValueError(f"loading must be positive, got {alpha}")
    ratio = cfg.N / cfg.M
    m0 = _fixed_point_m(alpha, ratio)
    shrink = 1.0 - ratio * m0 * m0 / (1.0 + m0) ** 2
    m2 = m0 * m0 / shrink
    gamma0 = m0 - alpha * m2
    psi0 = ratio * m2 / (1.0 + m0) ** 2
    params = DetEquivParams(m0=m0, gamma0=gamma0, psi0=psi0, alpha=alpha,
                            ratio=ratio)
    for name in ("m0", "gamma0", "psi0"):
        val = getattr(params, name)
        if not (math.isfinite(val) and val > 0.0):
            raise NumericalError(f"deterministic equivalent {name} = {val}")
    return params


def det_equiv_rzf_empirical(cfg: SystemConfig, alpha: float, size: int = 256,
                            seed: int = 0) -> DetEquivParams:
    """Estimate the same constants from one large channel realization.

    Keeps the user-to-antenna ratio of cfg but blows the dimensions up to
    `size` antennas; measures the resolvent trace, the mean signal gain
    and the mean interference gain of actual RZF directions, then inverts
    the limiting relations.  Serves as the independent check on
    :func:`det_equiv_rzf`.
    """
    if not alpha > 0.0:
        raise ValueError(f"loading must be positive, got {alpha}")
    mb = size
    nb = max(1, round(size * cfg.N / cfg.M))
    ratio = nb / mb
    h = channel._draw(mb, nb, seed, 0)
    big = channel.ChannelRealization(h=h, seed=seed, trial_index=0)

    resolvent = np.linalg.inv(h.T @ h.conj() / mb + alpha * np.eye(mb))
    m_hat = float(np.trace(resolvent).real) / mb

    dirs = beamform.rzf(big, alpha)
    gains = np.abs(h.conj() @ dirs.T) ** 2
    sig = float(np.mean(np.diagonal(gains)))
    interf = float(np.mean(np.sum(gains, axis=1) - np.diagonal(gains)))

    m2_hat = mb * m_hat * m_hat / sig
    gamma_hat = interf * m_hat * m_hat / sig
    psi_hat = ratio * m2_hat / (1.0 + m_hat) ** 2
    return DetEquivParams(m0=m_hat, gamma0=gamma_hat, psi0=psi_hat,
                          alpha=alpha, ratio=ratio)


def sinr_rzf_asymptotic(p, de: DetEquivParams, n0: float):
    """Deterministic RZF SINR, m0^2 P / (gamma0 P + psi0 (1 + m0)^2 n0)."""
    a = de.psi0 * (1.0 + de.m0) ** 2 * n0
    return de.m0 ** 2 * p / (de.gamma0 * p + a)


def ee_rzf_asymptotic(p, cfg: SystemConfig, de: DetEquivParams):
    """Efficiency along the deterministic RZF rate curve."""
    pm = derive_power_model(cfg)
    rate = cfg.N * np.log1p(sinr_rzf_asymptotic(p, de, pm.n0))
    return rate / (cfg.xi * p + pm.Pconst)
