"""Iterative reference optimizers: WMMSE and a Dinkelbach outer loop.

The WMMSE block coordinate descent maximizes the downlink sum rate under
a sum power constraint.  The Dinkelbach routine wraps it into a
fractional program for energy efficiency and serves as the baseline the
one-shot scheme is judged against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamform import BeamformingSolution, mmse_loading_alpha, rzf
from .channel import ChannelRealization
from .scalar_opt import golden_section_max
from .sysmodel import SystemConfig, derive_power_model

_POWER_RTOL = 1e-10


@dataclass
class WmmseState:
    """Iterate of the block descent: beamformers, receivers, MSE weights."""

    b: np.ndarray
    u: np.ndarray
    w: np.ndarray
    iteration: int
    objective: float


@dataclass
class WmmseResult:
    solution: BeamformingSolution
    state: WmmseState
    converged: bool
    sum_rate: float
    p_sum: float
    objective_history: np.ndarray


@dataclass
class DinkelbachState:
    lam: float
    F_value: float
    inner: WmmseState
    outer_iteration: int


@dataclass
class DinkelbachResult:
    solution: BeamformingSolution
    lambda_star: float
    state: DinkelbachState
    converged: bool
    lambda_history: np.ndarray
    f_history: np.ndarray


def _mrt_equal_power_init(h: np.ndarray, budget: float) -> np.ndarray:
    norms = np.linalg.norm(h, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("degenerate channel: some user has a zero vector")
    n = h.shape[0]
    return h / norms[:, None] * math.sqrt(budget / n)


def _beam_step(h: np.ndarray, u: np.ndarray, w: np.ndarray, budget: float,
               ridge: float) -> np.ndarray:
    """Beamformer update b_k = (sum_j w_j |u_j|^2 h_j h_j^H + (ridge + mu) I)^-1
    h_k u_k w_k with mu >= 0 the smallest multiplier keeping the sum power
    within budget.

    The weighted Gram matrix is never formed: near zero-forcing points
    the user weights span ten-plus orders, and squaring them into a Gram
    matrix buries the weakest user's direction below double precision.
    Instead the update runs on the SVD of the weighted channel stack
    sqrt(w |u|^2) h^H, whose right-hand side projections collapse to the
    exact identity qt[i, k] = s_i conj(U[k, i]) sqrt(w_k) phase(u_k).
    Every factor there is well scaled, so no huge column ever multiplies
    a small basis error, and the power becomes a cheap rational function
    of mu searched by plain bisection on scalars.
    """
    coeff = w * np.abs(u) ** 2
    root = np.sqrt(coeff)[:, None] * h.conj()
    uu, s, vh = np.linalg.svd(root, full_matrices=False)
    # Dropped tail = rounding residue: the stack has exactly as many
    # genuine singular values as users carrying positive weight, and the
    # right-hand side lies in their span.
    rank = min(int(np.count_nonzero(coeff > 0.0)), s.size)
    lam = s * s
    while rank > 0 and lam[rank - 1] <= 1e-150:
        # Modes of users fading to shutoff underflow when squared again
        # inside the power function; they carry no recoverable signal.
        rank -= 1
    s = s[:rank]
    lam = lam[:rank]
    uu = uu[:, :rank]
    vh = vh[:rank]
    absu = np.abs(u)
    amp = np.sqrt(w) * np.where(absu > 0.0, u / np.where(absu > 0.0, absu, 1.0), 0.0)
    qt = s[:, None] * (uu.conj().T * amp[None, :])
    q2 = (lam[:, None] * (np.abs(uu.T) ** 2)) * w[None, :]
    base = lam + ridge

    def power_at(mu: float) -> float:
        return float(np.sum(q2 / (base + mu)[:, None] ** 2))

    if power_at(0.0) <= budget:
        mu = 0.0
    else:
        mu_hi = math.sqrt(float(np.sum(q2)) / budget)
        while power_at(mu_hi) > budget:
            mu_hi *= 2.0
        mu_lo = 0.0
        for _ in range(200):
            mid = 0.5 * (mu_lo + mu_hi)
            if power_at(mid) > budget:
                mu_lo = mid
            else:
                mu_hi = mid
            if abs(power_at(mu_hi) - budget) <= _POWER_RTOL * budget:
                break
            if mu_hi - mu_lo <= 1e-15 * mu_hi:
                break
        mu = mu_hi
    cols = vh.conj().T @ (qt / (base + mu)[:, None])
    return cols.T


def _stats(h: np.ndarray, b: np.ndarray, n0: float):
    """Per-user link statistics for the current beamformers.

    The interference power is summed over the off-diagonal entries
    directly.  Subtracting the signal term from a full row sum would
    cancel catastrophically near zero-forcing points, where the leakage
    sits ten or more orders below the signal.
    """
    cross = h.conj() @ b.T                    # [k, j] = h_k^H b_j
    d = np.diagonal(cross).copy()
    gains = np.abs(cross) ** 2
    sig = np.diagonal(gains).copy()
    leak = gains
    np.fill_diagonal(leak, 0.0)
    inter = np.sum(leak, axis=1)
    return d, sig, inter


def _rescale(h: np.ndarray, b: np.ndarray, n0: float, budget: float,
             ridge: float) -> np.ndarray:
    """Ascent step on a uniform power scale of all beamformers.

    The regularized beamformer step alone moves total power extremely
    slowly once the leakage is nulled (the ridge is buried under the
    weighted Gram spectrum), so the descent stalls far from the
    stationary power.  The objective restricted to b -> sqrt(tau) b is
    concave in tau, which makes this one-dimensional refinement exact
    and cheap; it never decreases the objective because tau = 1 stays
    inside the bracket.
    """
    _, sig, inter = _stats(h, b, n0)
    psum = float(np.sum(np.abs(b) ** 2))
    if psum <= 0.0:
        return b

    def gain(tau: float) -> float:
        rate = float(np.sum(np.log1p(tau * sig / (tau * inter + n0))))
        return rate - ridge * tau * psum

    tau_hi = budget / psum
    tau = golden_section_max(gain, 1e-20 * tau_hi, tau_hi, rel_tol=1e-10)
    if gain(tau) <= gain(1.0) or not tau_hi >= 1.0:
        return b
    return b * math.sqrt(tau)


def _iterate(h: np.ndarray, n0: float, budget: float, ridge: float,
             tol: float, max_iter: int, b0: np.ndarray):
    """Shared block descent.  ridge = lambda * xi regularizes the
    beamformer step for the fractional inner problems; ridge = 0 gives
    plain sum-rate maximization.

    Returns the final iterate plus the per-iteration objective history
    (sum rate minus ridge times sum power, so just the sum rate when
    ridge is zero).
    """
    b = b0
    history = []
    prev = None
    u = w = None
    rate = psum = 0.0
    it = 0
    for it in range(max_iter + 1):
        d, sig, inter = _stats(h, b, n0)
        e = inter + n0
        sinr_vals = sig / e
        u = d / (e + sig)
        w = 1.0 + sinr_vals
        rate = float(np.sum(np.log1p(sinr_vals)))
        psum = float(np.sum(np.abs(b) ** 2))
        obj = rate - ridge * psum
        history.append(obj)
        if prev is not None and abs(obj - prev) <= tol * max(1.0, abs(obj)):
            return b, u, w, it, rate, psum, np.array(history), True
        prev = obj
        if it == max_iter:
            break
        b = _beam_step(h, u, w, budget, ridge)
        if ridge > 0.0:
            b = _rescale(h, b, n0, budget, ridge)
    return b, u, w, it, rate, psum, np.array(history), False


def wmmse(ch: ChannelRealization, cfg: SystemConfig, p_budget: float,
          tol: float = 1e-4, max_iter: int = 200,
          init: np.ndarray | None = None) -> WmmseResult:
    """Sum-rate maximization by weighted-MMSE block coordinate descent.

    Starts from equal-power maximum-ratio beamformers (or the given
    beamformer matrix) and stops when the relative objective change
    drops below tol.  The returned objective history is nondecreasing up
    to rounding; if max_iter runs out first the best iterate so far is
    returned with converged = False.
    """
    if not p_budget > 0.0:
        raise ValueError(f"power budget must be positive, got {p_budget}")
    pm = derive_power_model(cfg)
    if init is None:
        b0 = _mrt_equal_power_init(ch.h, p_budget)
    else:
        b0 = np.asarray(init, dtype=complex)
        if b0.shape != ch.h.shape:
            raise ValueError(
                f"init shape {b0.shape} does not match channel {ch.h.shape}")
    b, u, w, it, rate, psum, hist, ok = _iterate(
        ch.h, pm.n0, p_budget, 0.0, tol, max_iter, b0)
    return WmmseResult(
        solution=_to_solution(b, ch.h),
        state=WmmseState(b=b, u=u, w=w, iteration=it, objective=rate),
        converged=ok,
        sum_rate=rate,
        p_sum=psum,
        objective_history=hist,
    )


def _to_solution(b: np.ndarray, h: np.ndarray) -> BeamformingSolution:
    powers = np.sum(np.abs(b) ** 2, axis=1)
    norms = np.sqrt(powers)
    dirs = np.empty_like(b)
    live = norms > 0.0
    dirs[live] = b[live] / norms[live, None]
    if np.any(~live):
        # Users driven to zero power keep a well-defined direction.
        hn = np.linalg.norm(h[~live], axis=1)
        dirs[~live] = h[~live] / hn[:, None]
    return BeamformingSolution(v=dirs, p=powers)


def dinkelbach_ee(ch: ChannelRealization, cfg: SystemConfig, p_budget: float,
                  delta: float = 1e-3, inner_tol: float = 1e-4,
                  max_outer: int = 100, max_inner: int = 200) -> DinkelbachResult:
    """Energy-efficiency maximization by Dinkelbach's parametric method.

    Each outer step solves max sum-rate minus lam times consumed power
    (same block descent, with lam xi folded into the beamformer
    regularizer), warm-started from the previous beamformers so the lam
    sequence is nondecreasing.  Stops once the parametric value F(lam)
    falls within delta of zero; the returned lambda_star is the achieved
    efficiency of the final solution.

    The very first solve starts from equal-power RZF beamformers: a
    maximum-ratio start can strand the whole continuation in a basin
    where a strongly correlated user is abandoned.
    """
    if not p_budget > 0.0:
        raise ValueError(f"power budget must be positive, got {p_budget}")
    pm = derive_power_model(cfg)
    dirs = rzf(ch, mmse_loading_alpha(cfg, p_budget))
    b = dirs * math.sqrt(p_budget / cfg.N)
    lam = 0.0
    lam_hist: list[float] = []
    f_hist: list[float] = []
    state = None
    rate = consumed = 0.0
    ok = False
    u = w = None
    it = 0
    for outer in range(1, max_outer + 1):
        b, u, w, it, rate, psum, _, _ = _iterate(
            ch.h, pm.n0, p_budget, lam * cfg.xi, inner_tol, max_inner, b)
        consumed = cfg.xi * psum + pm.Pconst
        f_val = rate - lam * consumed
        lam_hist.append(lam)
        f_hist.append(f_val)
        state = DinkelbachState(lam=lam, F_value=f_val,
                                inner=WmmseState(b=b, u=u, w=w, iteration=it,
                                                 objective=rate),
                                outer_iteration=outer)
        if abs(f_val) <= delta:
            ok = True
            break
        lam = rate / consumed
    return DinkelbachResult(
        solution=_to_solution(b, ch.h),
        lambda_star=rate / consumed,
        state=state,
        converged=ok,
        lambda_history=np.array(lam_hist),
        f_history=np.array(f_hist),
    )
