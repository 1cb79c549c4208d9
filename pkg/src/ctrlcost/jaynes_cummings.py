"""Jaynes-Cummings blocks, dressed-basis control schedules, ensembles.

Excitation-number conservation splits the model into independent two-level
blocks spanned by {|e,n>, |g,n+1>} with the n-photon Rabi frequency
Omega_R(t) = 2 g(t) sqrt(n+1). In the rotated dressed representation each
block is a Landau-Zener problem with Delta -> delta and g -> -Omega_R, so
the counterdiabatic and local counterdiabatic fields follow the same
closed forms with the substituted coupling. The constant block offset
(2n+1) omega / 2 is carried as the identity coefficient and excluded from
costs.

Coherent-field initial states |e, alpha> populate blocks with Poisson
weights p_n; per-block quantities combine by population weighting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .ramps import Ramp, poly_smooth_ramp
from .twolevel import (PauliSchedule, propagate, converged_final_state,
                       integrated_cost, fidelity)
from .landau_zener import bisect_sign_change

__all__ = [
    "JcConfig",
    "JcBlock",
    "JcEnsembleResult",
    "jc_block",
    "jc_cd_block",
    "jc_lcd_block",
    "mixing_angle_rate",
    "coherent_weights",
    "block_run",
    "ensemble_run",
    "jc_cost_scan",
    "find_jc_crossover",
]

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class JcConfig:
    """Coupling sweep g0 -> g1 at fixed cavity frequency and detuning."""

    tau: float
    omega: float = 1.0
    delta: float = 0.1
    g0: float = 0.0
    g1: float = 0.2
    n_cut: int = 40
    alpha: float = 0.0
    ramp: Optional[Ramp] = None

    def __post_init__(self):
        if self.n_cut < 0:
            raise ValueError(f"excitation cutoff must be >= 0, got {self.n_cut}")
        if self.tau <= 0:
            raise ValueError(f"protocol duration must be positive, got {self.tau}")

    def ramp_or_default(self) -> Ramp:
        if self.ramp is not None:
            return self.ramp
        return poly_smooth_ramp(self.g0, self.g1 - self.g0, self.tau)


@dataclass(frozen=True)
class JcBlock:
    """One excitation block as a two-level schedule.

    The schedule lives in the rotated dressed frame: cx = delta,
    cz = -Omega_R(t), c0 = (2n+1) omega / 2. The initial dressed state
    |e,n> is (1, 1)/sqrt(2) in this frame.
    """

    n: int
    kind: str
    schedule: PauliSchedule
    config: JcConfig

    @property
    def initial_state(self) -> np.ndarray:
        return np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)

    def rabi(self, t):
        return 2.0 * self.config.ramp_or_default().value(t) * math.sqrt(self.n + 1.0)


def _block_parts(cfg: JcConfig, n: int):
    ramp = cfg.ramp_or_default()
    rt = math.sqrt(n + 1.0)
    c0val = (2 * n + 1) * cfg.omega / 2.0

    def c0(t):
        t = np.asarray(t, dtype=float)
        return np.full(t.shape, c0val) if t.shape else np.float64(c0val)

    def cx_const(t):
        t = np.asarray(t, dtype=float)
        return np.full(t.shape, cfg.delta) if t.shape else np.float64(cfg.delta)

    def cz_bare(t):
        return -2.0 * rt * ramp.value(t)

    return ramp, rt, c0, cx_const, cz_bare


def jc_block(cfg: JcConfig, n: int) -> JcBlock:
    """Bare block: H_n = (2n+1) omega/2 + delta sx/2 - Omega_R(t) sz/2."""
    if n < 0:
        raise ValueError("photon index must be >= 0")
    _, _, c0, cx, cz = _block_parts(cfg, n)
    return JcBlock(n, "bare",
                   PauliSchedule(duration=cfg.tau, cx=cx, cz=cz, c0=c0,
                                 label=f"jc-bare-n{n}"), cfg)


def jc_cd_block(cfg: JcConfig, n: int) -> JcBlock:
    """Block with the counterdiabatic field added.

    The sigma_y coefficient is g' sqrt(n+1) delta / (delta^2 + 4 (n+1) g^2),
    equal to the mixing-angle rate theta_n-dot.
    """
    ramp, rt, c0, cx, cz = _block_parts(cfg, n)
    d = cfg.delta

    def cy(t):
        g = ramp.value(t)
        # sigma_y/2 coefficient = 2 * theta_n_dot
        return 2.0 * ramp.deriv1(t) * rt * d / (d * d + 4.0 * (n + 1.0) * g * g)

    return JcBlock(n, "cd",
                   PauliSchedule(duration=cfg.tau, cx=cx, cz=cz, cy=cy, c0=c0,
                                 label=f"jc-cd-n{n}"), cfg)


def jc_lcd_block(cfg: JcConfig, n: int) -> JcBlock:
    """Block with the local counterdiabatic schedule.

    cx = sqrt(delta^2 + 4 (n+1) g'^2 delta^2 / (delta^2 + 4 (n+1) g^2)^2)
    cz = -2 sqrt(n+1) [ g + ((delta^2 + 4(n+1) g^2) g'' - 8 (n+1) g g'^2)
                            / ((delta^2 + 4(n+1) g^2)^2 + 4 (n+1) g'^2) ]

    Reduces to the bare block wherever g' = g'' = 0.
    """
    ramp, rt, c0, _, _ = _block_parts(cfg, n)
    d = cfg.delta
    np1 = n + 1.0

    def cx(t):
        g = ramp.value(t)
        gd = ramp.deriv1(t)
        den = (d * d + 4.0 * np1 * g * g) ** 2
        return np.sqrt(d * d + 4.0 * np1 * gd * gd * d * d / den)

    def cz(t):
        g = ramp.value(t)
        gd = ramp.deriv1(t)
        gdd = ramp.deriv2(t)
        r2 = d * d + 4.0 * np1 * g * g
        corr = (r2 * gdd - 8.0 * np1 * g * gd * gd) / (r2 * r2 + 4.0 * np1 * gd * gd)
        return -2.0 * rt * (g + corr)

    return JcBlock(n, "lcd",
                   PauliSchedule(duration=cfg.tau, cx=cx, cz=cz, c0=c0,
                                 label=f"jc-lcd-n{n}"), cfg)


def mixing_angle_rate(cfg: JcConfig, n: int, t):
    """theta_n-dot from the mixing angle theta_n = (1/2) arctan(Omega_R/delta).

    Independent route used to cross-check the closed-form CD coefficient.
    """
    ramp = cfg.ramp_or_default()
    rt = math.sqrt(n + 1.0)
    omr = 2.0 * rt * ramp.value(t)
    omrd = 2.0 * rt * ramp.deriv1(t)
    return 0.5 * omrd * cfg.delta / (cfg.delta**2 + omr * omr)


def coherent_weights(alpha: float, n_cut: int) -> np.ndarray:
    """Poisson populations p_n = e^{-|a|^2} |a|^{2n} / n! for n = 0..n_cut."""
    if n_cut < 0:
        raise ValueError("n_cut must be >= 0")
    lam = abs(alpha) ** 2
    p = np.empty(n_cut + 1)
    p[0] = math.exp(-lam)
    for n in range(n_cut):
        p[n + 1] = p[n] * lam / (n + 1.0)
    return p


def _builder(protocol: str):
    try:
        return {"bare": jc_block, "cd": jc_cd_block, "lcd": jc_lcd_block}[protocol]
    except KeyError:
        raise ValueError(f"unknown protocol {protocol!r}") from None


def block_run(cfg: JcConfig, protocol: str, n: int = 0,
              steps: Optional[int] = None):
    """Propagate one block from |e,n>; returns (trajectory, final fidelity, cost).

    Fidelity series is taken against the instantaneous eigenstate of the
    bare block adiabatically connected to the initial dressed state.
    """
    blk = _builder(protocol)(cfg, n)
    ref = jc_block(cfg, n).schedule
    psi0 = blk.initial_state
    if steps is None:
        _, steps = converged_final_state(blk.schedule, psi0)
    traj = propagate(blk.schedule, psi0, steps, reference=ref)
    return traj, float(traj.fidelity[-1]), integrated_cost(blk.schedule)


@dataclass
class JcEnsembleResult:
    times: np.ndarray
    fidelity: np.ndarray          # population-weighted across blocks
    cost: float
    weights: np.ndarray
    block_final_fidelity: np.ndarray
    block_costs: np.ndarray
    tail: float


def ensemble_run(cfg: JcConfig, protocol: str, steps: Optional[int] = None,
                 cost_mode: str = "weighted") -> JcEnsembleResult:
    """Coherent-state ensemble: propagate every block and combine.

    Ensemble fidelity is the population-weighted per-block fidelity; the
    default ensemble cost is the population-weighted sum of block costs
    (cost_mode="direct-sum" gives the unweighted direct-sum Frobenius norm
    instead). Identity offsets are excluded throughout. The photon-number
    cutoff must leave a tail below 1e-12.
    """
    weights = coherent_weights(cfg.alpha, cfg.n_cut)
    tail = max(0.0, 1.0 - float(weights.sum()))
    if tail > TAIL_TOL:
        raise ValueError(
            f"cutoff tail {tail:.3e} above {TAIL_TOL}: increase n_cut for alpha={cfg.alpha}")
    build = _builder(protocol)
    blocks = [build(cfg, n) for n in range(cfg.n_cut + 1)]
    if steps is None:
        # converge on the fastest block (largest Rabi frequency), reuse for all
        _, steps = converged_final_state(blocks[-1].schedule, blocks[-1].initial_state)

    fid_w = None
    times = None
    bf = np.empty(cfg.n_cut + 1)
    bc = np.empty(cfg.n_cut + 1)
    for n, blk in enumerate(blocks):
        ref = jc_block(cfg, n).schedule
        traj = propagate(blk.schedule, blk.initial_state, steps, reference=ref)
        if fid_w is None:
            times = traj.times
            fid_w = weights[n] * traj.fidelity
        else:
            fid_w = fid_w + weights[n] * traj.fidelity
        bf[n] = traj.fidelity[-1]
        bc[n] = integrated_cost(blk.schedule)

    if cost_mode == "weighted":
        cost = float(weights @ bc)
    elif cost_mode == "direct-sum":
        # Frobenius norm of the block direct sum, grows with the cutoff
        from scipy.integrate import simpson
        from .twolevel import cost_rate
        t = np.linspace(0.0, cfg.tau, 4097)
        total = np.zeros_like(t)
        for blk in blocks:
            total += np.asarray(cost_rate(blk.schedule, t), dtype=float) ** 2
        cost = float(simpson(np.sqrt(total), x=t) / cfg.tau)
    else:
        raise ValueError(f"unknown cost_mode {cost_mode!r}")
    # population-weighted fidelity normalized by captured mass
    fid = fid_w / weights.sum()
    return JcEnsembleResult(times=times, fidelity=fid, cost=cost, weights=weights,
                            block_final_fidelity=bf, block_costs=bc, tail=tail)


def jc_cost_scan(cfg: JcConfig, taus: Sequence[float], n: int = 0,
                 protocols: Sequence[str] = ("cd", "lcd"),
                 quadrature_steps: int = 8192) -> dict:
    """Integrated block cost per protocol over durations (vacuum: n = 0)."""
    taus = np.asarray(list(taus), dtype=float)
    if np.any(taus <= 0):
        raise ValueError("all tau values must be positive")
    out = {"tau": taus}
    for p in protocols:
        build = _builder(p)
        out[p] = np.array([
            integrated_cost(build(replace(cfg, tau=float(tt), ramp=None), n).schedule,
                            quadrature_steps)
            for tt in taus])
    return out


def find_jc_crossover(cfg: JcConfig, n: int = 0,
                      taus: Optional[Sequence[float]] = None,
                      tol: float = 1e-3) -> Optional[float]:
    """Duration where the block CD and LCD costs cross, or None."""
    if taus is None:
        taus = np.geomspace(2.0, 60.0, 25)
    scan = jc_cost_scan(cfg, taus, n)
    diff = scan["cd"] - scan["lcd"]
    idx = np.where(np.sign(diff[:-1]) != np.sign(diff[1:]))[0]
    if len(idx) == 0:
        return None
    i = int(idx[0])

    def f(tau):
        c = replace(cfg, tau=float(tau), ramp=None)
        return (integrated_cost(jc_cd_block(c, n).schedule)
                - integrated_cost(jc_lcd_block(c, n).schedule))

    return bisect_sign_change(f, float(scan["tau"][i]), float(scan["tau"][i + 1]), tol)
