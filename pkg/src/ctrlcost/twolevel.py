"""Exact unitary propagation, spectra and Frobenius-norm cost for 2x2 blocks.

The Hamiltonian convention throughout is

    H(t) = c0(t) * 1 + cx(t) sigma_x / 2 + cy(t) sigma_y / 2 + cz(t) sigma_z / 2

with all coefficients real (angular frequency units, hbar = 1). Propagation
uses piecewise-exact stepping: on each substep the exact 2x2 exponential of
H evaluated at the substep midpoint is applied, so the evolution is unitary
by construction and converges at second order in the step size. Schedules
may declare interior breakpoints (e.g. rectangular kicks); the time grid
then snaps to them and stepping stays exact on piecewise-constant parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

__all__ = [
    "PauliSchedule",
    "QubitTrajectory",
    "CostReport",
    "qubit_state",
    "fidelity",
    "propagate",
    "final_state",
    "converged_final_state",
    "instantaneous_eigenstates",
    "cost_rate",
    "integrated_cost",
    "trajectory_to_csv",
]

_NORM_TOL = 1e-12
DEFAULT_STEPS = 10_000
CONVERGENCE_TOL = 1e-10
_MAX_DOUBLINGS = 8


def _zeros(t):
    t = np.asarray(t, dtype=float)
    return np.zeros(t.shape) if t.shape else np.float64(0.0)


@dataclass(frozen=True)
class PauliSchedule:
    """Time-dependent two-level Hamiltonian as Pauli coefficients.

    ``c0``..``cz`` are vectorized callables of time, defined on
    [0, duration]. ``breakpoints`` lists interior times where coefficients
    jump; the propagator and the cost quadrature split the interval there.
    """

    duration: float
    cx: Callable
    cz: Callable
    cy: Callable = _zeros
    c0: Callable = _zeros
    breakpoints: tuple = ()
    label: str = ""

    def coefficients(self, t):
        t = np.asarray(t, dtype=float)
        shape = t.shape
        out = []
        for f in (self.c0, self.cx, self.cy, self.cz):
            c = np.asarray(f(t), dtype=float)
            out.append(np.broadcast_to(c, shape).astype(float) if c.shape != shape else c)
        return tuple(out)


def qubit_state(alpha, beta) -> np.ndarray:
    """State vector (alpha, beta) in the sigma_z basis, norm-checked."""
    psi = np.array([alpha, beta], dtype=complex)
    n2 = float(np.vdot(psi, psi).real)
    if abs(n2 - 1.0) > _NORM_TOL:
        raise ValueError(f"state not normalized: |alpha|^2+|beta|^2 = {n2!r}")
    return psi


def fidelity(psi, phi) -> float:
    """Squared overlap |<psi|phi>|^2 of two normalized states."""
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    for v in (psi, phi):
        if abs(float(np.vdot(v, v).real) - 1.0) > 1e-9:
            raise ValueError("fidelity arguments must be normalized")
    return float(abs(np.vdot(psi, phi)) ** 2)


@dataclass
class QubitTrajectory:
    """Propagation record on a (piecewise-)uniform time grid."""

    times: np.ndarray
    states: np.ndarray          # (n, 2) complex
    fidelity: np.ndarray        # vs instantaneous adiabatic state of reference
    cost_rate: np.ndarray       # Frobenius norm of the schedule, identity excluded
    steps: int
    label: str = ""

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def norms(self) -> np.ndarray:
        return np.sqrt(np.einsum("ij,ij->i", self.states.conj(), self.states).real)


@dataclass
class CostReport:
    """Integrated cost and outcome summary for one protocol run."""

    protocol: str
    tau: float
    integrated_cost: float
    final_fidelity: float
    times: np.ndarray = field(repr=False)
    cost_rate: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# grids and SU(2) steps

def _segment_grid(duration: float, breakpoints, steps: int):
    """Node grid snapped to breakpoints, >= 8 steps per segment."""
    edges = [0.0] + sorted(float(b) for b in breakpoints
                           if 0.0 < float(b) < duration) + [duration]
    edges = np.array(edges)
    lengths = np.diff(edges)
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    nseg = len(lengths)
    alloc = np.maximum(8, np.rint(steps * lengths / duration).astype(int)) if nseg > 1 \
        else np.array([steps])
    nodes = [np.array([0.0])]
    for (a, b), n in zip(zip(edges[:-1], edges[1:]), alloc):
        nodes.append(np.linspace(a, b, n + 1)[1:])
    return np.concatenate(nodes)


def _su2_steps(c0, cx, cy, cz, dt):
    """Exact exponentials exp(-i H dt) for arrays of Pauli coefficients."""
    r = np.sqrt(cx * cx + cy * cy + cz * cz)
    half = 0.5 * r * dt
    # sin(r dt/2)/r, with the r -> 0 limit dt/2
    s = np.where(r > 0.0, np.sin(half) / np.where(r > 0.0, r, 1.0), 0.5 * dt)
    c = np.cos(half)
    phase = np.exp(-1j * c0 * dt)
    U = np.empty(r.shape + (2, 2), dtype=complex)
    U[..., 0, 0] = phase * (c - 1j * s * cz)
    U[..., 0, 1] = phase * (-1j * s * (cx - 1j * cy))
    U[..., 1, 0] = phase * (-1j * s * (cx + 1j * cy))
    U[..., 1, 1] = phase * (c + 1j * s * cz)
    return U


def _ordered_product(U: np.ndarray) -> np.ndarray:
    """Product U[-1] @ ... @ U[0] by pairwise reduction."""
    while U.shape[0] > 1:
        n = U.shape[0]
        if n % 2:
            tail = U[-1]
            U = np.matmul(U[1::2], U[0:-1:2])
            U = np.concatenate([U, tail[None]], axis=0)
        else:
            U = np.matmul(U[1::2], U[0::2])
    return U[0]


def _step_matrices(schedule: PauliSchedule, t_nodes: np.ndarray) -> np.ndarray:
    tm = 0.5 * (t_nodes[:-1] + t_nodes[1:])
    dt = np.diff(t_nodes)
    c0, cx, cy, cz = schedule.coefficients(tm)
    for name, c in (("c0", c0), ("cx", cx), ("cy", cy), ("cz", cz)):
        bad = ~np.isfinite(c)
        if bad.any():
            raise ValueError(
                f"non-finite coefficient {name} at t={tm[bad][0]!r}"
                + (f" (schedule {schedule.label})" if schedule.label else ""))
    return _su2_steps(c0, cx, cy, cz, dt)


# ---------------------------------------------------------------------------
# eigenstates

def _eigvec_pair(cx, cy, cz):
    """Vectorized eigenvectors of (cx sx + cy sy + cz sz)/2, excited then ground.

    Phase convention: the first component with non-negligible weight is made
    real and positive.
    """
    cx, cy, cz = (np.asarray(a, dtype=float) for a in (cx, cy, cz))
    r = np.sqrt(cx * cx + cy * cy + cz * cz)
    # two algebraic forms of the +r/2 eigenvector; pick the better conditioned
    use_a = (r + cz) >= (r - cz)
    a0 = np.where(use_a, r + cz, cx - 1j * cy)
    a1 = np.where(use_a, cx + 1j * cy, r - cz)
    norm = np.sqrt(np.abs(a0) ** 2 + np.abs(a1) ** 2)
    exc = np.stack([a0 / norm, a1 / norm], axis=-1)
    # ground state: orthogonal complement of (a, b) is (-conj(b), conj(a))
    gnd = np.stack([-exc[..., 1].conj(), exc[..., 0].conj()], axis=-1)

    def fix_phase(v):
        lead = np.where(np.abs(v[..., 0]) > 1e-12, v[..., 0], v[..., 1])
        ph = lead / np.abs(lead)
        return v * ph.conj()[..., None]

    return fix_phase(exc), fix_phase(gnd), r


def instantaneous_eigenstates(schedule: PauliSchedule, t: float):
    """Eigenpairs (ground, excited, E_minus, E_plus) of H(t).

    Energies are E_pm = c0 +- sqrt(cx^2 + cy^2 + cz^2)/2. Degenerate points
    are rejected.
    """
    c0, cx, cy, cz = (float(np.asarray(f(np.float64(t))))
                      for f in (schedule.c0, schedule.cx, schedule.cy, schedule.cz))
    if math.sqrt(cx * cx + cy * cy + cz * cz) < 1e-14:
        raise ValueError(f"degenerate spectrum at t={t}: (cx, cy, cz) = 0")
    exc, gnd, r = _eigvec_pair(cx, cy, cz)
    return gnd, exc, c0 - 0.5 * float(r), c0 + 0.5 * float(r)


# ---------------------------------------------------------------------------
# cost

def cost_rate(schedule: PauliSchedule, t, include_identity: bool = False):
    """Instantaneous cost dC/dt = Frobenius norm of H(t).

    ||H||_F = sqrt(2 c0^2 [if included] + (cx^2 + cy^2 + cz^2)/2). Identity
    shifts are excluded by default so that constant energy offsets are free.
    """
    c0, cx, cy, cz = schedule.coefficients(t)
    out = (cx * cx + cy * cy + cz * cz) / 2.0
    if include_identity:
        out = out + 2.0 * c0 * c0
    return np.sqrt(out)


def integrated_cost(schedule: PauliSchedule, quadrature_steps: int = 4096,
                    include_identity: bool = False) -> float:
    """Time-averaged cost C = (1/tau) int_0^tau ||H|| dt.

    Composite Simpson per smooth segment; rectangular segments between
    breakpoints have a constant integrand so they are integrated exactly.
    """
    if quadrature_steps < 16:
        raise ValueError(f"quadrature_steps must be >= 16, got {quadrature_steps}")
    tau = schedule.duration
    edges = [0.0] + sorted(b for b in schedule.breakpoints if 0.0 < b < tau) + [tau]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(16, int(round(quadrature_steps * (b - a) / tau)))
        n += n % 2  # even interval count for Simpson
        t = np.linspace(a, b, n + 1)
        # sample strictly inside the segment so jumps at the edges don't leak
        t_in = t.copy()
        t_in[0] = a + 1e-12 * (b - a)
        t_in[-1] = b - 1e-12 * (b - a)
        total += simpson(cost_rate(schedule, t_in, include_identity), x=t)
    return total / tau


# ---------------------------------------------------------------------------
# propagation

def propagate(schedule: PauliSchedule, psi0, steps: int = DEFAULT_STEPS,
              reference: Optional[PauliSchedule] = None) -> QubitTrajectory:
    """Propagate psi0 under the schedule with midpoint-exponential stepping.

    Parameters
    ----------
    reference : PauliSchedule, optional
        Hamiltonian whose instantaneous eigenstates define the
        fidelity-vs-adiabatic-state series (default: the propagation
        schedule itself). The tracked branch is the one the initial state
        overlaps most at t = 0.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(float(np.vdot(psi0, psi0).real) - 1.0) > _NORM_TOL:
        raise ValueError("initial state not normalized")
    t = _segment_grid(schedule.duration, schedule.breakpoints, steps)
    U = _step_matrices(schedule, t)
    n = len(t)
    states = np.empty((n, 2), dtype=complex)
    states[0] = psi0
    psi = psi0
    for k in range(n - 1):
        psi = U[k] @ psi
        states[k + 1] = psi

    ref = reference if reference is not None else schedule
    _, rcx, rcy, rcz = ref.coefficients(t)
    exc, gnd, _ = _eigvec_pair(rcx, rcy, rcz)
    f_exc0 = abs(np.vdot(exc[0], psi0)) ** 2
    branch = exc if f_exc0 > 0.5 else gnd
    fid = np.abs(np.einsum("ij,ij->i", branch.conj(), states)) ** 2
    rate = np.asarray(cost_rate(schedule, t), dtype=float)
    return QubitTrajectory(times=t, states=states, fidelity=fid, cost_rate=rate,
                           steps=steps, label=schedule.label)


def final_state(schedule: PauliSchedule, psi0, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Final state only; pairwise-reduced product of all step matrices."""
    psi0 = np.asarray(psi0, dtype=complex)
    t = _segment_grid(schedule.duration, schedule.breakpoints, steps)
    return _ordered_product(_step_matrices(schedule, t)) @ psi0


def converged_final_state(schedule: PauliSchedule, psi0,
                          steps: int = DEFAULT_STEPS,
                          tol: float = CONVERGENCE_TOL):
    """Double the step count until successive final states agree within tol.

    Returns (state, steps_used). Agreement is measured as the infidelity
    between consecutive refinements.
    """
    psi = final_state(schedule, psi0, steps)
    for _ in range(_MAX_DOUBLINGS):
        steps *= 2
        nxt = final_state(schedule, psi0, steps)
        if 1.0 - abs(np.vdot(psi, nxt)) ** 2 < tol:
            return nxt, steps
        psi = nxt
    return psi, steps


def trajectory_to_csv(traj: QubitTrajectory, path, stride: int = 1,
                      header_comment: str = "") -> None:
    """Write t, Re/Im amplitudes, fidelity and cost rate as CSV."""
    idx = np.arange(0, len(traj.times), stride)
    if idx[-1] != len(traj.times) - 1:
        idx = np.append(idx, len(traj.times) - 1)
    with open(path, "w", encoding="utf-8") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        fh.write("t,re_alpha,im_alpha,re_beta,im_beta,fidelity,cost_rate\n")
        for i in idx:
            a, b = traj.states[i]
            fh.write(f"{traj.times[i]:.17g},{a.real:.17g},{a.imag:.17g},"
                     f"{b.real:.17g},{b.imag:.17g},"
                     f"{traj.fidelity[i]:.17g},{traj.cost_rate[i]:.17g}\n")
