"""Parametrically driven harmonic oscillator: protocols and energy cost.

The oscillator starts in thermal equilibrium of the initial trap. All
dynamical quantities reduce to the classical auxiliary solutions X(t), Y(t)
of x'' + omega^2(t) x = 0 (Wronskian X Y' - X' Y = -1) and the Ermakov scale
b(t). The degree of nonadiabaticity is the Husimi parameter Q* >= 1, and the
protocol cost is the time average of the mean energy

    <H_tot> = (omega_t / 2) Q*_k coth(beta omega_0 / 2),

the operator norm being infinite for the unbounded spectrum. For local
counterdiabatic driving the frequency omega is replaced by the effective
Omega both in the prefactor and inside Q*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from .landau_zener import bisect_sign_change

__all__ = [
    "FrequencySchedule",
    "OscillatorSolution",
    "OscillatorError",
    "CdValidityError",
    "LcdValidityError",
    "classical_solutions",
    "ermakov_solve",
    "husimi_qstar",
    "qstar_cd",
    "qstar_ie",
    "lcd_frequency",
    "lcd_omega0",
    "ie_energy",
    "qstar_series",
    "oscillator_cost",
    "cd_is_valid",
    "cd_validity_edge",
    "lcd_is_valid",
    "default_steps",
]

WRONSKIAN_TOL = 1e-6
PROTOCOLS = ("bare", "cd", "lcd", "ie")


class OscillatorError(RuntimeError):
    pass


class CdValidityError(OscillatorError):
    """Trap inversion: omega^2 < omega_dot^2 / (4 omega^2) somewhere."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"CD validity constraint violated at t={t}")


class LcdValidityError(OscillatorError):
    """Effective squared frequency Omega^2 non-positive somewhere."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"LCD effective frequency non-positive at t={t}")


@dataclass(frozen=True)
class FrequencySchedule:
    """omega(t) with closed-form first and second derivatives."""

    omega: Callable
    domega: Callable
    ddomega: Callable
    omega0: float
    omega1: float
    tau: float

    @classmethod
    def quintic(cls, omega0: float = 1.0, omega1: float = 10.0, tau: float = 2.5):
        """Flat-endpoint quintic sweep omega0 -> omega1."""
        if tau <= 0:
            raise ValueError(f"duration must be positive, got {tau}")
        wd = omega1 - omega0

        def om(t):
            x = np.asarray(t, dtype=float) / tau
            return omega0 + wd * (10 * x**3 - 15 * x**4 + 6 * x**5)

        def dom(t):
            x = np.asarray(t, dtype=float) / tau
            return wd * 30.0 * (x**2 - 2 * x**3 + x**4) / tau

        def ddom(t):
            x = np.asarray(t, dtype=float) / tau
            return wd * (60 * x - 180 * x**2 + 120 * x**3) / tau**2

        return cls(om, dom, ddom, omega0, omega1, tau)

    @classmethod
    def constant(cls, omega0: float, tau: float):
        def om(t):
            t = np.asarray(t, dtype=float)
            return np.full(t.shape, omega0) if t.shape else np.float64(omega0)

        def zero(t):
            t = np.asarray(t, dtype=float)
            return np.zeros(t.shape) if t.shape else np.float64(0.0)

        return cls(om, zero, zero, omega0, omega0, tau)


@dataclass
class OscillatorSolution:
    """Grids of the classical pair (X, Y) and/or the Ermakov scale b."""

    times: np.ndarray
    X: Optional[np.ndarray] = None
    Xd: Optional[np.ndarray] = None
    Y: Optional[np.ndarray] = None
    Yd: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None
    bd: Optional[np.ndarray] = None

    def wronskian(self) -> np.ndarray:
        return self.X * self.Yd - self.Xd * self.Y


def default_steps(sched: FrequencySchedule) -> int:
    """Step count keeping the fastest oscillation well resolved."""
    wmax = max(abs(sched.omega0), abs(sched.omega1), 1.0)
    return int(min(400_000, max(8_000, 400 * wmax * sched.tau)))


def _rk4_pair(omega2_at, tau: float, steps: int, ics):
    """RK4 on x'' = -omega^2(t) x for one initial-condition pair."""
    h = tau / steps
    t = np.linspace(0.0, tau, steps + 1)
    w2_a = omega2_at(t[:-1])
    w2_m = omega2_at(t[:-1] + 0.5 * h)
    w2_b = omega2_at(t[1:])
    x, v = float(ics[0]), float(ics[1])
    xs = np.empty(steps + 1)
    vs = np.empty(steps + 1)
    xs[0], vs[0] = x, v
    for k in range(steps):
        a0, am, a1 = w2_a[k], w2_m[k], w2_b[k]
        k1x, k1v = v, -a0 * x
        x2 = x + 0.5 * h * k1x
        k2x, k2v = v + 0.5 * h * k1v, -am * x2
        x3 = x + 0.5 * h * k2x
        k3x, k3v = v + 0.5 * h * k2v, -am * x3
        x4 = x + h * k3x
        k4x, k4v = v + h * k3v, -a1 * x4
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        xs[k + 1], vs[k + 1] = x, v
    return t, xs, vs


def classical_solutions(sched: FrequencySchedule, steps: Optional[int] = None,
                        omega2: Optional[Callable] = None) -> OscillatorSolution:
    """Integrate both auxiliary solutions X (X0=0, X'0=1) and Y (Y0=1, Y'0=0).

    ``omega2`` overrides the squared frequency (used for the LCD effective
    trap); by default it is sched.omega(t)^2. The Wronskian is checked and
    the grid refined once if the drift exceeds the tolerance.
    """
    if steps is None:
        steps = default_steps(sched)
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    w2 = omega2 if omega2 is not None else (lambda t: sched.omega(t) ** 2)
    for attempt in range(2):
        t, X, Xd = _rk4_pair(w2, sched.tau, steps, (0.0, 1.0))
        _, Y, Yd = _rk4_pair(w2, sched.tau, steps, (1.0, 0.0))
        drift = float(np.max(np.abs(X * Yd - Xd * Y + 1.0)))
        if drift <= WRONSKIAN_TOL:
            return OscillatorSolution(times=t, X=X, Xd=Xd, Y=Y, Yd=Yd)
        steps *= 2
    raise OscillatorError(
        f"Wronskian drift {drift:.3e} above {WRONSKIAN_TOL} even after refinement")


def ermakov_solve(sched: FrequencySchedule, steps: Optional[int] = None) -> OscillatorSolution:
    """Integrate b'' + omega^2 b = omega0^2 / b^3 with b(0)=1, b'(0)=0.

    The initial conditions are those of thermal equilibrium in the initial
    trap. Uses the same RK4 stepper as the classical solutions.
    """
    if steps is None:
        steps = default_steps(sched)
    h = sched.tau / steps
    t = np.linspace(0.0, sched.tau, steps + 1)
    w2_a = sched.omega(t[:-1]) ** 2
    w2_m = sched.omega(t[:-1] + 0.5 * h) ** 2
    w2_b = sched.omega(t[1:]) ** 2
    w0sq = sched.omega0**2
    b, bd = 1.0, 0.0
    bs = np.empty(steps + 1)
    bds = np.empty(steps + 1)
    bs[0], bds[0] = b, bd
    for k in range(steps):
        a0, am, a1 = w2_a[k], w2_m[k], w2_b[k]
        if b <= 0.0:
            raise OscillatorError(f"Ermakov scale b <= 0 at t={t[k]!r} (unphysical)")
        k1b, k1v = bd, w0sq / b**3 - a0 * b
        b2 = b + 0.5 * h * k1b
        k2b, k2v = bd + 0.5 * h * k1v, w0sq / b2**3 - am * b2
        b3 = b + 0.5 * h * k2b
        k3b, k3v = bd + 0.5 * h * k2v, w0sq / b3**3 - am * b3
        b4 = b + h * k3b
        k4b, k4v = bd + h * k3v, w0sq / b4**3 - a1 * b4
        b += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b)
        bd += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        bs[k + 1], bds[k + 1] = b, bd
    if np.any(bs <= 0.0):
        raise OscillatorError("Ermakov scale b <= 0 encountered (unphysical)")
    return OscillatorSolution(times=t, b=bs, bd=bds)


def _at_times(sol_times, arrs, t):
    """Linear interpolation of solution arrays at arbitrary t."""
    return [np.interp(t, sol_times, a) for a in arrs]


def husimi_qstar(sched: FrequencySchedule, sol: OscillatorSolution, t=None,
                 omega_ref: Optional[float] = None, omega: Optional[Callable] = None):
    """Adiabaticity parameter from the classical pair.

    Q* = [w0^2 (w^2 X^2 + X'^2) + (w^2 Y^2 + Y'^2)] / (2 w0 w)

    ``omega_ref`` is the reference initial frequency (default sched.omega0);
    ``omega`` overrides the instantaneous frequency (used for LCD). Q* is
    evaluated on the full solution grid when t is None.
    """
    w0 = sched.omega0 if omega_ref is None else float(omega_ref)
    omf = omega if omega is not None else sched.omega
    if t is None:
        t = sol.times
        X, Xd, Y, Yd = sol.X, sol.Xd, sol.Y, sol.Yd
    else:
        t = np.asarray(t, dtype=float)
        X, Xd, Y, Yd = _at_times(sol.times, (sol.X, sol.Xd, sol.Y, sol.Yd), t)
    w = np.asarray(omf(t), dtype=float)
    if np.any(w <= 0.0):
        raise OscillatorError("omega(t) must be positive for Q*")
    return (w0**2 * (w**2 * X**2 + Xd**2) + (w**2 * Y**2 + Yd**2)) / (2.0 * w0 * w)


def qstar_cd(sched: FrequencySchedule, t):
    """Closed-form Q* under counterdiabatic driving.

    Q*_CD = [1 - omega_dot^2 / (4 omega^4)]^(-1/2); requires the
    no-trap-inversion condition omega^2 > omega_dot^2 / (4 omega^2).
    """
    t = np.asarray(t, dtype=float)
    w = sched.omega(t)
    wd = sched.domega(t)
    arg = 1.0 - wd**2 / (4.0 * w**4)
    bad = arg <= 0.0
    if np.any(bad):
        raise CdValidityError(float(np.atleast_1d(t)[np.atleast_1d(bad)][0]))
    return arg**-0.5


def qstar_ie(sched: FrequencySchedule, t):
    """Inverse-engineering adiabaticity parameter Q*_IE = 1 + omega_dot^2/(8 omega^4)."""
    t = np.asarray(t, dtype=float)
    return 1.0 + sched.domega(t) ** 2 / (8.0 * sched.omega(t) ** 4)


def lcd_frequency(sched: FrequencySchedule, t):
    """Effective squared frequency of the local counterdiabatic trap.

    Omega^2 = omega^2 - 3 omega_dot^2 / (4 omega^2) + omega_ddot / (2 omega).
    The sign is reported, not raised, so scans can map validity regions.
    """
    t = np.asarray(t, dtype=float)
    w = sched.omega(t)
    return w**2 - 3.0 * sched.domega(t) ** 2 / (4.0 * w**2) \
        + sched.ddomega(t) / (2.0 * w)


def lcd_omega0(sched: FrequencySchedule) -> float:
    """Initial effective LCD frequency (equals omega0 for flat-start ramps)."""
    om2 = float(lcd_frequency(sched, 0.0))
    if om2 <= 0.0:
        raise LcdValidityError(0.0)
    return math.sqrt(om2)


def cd_is_valid(sched: FrequencySchedule, samples: int = 4001) -> bool:
    t = np.linspace(0.0, sched.tau, samples)
    w = sched.omega(t)
    return bool(np.all(4.0 * w**4 > sched.domega(t) ** 2))


def lcd_is_valid(sched: FrequencySchedule, samples: int = 4001) -> bool:
    t = np.linspace(0.0, sched.tau, samples)
    return bool(np.all(lcd_frequency(sched, t) > 0.0))


def cd_validity_edge(omega0: float = 1.0, omega1: float = 10.0,
                     bracket=(0.5, 5.0), tol: float = 1e-4) -> float:
    """Smallest quintic-ramp duration with no trap inversion, by bisection."""

    def sign(tau):
        return 1.0 if cd_is_valid(FrequencySchedule.quintic(omega0, omega1, tau)) else -1.0

    return bisect_sign_change(sign, bracket[0], bracket[1], tol)


def ie_energy(sched: FrequencySchedule, sol: OscillatorSolution, beta: float, t=None):
    """Mean energy along the invariant-based trajectory (Ermakov route).

    <H_IE> = (1/2) [b'^2/(2 w0) + w^2 b^2/(2 w0) + w0/(2 b^2)] coth(beta w0 / 2)
    """
    if sol.b is None:
        raise ValueError("solution carries no Ermakov scale; run ermakov_solve")
    if t is None:
        t = sol.times
        b, bd = sol.b, sol.bd
    else:
        t = np.asarray(t, dtype=float)
        b, bd = _at_times(sol.times, (sol.b, sol.bd), t)
    w0 = sched.omega0
    w = sched.omega(t)
    coth = 1.0 / math.tanh(beta * w0 / 2.0)
    return 0.5 * (bd**2 / (2 * w0) + w**2 * b**2 / (2 * w0) + w0 / (2 * b**2)) * coth


def qstar_series(sched: FrequencySchedule, protocol: str,
                 steps: Optional[int] = None):
    """(times, Q*) for one protocol on a common grid.

    bare: Husimi Q* from the classical pair under omega(t).
    cd:   closed form (raises CdValidityError on trap inversion).
    lcd:  Husimi Q* with omega -> Omega in the dynamics and the formula.
    ie:   closed form.
    """
    if steps is None:
        steps = default_steps(sched)
    t = np.linspace(0.0, sched.tau, steps + 1)
    if protocol == "bare":
        sol = classical_solutions(sched, steps)
        return t, husimi_qstar(sched, sol)
    if protocol == "cd":
        return t, qstar_cd(sched, t)
    if protocol == "ie":
        return t, qstar_ie(sched, t)
    if protocol == "lcd":
        om2 = lcd_frequency(sched, t)
        if np.any(om2 <= 0.0):
            raise LcdValidityError(float(t[np.argmax(om2 <= 0.0)]))
        sol = classical_solutions(sched, steps,
                                  omega2=lambda tt: lcd_frequency(sched, tt))
        omega_eff = lambda tt: np.sqrt(lcd_frequency(sched, tt))
        return t, husimi_qstar(sched, sol, omega_ref=lcd_omega0(sched), omega=omega_eff)
    raise ValueError(f"unknown protocol {protocol!r}")


def oscillator_cost(sched: FrequencySchedule, protocol: str, beta: float = 3.0,
                    steps: Optional[int] = None) -> float:
    """Time-averaged mean energy C = (1/tau) int <H_tot> dt for one protocol.

    <H_tot> = (w_t/2) Q*_k coth(beta w0/2); for LCD the prefactor frequency
    is Omega(t). Validity violations raise the corresponding typed error.
    """
    t, q = qstar_series(sched, protocol, steps)
    coth = 1.0 / math.tanh(beta * sched.omega0 / 2.0)
    w = np.sqrt(lcd_frequency(sched, t)) if protocol == "lcd" else sched.omega(t)
    return float(simpson(0.5 * w * q * coth, x=t) / sched.tau)
