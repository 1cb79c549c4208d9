"""Scalar control schedules shared by all models.

Every ramp carries closed-form first and second derivatives because the
local counterdiabatic constructions need g-dot and g-ddot analytically;
nothing in this package differentiates a ramp numerically.

Ramp kinds
----------
polynomial    quintic with flat endpoints (value' = value'' = 0 at 0 and tau)
fourier       linear sweep plus truncated sine series (optimal-control ansatz)
tan-optimal   fast-regime cost-optimal ramp, scaled time s = t/tau
tanh-optimal  slow-regime cost-optimal ramp, scaled time s = t/tau
blended       arctan-weighted combination of the two optimal ramps
constant      degenerate tan-optimal ramp when both endpoints coincide

Ramps are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Ramp",
    "BobPulse",
    "poly_smooth_ramp",
    "oc_fourier_ramp",
    "cd_na_ramp",
    "cd_a_ramp",
    "cd_blended_ramp",
    "blend_weight",
    "bob_pulse",
    "ramp_from_dict",
]

_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class Ramp:
    """A scalar schedule on [0, duration] with analytic derivatives.

    Attributes
    ----------
    kind : str
        One of the ramp kinds listed in the module docstring.
    duration : float
        Length of the time interval (hbar = 1 units). Scaled-time ramps
        use duration 1.0.
    params : dict
        Constructor parameters, sufficient to rebuild the ramp via
        :func:`ramp_from_dict`.
    """

    kind: str
    duration: float
    params: dict
    _value: Callable = field(repr=False)
    _deriv1: Callable = field(repr=False)
    _deriv2: Callable = field(repr=False)

    def value(self, t):
        return self._value(np.asarray(t, dtype=float))

    def deriv1(self, t):
        return self._deriv1(np.asarray(t, dtype=float))

    def deriv2(self, t):
        return self._deriv2(np.asarray(t, dtype=float))

    __call__ = value

    def to_dict(self) -> dict:
        return {"kind": self.kind, "parameters": self.params}


def poly_smooth_ramp(g0: float, g_d: float, tau: float) -> Ramp:
    """Quintic ramp g0 -> g0 + g_d with doubly flat endpoints.

    g(t) = g0 + g_d [10 x^3 - 15 x^4 + 6 x^5],  x = t / tau.

    Both deriv1 and deriv2 vanish identically at t = 0 and t = tau, which
    is what makes this ramp admissible for the local counterdiabatic
    protocols.
    """
    if tau <= 0:
        raise ValueError(f"ramp duration must be positive, got tau={tau}")

    def value(t):
        x = t / tau
        return g0 + g_d * (10.0 * x**3 - 15.0 * x**4 + 6.0 * x**5)

    def deriv1(t):
        x = t / tau
        return g_d * 30.0 * (x**2 - 2.0 * x**3 + x**4) / tau

    def deriv2(t):
        x = t / tau
        return g_d * (60.0 * x - 180.0 * x**2 + 120.0 * x**3) / tau**2

    return Ramp("polynomial", tau, {"g0": g0, "g_d": g_d, "tau": tau},
                value, deriv1, deriv2)


def oc_fourier_ramp(g0: float, tau: float, coeffs=()) -> Ramp:
    """Linear sweep g0 -> -g0 plus a truncated Fourier series.

    g(t) = g0 - 2 g0 t/tau + sum_n a_n sin(n pi t / tau + phi_n)

    ``coeffs`` is a sequence of (a_n, phi_n) pairs starting at n = 1. An
    empty sequence gives the bare linear ramp. With all phi_n = 0 the sine
    terms vanish at both endpoints so g(0) = g0 and g(tau) = -g0 exactly;
    nonzero phases shift the endpoint values.
    """
    if tau <= 0:
        raise ValueError(f"ramp duration must be positive, got tau={tau}")
    amps = np.array([c[0] for c in coeffs], dtype=float)
    phases = np.array([c[1] for c in coeffs], dtype=float)
    nvec = np.arange(1, len(amps) + 1, dtype=float)
    w = nvec * np.pi / tau

    def value(t):
        t = np.asarray(t, dtype=float)
        lin = g0 - 2.0 * g0 * t / tau
        if amps.size == 0:
            return lin
        return lin + np.sin(np.multiply.outer(t, w) + phases) @ amps

    def deriv1(t):
        t = np.asarray(t, dtype=float)
        lin = np.broadcast_to(-2.0 * g0 / tau, t.shape).copy() if t.shape else \
            np.float64(-2.0 * g0 / tau)
        if amps.size == 0:
            return lin
        return lin + np.cos(np.multiply.outer(t, w) + phases) @ (amps * w)

    def deriv2(t):
        t = np.asarray(t, dtype=float)
        zero = np.zeros(t.shape) if t.shape else np.float64(0.0)
        if amps.size == 0:
            return zero
        return zero - np.sin(np.multiply.outer(t, w) + phases) @ (amps * w**2)

    return Ramp("fourier", tau,
                {"g0": g0, "tau": tau,
                 "coeffs": [[float(a), float(p)] for a, p in zip(amps, phases)]},
                value, deriv1, deriv2)


def cd_na_ramp(delta: float, g0: float, g1: float) -> Ramp:
    """Fast-regime cost-optimal ramp in scaled time s = t/tau.

    g(s) = delta * tan[c1 delta (s + c2)] with the constants fixed by the
    boundary values g(0) = g0 and g(1) = g1. Along this ramp the
    counterdiabatic term has a constant Frobenius norm, which is what makes
    it optimal when the auxiliary field dominates the cost.
    """
    if delta == 0:
        raise ValueError("delta must be nonzero")
    if g0 == g1:
        # degenerate boundary: constant schedule
        def const(s):
            s = np.asarray(s, dtype=float)
            return np.full(s.shape, g0) if s.shape else np.float64(g0)

        def zero(s):
            s = np.asarray(s, dtype=float)
            return np.zeros(s.shape) if s.shape else np.float64(0.0)

        return Ramp("tan-optimal", 1.0,
                    {"delta": delta, "g0": g0, "g1": g1}, const, zero, zero)

    c1d = math.atan(g1 / delta) - math.atan(g0 / delta)
    c2 = math.atan(g0 / delta) / c1d

    def value(s):
        return delta * np.tan(c1d * (s + c2))

    def deriv1(s):
        return delta * c1d / np.cos(c1d * (s + c2)) ** 2

    def deriv2(s):
        u = c1d * (s + c2)
        return 2.0 * delta * c1d**2 * np.tan(u) / np.cos(u) ** 2

    return Ramp("tan-optimal", 1.0, {"delta": delta, "g0": g0, "g1": g1},
                value, deriv1, deriv2)


def cd_a_ramp(g0: float, m: float = 40.0) -> Ramp:
    """Slow-regime cost-optimal ramp in scaled time, g0 -> -g0 only.

    g(s) = -g0 [tanh(m s - m) + tanh(m s)]

    The tanh pair approximates endpoint delta kicks with a flat middle; it
    satisfies the boundary conditions only for antisymmetric targets
    g1 = -g0 (up to tanh(m) saturation error, < 1e-34 for m = 40).
    """
    if m <= 1:
        raise ValueError(f"steepness m must be > 1, got {m}")

    def value(s):
        return -g0 * (np.tanh(m * s - m) + np.tanh(m * s))

    def deriv1(s):
        return -g0 * m * (np.cosh(m * s - m) ** -2 + np.cosh(m * s) ** -2)

    def deriv2(s):
        return 2.0 * g0 * m**2 * (np.tanh(m * s - m) / np.cosh(m * s - m) ** 2
                                  + np.tanh(m * s) / np.cosh(m * s) ** 2)

    return Ramp("tanh-optimal", 1.0, {"g0": g0, "m": m}, value, deriv1, deriv2)


def blend_weight(eps: float, tau: float) -> float:
    """Monotone blending weight f(tau) = (2/pi) arctan(eps tau) in [0, 1)."""
    return 2.0 / math.pi * math.atan(eps * tau)


def cd_blended_ramp(g_a: Ramp, g_na: Ramp, eps: float, tau: float) -> Ramp:
    """Duration-tau ramp interpolating the two regime-optimal ramps.

    g(t) = f(tau) g_a(t/tau) + [1 - f(tau)] g_na(t/tau),
    f(tau) = (2/pi) arctan(eps tau).

    Both input ramps must live in scaled time (duration 1) and share
    boundary values; a mismatch (e.g. a tanh ramp built for g1 != -g0) is
    rejected.
    """
    if tau <= 0:
        raise ValueError(f"ramp duration must be positive, got tau={tau}")
    for r in (g_a, g_na):
        if abs(r.duration - 1.0) > 1e-12:
            raise ValueError(f"blend inputs must be scaled-time ramps, got duration {r.duration}")
    for s in (0.0, 1.0):
        va, vn = float(g_a.value(s)), float(g_na.value(s))
        if abs(va - vn) > _BOUNDARY_TOL:
            raise ValueError(
                f"boundary mismatch at s={s}: g_a={va!r} vs g_na={vn!r}")
    f = blend_weight(eps, tau)

    def value(t):
        s = t / tau
        return f * g_a._value(s) + (1.0 - f) * g_na._value(s)

    def deriv1(t):
        s = t / tau
        return (f * g_a._deriv1(s) + (1.0 - f) * g_na._deriv1(s)) / tau

    def deriv2(t):
        s = t / tau
        return (f * g_a._deriv2(s) + (1.0 - f) * g_na._deriv2(s)) / tau**2

    return Ramp("blended", tau,
                {"eps": eps, "tau": tau, "g_a": g_a.to_dict(), "g_na": g_na.to_dict()},
                value, deriv1, deriv2)


@dataclass(frozen=True)
class BobPulse:
    """Bang-off-bang pulse: rectangular kicks of amplitude +-g_q at the ends.

    The idealized pulse applies field only at t = 0 and t = tau; here each
    kick is a finite rectangle of duration tau_b = phi / g_q carrying the
    same rotation angle phi.
    """

    g_q: float
    tau: float
    phi1: float
    phi2: float

    @property
    def tau_b1(self) -> float:
        return self.phi1 / self.g_q

    @property
    def tau_b2(self) -> float:
        return self.phi2 / self.g_q

    def amplitude(self, t):
        """Field value at time t: +g_q, 0, or -g_q."""
        t = np.asarray(t, dtype=float)
        return np.where(t < self.tau_b1, self.g_q,
                        np.where(t > self.tau - self.tau_b2, -self.g_q, 0.0))

    def to_dict(self) -> dict:
        return {"kind": "bob", "parameters": {
            "g_q": self.g_q, "tau": self.tau, "phi1": self.phi1, "phi2": self.phi2}}


def bob_pulse(g_q: float, tau: float, kick_angles=(0.0, 0.0)) -> BobPulse:
    """Build a bang-off-bang pulse from kick rotation angles.

    Each angle phi_i in [0, 2 pi) is realized as a rectangle of duration
    phi_i / g_q; the kicks must not overlap (phi_i / g_q < tau / 2).
    """
    phi1, phi2 = float(kick_angles[0]), float(kick_angles[1])
    if g_q <= 0:
        raise ValueError(f"quench amplitude must be positive, got {g_q}")
    if tau <= 0:
        raise ValueError(f"pulse duration must be positive, got {tau}")
    for phi in (phi1, phi2):
        if not 0.0 <= phi < 2.0 * math.pi:
            raise ValueError(f"kick angle {phi} outside [0, 2 pi)")
        if phi / g_q >= tau / 2.0:
            raise ValueError(
                f"kick duration {phi / g_q} >= tau/2 = {tau / 2}: kicks would overlap")
    return BobPulse(g_q, tau, phi1, phi2)


def ramp_from_dict(d: dict) -> Ramp:
    """Rebuild a Ramp from its {kind, parameters} JSON description."""
    kind, p = d["kind"], d["parameters"]
    if kind == "polynomial":
        return poly_smooth_ramp(p["g0"], p["g_d"], p["tau"])
    if kind == "fourier":
        return oc_fourier_ramp(p["g0"], p["tau"], p.get("coeffs", []))
    if kind == "tan-optimal":
        return cd_na_ramp(p["delta"], p["g0"], p["g1"])
    if kind == "tanh-optimal":
        return cd_a_ramp(p["g0"], p["m"])
    if kind == "blended":
        return cd_blended_ramp(ramp_from_dict(p["g_a"]), ramp_from_dict(p["g_na"]),
                               p["eps"], p["tau"])
    raise ValueError(f"unknown ramp kind {kind!r}")
