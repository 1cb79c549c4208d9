"""Landau-Zener protocols: builders, QSL, BOB, decomposition, scans."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ctrlcost.ramps import bob_pulse
from ctrlcost.twolevel import (integrated_cost, instantaneous_eigenstates,
                               cost_rate)
from ctrlcost.landau_zener import (LzConfig, lz_bare, lz_cd, lz_lcd, lz_bob,
                                   lz_ground_state, qsl_time,
                                   optimize_bob_kicks, cd_cost_decomposition,
                                   decomposition_cost, cost_scan,
                                   find_cd_lcd_crossover, run_protocol,
                                   blended_ramp_for, bisect_sign_change)

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)


def reference_states():
    return lz_ground_state(0.1, -0.2), lz_ground_state(0.1, 0.2)


# ---------------------------------------------------------------------------
# config and bare builder

def test_config_defaults_and_validation():
    cfg = LzConfig(tau=1.0)
    assert (cfg.delta, cfg.g0, cfg.g1) == (0.1, -0.2, 0.2)
    with pytest.raises(ValueError):
        LzConfig(tau=1.0, delta=0.0)
    with pytest.raises(ValueError):
        LzConfig(tau=-1.0)


def test_bare_schedule_coefficients():
    cfg = LzConfig(tau=2.0)
    sched = lz_bare(cfg)
    t = np.linspace(0, 2, 9)
    assert np.allclose(sched.cx(t), 0.1)
    assert float(sched.cz(np.float64(0.0))) == pytest.approx(-0.2)
    assert float(sched.cz(np.float64(2.0))) == pytest.approx(0.2, abs=1e-15)
    _, _, em, ep = instantaneous_eigenstates(sched, 1.0)  # crossing
    assert ep - em == pytest.approx(0.1, rel=1e-12)
    assert float(cost_rate(sched, 0.0)) == pytest.approx(0.1581, abs=5e-5)


# ---------------------------------------------------------------------------
# QSL time

def test_qsl_time_reference_value():
    gi, gt = reference_states()
    tq = qsl_time(0.1, gi, gt)
    # closed form reduces to 2 arctan(2) / Delta for the symmetric sweep
    assert tq == pytest.approx(2.0 * math.atan(2.0) / 0.1, rel=1e-12)
    assert tq == pytest.approx(22.14, rel=1e-3)


def test_qsl_time_degenerate_and_orthogonal():
    gi, _ = reference_states()
    assert qsl_time(0.1, gi, gi) == pytest.approx(0.0, abs=1e-7)
    assert qsl_time(0.1, KET0, KET1) == pytest.approx(math.pi / 0.1, rel=1e-12)


def test_qsl_time_symmetric_under_swap():
    gi, gt = reference_states()
    assert qsl_time(0.1, gi, gt) == pytest.approx(qsl_time(0.1, gt, gi), rel=1e-15)


# ---------------------------------------------------------------------------
# CD

def test_cd_coefficient_endpoints_and_midpoint():
    tau = 0.1
    cfg = LzConfig(tau=tau)
    sched = lz_cd(cfg)
    # quintic has flat endpoints -> no CD field there
    assert float(sched.cy(np.float64(0.0))) == 0.0
    assert float(sched.cy(np.float64(tau))) == 0.0
    # at the crossing g = 0: cy = -gdot/Delta with gdot = 1.875 g_d / tau
    gdot = 1.875 * 0.4 / tau
    assert float(sched.cy(np.float64(tau / 2))) == pytest.approx(-gdot / 0.1, rel=1e-12)


def test_cd_gap_at_crossing_dual_route():
    # diagonalization vs the closed form sqrt(Delta^2 + (gdot/Delta)^2)
    gi, gt = reference_states()
    tau = qsl_time(0.1, gi, gt)
    sched = lz_cd(LzConfig(tau=tau))
    _, _, em, ep = instantaneous_eigenstates(sched, tau / 2)
    gdot = 1.875 * 0.4 / tau
    assert ep - em == pytest.approx(math.sqrt(0.1**2 + (gdot / 0.1) ** 2), rel=1e-12)


@pytest.mark.parametrize("tau", [0.1, 22.142974355881808])
def test_cd_perfect_final_fidelity(tau):
    _, rep = run_protocol(LzConfig(tau=tau), "cd")
    assert rep.final_fidelity >= 1.0 - 1e-8


def test_cd_tracks_instantaneous_ground_state():
    gi, gt = reference_states()
    tau = qsl_time(0.1, gi, gt)
    traj, _ = run_protocol(LzConfig(tau=tau), "cd", steps=20000)
    assert np.min(traj.fidelity) >= 1.0 - 1e-6


# ---------------------------------------------------------------------------
# LCD

def test_lcd_reduces_to_bare_at_endpoints():
    cfg = LzConfig(tau=0.7)
    lcd, bare = lz_lcd(cfg), lz_bare(cfg)
    for t in (0.0, 0.7):
        t = np.float64(t)
        assert float(lcd.cx(t)) == pytest.approx(float(bare.cx(t)), rel=1e-14)
        assert float(lcd.cz(t)) == pytest.approx(float(bare.cz(t)), rel=1e-14)


def test_lcd_theta_dot_midpoint_value():
    # theta_dot = -gdot Delta/(Delta^2+g^2); at the midpoint of a tau = 0.1
    # sweep gdot = 7.5 so theta_dot = -75 and P = sqrt(Delta^2 + 75^2)
    cfg = LzConfig(tau=0.1)
    sched = lz_lcd(cfg)
    P_mid = float(sched.cx(np.float64(0.05)))
    assert P_mid == pytest.approx(math.sqrt(0.1**2 + 75.0**2), rel=1e-12)


@pytest.mark.parametrize("tau", [0.1, 22.142974355881808])
def test_lcd_perfect_final_fidelity(tau):
    _, rep = run_protocol(LzConfig(tau=tau), "lcd")
    assert rep.final_fidelity >= 1.0 - 1e-8


def test_cd_lcd_fidelity_across_log_grid():
    # spot-check the tau range where both protocols must be exact
    for tau in np.geomspace(0.05, 100.0, 5):
        for proto in ("cd", "lcd"):
            _, rep = run_protocol(LzConfig(tau=float(tau)), proto)
            assert rep.final_fidelity >= 1.0 - 1e-8, (tau, proto)


def test_lcd_warns_on_nonflat_ramp():
    from ctrlcost.ramps import oc_fourier_ramp
    cfg = LzConfig(tau=5.0, ramp=oc_fourier_ramp(-0.2, 5.0, [(0.1, 0.0)]))
    with pytest.warns(UserWarning, match="flat start"):
        lz_lcd(cfg)


# ---------------------------------------------------------------------------
# BOB

def test_bob_zero_kicks_free_evolution():
    cfg = LzConfig(tau=5.0)
    sched = lz_bob(cfg, bob_pulse(100.0, 5.0, (0.0, 0.0)))
    t = np.linspace(0, 5, 11)
    assert np.allclose(sched.cz(t), 0.0)
    assert np.allclose(sched.cx(t), 0.1)


def test_bob_optimized_kicks_reach_target():
    gi, gt = reference_states()
    tau = qsl_time(0.1, gi, gt)
    kicks = optimize_bob_kicks(LzConfig(tau=tau), g_q=100.0)
    assert kicks.success
    assert kicks.fidelity >= 0.999
    # the ideal kicks are pi/2 rotations, softened slightly by finite g_q
    assert kicks.phi1 == pytest.approx(math.pi / 2, abs=0.02)
    assert kicks.phi2 == pytest.approx(math.pi / 2, abs=0.02)


def test_bob_cost_rate_between_kicks():
    cfg = LzConfig(tau=22.14)
    sched = lz_bob(cfg, bob_pulse(100.0, 22.14, (math.pi / 2, math.pi / 2)))
    assert float(cost_rate(sched, 11.0)) == pytest.approx(0.1 / math.sqrt(2), rel=1e-14)
    assert float(cost_rate(sched, 11.0)) == pytest.approx(0.0707, abs=5e-5)


def test_bob_kick_cost_analytic_vs_brute_force():
    g_q, tau = 100.0, 22.142974355881808
    phi1 = phi2 = math.pi / 2
    cfg = LzConfig(tau=tau)
    sched = lz_bob(cfg, bob_pulse(g_q, tau, (phi1, phi2)))
    kick_rate = math.sqrt((0.1**2 + g_q**2) / 2.0)
    expected = (kick_rate * (phi1 + phi2) / g_q
                + (0.1 / math.sqrt(2)) * (tau - (phi1 + phi2) / g_q)) / tau
    assert integrated_cost(sched) == pytest.approx(expected, rel=1e-12)
    t = np.linspace(0, tau, 4_000_001)
    brute = np.trapezoid(cost_rate(sched, t), t) / tau
    assert brute == pytest.approx(expected, rel=1e-3)


def test_bob_reports_failure_away_from_speed_limit():
    # far below tau_QSL no kick pair can reach the target; reported, not raised
    kicks = optimize_bob_kicks(LzConfig(tau=2.0), g_q=100.0, grid=24)
    assert not kicks.success
    assert kicks.fidelity < 0.999


def test_bob_trajectory_final_fidelity():
    gi, gt = reference_states()
    tau = qsl_time(0.1, gi, gt)
    cfg = LzConfig(tau=tau)
    kicks = optimize_bob_kicks(cfg)
    _, rep = run_protocol(cfg, "bob", bob_kicks=kicks)
    assert rep.final_fidelity >= 0.999


# ---------------------------------------------------------------------------
# cost decomposition

def test_decomposition_terms_closed_form():
    cfg = LzConfig(tau=3.0)
    s = np.linspace(0, 1, 11)
    sum_e2, sum_a2 = cd_cost_decomposition(cfg, s)
    ramp = cfg.ramp_or_default()
    g = ramp.value(s * cfg.tau)
    gp = ramp.deriv1(s * cfg.tau) * cfg.tau
    assert np.allclose(sum_e2, (0.1**2 + g**2) / 2.0, rtol=1e-14)
    assert np.allclose(sum_a2, gp**2 * 0.1**2 / (2.0 * (0.1**2 + g**2) ** 2), rtol=1e-14)


@pytest.mark.parametrize("tau", [0.3, 3.0, 30.0])
def test_decomposition_equals_direct_cost(tau):
    cfg = LzConfig(tau=tau)
    c_dec = decomposition_cost(cfg)
    c_dir = integrated_cost(lz_cd(cfg), 8192)
    assert abs(c_dec - c_dir) / c_dir < 1e-6


def test_cd_cost_adiabatic_limit():
    # tau -> infinity: C -> int sqrt((Delta^2+g^2)/2) ds (quadrature oracle)
    cfg = LzConfig(tau=4000.0)
    ramp = cfg.ramp_or_default()
    oracle, _ = quad(lambda s: math.sqrt((0.1**2 + float(ramp.value(s * cfg.tau)) ** 2) / 2.0),
                     0.0, 1.0, limit=200, epsabs=1e-13)
    assert integrated_cost(lz_cd(cfg), 16384) == pytest.approx(oracle, rel=1e-4)


def test_cd_cost_sudden_limit():
    # tau -> 0 with the tan-optimal ramp: C tau -> |c1 Delta| / sqrt(2)
    cfg = LzConfig(tau=1e-3, ramp=blended_ramp_for(LzConfig(tau=1e-3), 1e-3))
    c = integrated_cost(lz_cd(cfg), 16384)
    assert c * 1e-3 == pytest.approx(2.0 * math.atan(2.0) / math.sqrt(2.0), rel=1e-4)


# ---------------------------------------------------------------------------
# scans and crossover

def test_cost_hierarchy_and_crossover():
    cfg = LzConfig(tau=1.0)
    scan = cost_scan(cfg, [0.1, 1.0, 50.0, 100.0])
    assert scan["cd"][0] < scan["lcd"][0]
    assert scan["cd"][1] < scan["lcd"][1]
    assert scan["lcd"][2] < scan["cd"][2]
    assert scan["lcd"][3] < scan["cd"][3]
    tstar = find_cd_lcd_crossover(cfg)
    assert tstar is not None and 1.0 < tstar < 50.0


def test_crossover_moves_left_when_gap_doubles():
    t1 = find_cd_lcd_crossover(LzConfig(tau=1.0, delta=0.1))
    t2 = find_cd_lcd_crossover(LzConfig(tau=1.0, delta=0.2))
    assert t2 < t1


def test_blended_ramp_cost_dominates_quintic():
    cfg = LzConfig(tau=1.0)
    taus = np.geomspace(0.1, 100.0, 9)
    scan = cost_scan(cfg, taus, ("cd", "cd-blend"))
    assert np.all(scan["cd-blend"] <= scan["cd"] + 1e-12)


def test_cost_scan_threaded_matches_serial():
    cfg = LzConfig(tau=1.0)
    taus = [0.5, 2.0, 8.0]
    a = cost_scan(cfg, taus, ("cd", "lcd"), threads=1)
    b = cost_scan(cfg, taus, ("cd", "lcd"), threads=3)
    for key in ("cd", "lcd"):
        assert np.array_equal(a[key], b[key])


def test_bisect_requires_bracket():
    with pytest.raises(ValueError, match="sign change"):
        bisect_sign_change(lambda x: 1.0, 0.0, 1.0)
