from __future__ import annotations

import dataclasses
import math

import pytest

from tunnelkit.constants import CODATA2018, joule_from_nev
from tunnelkit.errors import (
    DomainError,
    OpaqueBracketError,
    PhaseUnwrapError,
    QuadratureError,
    ResonanceValidationError,
    StepError,
)
from tunnelkit.kinematics import BarrierSystem, kinematics
from tunnelkit.phase_time import (
    adaptive_simpson,
    average_phase_time,
    hartman_limit,
    phase_time,
    phase_time_at_resonance,
    phase_time_numeric,
    phase_time_opaque,
)
from tunnelkit.resonance import Resonance, find_resonances, fit_effective_mass

from conftest import neutron_system

M0 = CODATA2018.m_neutron


def free_flight(sys, E: float) -> float:
    kin = kinematics(sys, E)
    return kin.m * sys.L / (kin.hbar * kin.k)


def fitted_neutron():
    sys0 = neutron_system()
    m = fit_effective_mass(
        sys0.a, sys0.U0, sys0.L, joule_from_nev(127.0), (0.5 * M0, 1.5 * M0)
    )
    sys = dataclasses.replace(sys0, m=m)
    (res,) = find_resonances(sys, 1e-3 * sys.U0, 0.999 * sys.U0)
    return sys, res


def hartman_system(qa: float, ql: float = 1.0):
    """Scaled system with E/U0 = 0.1 (so k/q = 1/3), qa and qL as given."""
    base = neutron_system()
    E = 0.1 * base.U0
    q = kinematics(base, E).q
    return dataclasses.replace(base, a=qa / q, L=ql / q), E


def test_vanishing_width_is_free_flight(neutron):
    sys = dataclasses.replace(neutron, a=1e-22)
    E = joule_from_nev(100.0)
    bd = phase_time(sys, E)
    assert bd.total == pytest.approx(free_flight(sys, E), rel=1e-9)
    assert bd.P_value == pytest.approx(sys.L, rel=1e-9)
    assert bd.mod_squared == pytest.approx(1.0, rel=1e-9)


def test_breakdown_is_consistent(neutron):
    E = joule_from_nev(87.0)
    bd = phase_time(neutron, E)
    kin = kinematics(neutron, E)
    assert bd.total == pytest.approx(
        (kin.m / (kin.hbar * kin.k)) * bd.P_value / bd.mod_squared, rel=1e-12
    )
    assert math.isfinite(bd.total)


def test_analytic_matches_numeric_on_grid(neutron):
    (res,) = find_resonances(neutron, 1e-3 * neutron.U0, 0.999 * neutron.U0)
    checked = 0
    for i in range(50):
        E = (0.05 + 0.90 * i / 49) * neutron.U0
        if abs(E - res.E_r) < res.beta / 10.0:
            continue
        analytic = phase_time(neutron, E).total
        numeric = phase_time_numeric(neutron, E, rel_step=1e-6)
        assert analytic == pytest.approx(numeric, rel=1e-6)
        checked += 1
    assert checked >= 48


def test_numeric_free_flight_limit(neutron):
    sys = dataclasses.replace(neutron, a=1e-22)
    E = joule_from_nev(100.0)
    assert phase_time_numeric(sys, E, rel_step=1e-6) == pytest.approx(
        free_flight(sys, E), rel=1e-6
    )


def test_numeric_is_second_order(neutron):
    E = joule_from_nev(60.0)
    exact = phase_time(neutron, E).total
    err_coarse = abs(phase_time_numeric(neutron, E, rel_step=4e-3) - exact)
    err_fine = abs(phase_time_numeric(neutron, E, rel_step=2e-3) - exact)
    assert err_coarse / err_fine == pytest.approx(4.0, rel=0.35)


def test_numeric_step_guard(neutron):
    with pytest.raises(StepError):
        phase_time_numeric(neutron, joule_from_nev(1.0), rel_step=1.5)
    with pytest.raises(StepError):
        phase_time_numeric(neutron, joule_from_nev(229.9), rel_step=1e-2)


def test_numeric_unwrap_guard_near_resonance():
    sys, res = fitted_neutron()
    with pytest.raises(PhaseUnwrapError):
        phase_time_numeric(sys, res.E_r, rel_step=3e-2)


def test_resonance_phase_time_value():
    sys, res = fitted_neutron()
    tau_r = phase_time_at_resonance(sys, res)
    # regression pin; the acceptance suite compares against the reported value
    assert tau_r == pytest.approx(2.8240682137e-7, rel=1e-9)


def test_resonance_closed_form_equals_general_formula():
    sys, res = fitted_neutron()
    assert phase_time_at_resonance(sys, res) == pytest.approx(
        phase_time(sys, res.E_r).total, rel=1e-9
    )


def test_resonance_numeric_cross_check():
    sys, res = fitted_neutron()
    numeric = phase_time_numeric(sys, res.E_r, rel_step=1e-5)
    assert phase_time_at_resonance(sys, res) == pytest.approx(numeric, rel=1e-4)


def test_resonance_delay_exceeds_free_flight():
    sys, res = fitted_neutron()
    assert phase_time_at_resonance(sys, res) > free_flight(sys, res.E_r)


def test_resonance_validation_guard():
    sys, res = fitted_neutron()
    fake = Resonance(E_r=1.07 * res.E_r, k_r=res.k_r, beta=res.beta, index=0)
    with pytest.raises(ResonanceValidationError):
        phase_time_at_resonance(sys, fake)


def test_opaque_limit_at_qa_25():
    sys, E = hartman_system(25.0)
    assert phase_time(sys, E).total == pytest.approx(hartman_limit(sys, E), rel=1e-4)
    assert phase_time_opaque(sys, E) == pytest.approx(hartman_limit(sys, E), rel=1e-6)


def test_opaque_formula_tracks_exact_at_qa_15():
    sys, E = hartman_system(15.0)
    assert phase_time_opaque(sys, E) == pytest.approx(phase_time(sys, E).total, rel=1e-2)


def test_opaque_gap_dependence_bound_at_qa_20():
    sys, E = hartman_system(20.0)
    doubled = dataclasses.replace(sys, L=2 * sys.L)
    kin = kinematics(sys, E)
    qa = kin.q * sys.a
    t1, t2 = phase_time_opaque(sys, E), phase_time_opaque(doubled, E)
    max_second_term = (
        math.exp(-2 * qa) * (4 * kin.m * doubled.L / (kin.hbar * kin.k)) * 10.0
    )
    assert abs(t2 - t1) <= max_second_term


def test_hartman_plateau_bound():
    # |tau(L) - tau(2L)| / tau <= 10 exp(-2qa) on the exact phase-time.
    for qa in (15.0, 20.0, 25.0):
        sys, E = hartman_system(qa)
        doubled = dataclasses.replace(sys, L=2 * sys.L)
        t1 = phase_time(sys, E).total
        t2 = phase_time(doubled, E).total
        assert abs(t2 - t1) / t1 <= 10.0 * math.exp(-2.0 * qa)


def test_opaque_delay_is_positive_bounded_periodic():
    # qa = 12 keeps the exp(-2qa) delay term representable next to the plateau.
    sys, E = hartman_system(12.0)
    kin = kinematics(sys, E)
    t_inf = hartman_limit(sys, E)
    period = math.pi / kin.k
    count = 0
    for i in range(40):
        L = (0.2 + 0.05 * i) / kin.q
        probe = dataclasses.replace(sys, L=L)
        try:
            tau = phase_time_opaque(probe, E)
        except OpaqueBracketError:
            continue
        delay = tau - t_inf
        assert delay > 0.0
        assert delay < 1e-6 * t_inf
        count += 1
        # the bracket has period pi/k in L, so delay/L is periodic
        shifted = dataclasses.replace(sys, L=L + period)
        d2 = phase_time_opaque(shifted, E) - t_inf
        assert d2 / (L + period) == pytest.approx(delay / L, rel=1e-3)
    assert count > 30


def test_opaque_bracket_can_reject(neutron):
    # The phase-time bracket does go negative close to the resonance locus.
    sys, E = hartman_system(20.0)
    kin = kinematics(sys, E)
    hit = False
    for i in range(400):
        probe = dataclasses.replace(sys, L=(0.2 + 0.02 * i) / kin.q)
        try:
            phase_time_opaque(probe, E)
        except OpaqueBracketError:
            hit = True
            break
    assert hit


def test_adaptive_simpson_constant_is_exact():
    assert adaptive_simpson(lambda x: 2.5, 0.0, 3.0) == pytest.approx(7.5, rel=1e-15)


def test_adaptive_simpson_smooth_reference():
    val = adaptive_simpson(math.sin, 0.0, math.pi, rel_tol=1e-9)
    assert val == pytest.approx(2.0, rel=1e-9)


def test_adaptive_simpson_depth_cap_carries_partial():
    wiggle = lambda x: math.sin(1000.0 * x) ** 2
    with pytest.raises(QuadratureError) as err:
        adaptive_simpson(wiggle, 0.0, 1.0, rel_tol=1e-12, max_depth=3)
    assert math.isfinite(err.value.partial)


def test_average_over_resonance_window():
    sys, res = fitted_neutron()
    lo, hi = res.E_r - res.beta, res.E_r + res.beta
    avg = average_phase_time(sys, lo, hi)
    # frozen composite-Simpson (n=20000) oracle of the same integral
    assert avg == pytest.approx(2.235520144108e-7, rel=2e-3)
    n = 512
    h = (hi - lo) / n
    acc = phase_time(sys, lo).total + phase_time(sys, hi).total
    for i in range(1, n):
        acc += phase_time(sys, lo + i * h).total * (4 if i % 2 else 2)
    oracle = acc * h / 3.0 / (hi - lo)
    assert avg == pytest.approx(oracle, rel=1e-3)


def test_average_is_between_extremes():
    sys, res = fitted_neutron()
    lo, hi = res.E_r - res.beta, res.E_r + res.beta
    avg = average_phase_time(sys, lo, hi)
    samples = [phase_time(sys, lo + (hi - lo) * i / 200).total for i in range(201)]
    assert min(samples) <= avg <= max(samples)


def test_average_of_narrow_window_converges_to_peak():
    sys, res = fitted_neutron()
    half = res.beta / 200.0
    avg = average_phase_time(sys, res.E_r - half, res.E_r + half)
    assert avg == pytest.approx(phase_time_at_resonance(sys, res), rel=1e-3)


def test_average_near_free_flight_for_thin_barriers(neutron):
    sys = dataclasses.replace(neutron, a=1e-22)
    E0 = joule_from_nev(100.0)
    lo, hi = E0 * (1 - 1e-9), E0 * (1 + 1e-9)
    assert average_phase_time(sys, lo, hi) == pytest.approx(
        free_flight(sys, E0), rel=1e-8
    )


def test_average_window_validation(neutron):
    with pytest.raises(DomainError):
        average_phase_time(neutron, joule_from_nev(100.0), joule_from_nev(90.0))
    with pytest.raises(DomainError):
        average_phase_time(neutron, joule_from_nev(100.0), 1.2 * neutron.U0)
