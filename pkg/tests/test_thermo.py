import dataclasses
import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import DRAM_MEAN, MULTI_OBJECTIVE, SINGLE_OBJECTIVE, naphtha, water
from dramhx import thermo
from dramhx.errors import (
    DivergedError,
    InfeasibleConfigurationError,
    InfeasibleGeometryError,
    InvalidCaseError,
    ModelWarning,
    TemperatureCrossError,
)
from dramhx.thermo import BOUNDS, CaseSpec, DesignVector, LayoutConfig

# ---------------------------------------------------------------- strategies


@st.composite
def designs(draw):
    """Design vectors anywhere in the box."""
    vals = {}
    for name in DesignVector.NAMES:
        lo, hi = BOUNDS[name]
        vals[name] = draw(st.floats(lo, hi))
    vals["dtb"] *= vals["do"]
    return DesignVector.from_array([vals[n] for n in DesignVector.NAMES])


def size_quietly(x, case, layout=None, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelWarning)
        return thermo.size_exchanger(x, case, layout or LayoutConfig(), **kw)


# ---------------------------------------------------------------- inputs


def test_design_vector_round_trip():
    x = DesignVector(*DRAM_MEAN)
    assert DesignVector.from_array(x.as_array()) == x
    assert x.tube_inner_diameter_m == pytest.approx(0.0234 - 2 * 0.00205)


def test_design_vector_needs_seven_values():
    with pytest.raises(ValueError):
        DesignVector.from_array([1, 2, 3])


def test_bound_violations_names_offenders():
    x = DesignVector(*SINGLE_OBJECTIVE)
    assert thermo.bound_violations(x) == ["dsb"]
    assert thermo.bound_violations(DesignVector(*DRAM_MEAN)) == []
    long = dataclasses.replace(DesignVector(*DRAM_MEAN), tube_length_m=20.0)
    assert thermo.bound_violations(long) == ["L"]


def test_bounds_for_couples_clearance_to_diameter():
    lo, hi = thermo.bounds_for(0.02)
    assert lo[2] == pytest.approx(0.0002)
    assert hi[2] == pytest.approx(0.002)


@pytest.mark.parametrize("field,value", [("mass_flow", 0.0), ("density", -1.0),
                                         ("viscosity", 0.0), ("fouling", -1e-4)])
def test_stream_rejects_nonphysical(field, value):
    with pytest.raises(InvalidCaseError):
        dataclasses.replace(water(), **{field: value})


def test_case_rejects_bad_efficiency():
    with pytest.raises(InvalidCaseError):
        CaseSpec(water(), naphtha(), 16.0, pump_efficiency=1.2)


def test_case_identifies_hot_and_cold(case):
    assert case.hot.fluid == "Naphtha"
    assert case.cold.fluid == "Cooling water"


def test_case_needs_a_hot_stream():
    flat = dataclasses.replace(naphtha(), t_out=114.0)
    with pytest.raises(InvalidCaseError):
        CaseSpec(water(), flat, 16.0)


# ---------------------------------------------------------------- duty, LMTD, F


def test_heat_duty(case):
    Q, residual = thermo.heat_duty(case)
    assert Q == pytest.approx(2.7 * 2646.06 * 74.0, rel=1e-12)
    assert Q == pytest.approx(528_683, abs=1)
    # tube side: 30 * 4186.8 * 4.21 = 528,793 W
    assert residual == pytest.approx(abs(Q - 30 * 4186.8 * 4.21) / Q)
    assert residual < 1e-3


def test_heat_duty_zero_is_invalid():
    # the case itself refuses a stream with no temperature change
    with pytest.raises(InvalidCaseError):
        thermo.heat_duty(CaseSpec(water(), dataclasses.replace(naphtha(), t_out=114.0), 16.0))


def test_lmtd_case_value():
    dt1, dt2 = 114 - 37.21, 40 - 33
    assert thermo.lmtd(114, 40, 33, 37.21) == pytest.approx((dt1 - dt2) / math.log(dt1 / dt2))
    assert thermo.lmtd(114, 40, 33, 37.21) == pytest.approx(29.14, abs=0.005)


def test_lmtd_equal_differences():
    assert thermo.lmtd(50, 30, 20, 40) == 10.0


def test_lmtd_temperature_cross():
    with pytest.raises(TemperatureCrossError):
        thermo.lmtd(50, 40, 45, 55)


@given(st.floats(0.1, 500.0), st.floats(-1e-6, 1e-6).filter(lambda e: e != 0))
def test_lmtd_continuous_at_equal_differences(dt, rel):
    # limit branch (arithmetic mean) vs formula branch one part in 1e6 away
    t_co = 20.0
    near = thermo.lmtd(t_co + dt, 20.0 + dt * (1 + rel), 20.0, t_co)
    assert near == pytest.approx(dt * (1 + rel / 2), rel=1e-9)


@given(st.floats(0.5, 200), st.floats(0.5, 200))
def test_lmtd_between_terminal_differences(dt1, dt2):
    m = thermo.lmtd(100 + dt1, 100 + dt2, 100, 100)
    assert min(dt1, dt2) * (1 - 1e-12) <= m <= max(dt1, dt2) * (1 + 1e-12)


def standard_f(R, S):
    """Textbook one-shell-pass F factor written out directly."""
    root = math.sqrt(R * R + 1)
    num = root * math.log((1 - S) / (1 - R * S))
    den = (R - 1) * math.log((2 - S * (R + 1 - root)) / (2 - S * (R + 1 + root)))
    return num / den


def test_f_correction_case(case):
    R, S = thermo.capacity_ratios(case)
    assert R == pytest.approx(74 / 4.21)
    assert S == pytest.approx(4.21 / 81)
    F = thermo.f_correction(R, S)
    assert F == pytest.approx(standard_f(R, S), rel=1e-12)
    assert 0.8 < F < 1.0
    assert F == pytest.approx(0.9106, abs=5e-4)


def test_f_correction_small_effectiveness():
    assert thermo.f_correction(2.0, 1e-8) == pytest.approx(1.0, abs=1e-6)


def test_f_correction_limit_at_r_equal_one():
    F1 = thermo.f_correction(1.0, 0.5)
    assert 0 < F1 < 1
    assert thermo.f_correction(1 + 1e-6, 0.5) == pytest.approx(F1, rel=1e-6)
    assert thermo.f_correction(1 - 1e-6, 0.5) == pytest.approx(F1, rel=1e-6)


@pytest.mark.parametrize("R,S", [(2.0, 0.6), (0.5, 1.0), (1.0, 0.0), (-1.0, 0.2)])
def test_f_correction_outside_domain(R, S):
    with pytest.raises(InfeasibleConfigurationError):
        thermo.f_correction(R, S)


@given(st.floats(0.05, 20.0), st.floats(0.001, 0.99))
def test_f_correction_in_unit_interval(R, S):
    assume(R * S < 0.95)
    try:
        F = thermo.f_correction(R, S)
    except InfeasibleConfigurationError:
        return  # past the temperature-cross limit of a single shell
    assert 0 < F <= 1


@given(st.floats(1.0, 1e4), st.floats(1e-3, 5.0), st.floats(1e-3, 5.0), st.floats(0.1, 1.0))
def test_area_strictly_decreasing_in_u_and_lmtd(U, dT, grow, F):
    Q = 5e5
    a = thermo.required_area(Q, U, dT, F)
    assert thermo.required_area(Q, U * (1 + grow), dT, F) < a
    assert thermo.required_area(Q, U, dT * (1 + grow), F) < a


# ---------------------------------------------------------------- geometry


def test_geometry_example(layout):
    x = DesignVector(*DRAM_MEAN)
    g = thermo.derive_geometry(x, layout, 37.16)
    assert layout.bundle == (0.249, 2.207)
    assert g.N_t == math.ceil(37.16 / (math.pi * 0.0234 * 4.292)) == 118
    assert g.D_otl == pytest.approx(0.0234 * (118 / 0.249) ** (1 / 2.207))
    assert g.D_otl == pytest.approx(0.3815, abs=5e-4)
    assert g.D_s == pytest.approx(g.D_otl / 0.95 + 0.0034)
    assert g.D_s == pytest.approx(0.405, abs=1e-3)
    assert g.P_t == pytest.approx(1.25 * 0.0234)
    assert g.D_ctl == pytest.approx(g.D_otl - 0.0234)
    assert g.l_c == pytest.approx(0.231 * g.D_s)
    assert g.N_b == math.floor(4.292 / 0.0956) - 1
    assert g.X_t == pytest.approx(g.P_t)
    assert g.X_l == pytest.approx(math.sqrt(3) / 2 * g.P_t)


def test_bundle_diameter_unit_ratio():
    assert thermo.bundle_diameter(0.02, 0.249, 0.249, 2.207) == pytest.approx(0.02)


def test_half_cut_window_angle():
    theta = thermo.window_angle(0.5, 0.25, 0.5)
    assert theta == pytest.approx(math.pi)
    assert thermo.crossflow_fraction(theta) == pytest.approx(0.0, abs=1e-15)


def test_geometry_rejects_tiny_bundle():
    x = DesignVector(*DRAM_MEAN)
    lay = LayoutConfig(bundle=(1000.0, 2.2))
    with pytest.raises(InfeasibleGeometryError):
        thermo.derive_geometry(x, lay, 1.0)


def test_geometry_rejects_non_positive_area(layout):
    with pytest.raises(InfeasibleGeometryError):
        thermo.derive_geometry(DesignVector(*DRAM_MEAN), layout, 0.0)


@given(designs(), st.floats(1.0, 400.0))
def test_geometry_invariants(x, area):
    try:
        g = thermo.derive_geometry(x, LayoutConfig(), area)
    except InfeasibleGeometryError:
        return
    d, L = x.tube_outer_diameter_m, x.tube_length_m
    assert g.N_t >= 1
    assert math.pi * d * L * g.N_t >= area * (1 - 1e-12)
    assert area > math.pi * d * L * (g.N_t - 1)
    assert g.D_s > g.D_otl > g.D_ctl > 0
    assert 0 <= g.F_c <= 1
    assert 0 <= g.theta_ctl <= 2 * math.pi
    for a in (g.A_o_cr, g.A_o_sb, g.A_o_tb, g.A_o_bp, g.A_o_w):
        assert a > 0


# ---------------------------------------------------------------- film coefficients


def test_prandtl_numbers(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    tube = thermo.tube_htc(dram_mean, case, g, layout)
    shell = thermo.shell_htc(dram_mean, case, layout, g)
    assert tube.Pr_t == pytest.approx(4186.8 * 0.00071 / 0.63)
    assert tube.Pr_t == pytest.approx(4.72, abs=0.005)
    assert shell.Pr_s == pytest.approx(2646.06 * 3.7e-4 / 0.11)
    assert shell.Pr_s == pytest.approx(8.90, abs=0.005)


def test_tube_velocity_halves_with_double_tube_count(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    g2 = dataclasses.replace(g, N_t=2 * g.N_t)
    v1 = thermo.tube_htc(dram_mean, case, g, layout).V_t
    v2 = thermo.tube_htc(dram_mean, case, g2, layout).V_t
    assert v2 == pytest.approx(v1 / 2, rel=1e-14)


def test_tube_htc_warns_when_laminar(layout, dram_mean):
    slow = dataclasses.replace(water(), mass_flow=0.05)
    case = CaseSpec(slow, naphtha(), 16.0)
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    with pytest.warns(ModelWarning):
        thermo.tube_htc(dram_mean, case, g, layout)


def test_shell_reynolds_definition(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    assert thermo.shell_reynolds(case, dram_mean, g) == pytest.approx(
        2.7 * 0.0234 / (3.7e-4 * g.A_o_cr))


def test_band_clamping_warns(layout):
    with pytest.warns(ModelWarning):
        band = thermo.select_band(layout.jf, 5e6)
    assert band is layout.jf[-1]


def test_baffle_cut_factor_no_window_tubes():
    # 0.55 + 0.72 * 0.625 = 1.0
    assert 0.55 + 0.72 * 0.625 == pytest.approx(1.0)


def test_bypass_factor_sealing_strips():
    assert thermo.bypass_factor(0.3, 0.5, 5000) == 1.0
    assert thermo.bypass_factor(0.3, 0.7, 50) == 1.0


def test_bypass_factor_constant_switch():
    assert thermo.bypass_factor(0.2, 0.0, 100) == pytest.approx(math.exp(-1.35 * 0.2))
    assert thermo.bypass_factor(0.2, 0.0, 101) == pytest.approx(math.exp(-1.25 * 0.2))


def test_leakage_factor_limits():
    assert thermo.leakage_factor(1.0, 0.0) == 1.0
    assert thermo.leakage_factor(0.0, 0.0) == 1.0
    assert thermo.leakage_factor(1.0, 0.3) == pytest.approx(math.exp(-0.66))


@given(st.floats(0.0, 1.0), st.floats(1e-9, 5.0), st.floats(0.0, 5.0),
       st.floats(0.0, 0.499), st.floats(1.0, 1e6))
def test_correction_factor_bounds(r_s, r_lm, r_b, nss, Re):
    J_l = thermo.leakage_factor(r_s, r_lm)
    J_b = thermo.bypass_factor(r_b, nss, Re)
    assert 0 < J_l <= 1
    assert 0 < J_b <= 1


@given(st.floats(0.0, 0.833))
def test_baffle_cut_factor_range(F_c):
    assert 0.55 <= 0.55 + 0.72 * F_c <= 1.15


# ---------------------------------------------------------------- overall coefficient


def test_overall_u_clean_thin_wall(dram_mean):
    clean_t = dataclasses.replace(water(), fouling=0.0)
    clean_s = dataclasses.replace(naphtha(), fouling=0.0)
    case = CaseSpec(clean_t, clean_s, math.inf)
    x = dataclasses.replace(dram_mean, tube_wall_thickness_m=1e-12)
    U = thermo.overall_u(800.0, 1200.0, case, x)
    assert U == pytest.approx(1 / (1 / 800 + 1 / 1200), rel=1e-9)


def test_overall_u_golden():
    case = CaseSpec(water(), naphtha(), 55.0)
    x = DesignVector(0.1, 0.25, 0.0003, 0.004, 4.0, 0.0234, 0.00205)
    d_o, d_i = 0.0234, 0.0193
    expected = 1 / (1 / 1000 + 0.0002 + d_o * math.log(d_o / d_i) / (2 * 55)
                    + 0.0004 * d_o / d_i + d_o / (d_i * 1000))
    assert thermo.overall_u(1000.0, 1000.0, case, x) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(340.3, abs=0.1)


@given(st.floats(10, 1e5), st.floats(10, 1e5))
def test_overall_u_below_film_coefficients(h_s, h_i):
    case = CaseSpec(water(), naphtha(), 16.0)
    x = DesignVector(*DRAM_MEAN)
    U = thermo.overall_u(h_s, h_i, case, x)
    assert U < h_s
    assert U < h_i * x.tube_inner_diameter_m / x.tube_outer_diameter_m


# ---------------------------------------------------------------- pressure drop


def test_tube_friction_value():
    assert thermo.tube_friction(1e4) == pytest.approx(0.046 * 1e4 ** -0.2)
    assert thermo.tube_friction(1e4) == pytest.approx(0.007291, abs=5e-7)


def test_tube_dp_no_flow(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    assert thermo.tube_dp(dram_mean, case, g, layout, 1e4, 0.0)[1] == 0.0


def test_tube_dp_linear_in_passes(case, dram_mean):
    lay2 = LayoutConfig(n_passes=2)
    lay4 = LayoutConfig(n_passes=4, bundle=lay2.bundle)
    g = thermo.derive_geometry(dram_mean, lay2, 37.16)
    dp2 = thermo.tube_dp(dram_mean, case, g, lay2, 2e4, 1.1)[1]
    dp4 = thermo.tube_dp(dram_mean, case, g, lay4, 2e4, 1.1)[1]
    assert dp4 == pytest.approx(2 * dp2, rel=1e-14)


def test_shell_dp_equal_spacing(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    Re = thermo.shell_reynolds(case, dram_mean, g)
    drop = thermo.shell_dp(dram_mean, case, layout, g, Re)
    assert drop.zeta_s == 2.0
    assert 0 < drop.zeta_b <= 1
    assert 0 < drop.zeta_l <= 1
    # recompose the total from its parts
    N_b = g.N_b
    total = ((N_b - 1) * drop.dP_b_id * drop.zeta_b + N_b * drop.dP_w_id) * drop.zeta_l \
        + 2 * drop.dP_b_id * (1 + g.N_r_cw / g.N_r_cc) * drop.zeta_b * 2.0
    assert drop.dP_s == pytest.approx(total, rel=1e-14)


def test_shell_dp_sealing_strips_remove_bypass_penalty(case, dram_mean):
    lay = LayoutConfig(sealing_strip_pairs=50)
    g = thermo.derive_geometry(dram_mean, lay, 37.16)
    drop = thermo.shell_dp(dram_mean, case, lay, g, thermo.shell_reynolds(case, dram_mean, g))
    assert g.N_ss_plus >= 0.5
    assert drop.zeta_b == 1.0


def test_shell_dp_leakage_limit(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    g0 = dataclasses.replace(g, r_s=0.0, r_lm=0.0)
    drop = thermo.shell_dp(dram_mean, case, layout, g0, 5000.0)
    assert drop.zeta_l == 1.0


def test_pumping_power_example(case):
    P = thermo.pumping_power(8600, 22600, case)
    assert P == pytest.approx((8600 * 30 / 1000 + 22600 * 2.7 / 656) / 0.85)
    assert P == pytest.approx(413, abs=1)
    assert thermo.pumping_power(0, 0, case) == 0


def test_pumping_power_efficiency_scaling():
    ideal = CaseSpec(water(), naphtha(), 16.0, pump_efficiency=1.0)
    real = CaseSpec(water(), naphtha(), 16.0, pump_efficiency=0.85)
    assert thermo.pumping_power(8600, 22600, ideal) / thermo.pumping_power(8600, 22600, real) \
        == pytest.approx(0.85, rel=1e-15)


@given(st.floats(0, 1e6), st.floats(0, 1e6), st.floats(1e-3, 1e3))
def test_pumping_power_linear_in_pressure(dp_t, dp_s, k):
    case = CaseSpec(water(), naphtha(), 16.0)
    assert thermo.pumping_power(k * dp_t, k * dp_s, case) == pytest.approx(
        k * thermo.pumping_power(dp_t, dp_s, case), rel=1e-12, abs=1e-300)


# ---------------------------------------------------------------- full sizing


def test_size_exchanger_converges(case, layout, dram_mean):
    r = thermo.size_exchanger(dram_mean, case, layout)
    assert r.converged
    assert r.iterations <= 100
    assert r.A_o == pytest.approx(r.Q / (r.U_o * r.dT_lm * r.F), rel=1e-5)
    assert r.J_s == r.J_r == 1.0
    assert r.h_s == pytest.approx(r.h_id * r.J_c * r.J_l * r.J_b)


def test_size_exchanger_deterministic(case, layout, dram_mean):
    assert thermo.size_exchanger(dram_mean, case, layout) == \
        thermo.size_exchanger(dram_mean, case, layout)


def test_size_exchanger_attaches_design_to_errors(case, dram_mean):
    lay = LayoutConfig(bundle=(1e6, 2.2))
    with pytest.raises(InfeasibleGeometryError) as info:
        thermo.size_exchanger(dram_mean, case, lay)
    assert info.value.design == dram_mean


def test_size_exchanger_iteration_cap(case, layout, dram_mean):
    with pytest.raises(DivergedError) as info:
        thermo.size_exchanger(dram_mean, case, layout, max_iter=1)
    assert info.value.last is not None


def test_f_correction_can_be_disabled(case, dram_mean):
    on = thermo.size_exchanger(dram_mean, case, LayoutConfig())
    off = thermo.size_exchanger(dram_mean, case, LayoutConfig(f_correction_enabled=False))
    assert off.F == 1.0
    assert off.A_o < on.A_o


@pytest.mark.parametrize("column", [SINGLE_OBJECTIVE, MULTI_OBJECTIVE, DRAM_MEAN])
def test_reference_columns_are_sizable(case, layout, column):
    r = thermo.size_exchanger(DesignVector(*column), case, layout)
    assert 20 < r.A_o < 80
    assert r.dP_s > 0 and r.dP_t > 0


@given(designs())
def test_sizing_result_invariants(x):
    case = CaseSpec(water(), naphtha(), 16.0)
    try:
        r = size_quietly(x, case)
    except (InfeasibleGeometryError, DivergedError):
        return
    assert r.A_o > 0
    assert r.dP_s >= 0 and r.dP_t >= 0
    assert 0 < r.F <= 1
    for J in (r.J_c, r.J_l, r.J_b, r.J_s, r.J_r):
        assert 0 < J <= 1.2
    assert 0 < r.zeta_b <= 1 and 0 < r.zeta_l <= 1
    assert r.zeta_s == 2.0
    d_ratio = x.tube_inner_diameter_m / x.tube_outer_diameter_m
    assert r.U_o < min(r.h_s, r.h_i * d_ratio)


@given(designs())
def test_fixed_point_idempotence(x):
    case = CaseSpec(water(), naphtha(), 16.0)
    try:
        r = size_quietly(x, case)
    except (InfeasibleGeometryError, DivergedError):
        return
    again = size_quietly(x, case, u_guess=r.U_o)
    assert again.iterations <= 2
    assert again.geometry.N_t == r.geometry.N_t


def test_energy_balance_within_tenth_percent(case):
    assert thermo.heat_duty(case)[1] < 1e-3


def test_layouts_and_pass_counts(case, dram_mean):
    for angle in (30, 45, 90):
        for passes in (1, 2, 4):
            r = size_quietly(dram_mean, case, LayoutConfig(n_passes=passes, layout_angle=angle))
            assert r.A_o > 0


def test_layout_rejects_unknown_angle():
    with pytest.raises(ValueError):
        LayoutConfig(layout_angle=60)


def test_scalar_inputs_are_plain_floats(case, layout, dram_mean):
    r = thermo.size_exchanger(dram_mean, case, layout)
    assert isinstance(r.A_o, float) and not isinstance(r.A_o, np.floating)


def test_baffle_cut_factor_capped(case, layout, dram_mean):
    g = thermo.derive_geometry(dram_mean, layout, 37.16)
    loose = dataclasses.replace(g, F_c=0.95)
    assert thermo.shell_htc(dram_mean, case, layout, loose).J_c == thermo.J_C_MAX
