"""Bell-Delaware thermal-hydraulic sizing of a shell-and-tube exchanger.

Everything here is a pure function of its arguments.  Temperatures are in
degrees Celsius on input; every other quantity is SI.  The entry point is
:func:`size_exchanger`, which iterates area -> tube count -> geometry ->
film coefficients -> overall coefficient until the required area stops
changing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .errors import (
    DesignError,
    DivergedError,
    InfeasibleConfigurationError,
    InfeasibleGeometryError,
    InvalidCaseError,
    ModelWarning,
    TemperatureCrossError,
)
from .tables import JFBand, load_tables

SQRT3_2 = math.sqrt(3.0) / 2.0
PITCH_RATIO = 1.25
LAMINAR_RE = 2300.0
# Baffle-cut factor ceiling.  The linear fit overshoots it only for very
# shallow cuts in loosely packed shells.
J_C_MAX = 1.2


# --------------------------------------------------------------------------
# inputs

@dataclass(frozen=True)
class DesignVector:
    """The seven sampled design variables."""

    baffle_spacing_m: float
    baffle_cut_frac: float
    tube_baffle_clearance_m: float
    shell_baffle_clearance_m: float
    tube_length_m: float
    tube_outer_diameter_m: float
    tube_wall_thickness_m: float

    NAMES: ClassVar[tuple[str, ...]] = ("Lbc", "Bc", "dtb", "dsb", "L", "do", "t")

    @property
    def tube_inner_diameter_m(self) -> float:
        return self.tube_outer_diameter_m - 2.0 * self.tube_wall_thickness_m

    def as_array(self) -> np.ndarray:
        return np.array([self.baffle_spacing_m, self.baffle_cut_frac,
                         self.tube_baffle_clearance_m, self.shell_baffle_clearance_m,
                         self.tube_length_m, self.tube_outer_diameter_m,
                         self.tube_wall_thickness_m])

    @classmethod
    def from_array(cls, values) -> "DesignVector":
        vals = [float(v) for v in values]
        if len(vals) != 7:
            raise ValueError(f"a design vector has 7 components, got {len(vals)}")
        return cls(*vals)


# Box ranges for each design variable.  The tube-to-baffle clearance is
# given as a fraction of the tube outer diameter.
BOUNDS = {
    "Lbc": (0.0508, 0.2540),
    "Bc": (0.15, 0.45),
    "dtb": (0.01, 0.1),
    "dsb": (0.0032, 0.011),
    "L": (2.438, 11.58),
    "do": (0.01588, 0.0508),
    "t": (0.001651, 0.004572),
}


def bounds_for(d_o: float) -> tuple[np.ndarray, np.ndarray]:
    """Lower/upper bound arrays with the clearance range resolved at ``d_o``."""
    lo = np.array([BOUNDS[n][0] for n in DesignVector.NAMES])
    hi = np.array([BOUNDS[n][1] for n in DesignVector.NAMES])
    lo[2] *= d_o
    hi[2] *= d_o
    return lo, hi


def bound_violations(x: DesignVector, rtol: float = 1e-9) -> list[str]:
    """Names of the components of ``x`` lying outside the box."""
    lo, hi = bounds_for(x.tube_outer_diameter_m)
    vals = x.as_array()
    out = []
    for name, v, a, b in zip(DesignVector.NAMES, vals, lo, hi):
        slack = rtol * max(abs(a), abs(b))
        if not (a - slack <= v <= b + slack):
            out.append(name)
    if x.tube_inner_diameter_m <= 0:
        out.append("t")
    return out


@dataclass(frozen=True)
class StreamSpec:
    fluid: str
    mass_flow: float
    t_in: float
    t_out: float
    density: float
    heat_capacity: float
    viscosity: float
    conductivity: float
    design_pressure: float
    fouling: float
    material: str = "carbon steel"

    def __post_init__(self):
        for name in ("mass_flow", "density", "heat_capacity", "viscosity",
                     "conductivity"):
            if not getattr(self, name) > 0:
                raise InvalidCaseError(f"{self.fluid}: {name} must be positive")
        if self.fouling < 0:
            raise InvalidCaseError(f"{self.fluid}: fouling resistance must be >= 0")


@dataclass(frozen=True)
class CaseSpec:
    """Process data: the tube-side and shell-side streams plus wall/pump data."""

    tube: StreamSpec
    shell: StreamSpec
    wall_conductivity: float
    pump_efficiency: float = 0.85

    def __post_init__(self):
        if not self.wall_conductivity > 0:
            raise InvalidCaseError("wall conductivity must be positive")
        if not 0 < self.pump_efficiency <= 1:
            raise InvalidCaseError("pump efficiency must lie in (0, 1]")
        hot, cold = self.hot, self.cold  # raises on an ambiguous case
        if hot is cold:
            raise InvalidCaseError("one stream must be heated and the other cooled")

    @property
    def hot(self) -> StreamSpec:
        if self.shell.t_in > self.shell.t_out:
            return self.shell
        if self.tube.t_in > self.tube.t_out:
            return self.tube
        raise InvalidCaseError("neither stream is cooled (T_in > T_out)")

    @property
    def cold(self) -> StreamSpec:
        if self.tube.t_out > self.tube.t_in:
            return self.tube
        if self.shell.t_out > self.shell.t_in:
            return self.shell
        raise InvalidCaseError("neither stream is heated (T_out > T_in)")


@dataclass(frozen=True)
class LayoutConfig:
    """Fixed layout choices and solver settings.

    ``bundle`` (K1, n1) and ``jf`` default to the bundled coefficient file
    for the chosen pass count and layout angle.
    """

    n_passes: int = 2
    layout_angle: int = 30
    sealing_strip_pairs: int = 0
    pass_partition_width_m: float = 0.0
    f_correction_enabled: bool = True
    initial_u: float = 500.0
    bundle: tuple[float, float] | None = None
    jf: tuple[JFBand, ...] | None = None
    table_path: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_passes < 1:
            raise ValueError("n_passes must be >= 1")
        if self.layout_angle not in (30, 45, 90):
            raise ValueError("layout_angle must be 30, 45 or 90 degrees")
        tables = None
        if self.bundle is None or self.jf is None:
            tables = load_tables(self.table_path)
        if self.bundle is None:
            object.__setattr__(self, "bundle",
                               tables.bundle_constants(self.layout_angle, self.n_passes))
        if self.jf is None:
            object.__setattr__(self, "jf", tables.bands(self.layout_angle))
        if not (self.bundle[0] > 0 and self.bundle[1] > 0):
            raise ValueError("bundle constants K1, n1 must be positive")

    @property
    def pitch_factors(self) -> tuple[float, float]:
        """(X_t, X_l) as multiples of the tube pitch."""
        if self.layout_angle == 30:
            return 1.0, SQRT3_2
        if self.layout_angle == 45:
            return math.sqrt(2.0), 1.0 / math.sqrt(2.0)
        return 1.0, 1.0


# --------------------------------------------------------------------------
# outputs

@dataclass(frozen=True)
class Geometry:
    P_t: float
    N_t: int
    D_otl: float
    D_ctl: float
    D_s: float
    l_c: float
    X_t: float
    X_l: float
    N_b: int
    N_r_cc: float
    N_r_cw: float
    theta_ctl: float
    F_w: float
    F_c: float
    A_o_cr: float
    A_o_sb: float
    A_o_tb: float
    A_o_bp: float
    A_o_w: float
    r_s: float
    r_lm: float
    r_b: float
    N_ss_plus: float


@dataclass(frozen=True)
class ShellSide:
    Re_s: float
    Pr_s: float
    j: float
    h_id: float
    J_c: float
    J_l: float
    J_b: float
    J_s: float
    J_r: float
    h_s: float


@dataclass(frozen=True)
class TubeSide:
    V_t: float
    Re_t: float
    Pr_t: float
    h_i: float


@dataclass(frozen=True)
class ShellDrop:
    f_id: float
    dP_b_id: float
    dP_w_id: float
    zeta_b: float
    zeta_l: float
    zeta_s: float
    dP_s: float


@dataclass(frozen=True)
class SizingResult:
    Q: float
    dT_lm: float
    R: float
    S: float
    F: float
    Re_s: float
    Re_t: float
    Pr_s: float
    Pr_t: float
    V_t: float
    j: float
    h_id: float
    J_c: float
    J_l: float
    J_b: float
    J_s: float
    J_r: float
    h_s: float
    h_i: float
    U_o: float
    A_o: float
    f_id: float
    f: float
    dP_b_id: float
    dP_w_id: float
    zeta_b: float
    zeta_l: float
    zeta_s: float
    dP_s: float
    dP_t: float
    P_st: float
    geometry: Geometry
    converged: bool
    iterations: int


# --------------------------------------------------------------------------
# duty and temperature driving force

def heat_duty(case: CaseSpec) -> tuple[float, float]:
    """Hot-side duty in W and the relative hot/cold imbalance."""
    hot, cold = case.hot, case.cold
    q_hot = hot.mass_flow * hot.heat_capacity * (hot.t_in - hot.t_out)
    q_cold = cold.mass_flow * cold.heat_capacity * (cold.t_out - cold.t_in)
    if not (q_hot > 0 and q_cold > 0):
        raise InvalidCaseError("heat duty must be positive on both sides")
    return q_hot, abs(q_hot - q_cold) / q_hot


def lmtd(t_hi: float, t_ho: float, t_ci: float, t_co: float) -> float:
    """Counter-current log-mean temperature difference."""
    dt1 = t_hi - t_co
    dt2 = t_ho - t_ci
    if dt1 <= 0 or dt2 <= 0:
        raise TemperatureCrossError(
            f"terminal temperature differences must be positive (got {dt1:g}, {dt2:g})")
    diff = dt1 - dt2
    if abs(diff) <= 1e-12 * max(dt1, dt2):
        return 0.5 * (dt1 + dt2)
    return diff / math.log1p(diff / dt2)


def capacity_ratios(case: CaseSpec) -> tuple[float, float]:
    hot, cold = case.hot, case.cold
    R = (hot.t_in - hot.t_out) / (cold.t_out - cold.t_in)
    S = (cold.t_out - cold.t_in) / (hot.t_in - cold.t_in)
    return R, S


def f_correction(R: float, S: float) -> float:
    """LMTD correction for one shell pass and an even number of tube passes."""
    if not (0 < S < 1) or R < 0 or R * S >= 1:
        raise InfeasibleConfigurationError(
            f"F factor undefined for R={R:g}, S={S:g}")
    root = math.sqrt(R * R + 1.0)
    top = 2.0 - S * (R + 1.0 - root)
    bottom = 2.0 - S * (R + 1.0 + root)
    if top <= 0 or bottom <= 0 or top <= bottom:
        raise InfeasibleConfigurationError(
            f"F factor log argument non-positive for R={R:g}, S={S:g}")
    if abs(R - 1.0) < 1e-9:
        F = root * (S / (1.0 - S)) / math.log(top / bottom)
    else:
        # ln((1-S)/(1-RS)) / (R-1), kept well conditioned near R = 1
        ratio = math.log1p(S * (R - 1.0) / (1.0 - R * S)) / (R - 1.0)
        F = root * ratio / math.log(top / bottom)
    if not (0 < F <= 1.0 + 1e-12):
        raise InfeasibleConfigurationError(f"F = {F:g} outside (0, 1]")
    return min(F, 1.0)


def required_area(Q: float, U: float, dT_lm: float, F: float = 1.0) -> float:
    """Outer area needed to move ``Q`` watts."""
    if not (U > 0 and dT_lm > 0 and F > 0):
        raise ValueError("U, LMTD and F must be positive")
    return Q / (U * dT_lm * F)


# --------------------------------------------------------------------------
# geometry

def tube_count(area: float, d_o: float, length: float) -> int:
    return math.ceil(area / (math.pi * d_o * length))


def bundle_diameter(d_o: float, n_tubes: float, K1: float, n1: float) -> float:
    return d_o * (n_tubes / K1) ** (1.0 / n1)


def window_angle(D_s: float, l_c: float, D_ctl: float) -> float:
    """Angle subtended at the shell centre by the baffle cut on the D_ctl circle."""
    arg = (D_s - 2.0 * l_c) / D_ctl
    return 2.0 * math.acos(min(1.0, max(-1.0, arg)))


def crossflow_fraction(theta_ctl: float) -> float:
    return 1.0 - theta_ctl / math.pi + math.sin(theta_ctl) / math.pi


def derive_geometry(x: DesignVector, layout: LayoutConfig, area: float) -> Geometry:
    if not area > 0:
        raise InfeasibleGeometryError(f"area must be positive, got {area:g}", x)
    d_o = x.tube_outer_diameter_m
    L_bc = x.baffle_spacing_m
    B_c = x.baffle_cut_frac
    K1, n1 = layout.bundle

    P_t = PITCH_RATIO * d_o
    N_t = tube_count(area, d_o, x.tube_length_m)
    if N_t < 1:
        raise InfeasibleGeometryError("fewer than one tube", x)
    D_otl = bundle_diameter(d_o, N_t, K1, n1)
    D_s = D_otl / 0.95 + x.shell_baffle_clearance_m
    D_ctl = D_otl - d_o
    if D_ctl <= 0:
        raise InfeasibleGeometryError(f"tube bundle too small (D_ctl = {D_ctl:g} m)", x)
    l_c = B_c * D_s
    if not 0 < 2.0 * l_c < D_s:
        raise InfeasibleGeometryError(f"baffle cut {B_c:g} outside (0, 0.5)", x)

    ft, fl = layout.pitch_factors
    X_t, X_l = ft * P_t, fl * P_t

    theta_ctl = window_angle(D_s, l_c, D_ctl)
    F_c = crossflow_fraction(theta_ctl)
    F_w = 0.5 * (1.0 - F_c)

    N_r_cc = (D_s - 2.0 * l_c) / X_l
    N_r_cw = 0.8 * l_c / X_l
    A_o_cr = (D_s - D_otl + D_ctl / X_t * (X_t - d_o)) * L_bc
    A_o_bp = L_bc * (D_s - D_otl + 0.5 * layout.n_passes * layout.pass_partition_width_m)

    d_tb = x.tube_baffle_clearance_m
    A_o_tb = 0.25 * math.pi * ((d_o + d_tb) ** 2 - d_o * d_o) * N_t * (1.0 - F_w)
    theta_ds = 2.0 * math.acos(1.0 - 2.0 * B_c)
    A_o_sb = math.pi * D_s * 0.5 * x.shell_baffle_clearance_m * (1.0 - theta_ds / (2.0 * math.pi))
    window_gross = 0.25 * D_s * D_s * (0.5 * theta_ds - (1.0 - 2.0 * B_c) * math.sin(0.5 * theta_ds))
    A_o_w = window_gross - F_w * N_t * 0.25 * math.pi * d_o * d_o

    if A_o_cr <= 0 or A_o_w <= 0 or A_o_sb + A_o_tb <= 0:
        raise InfeasibleGeometryError("non-positive shell-side flow area", x)

    N_b = max(1, math.floor(x.tube_length_m / L_bc) - 1)

    return Geometry(
        P_t=P_t, N_t=N_t, D_otl=D_otl, D_ctl=D_ctl, D_s=D_s, l_c=l_c,
        X_t=X_t, X_l=X_l, N_b=N_b, N_r_cc=N_r_cc, N_r_cw=N_r_cw,
        theta_ctl=theta_ctl, F_w=F_w, F_c=F_c,
        A_o_cr=A_o_cr, A_o_sb=A_o_sb, A_o_tb=A_o_tb, A_o_bp=A_o_bp, A_o_w=A_o_w,
        r_s=A_o_sb / (A_o_sb + A_o_tb),
        r_lm=(A_o_sb + A_o_tb) / A_o_cr,
        r_b=A_o_bp / A_o_cr,
        N_ss_plus=layout.sealing_strip_pairs / N_r_cc,
    )


# --------------------------------------------------------------------------
# heat transfer

def select_band(bands: tuple[JFBand, ...], Re: float) -> JFBand:
    for band in bands:
        if band.re_lo <= Re < band.re_hi:
            return band
    warnings.warn(f"shell-side Re = {Re:.4g} outside the coefficient table; "
                  "using the nearest band", ModelWarning, stacklevel=3)
    return bands[-1] if Re >= bands[-1].re_hi else bands[0]


def colburn_j(band: JFBand, Re: float, pitch_ratio: float = PITCH_RATIO) -> float:
    a = band.a3 / (1.0 + 0.14 * Re ** band.a4)
    return band.a1 * (1.33 / pitch_ratio) ** a * Re ** band.a2


def ideal_friction(band: JFBand, Re: float, pitch_ratio: float = PITCH_RATIO) -> float:
    b = band.b3 / (1.0 + 0.14 * Re ** band.b4)
    return band.b1 * (1.33 / pitch_ratio) ** b * Re ** band.b2


def leakage_factor(r_s: float, r_lm: float) -> float:
    c = 0.44 * (1.0 - r_s)
    return c + (1.0 - c) * math.exp(-2.2 * r_lm)


def bypass_factor(r_b: float, n_ss_plus: float, Re_s: float) -> float:
    if n_ss_plus >= 0.5:
        return 1.0
    C = 1.35 if Re_s <= 100 else 1.25
    return math.exp(-C * r_b * (1.0 - (2.0 * n_ss_plus) ** (1.0 / 3.0)))


def shell_reynolds(case: CaseSpec, x: DesignVector, geom: Geometry) -> float:
    return case.shell.mass_flow * x.tube_outer_diameter_m / (case.shell.viscosity * geom.A_o_cr)


def shell_htc(x: DesignVector, case: CaseSpec, layout: LayoutConfig, geom: Geometry) -> ShellSide:
    sh = case.shell
    Re = shell_reynolds(case, x, geom)
    Pr = sh.heat_capacity * sh.viscosity / sh.conductivity
    j = colburn_j(select_band(layout.jf, Re), Re)
    h_id = j * sh.mass_flow * sh.heat_capacity * Pr ** (-2.0 / 3.0) / geom.A_o_cr
    J_c = min(0.55 + 0.72 * geom.F_c, J_C_MAX)
    J_l = leakage_factor(geom.r_s, geom.r_lm)
    J_b = bypass_factor(geom.r_b, geom.N_ss_plus, Re)
    # equal inlet/central/outlet spacing and no laminar gradient correction
    J_s = J_r = 1.0
    h_s = h_id * J_c * J_l * J_b * J_s * J_r
    return ShellSide(Re, Pr, j, h_id, J_c, J_l, J_b, J_s, J_r, h_s)


def tube_htc(x: DesignVector, case: CaseSpec, geom: Geometry, layout: LayoutConfig) -> TubeSide:
    tb = case.tube
    d_i = x.tube_inner_diameter_m
    if not d_i > 0 or geom.N_t < 1:
        raise InfeasibleGeometryError("tube bore or tube count non-positive", x)
    V = layout.n_passes / geom.N_t * tb.mass_flow / (0.25 * math.pi * d_i * d_i * tb.density)
    Re = tb.density * V * d_i / tb.viscosity
    Pr = tb.heat_capacity * tb.viscosity / tb.conductivity
    if Re < LAMINAR_RE:
        warnings.warn(f"tube-side Re = {Re:.4g} is laminar; turbulent correlation "
                      "applied anyway", ModelWarning, stacklevel=2)
    h_i = 0.023 * tb.conductivity / d_i * Pr ** (1.0 / 3.0) * Re ** 0.8
    return TubeSide(V, Re, Pr, h_i)


def overall_u(h_s: float, h_i: float, case: CaseSpec, x: DesignVector) -> float:
    """Overall coefficient referred to the tube outer surface."""
    if not (h_s > 0 and h_i > 0):
        raise ValueError("film coefficients must be positive")
    d_o = x.tube_outer_diameter_m
    d_i = x.tube_inner_diameter_m
    k_w = case.wall_conductivity
    ratio = d_o / d_i
    wall = d_o * math.log(ratio) / (2.0 * k_w) if math.isfinite(k_w) else 0.0
    resistance = (1.0 / h_s + case.shell.fouling + wall
                  + case.tube.fouling * ratio + ratio / h_i)
    return 1.0 / resistance


# --------------------------------------------------------------------------
# pressure drop

def shell_dp(x: DesignVector, case: CaseSpec, layout: LayoutConfig, geom: Geometry,
             Re_s: float) -> ShellDrop:
    if geom.N_b < 1:
        raise InfeasibleGeometryError("need at least one baffle", x)
    sh = case.shell
    f_id = ideal_friction(select_band(layout.jf, Re_s), Re_s)
    G = sh.mass_flow / geom.A_o_cr
    dP_b = 4.0 * f_id * G * G * geom.N_r_cc / (2.0 * sh.density)
    dP_w = (2.0 + 0.6 * geom.N_r_cw) * sh.mass_flow ** 2 / (2.0 * sh.density * geom.A_o_cr * geom.A_o_w)

    if geom.N_ss_plus >= 0.5:
        zeta_b = 1.0
    else:
        zeta_b = math.exp(-2.7 * geom.r_b * (1.0 - (2.0 * geom.N_ss_plus) ** (1.0 / 3.0)))
    p = -0.15 * (1.0 + geom.r_s) + 0.8
    zeta_l = math.exp(-1.33 * (1.0 + geom.r_s) * geom.r_lm ** p)
    # all three spacings equal, so both end-zone ratios are 1
    zeta_s = 1.0 ** 1.8 + 1.0 ** 1.8

    N_b = geom.N_b
    dP_s = ((N_b - 1) * dP_b * zeta_b + N_b * dP_w) * zeta_l \
        + 2.0 * dP_b * (1.0 + geom.N_r_cw / geom.N_r_cc) * zeta_b * zeta_s
    return ShellDrop(f_id, dP_b, dP_w, zeta_b, zeta_l, zeta_s, dP_s)


def tube_friction(Re_t: float) -> float:
    if not Re_t > 0:
        raise ValueError("tube Reynolds number must be positive")
    return 0.046 * Re_t ** -0.2


def tube_dp(x: DesignVector, case: CaseSpec, geom: Geometry, layout: LayoutConfig,
            Re_t: float, V_t: float) -> tuple[float, float]:
    """Tube-side friction factor and pressure drop (Pa)."""
    f = tube_friction(Re_t)
    d_i = x.tube_inner_diameter_m
    dP = layout.n_passes * (4.0 * f * x.tube_length_m / d_i + 2.5) * case.tube.density * V_t * V_t / 2.0
    return f, dP


def pumping_power(dP_t: float, dP_s: float, case: CaseSpec) -> float:
    tb, sh = case.tube, case.shell
    return (dP_t * tb.mass_flow / tb.density + dP_s * sh.mass_flow / sh.density) / case.pump_efficiency


# --------------------------------------------------------------------------
# the sizing loop

def size_exchanger(x: DesignVector, case: CaseSpec, layout: LayoutConfig,
                   u_guess: float | None = None, tol: float = 1e-6,
                   max_iter: int = 100) -> SizingResult:
    """Converge the required outer area for design ``x``.

    The tube count is the only channel through which area feeds back into
    the film coefficients, so the loop stops as soon as two successive
    areas agree to ``tol``; a revisited tube count that is not a fixed point
    is reported as divergence.
    """
    try:
        Q, _ = heat_duty(case)
        hot, cold = case.hot, case.cold
        dT = lmtd(hot.t_in, hot.t_out, cold.t_in, cold.t_out)
        R, S = capacity_ratios(case)
        F = f_correction(R, S) if layout.f_correction_enabled else 1.0
        u = layout.initial_u if u_guess is None else u_guess
        if not u > 0:
            raise ValueError("initial U guess must be positive")

        seen = set()
        prev_area = None
        prev_n = None
        for it in range(1, max_iter + 1):
            area = required_area(Q, u, dT, F)
            geom = derive_geometry(x, layout, area)
            shell = shell_htc(x, case, layout, geom)
            tube = tube_htc(x, case, geom, layout)
            u = overall_u(shell.h_s, tube.h_i, case, x)
            if prev_area is not None and abs(area - prev_area) < tol * area:
                break
            if geom.N_t != prev_n and geom.N_t in seen:
                raise DivergedError(f"tube count cycles near N_t = {geom.N_t}", x,
                                    last=(area, geom.N_t))
            seen.add(geom.N_t)
            prev_area, prev_n = area, geom.N_t
        else:
            raise DivergedError(f"area not converged in {max_iter} iterations", x,
                                last=(area, geom.N_t))

        drop = shell_dp(x, case, layout, geom, shell.Re_s)
        f, dP_t = tube_dp(x, case, geom, layout, tube.Re_t, tube.V_t)
        power = pumping_power(dP_t, drop.dP_s, case)
    except DesignError as exc:
        if exc.design is None:
            exc.design = x
        raise

    return SizingResult(
        Q=Q, dT_lm=dT, R=R, S=S, F=F,
        Re_s=shell.Re_s, Re_t=tube.Re_t, Pr_s=shell.Pr_s, Pr_t=tube.Pr_t, V_t=tube.V_t,
        j=shell.j, h_id=shell.h_id, J_c=shell.J_c, J_l=shell.J_l, J_b=shell.J_b,
        J_s=shell.J_s, J_r=shell.J_r, h_s=shell.h_s, h_i=tube.h_i, U_o=u, A_o=area,
        f_id=drop.f_id, f=f, dP_b_id=drop.dP_b_id, dP_w_id=drop.dP_w_id,
        zeta_b=drop.zeta_b, zeta_l=drop.zeta_l, zeta_s=drop.zeta_s,
        dP_s=drop.dP_s, dP_t=dP_t, P_st=power,
        geometry=geom, converged=True, iterations=it,
    )
