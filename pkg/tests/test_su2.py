"""SU(2) building blocks: BPS pair, framing, Dirac monopoles, rotation map."""

import math

import numpy as np
import pytest

from calorons.errors import ChartDomainError, HolonomyParameterError, SingularPointError
from calorons.fieldcalc import MetricParams, circle_holonomy, curvature_at, lie_norm_sq
from calorons.quadrature import sphere_rule
from calorons.su2 import (
    bps_caloron_plus,
    bps_curvature_fields,
    bps_fields,
    bps_higgs_profile,
    bps_pair,
    bps_remainder,
    dirac_monopole,
    dirac_potential,
    hedgehog_framing,
    hedgehog_framing_derivative,
    rotated_bps,
    rotated_remainder,
    rotation_gauge,
    xhat_itau,
)

ITAU3 = 1j * np.diag([1.0, -1.0])


# -- BPS pair ------------------------------------------------------------------

def test_bps_higgs_profile_closed_form():
    # oracle: direct scalar evaluation, v=1, r=5
    val = bps_higgs_profile(1.0, 5.0)
    assert abs(val - (1.0 / math.tanh(10.0) - 0.1)) < 1e-12
    assert abs(val - 0.9000000041223074) < 1e-12


def test_bps_core_is_smooth_zero():
    pair = bps_pair(1.0, center=(0.5, -0.2, 0.1))
    A, Phi = pair(np.array([0.5, -0.2, 0.1]))
    assert np.allclose(A, 0) and np.allclose(Phi, 0)
    # series region: no NaN, linear growth (2 v^2/3) r
    for r in (1e-7, 1e-6, 1e-5):
        val = bps_higgs_profile(1.0, r)
        assert np.isfinite(val)
        assert abs(val - 2.0 * r / 3.0) < 1e-12


def test_bps_higgs_bounded_and_increasing():
    v = 0.7
    rs = np.linspace(1e-4, 30, 400)
    phi = bps_higgs_profile(v, rs)
    assert np.all(np.diff(phi) > 0)
    assert np.all(phi < v)
    assert phi[-1] > v - 1.0 / (2 * rs[-1]) - 1e-6


def test_bps_bogomolny_residual_second_order():
    """Central-difference Bogomolny residual F_A - *dPhi is O(h^2)."""
    rng = np.random.default_rng(42)
    pair = bps_pair(1.0)
    pts = rng.uniform(-2.5, 2.5, size=(100, 3))
    pts = pts[np.linalg.norm(pts, axis=1) > 0.05]

    def residual(h):
        worst = 0.0
        A0, Phi0 = pair(pts)
        dA = np.zeros(pts.shape[:-1] + (3, 3, 2, 2), dtype=complex)
        dPhi = np.zeros(pts.shape[:-1] + (3, 2, 2), dtype=complex)
        for i in range(3):
            dp = pts.copy(); dp[:, i] += h
            dm = pts.copy(); dm[:, i] -= h
            Ap, Pp = pair(dp)
            Am, Pm = pair(dm)
            dA[:, i] = (Ap - Am) / (2 * h)
            dPhi[:, i] = (Pp - Pm) / (2 * h)
        dAPhi = dPhi + np.einsum("...aij,...jk->...aik", A0, Phi0) - np.einsum(
            "...ij,...ajk->...aik", Phi0, A0
        )
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            Fij = dA[:, i, j] - dA[:, j, i] + A0[:, i] @ A0[:, j] - A0[:, j] @ A0[:, i]
            worst = max(worst, float(np.max(np.abs(Fij - dAPhi[:, k]))))
        return worst

    r2 = residual(1e-2)
    r3 = residual(1e-3)
    assert r2 < 10 * (1e-2) ** 2
    assert r3 < 10 * (1e-3) ** 2
    assert r2 / r3 >= 50.0


def test_bps_caloron_time_independent_and_mass():
    samp = bps_caloron_plus(0.25, 1.0)
    assert samp.v == 0.25
    x = np.array([[1.0, 2.0, -0.5]])
    A0, P0 = samp(x, 0.0)
    A1, P1 = samp(x, np.pi)
    assert np.array_equal(A0, A1) and np.array_equal(P0, P1)
    # |Phi| tends to v at large r
    far = np.array([[80.0, 0.0, 0.0]])
    _, Pf = samp(far, 0.0)
    assert abs(np.max(np.abs(Pf)) - 0.25) < 1e-2


def test_bps_caloron_core_radius_scales_with_epsilon():
    # half-max level set of |Phi|: phi(r*) = v/2; r* scales like 1/v
    from scipy.optimize import brentq

    def rstar(eps):
        samp = bps_caloron_plus(0.25, eps)
        return brentq(lambda r: bps_higgs_profile(samp.v, r) - samp.v / 2, 1e-6, 1e3)

    assert abs(rstar(0.1) / rstar(1.0) - 0.1) < 1e-6


def test_bps_holonomy_parameter_validation():
    with pytest.raises(HolonomyParameterError):
        bps_caloron_plus(0.6, 1.0)
    with pytest.raises(HolonomyParameterError):
        rotated_bps(-0.1, 1.0)


def test_bps_curvature_closed_form_vs_fd():
    rng = np.random.default_rng(1)
    pts = rng.uniform(-3, 3, size=(40, 3))
    samp = bps_caloron_plus(0.3, 1.0)
    curv = curvature_at(samp, pts, 0.0, step=1e-3)
    exact = bps_curvature_fields(pts, 0.3)
    assert np.max(np.abs(curv.E - exact)) < 5e-11
    assert np.max(np.abs(curv.B - exact)) < 5e-11


# -- hedgehog framing -------------------------------------------------------------

def test_framing_north_pole_identity():
    f = hedgehog_framing(np.array([[0.0, 0.0, 2.0]]))
    assert np.allclose(f[0], np.eye(2), atol=1e-14)


def test_framing_x_axis_value():
    # f = cos(pi/4) id - i sin(pi/4) tau_2 on the +x axis
    f = hedgehog_framing(np.array([[3.0, 0.0, 0.0]]))[0]
    tau2 = np.array([[0, -1j], [1j, 0]])
    expected = math.cos(math.pi / 4) * np.eye(2) - 1j * math.sin(math.pi / 4) * tau2
    assert np.allclose(f, expected, atol=1e-14)


def test_framing_diagonalizes_hedgehog():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(60, 3))
    for patch in ("N", "S"):
        f = hedgehog_framing(x, patch)
        finv = np.conjugate(np.swapaxes(f, -1, -2))
        conj = finv @ xhat_itau(x) @ f
        assert np.max(np.abs(conj - ITAU3)) < 1e-12
        assert np.max(np.abs(f @ finv - np.eye(2))) < 1e-12


def test_framing_string_raises():
    with pytest.raises(ChartDomainError):
        hedgehog_framing(np.array([[0.0, 0.0, -1.0]]), "N")
    with pytest.raises(ChartDomainError):
        hedgehog_framing(np.array([[0.0, 0.0, 1.0]]), "S")


def test_framing_derivative_vs_fd():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(30, 3)) * 1.5
    h = 1e-5
    for patch in ("N", "S"):
        df = hedgehog_framing_derivative(x, patch)
        for i in range(3):
            xp = x.copy(); xp[:, i] += h
            xm = x.copy(); xm[:, i] -= h
            fd = (hedgehog_framing(xp, patch) - hedgehog_framing(xm, patch)) / (2 * h)
            assert np.max(np.abs(fd - df[:, i])) < 1e-8


def test_framed_higgs_exponential_decay():
    """Deviation of the framed Higgs from (v - 1/2r) i tau_3 decays at
    rate ~ 4v (the stated asymptotics of a Dirac monopole)."""
    v = 1.0
    rs = np.linspace(2.0 / v, 6.0 / v, 17)
    dirn = np.array([1.0, 2.0, 2.0]) / 3.0
    dev = []
    for r in rs:
        x = (r * dirn)[None, :]
        f = hedgehog_framing(x)
        finv = np.conjugate(np.swapaxes(f, -1, -2))
        _, Phi = bps_fields(x, v)
        framed = (finv @ Phi @ f)[0]
        model = (v - 1.0 / (2 * r)) * ITAU3
        dev.append(np.max(np.abs(framed - model)))
    rate = -np.polyfit(rs, np.log(dev), 1)[0]
    assert rate >= 3.5 * v


# -- Dirac monopole ----------------------------------------------------------------

def test_dirac_higgs_coefficient():
    mono = dirac_monopole((0.0, 0.0, 0.0), 1)
    phi = mono.higgs(np.array([[1.0, 0.0, 0.0]]))[0]
    assert np.allclose(phi, -0.5 * ITAU3)


def test_dirac_singular_point():
    mono = dirac_monopole((1.0, 0.0, 0.0), 1)
    with pytest.raises(SingularPointError):
        mono.higgs(np.array([[1.0, 0.0, 0.0]]))


def test_dirac_bogomolny_fd():
    """dA = *dPhi away from the singular point, by finite differences."""
    mono = dirac_monopole((0.0, 0.0, 0.0), 2)
    rng = np.random.default_rng(4)
    pts = rng.normal(size=(40, 3)) * 2.0
    pts = pts[(pts[:, 2] > 0.2) | (np.abs(pts[:, 0]) > 0.2)]  # keep off the string
    h = 1e-4
    for patch in ("N",):
        dA = np.zeros(pts.shape[:-1] + (3, 3, 2, 2), dtype=complex)
        dPhi = np.zeros(pts.shape[:-1] + (3, 2, 2), dtype=complex)
        for i in range(3):
            xp = pts.copy(); xp[:, i] += h
            xm = pts.copy(); xm[:, i] -= h
            dA[:, i] = (mono.potential(xp, patch) - mono.potential(xm, patch)) / (2 * h)
            dPhi[:, i] = (mono.higgs(xp) - mono.higgs(xm)) / (2 * h)
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            Fij = dA[:, i, j] - dA[:, j, i]
            assert np.max(np.abs(Fij - dPhi[:, k])) < 1e-6


def test_dirac_flux_quantization():
    """(1/2 pi) surface integral of dA equals the charge at any radius."""
    mono = dirac_monopole((0.0, 0.0, 0.0), 3)
    for radius in (0.5, 2.0):
        dirs, w = sphere_rule(16, 32)
        B = mono.field_strength(radius * dirs)
        B_rad = np.einsum("pa,paij->pij", dirs, B)
        flux = np.einsum("p,pij->ij", w, B_rad) * radius**2 / (2 * np.pi)
        assert np.allclose(flux, 3 * ITAU3, atol=1e-10)


def test_dirac_patch_transition_is_dphi_gauge():
    """A_N - A_S = gamma * dphi on the equator (and everywhere off the axis)."""
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(50, 3))
    pts = pts[np.hypot(pts[:, 0], pts[:, 1]) > 0.3]
    aN = dirac_potential(pts, "N")
    aS = dirac_potential(pts, "S")
    rho2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    dphi = np.stack([-pts[:, 1] / rho2, pts[:, 0] / rho2, np.zeros(len(pts))], axis=-1)
    assert np.max(np.abs(aN - aS - dphi)) < 1e-12


def test_dirac_closed_form_curvature_vs_fd():
    """closed-form F_ij = (1/2) gamma eps_ijk xhat_k / r^2 against the
    finite-difference curvature of the potential (O(step^4))."""
    from calorons.samplers import ConnectionSampler

    class DiracSampler(ConnectionSampler):
        t_independent = True
        epsilon = 1.0
        n = 2

        def __init__(self, mono):
            self.mono = mono

        def evaluate(self, x, t, chart=None):
            return self.mono.potential(x, "N"), self.mono.higgs(x)

    mono = dirac_monopole((0.0, 0.0, 0.0), 1)
    samp = DiracSampler(mono)
    pts = np.array([[1.2, 0.3, 0.8], [-0.5, 0.9, 1.1], [2.0, -1.0, 0.5]])
    curv = curvature_at(samp, pts, 0.0, step=1e-3)
    assert np.max(np.abs(curv.B - mono.field_strength(pts))) < 1e-9
    # E = B for the abelian caloron (Bogomolny closed form)
    assert np.max(np.abs(curv.E - curv.B)) < 1e-9


# -- rotation map ----------------------------------------------------------------

def test_rotation_gauge_identity_at_t0():
    g = rotation_gauge(0.25, 1.0)
    rng = np.random.default_rng(6)
    x = rng.normal(size=(30, 3)) * 3
    assert np.max(np.abs(g(x, 0.0) - np.eye(2))) < 1e-14


def test_rotation_gauge_clutching_trivial_outside_core():
    g = rotation_gauge(0.25, 1.0)
    rng = np.random.default_rng(7)
    x = rng.normal(size=(40, 3))
    x *= (g.core_radius * rng.uniform(1.0, 4.0, 40) / np.linalg.norm(x, axis=1))[:, None]
    h = g.clutching(x)
    assert np.max(np.abs(h - np.eye(2))) < 1e-12
    # at exactly 2 pi the map is -id along the unit-hedgehog region
    g2pi = g(x, 2 * np.pi)
    assert np.max(np.abs(g2pi + np.eye(2))) < 1e-12


def test_rotation_gauge_unitary_everywhere():
    g = rotation_gauge(0.3, 0.5)
    rng = np.random.default_rng(8)
    x = rng.normal(size=(1000, 3)) * 2.0
    t = rng.uniform(0, 2 * np.pi, 1000)
    gv = g(x, t)
    err = np.max(np.abs(gv @ np.conjugate(np.swapaxes(gv, -1, -2)) - np.eye(2)))
    assert err < 1e-12


def test_rotation_gauge_spatial_derivative_vs_fd():
    g = rotation_gauge(0.25, 1.0)
    rng = np.random.default_rng(9)
    # probe both the analytic exterior branch and the FD interior branch
    x = np.concatenate([
        rng.normal(size=(10, 3)) * 0.3 * g.core_radius,
        rng.normal(size=(10, 3)) * 3.0 * g.core_radius,
    ])
    t = rng.uniform(0, 2 * np.pi, 20)
    dg = g.spatial_derivative(x, t)
    h = 1e-5
    for i in range(3):
        xp = x.copy(); xp[:, i] += h
        xm = x.copy(); xm[:, i] -= h
        fd = (g(xp, t) - g(xm, t)) / (2 * h)
        assert np.max(np.abs(fd - dg[:, i])) < 1e-7


def test_rotated_bps_asd_preserved():
    rot = rotated_bps(0.3, 0.5)
    rng = np.random.default_rng(10)
    pts = rng.normal(size=(20, 3)) * 2.0
    pts = pts[np.linalg.norm(pts, axis=1) > 1.2 * rot.gauge.core_radius]
    ts = rng.uniform(0, 2 * np.pi, len(pts))
    curv = curvature_at(rot, pts, ts, step=3e-4)
    assert np.sqrt(np.max(curv.sd_norm_sq())) < 1e-7


def test_rotated_bps_curvature_norm_matches_bps():
    """|F| is pointwise gauge invariant: the rotated monopole matches the
    plain BPS caloron of the same mass everywhere, including in the
    interpolation core."""
    eps, op = 0.5, 0.3
    rot = rotated_bps(op, eps)
    ref = bps_caloron_plus(0.5 - op, eps)
    rng = np.random.default_rng(11)
    pts = rng.normal(size=(25, 3)) * 1.5
    ts = rng.uniform(0, 2 * np.pi, 25)
    c1 = curvature_at(rot, pts, ts, step=2e-4)
    c2 = curvature_at(ref, pts, ts, step=2e-4)
    assert np.max(np.abs(c1.norm_sq() - c2.norm_sq())) < 1e-7


def test_rotated_bps_is_genuinely_t_dependent():
    rot = rotated_bps(0.3, 0.5)
    x = np.array([[0.8, 0.2, -0.4]])
    A0, P0 = rot(x, 0.0)
    A1, P1 = rot(x, 2.0)
    assert np.max(np.abs(A0 - A1)) > 1e-3


def test_rotated_holonomy_matches_charge_minus_one_model():
    eps, op = 0.25, 0.3
    rot = rotated_bps(op, eps)
    met = MetricParams(eps)
    r = 12.0
    x = np.array([3.0, -4.0, np.sqrt(r * r - 25.0)])
    phases = circle_holonomy(rot, x, met, n_steps=96)
    model = 2 * np.pi * (op + eps / (2 * r))
    assert abs(phases[0] - model) < 2e-4
    assert abs(phases[1] + model) < 2e-4


def test_remainders_decay():
    """a+ decays like exp(-2 v r); the rotated remainder has the same norm."""
    v = 1.2
    rs = np.linspace(2.0, 5.0, 8)
    x = np.stack([rs / np.sqrt(3)] * 3, axis=-1)
    aA, aP = bps_remainder(x, v)
    amp = np.sqrt(np.sum(lie_norm_sq(aA), axis=-1) + lie_norm_sq(aP))
    rate = -np.polyfit(rs, np.log(amp), 1)[0]
    assert abs(rate - 2 * v) < 0.05 * v
    rA, rP = rotated_remainder(x, 1.3, v)
    amp_rot = np.sqrt(np.sum(lie_norm_sq(rA), axis=-1) + lie_norm_sq(rP))
    assert np.allclose(amp_rot, amp, atol=1e-12)


def test_remainder_makes_framed_field():
    """model + a+ reconstructs the framed BPS caloron exactly."""
    v = 0.8
    rng = np.random.default_rng(12)
    x = rng.normal(size=(20, 3)) * 2.0
    x = x[2.0 * np.linalg.norm(x, axis=1) * (np.linalg.norm(x, axis=1) + x[:, 2]) > 0.1]
    aA, aP = bps_remainder(x, v)
    r = np.linalg.norm(x, axis=-1)
    model_A = dirac_potential(x, "N")[..., :, None, None] * ITAU3
    model_P = (v - 1.0 / (2 * r))[..., None, None] * ITAU3
    f = hedgehog_framing(x, "N")
    finv = np.conjugate(np.swapaxes(f, -1, -2))
    df = hedgehog_framing_derivative(x, "N")
    A, Phi = bps_fields(x, v)
    framed_A = np.einsum("...ij,...ajk,...kl->...ail", finv, A, f) + np.einsum(
        "...ij,...ajk->...aik", finv, df
    )
    framed_P = finv @ Phi @ f
    assert np.max(np.abs(model_A + aA - framed_A)) < 1e-12
    assert np.max(np.abs(model_P + aP - framed_P)) < 1e-12
