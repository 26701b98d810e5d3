"""Closed-form SU(2) building blocks.

The charge-1 BPS monopole of mass v,

    Phi = (v coth(2vr) - 1/(2r)) xhat.(i tau),
    A_i = -(1/2) (1 - 2vr/sinh(2vr)) eps_{ija} xhat^j (i tau^a) / r,

its lift to a circle-invariant caloron A + eps Phi dt, the hedgehog framing
that diagonalizes the asymptotic Higgs field, abelian Dirac monopoles in the
two-patch gauge, and the t-dependent "rotation" gauge transformation
g(x,t) = exp(-t Phihat(x)/2) whose pullback produces the rotated monopole.

Radial profiles switch to 5th-order Taylor series for 2vr < 1e-4 so the
removable singularity at the core never produces NaN.
"""

from __future__ import annotations

import numpy as np

from .errors import ChartDomainError, HolonomyParameterError, SingularPointError
from .rootsys import PAULI
from .samplers import ConnectionSampler, dagger

_SERIES_CUT = 1e-4
_TINY = 1e-300

ITAU = 1j * PAULI  # (3, 2, 2)


def _r_of(x):
    return np.sqrt(np.sum(np.asarray(x, float) ** 2, axis=-1))


def xhat_itau(x):
    """Hedgehog direction xhat . (i tau), zero-safe at the origin."""
    x = np.asarray(x, dtype=float)
    r = _r_of(x)[..., None]
    xh = x / np.maximum(r, _TINY)
    return np.einsum("...j,jab->...ab", xh, ITAU)


def bps_higgs_profile(v, r):
    """phi(r) = v coth(2vr) - 1/(2r), with series fallback near r = 0."""
    r = np.asarray(r, dtype=float)
    u = 2.0 * v * r
    small = u < _SERIES_CUT
    us = np.where(small, u, 1.0)
    series = v * (us / 3.0 - us**3 / 45.0 + 2.0 * us**5 / 945.0)
    ub = np.where(small, 1.0, u)
    closed = v / np.tanh(ub) - 1.0 / (2.0 * np.maximum(r, _TINY))
    return np.where(small, series, closed)


def bps_gauge_profile(v, r):
    """k(r) = (1 - 2vr/sinh(2vr)) / (2r); A_i = -k eps_{ija} xhat^j i tau^a."""
    r = np.asarray(r, dtype=float)
    u = 2.0 * v * r
    small = u < _SERIES_CUT
    us = np.where(small, u, 1.0)
    # (1 - u/sinh u)/(2r) = v (u/6 - 7 u^3/360 + 31 u^5 / 15120)
    series = v * (us / 6.0 - 7.0 * us**3 / 360.0 + 31.0 * us**5 / 15120.0)
    ub = np.where(small, 1.0, u)
    closed = (1.0 - ub / np.sinh(ub)) / (2.0 * np.maximum(r, _TINY))
    return np.where(small, series, closed)


_EPS_IJK = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS_IJK[_i, _j, _k] = 1.0
    _EPS_IJK[_i, _k, _j] = -1.0


def bps_fields(x, v):
    """(A, Phi) of the mass-v BPS monopole centred at the origin."""
    x = np.asarray(x, dtype=float)
    r = _r_of(x)
    xh = x / np.maximum(r, _TINY)[..., None]
    phi = bps_higgs_profile(v, r)
    k = bps_gauge_profile(v, r)
    Phi = phi[..., None, None] * np.einsum("...j,jab->...ab", xh, ITAU)
    A = -k[..., None, None, None] * np.einsum("ija,...j,abc->...ibc", _EPS_IJK, xh, ITAU)
    return A, Phi


def bps_curvature_fields(x, v):
    """Closed-form E = B of the BPS caloron (independent of any finite
    difference):

        E_i = phi'(r) xhat_i xhat_a (i tau_a) + (phi w / r)(delta_ia - xhat_i xhat_a)(i tau_a)

    with w(r) = 2vr/sinh(2vr)."""
    x = np.asarray(x, dtype=float)
    r = _r_of(x)
    xh = x / np.maximum(r, _TINY)[..., None]
    u = 2.0 * v * r
    small = u < _SERIES_CUT
    ub = np.where(small, 1.0, u)
    # phi'(r) = 1/(2 r^2) - 2 v^2 / sinh^2(2 v r); series: 2v^2/3 - 8 v^4 r^2 / 15
    dphi_closed = 1.0 / (2.0 * np.maximum(r, _TINY) ** 2) - 2.0 * v**2 / np.sinh(ub) ** 2
    us = np.where(small, u, 1.0)
    dphi_series = 2.0 * v**2 / 3.0 - 2.0 * v**2 * us**2 / 15.0 + 4.0 * v**2 * us**4 / 189.0
    dphi = np.where(small, dphi_series, dphi_closed)
    phi = bps_higgs_profile(v, r)
    w = np.where(small, 1.0 - us**2 / 6.0 + 7.0 * us**4 / 360.0, ub / np.sinh(ub))
    # phi w / r -> (2 v^2/3) r * 1 / r = 2v^2/3 at the core
    phw = np.where(
        small,
        v**2 * (2.0 / 3.0 - 2.0 * us**2 / 9.0),
        phi * w / np.maximum(r, _TINY),
    )
    rad = np.einsum("...i,...a,ajk->...ijk", xh, xh, ITAU)
    tan = np.einsum("ia,ajk->ijk", np.eye(3), ITAU) - rad
    return dphi[..., None, None, None] * rad + phw[..., None, None, None] * tan


class BPSPair:
    """Monopole pair (A, Phi) with mass v > 0 and a centre in R^3."""

    def __init__(self, v, center=(0.0, 0.0, 0.0)):
        if v <= 0:
            raise ValueError("mass v must be positive")
        self.v = float(v)
        self.center = np.asarray(center, dtype=float)

    def __call__(self, x):
        return bps_fields(np.asarray(x, float) - self.center, self.v)

    def higgs_norm(self, x):
        """|Phi|(x) = phi(r) in the normalized sense Phi = phi * xhat.itau."""
        return bps_higgs_profile(self.v, _r_of(np.asarray(x, float) - self.center))


def bps_pair(v, center=(0.0, 0.0, 0.0)) -> BPSPair:
    return BPSPair(v, center)


class BPSCaloron(ConnectionSampler):
    """Circle-invariant caloron A_BPS + eps Phi_BPS dt with v = omega'/eps."""

    t_independent = True

    def __init__(self, omega_prime, epsilon, center=(0.0, 0.0, 0.0)):
        if not 0.0 < omega_prime < 0.5:
            raise HolonomyParameterError(
                f"holonomy parameter {omega_prime} outside (0, 1/2)"
            )
        self.omega_prime = float(omega_prime)
        self.epsilon = float(epsilon)
        self.v = self.omega_prime / self.epsilon
        self.pair = BPSPair(self.v, center)
        self.n = 2

    def evaluate(self, x, t, chart=None):
        return self.pair(x)


def bps_caloron_plus(omega_prime, epsilon, center=(0.0, 0.0, 0.0)) -> BPSCaloron:
    return BPSCaloron(omega_prime, epsilon, center)


# ---------------------------------------------------------------------------
# hedgehog framing, two patches

def hedgehog_framing(x, patch="N"):
    """Frame f with f^-1 (xhat . i tau) f = i tau_3.

    North patch: f = cos(theta/2) id - i sin(theta/2) (-sin phi, cos phi, 0).tau,
    written in the string-free rational form

        f_N = [[u/(2r), (-x+iy)/u], [(x+iy)/u, u/(2r)]],   u = sqrt(2r(r+z)),

    regular away from the south string (theta = pi).  The south patch is
    f_S = f_N exp(-i phi tau_3), regular away from the north string.
    """
    x = np.asarray(x, dtype=float)
    r = _r_of(x)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    out = np.zeros(x.shape[:-1] + (2, 2), dtype=complex)
    if patch == "N":
        usq = 2.0 * r * (r + x3)
        if np.any(usq <= 0):
            raise ChartDomainError("north framing evaluated on the south string")
        u = np.sqrt(usq)
        out[..., 0, 0] = u / (2.0 * r)
        out[..., 1, 1] = u / (2.0 * r)
        out[..., 0, 1] = (-x1 + 1j * x2) / u
        out[..., 1, 0] = (x1 + 1j * x2) / u
    elif patch == "S":
        wsq = 2.0 * r * (r - x3)
        if np.any(wsq <= 0):
            raise ChartDomainError("south framing evaluated on the north string")
        w = np.sqrt(wsq)
        out[..., 0, 0] = (x1 - 1j * x2) / w
        out[..., 1, 1] = (x1 + 1j * x2) / w
        out[..., 0, 1] = -w / (2.0 * r)
        out[..., 1, 0] = w / (2.0 * r)
    else:
        raise ValueError("patch must be 'N' or 'S'")
    return out


def hedgehog_framing_derivative(x, patch="N"):
    """Analytic spatial derivative d_i f, shape (..., 3, 2, 2)."""
    x = np.asarray(x, dtype=float)
    r = _r_of(x)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    rh = x / r[..., None]
    e3 = np.zeros_like(x)
    e3[..., 2] = 1.0
    shape = x.shape[:-1]
    df = np.zeros(shape + (3, 2, 2), dtype=complex)
    if patch == "N":
        u = np.sqrt(2.0 * r * (r + x3))
        # du_i = (rhat_i (2r + z) + r delta_{i3}) / u
        du = (rh * (2.0 * r + x3)[..., None] + r[..., None] * e3) / u[..., None]
        # diag = u/(2r): d = du/(2r) - u rhat /(2 r^2)
        ddiag = du / (2.0 * r[..., None]) - (u / (2.0 * r**2))[..., None] * rh
        df[..., 0, 0] = ddiag
        df[..., 1, 1] = ddiag
        # offdiag(0,1) = (-x + iy)/u
        num01 = (-x1 + 1j * x2)[..., None]
        dnum01 = np.zeros(shape + (3,), dtype=complex)
        dnum01[..., 0] = -1.0
        dnum01[..., 1] = 1j
        df[..., 0, 1] = dnum01 / u[..., None] - num01 * du / (u**2)[..., None]
        num10 = (x1 + 1j * x2)[..., None]
        dnum10 = np.zeros(shape + (3,), dtype=complex)
        dnum10[..., 0] = 1.0
        dnum10[..., 1] = 1j
        df[..., 1, 0] = dnum10 / u[..., None] - num10 * du / (u**2)[..., None]
    elif patch == "S":
        w = np.sqrt(2.0 * r * (r - x3))
        dw = (rh * (2.0 * r - x3)[..., None] - r[..., None] * e3) / w[..., None]
        num00 = (x1 - 1j * x2)[..., None]
        dnum00 = np.zeros(shape + (3,), dtype=complex)
        dnum00[..., 0] = 1.0
        dnum00[..., 1] = -1j
        df[..., 0, 0] = dnum00 / w[..., None] - num00 * dw / (w**2)[..., None]
        num11 = (x1 + 1j * x2)[..., None]
        dnum11 = np.zeros(shape + (3,), dtype=complex)
        dnum11[..., 0] = 1.0
        dnum11[..., 1] = 1j
        df[..., 1, 1] = dnum11 / w[..., None] - num11 * dw / (w**2)[..., None]
        doff = dw / (2.0 * r[..., None]) - (w / (2.0 * r**2))[..., None] * rh
        df[..., 0, 1] = -doff
        df[..., 1, 0] = doff
    else:
        raise ValueError("patch must be 'N' or 'S'")
    return df


# ---------------------------------------------------------------------------
# Dirac monopoles (abelian, two patches)

def dirac_potential(x, patch="N"):
    """Unit-charge Dirac vector potential coefficients: A = a_i dx^i * gamma
    with a = (-y, x, 0) / (2 r (r +- z)) for the north/south patch."""
    x = np.asarray(x, dtype=float)
    r = _r_of(x)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    if patch == "N":
        denom = 2.0 * r * (r + x3)
        sign = 1.0
    elif patch == "S":
        denom = -2.0 * r * (r - x3)
        sign = 1.0
    else:
        raise ValueError("patch must be 'N' or 'S'")
    if np.any(denom == 0):
        raise ChartDomainError("Dirac potential evaluated on its string")
    a = np.zeros_like(x)
    a[..., 0] = -x2 / denom * sign
    a[..., 1] = x1 / denom * sign
    return a


class AbelianPair:
    """Dirac monopole (A^gamma_p, Phi^gamma_p): Phi = -gamma/(2|x-p|), with
    the vector potential given in two patches and curvature (1/2) gamma dv_S2."""

    def __init__(self, center, charge_matrix):
        self.center = np.asarray(center, dtype=float)
        self.charge_matrix = np.asarray(charge_matrix, dtype=complex)
        self.n = self.charge_matrix.shape[0]

    def _rel(self, x):
        rel = np.asarray(x, float) - self.center
        r = _r_of(rel)
        if np.any(r == 0):
            raise SingularPointError("evaluation at the monopole singularity")
        return rel, r

    def higgs(self, x):
        _, r = self._rel(x)
        return -self.charge_matrix / (2.0 * r)[..., None, None]

    def potential(self, x, patch="N"):
        rel, _ = self._rel(x)
        a = dirac_potential(rel, patch)
        return a[..., :, None, None] * self.charge_matrix

    def field_strength(self, x):
        """Closed form B_a = (1/2) gamma xhat_a / r^2 (E follows from the
        Bogomolny equation: E = B)."""
        rel, r = self._rel(x)
        coeff = rel / (2.0 * r**3)[..., None]
        return coeff[..., :, None, None] * self.charge_matrix


def dirac_monopole(center, charge) -> AbelianPair:
    """charge may be an integer/float (times i tau_3) or an n x n matrix."""
    charge_arr = np.asarray(charge)
    if charge_arr.ndim == 0:
        charge_matrix = complex(charge_arr) * ITAU[2]
    elif charge_arr.ndim == 1:
        charge_matrix = 1j * np.diag(charge_arr.astype(float))
    else:
        charge_matrix = charge_arr.astype(complex)
    return AbelianPair(center, charge_matrix)


# ---------------------------------------------------------------------------
# rotation map

def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (6.0 * u**2 - 15.0 * u + 10.0)


class GaugeMap:
    """The family g(x,t) = exp(-t Phihat(x)/2) of large gauge transformations.

    Phihat is the unit hedgehog xhat.(i tau) for r >= core_radius and a
    quintic radial interpolation q(r) xhat.(i tau) inside, so g is smooth on
    all of R^3 x R.  The clutching descriptor h(x) = -g(x, 2pi)^{-1} equals
    the identity wherever q = 1.
    """

    t_independent = False

    def __init__(self, core_radius):
        self.core_radius = float(core_radius)

    def _theta_dir(self, x):
        x = np.asarray(x, dtype=float)
        r = _r_of(x)
        q = _smoothstep(r / self.core_radius)
        return r, q, xhat_itau(x)

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.broadcast_to(np.asarray(t, float), x.shape[:-1])
        r, q, n_itau = self._theta_dir(x)
        ang = 0.5 * t * q
        c = np.cos(ang)[..., None, None]
        s = np.sin(ang)[..., None, None]
        eye = np.eye(2, dtype=complex)
        return c * eye - s * n_itau

    def phi_hat(self, x):
        r, q, n_itau = self._theta_dir(np.asarray(x, float))
        return q[..., None, None] * n_itau

    def time_derivative(self, x, t):
        g = self(x, t)
        return -0.5 * self.phi_hat(x) @ g

    def spatial_derivative(self, x, t, step_scale=1e-3):
        """d_i g: analytic where Phihat is the exact unit hedgehog, 4th-order
        central differences inside the interpolation core."""
        x = np.asarray(x, dtype=float)
        t = np.broadcast_to(np.asarray(t, float), x.shape[:-1])
        r = _r_of(x)
        out = np.zeros(x.shape[:-1] + (3, 2, 2), dtype=complex)

        outside = r >= self.core_radius
        if np.any(outside):
            xo = x[outside]
            to = t[outside]
            ro = r[outside]
            xh = xo / ro[..., None]
            s = np.sin(0.5 * to)
            # g = cos(t/2) - sin(t/2) n.itau; dn_a/dx_i = (delta_ia - n_i n_a)/r
            proj = (np.eye(3) - np.einsum("...i,...a->...ia", xh, xh)) / ro[..., None, None]
            ditau = np.einsum("...ia,ajk->...ijk", proj, ITAU)
            dg = -s[..., None, None, None] * ditau
            out[outside] = dg
            del dg, ditau, proj

        inside = ~outside
        if np.any(inside):
            xi = x[inside]
            ti = t[inside]
            h = max(self.core_radius * step_scale, 1e-8)
            stencil = np.zeros(xi.shape[:-1] + (3, 2, 2), dtype=complex)
            for i in range(3):
                shifts = []
                for mult, wgt in ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)):
                    xs = xi.copy()
                    xs[..., i] += mult * h
                    shifts.append(wgt * self(xs, ti))
                stencil[..., i, :, :] = sum(shifts) / (12.0 * h)
            out[inside] = stencil
        return out

    def clutching(self, x):
        """h(x) = -g(x, 2 pi)^{-1}."""
        g2pi = self(x, 2.0 * np.pi)
        return -dagger(g2pi)


def rotation_gauge(omega_prime, epsilon, core_radius=None) -> GaugeMap:
    """Rotation map for the mass v = (1/2 - omega')/eps monopole; the default
    interpolation core is 1/(2v)."""
    if not 0.0 < omega_prime < 0.5:
        raise HolonomyParameterError(f"holonomy parameter {omega_prime} outside (0, 1/2)")
    v = (0.5 - omega_prime) / epsilon
    if core_radius is None:
        core_radius = 1.0 / (2.0 * v)
    return GaugeMap(core_radius)


class RotatedBPSCaloron(ConnectionSampler):
    """g^* (A_BPS + eps Phi_BPS dt) with mass v = (1/2 - omega')/eps: the
    second fundamental SU(2) caloron, genuinely t-dependent."""

    t_independent = False

    def __init__(self, omega_prime, epsilon, center=(0.0, 0.0, 0.0)):
        if not 0.0 < omega_prime < 0.5:
            raise HolonomyParameterError(
                f"holonomy parameter {omega_prime} outside (0, 1/2)"
            )
        self.omega_prime = float(omega_prime)
        self.epsilon = float(epsilon)
        self.v = (0.5 - self.omega_prime) / self.epsilon
        self.center = np.asarray(center, dtype=float)
        self.gauge = GaugeMap(core_radius=1.0 / (2.0 * self.v))
        self.n = 2

    def evaluate(self, x, t, chart=None):
        rel = x - self.center
        A, Phi = bps_fields(rel, self.v)
        g = self.gauge(rel, t)
        ginv = dagger(g)
        dg = self.gauge.spatial_derivative(rel, t)
        A_new = np.einsum("...ij,...ajk,...kl->...ail", ginv, A, g) + np.einsum(
            "...ij,...ajk->...aik", ginv, dg
        )
        Phi_new = ginv @ Phi @ g - self.gauge.phi_hat(rel) / (2.0 * self.epsilon)
        return A_new, Phi_new


def rotated_bps(omega_prime, epsilon, center=(0.0, 0.0, 0.0)) -> RotatedBPSCaloron:
    return RotatedBPSCaloron(omega_prime, epsilon, center)


# ---------------------------------------------------------------------------
# framed remainders: fundamental caloron minus its abelian model

def bps_remainder(x, v, patch="N"):
    """a+_BPS at the su(2) level: the framed BPS caloron minus the abelian
    model (v - 1/(2r)) i tau_3.  Returns (A-part, Phi-part); both decay like
    exp(-2 v r)."""
    x = np.asarray(x, dtype=float)
    r = _r_of(x)
    f = hedgehog_framing(x, patch)
    finv = dagger(f)
    df = hedgehog_framing_derivative(x, patch)
    A, Phi = bps_fields(x, v)
    A_framed = np.einsum("...ij,...ajk,...kl->...ail", finv, A, f) + np.einsum(
        "...ij,...ajk->...aik", finv, df
    )
    Phi_framed = finv @ Phi @ f
    a_model = dirac_potential(x, patch)[..., :, None, None] * ITAU[2]
    phi_model = (v - 1.0 / (2.0 * r))[..., None, None] * ITAU[2]
    return A_framed - a_model, Phi_framed - phi_model


def _g_infinity(t):
    """Weyl-flip framing factor exp(-i t tau_3 / 2) (i tau_2)."""
    t = np.asarray(t, dtype=float)
    phase = np.exp(-0.5j * t)
    g = np.zeros(t.shape + (2, 2), dtype=complex)
    # exp(-i t tau3/2) = diag(e^{-it/2}, e^{it/2}); times i tau_2 = [[0,1],[-1,0]]
    g[..., 0, 1] = phase
    g[..., 1, 0] = -np.conjugate(phase)
    return g


def rotated_remainder(x, t, v, patch="N"):
    """a-_BPS: the framed rotated monopole minus the abelian model of charge
    -1.  Equals the t-dependent conjugation g_inf(t)^-1 a+_BPS(x) g_inf(t)."""
    aA, aPhi = bps_remainder(x, v, patch)
    t = np.broadcast_to(np.asarray(t, float), np.asarray(x, float).shape[:-1])
    g = _g_infinity(t)
    ginv = dagger(g)
    A = np.einsum("...ij,...ajk,...kl->...ail", ginv, aA, g)
    Phi = ginv @ aPhi @ g
    return A, Phi
