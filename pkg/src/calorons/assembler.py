"""Assembly of approximate calorons from constituent monopoles.

The construction glues fundamental calorons (embedded BPS monopoles for the
simple coroots, an embedded rotated monopole for the lowest coroot) into the
singular abelian background

    A_sing = sum_k A^{gamma_k}_{p_k},   Phi_sing = omega/eps - sum_k gamma_k / (2 |x - p_k|),

replacing each singularity inside a ball of gluing radius R(eps) solving
R = eps^-1 exp(-c R / eps).  On the matching annulus R/2 <= r <= R the
connection interpolates, via a quintic cutoff, between the framed
fundamental caloron and the abelian field written around the local holonomy
parameter omega_k (the constant term of the multipole expansion of Phi_sing
at p_k).

Local gauges ("charts"): the core ball uses the smooth hedgehog gauge of the
fundamental caloron; the annulus uses the two-patch abelian gauge centred at
p_k; the exterior uses the global abelian gauge with a per-monopole
north/south patch choice.  Chart transitions are abelian (constant
conjugation, d(phi)-type and exact d(lambda) terms), so curvature computed
within any single chart is the curvature of the glued connection.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import (
    GluingInfeasibleError,
    HolonomyParameterError,
    InputError,
    SingularPointError,
    UnsupportedRepresentationError,
)
from .rootsys import RootDatum, alcove_margin, as_float, build_root_datum, su2_embedding
from .samplers import ConnectionSampler, dagger
from .su2 import (
    bps_fields,
    bps_remainder,
    dirac_potential,
    rotated_remainder,
    RotatedBPSCaloron,
    _smoothstep,
)


# ---------------------------------------------------------------------------
# spec objects

@dataclass(frozen=True)
class Constituent:
    mu: int
    position: Tuple[float, float, float]
    phase: float = 0.0


@dataclass
class CaloronSpec:
    """Full input of the gluing construction."""

    epsilon: float
    series: str
    rank: int
    omega: Tuple[float, ...]
    constituents: Tuple[Constituent, ...]
    gluing_c: float = 1.0

    def __post_init__(self):
        self.series = self.series.upper()
        self.omega = tuple(float(c) for c in self.omega)
        self.constituents = tuple(
            c if isinstance(c, Constituent) else Constituent(**c) for c in self.constituents
        )
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive")
        if self.gluing_c <= 0:
            raise InputError("gluing constant c must be positive")
        datum = self.datum
        if len(self.omega) != datum.ambient_dim:
            raise InputError(
                f"omega must have {datum.ambient_dim} ambient coordinates for "
                f"{self.series}{self.rank}"
            )
        if abs(sum(self.omega)) > 1e-9 and self.series == "A":
            raise InputError("omega coordinates must sum to zero for type A")
        margin = float(alcove_margin(datum, self.omega))
        if margin <= 0:
            raise HolonomyParameterError(
                f"omega lies outside the open fundamental alcove (margin {margin:.3g})"
            )
        for c in self.constituents:
            if not 0 <= c.mu <= self.rank:
                raise InputError(f"constituent type mu={c.mu} out of range 0..{self.rank}")
        pos = [np.asarray(c.position, float) for c in self.constituents]
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if np.linalg.norm(pos[i] - pos[j]) == 0.0:
                    raise InputError("constituent positions must be distinct")

    @property
    def datum(self) -> RootDatum:
        if not hasattr(self, "_datum"):
            self._datum = build_root_datum(self.series, self.rank)
        return self._datum

    @property
    def positions(self):
        return np.array([c.position for c in self.constituents], dtype=float)

    @property
    def d_min(self):
        pos = self.positions
        if len(pos) < 2:
            return math.inf
        return min(
            float(np.linalg.norm(pos[i] - pos[j]))
            for i in range(len(pos))
            for j in range(i + 1, len(pos))
        )

    @property
    def d_max(self):
        pos = self.positions
        if len(pos) == 0:
            return 0.0
        return float(np.max(np.linalg.norm(pos, axis=1)))

    @property
    def d_max_eff(self):
        return max(self.d_max, 1.0)

    def counts(self) -> Tuple[int, ...]:
        """(n_0, .., n_rk): number of constituents of each type."""
        n = [0] * (self.rank + 1)
        for c in self.constituents:
            n[c.mu] += 1
        return tuple(n)

    def charge_coefficients(self) -> Tuple[int, ...]:
        """gamma_m coefficients over the simple coroots."""
        n = self.counts()
        return tuple(n[mu] - n[0] * m for mu, m in zip(range(1, self.rank + 1), self.datum.dual_coxeter_labels))

    def charge_vector(self):
        gam = np.zeros(self.datum.ambient_dim)
        for c in self.constituents:
            gam += as_float(self.datum.node_coroot(c.mu))
        return gam

    def gluing_radius(self) -> float:
        return gluing_radius(self.epsilon, self.gluing_c, d_min=self.d_min)

    # -- JSON schema ---------------------------------------------------------

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "group": {"series": self.series, "rank": self.rank},
            "omega": list(self.omega),
            "constituents": [
                {"mu": c.mu, "position": list(c.position), "phase": c.phase}
                for c in self.constituents
            ],
            "gluing": {"c": self.gluing_c},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, payload):
        try:
            group = payload["group"]
            constituents = tuple(
                Constituent(
                    mu=int(c["mu"]),
                    position=tuple(float(v) for v in c["position"]),
                    phase=float(c.get("phase", 0.0)),
                )
                for c in payload["constituents"]
            )
            return cls(
                epsilon=float(payload["epsilon"]),
                series=str(group["series"]),
                rank=int(group["rank"]),
                omega=tuple(float(v) for v in payload["omega"]),
                constituents=constituents,
                gluing_c=float(payload.get("gluing", {}).get("c", 1.0)),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed caloron spec: missing/bad field {exc}") from exc

    @classmethod
    def from_json(cls, text):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON at line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(payload)


@dataclass(frozen=True)
class GluingProfile:
    """Cutoff profile: chi = 1 on [0, R/2], 0 on [R, inf), quintic between."""

    R: float

    def chi(self, r):
        r = np.asarray(r, dtype=float)
        return 1.0 - _smoothstep(2.0 * r / self.R - 1.0)

    def __call__(self, r):
        return self.chi(r)


# ---------------------------------------------------------------------------
# gluing radius

def gluing_radius(epsilon, c, d_min=None) -> float:
    """Unique R > 0 with R = eps^-1 exp(-c R/eps), by safeguarded Newton on
    g(R) = ln R + ln eps + c R / eps.  R ~ eps |ln eps| / c for small eps."""
    if epsilon <= 0 or c <= 0:
        raise InputError("epsilon and c must be positive")
    lo, hi = 1e-300, 1.0 / epsilon
    R = min(epsilon * max(-math.log(epsilon), 1.0) / c, 0.5 / epsilon)
    R = max(R, 1e-12)
    for _ in range(200):
        g = math.log(R) + math.log(epsilon) + c * R / epsilon
        if g > 0:
            hi = min(hi, R)
        else:
            lo = max(lo, R)
        dg = 1.0 / R + c / epsilon
        step = g / dg
        R_new = R - step
        if not (lo < R_new < hi):
            R_new = 0.5 * (lo + hi)
        if abs(R_new - R) <= 1e-16 * max(R, 1.0):
            R = R_new
            break
        R = R_new
    if d_min is not None and R >= d_min / 2.0:
        raise GluingInfeasibleError(
            f"gluing radius R={R:.4g} >= d_min/2={d_min / 2.0:.4g}: decrease epsilon "
            f"below ~{epsilon * d_min / (2.0 * R):.3g} or separate the constituents"
        )
    return R


# ---------------------------------------------------------------------------
# local holonomy parameters

def holonomy_shifts(spec: CaloronSpec):
    """omega_k for every constituent: omega minus the monopole-sum constants
    eps * gamma_l / (2 |p_l - p_k|) of all other constituents."""
    datum = spec.datum
    pos = spec.positions
    out = []
    for k in range(len(spec.constituents)):
        om = np.array(spec.omega, dtype=float)
        for l, cl in enumerate(spec.constituents):
            if l == k:
                continue
            d = float(np.linalg.norm(pos[l] - pos[k]))
            om = om - spec.epsilon * as_float(datum.node_coroot(cl.mu)) / (2.0 * d)
        out.append(om)
    return out


def local_holonomy_shift(spec: CaloronSpec, mu: int, i: int):
    """omega^i_mu for the i-th constituent (0-based) of type mu."""
    flat = [k for k, c in enumerate(spec.constituents) if c.mu == mu]
    if i < 0 or i >= len(flat):
        raise InputError(f"no constituent ({mu}, {i})")
    return holonomy_shifts(spec)[flat[i]]


# ---------------------------------------------------------------------------
# fundamental calorons

def _cartan_matrix(vec_ambient):
    return 1j * np.diag(np.asarray(vec_ambient, dtype=float)).astype(complex)


class FundamentalCaloron(ConnectionSampler):
    """Embedded fundamental caloron of type alpha_mu^vee with holonomy
    parameter omega: rho_mu(BPS caloron + omega'_mu dt) for mu >= 1, the
    embedded rotated monopole for mu = 0."""

    def __init__(self, datum: RootDatum, mu: int, omega, epsilon, center=(0.0, 0.0, 0.0)):
        if datum.series != "A":
            raise UnsupportedRepresentationError(
                "field evaluation requires the defining representation of su(n)"
            )
        omega = np.asarray([float(c) for c in omega], dtype=float)
        if float(alcove_margin(datum, omega)) <= 0:
            raise HolonomyParameterError("omega must lie in the open alcove interior")
        self.datum = datum
        self.mu = int(mu)
        self.epsilon = float(epsilon)
        self.center = np.asarray(center, dtype=float)
        self.embedding = su2_embedding(datum, mu)
        node = as_float(datum.node_root(mu))
        coroot = as_float(datum.node_coroot(mu))
        a_omega = float(node @ omega)
        self.omega = omega
        self.omega_prime = omega - 0.5 * a_omega * coroot
        if mu == 0:
            self.su2_parameter = -0.5 * a_omega
            self.v = (0.5 - self.su2_parameter) / self.epsilon
            self._rotated = RotatedBPSCaloron(self.su2_parameter, self.epsilon)
            self.t_independent = False
        else:
            self.su2_parameter = 0.5 * a_omega
            self.v = self.su2_parameter / self.epsilon
            self._rotated = None
            self.t_independent = True
        if not 0.0 < self.su2_parameter < 0.5:
            raise HolonomyParameterError(
                f"su(2) holonomy parameter {self.su2_parameter} outside (0, 1/2)"
            )
        self.n = datum.ambient_dim
        self.charge_matrix = _cartan_matrix(coroot)
        self._phi_const = _cartan_matrix(self.omega_prime) / self.epsilon

    def evaluate(self, x, t, chart=None):
        rel = x - self.center
        if self._rotated is not None:
            A2, P2 = self._rotated.evaluate(rel, t)
        else:
            A2, P2 = bps_fields(rel, self.v)
        A = self.embedding.embed(A2)
        Phi = self.embedding.embed(P2) + self._phi_const
        return A, Phi


def fundamental_caloron(datum, mu, omega, epsilon, center=(0.0, 0.0, 0.0)) -> FundamentalCaloron:
    return FundamentalCaloron(datum, mu, omega, epsilon, center)


# ---------------------------------------------------------------------------
# singular abelian caloron

def _patch_mask(rel_z):
    """Patch choice per monopole: north where the point is not below it."""
    return rel_z < 0.0


class SingularCaloron(ConnectionSampler):
    """Cartan-valued caloron: superposition of Dirac monopoles at the
    constituent positions plus the constant omega/eps."""

    t_independent = True

    def __init__(self, spec: CaloronSpec):
        if spec.series != "A":
            raise UnsupportedRepresentationError(
                "field evaluation requires the defining representation of su(n)"
            )
        self.spec = spec
        self.datum = spec.datum
        self.epsilon = float(spec.epsilon)
        self.n = self.datum.ambient_dim
        self.positions = spec.positions
        self.charges = np.stack(
            [_cartan_matrix(as_float(self.datum.node_coroot(c.mu))) for c in spec.constituents]
        )
        self.omega_matrix = _cartan_matrix(spec.omega)
        self.charge_matrix = _cartan_matrix(spec.charge_vector())

    def chart(self, x, t=None):
        x = np.asarray(x, dtype=float)
        code = np.zeros(x.shape[:-1], dtype=np.int64)
        for k in range(len(self.positions)):
            south = _patch_mask(x[..., 2] - self.positions[k][2])
            code |= south.astype(np.int64) << k
        return code

    def evaluate(self, x, t, chart=None):
        x = np.asarray(x, dtype=float)
        if chart is None:
            chart = self.chart(x)
        chart = np.asarray(chart)
        shape = x.shape[:-1]
        A = np.zeros(shape + (3, self.n, self.n), dtype=complex)
        Phi = np.broadcast_to(self.omega_matrix / self.epsilon, shape + (self.n, self.n)).copy()
        for k, p in enumerate(self.positions):
            rel = x - p
            r = np.linalg.norm(rel, axis=-1)
            if np.any(r == 0.0):
                raise SingularPointError("evaluation at a constituent position")
            south = ((chart >> k) & 1).astype(bool)
            coeff = np.zeros(shape + (3,))
            if np.any(~south):
                coeff[~south] = dirac_potential(rel[~south], "N")
            if np.any(south):
                coeff[south] = dirac_potential(rel[south], "S")
            A += coeff[..., :, None, None] * self.charges[k]
            Phi -= self.charges[k] / (2.0 * r)[..., None, None]
        return A, Phi

    def exact_curvature(self, x, t):
        """Closed-form E = B = sum_k gamma_k (x-p_k) / (2 |x-p_k|^3)."""
        x = np.asarray(x, dtype=float)
        shape = x.shape[:-1]
        E = np.zeros(shape + (3, self.n, self.n), dtype=complex)
        for k, p in enumerate(self.positions):
            rel = x - p
            r = np.linalg.norm(rel, axis=-1)
            coeff = rel / (2.0 * r**3)[..., None]
            E += coeff[..., :, None, None] * self.charges[k]
        return E, E.copy()


def singular_caloron(spec: CaloronSpec) -> SingularCaloron:
    return SingularCaloron(spec)


# ---------------------------------------------------------------------------
# the glued approximate caloron

_REGION_FAR = -1
_REGION_CORE = 0
_REGION_ANN_N = 1
_REGION_ANN_S = 2


def _encode_chart(kind, k=0, mask=0):
    if kind == _REGION_FAR:
        return -(int(mask) + 1)
    return int(k) * 4 + kind + 1


class ApproximateCaloron(ConnectionSampler):
    """The glued connection: fundamental calorons inside r_k <= R/2, the
    chi-interpolation on the annuli, the singular abelian caloron outside."""

    def __init__(self, spec: CaloronSpec):
        self.spec = spec
        self.datum = spec.datum
        self.epsilon = float(spec.epsilon)
        self.n = self.datum.ambient_dim
        self.R = spec.gluing_radius()
        self.profile = GluingProfile(self.R)
        self.positions = spec.positions
        self.singular = SingularCaloron(spec)
        self.charge_matrix = self.singular.charge_matrix
        self.omega_shifts = holonomy_shifts(spec)
        self.t_independent = all(c.mu != 0 for c in spec.constituents)

        self.locals: List[FundamentalCaloron] = []
        self.psi: List[np.ndarray] = []
        for k, c in enumerate(spec.constituents):
            om_k = self.omega_shifts[k]
            if float(alcove_margin(self.datum, om_k)) <= 0:
                raise GluingInfeasibleError(
                    f"local holonomy parameter of constituent {k} left the alcove; "
                    "decrease epsilon or increase the separations"
                )
            fund = FundamentalCaloron(self.datum, c.mu, om_k, self.epsilon, c.position)
            self.locals.append(fund)
            half = 0.5 * float(c.phase)
            m3 = fund.embedding.embed(1j * np.array([[1.0, 0.0], [0.0, -1.0]]))
            w, v = np.linalg.eigh(m3 / 1j)
            psi = v @ np.diag(np.exp(1j * w * half)) @ dagger(v)
            self.psi.append(psi)

        # per-(k,l) patch for the spectator monopole l seen from annulus k
        npts = len(self.positions)
        self._spect_patch = np.zeros((npts, npts), dtype=bool)
        for k in range(npts):
            for l in range(npts):
                if l != k:
                    self._spect_patch[k, l] = _patch_mask(
                        self.positions[k][2] - self.positions[l][2]
                    )

    # -- charts --------------------------------------------------------------

    def _radii(self, x):
        x = np.asarray(x, dtype=float)
        rel = x[..., None, :] - self.positions
        return np.linalg.norm(rel, axis=-1)

    def chart(self, x, t=None):
        x = np.asarray(x, dtype=float)
        r = self._radii(x)
        kmin = np.argmin(r, axis=-1)
        rmin = np.take_along_axis(r, kmin[..., None], axis=-1)[..., 0]
        code = np.empty(x.shape[:-1], dtype=np.int64)
        far = rmin > self.R
        code[far] = -(self.singular.chart(x)[far] + 1)
        core = rmin <= 0.5 * self.R
        code[core] = kmin[core] * 4 + _REGION_CORE + 1
        ann = (~far) & (~core)
        if np.any(ann):
            zrel_all = x[..., 2, None] - self.positions[:, 2]
            zrel = np.take_along_axis(zrel_all, kmin[..., None], axis=-1)[..., 0]
            kind = np.where(_patch_mask(zrel), _REGION_ANN_S, _REGION_ANN_N)
            code[ann] = kmin[ann] * 4 + kind[ann] + 1
        return code

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, x, t, chart=None):
        x = np.asarray(x, dtype=float)
        t = np.broadcast_to(np.asarray(t, dtype=float), x.shape[:-1])
        if chart is None:
            chart = self.chart(x)
        chart = np.broadcast_to(np.asarray(chart), x.shape[:-1])
        shape = x.shape[:-1]
        A = np.zeros(shape + (3, self.n, self.n), dtype=complex)
        Phi = np.zeros(shape + (self.n, self.n), dtype=complex)

        flat_x = x.reshape(-1, 3)
        flat_t = t.reshape(-1)
        flat_c = chart.reshape(-1)
        flat_A = A.reshape(-1, 3, self.n, self.n)
        flat_P = Phi.reshape(-1, self.n, self.n)

        for code in np.unique(flat_c):
            sel = flat_c == code
            xs, ts = flat_x[sel], flat_t[sel]
            if code < 0:
                mask = int(-code - 1)
                a, p = self.singular.evaluate(
                    xs, ts, np.full(xs.shape[0], mask, dtype=np.int64)
                )
            else:
                k, kind = divmod(int(code) - 1, 4)
                if kind == _REGION_CORE:
                    a, p = self.locals[k].evaluate(xs, ts)
                else:
                    patch = "N" if kind == _REGION_ANN_N else "S"
                    a, p = self._annulus_eval(k, patch, xs, ts)
            flat_A[sel] = a
            flat_P[sel] = p
        return A, Phi

    def annulus_parts(self, k, patch, xs, ts):
        """Constituents of the annulus gauge at points xs: the abelian model,
        the framed fundamental remainder b (psi-conjugated) and the abelian
        remainder s of the spectator monopoles."""
        spec = self.spec
        cst = spec.constituents[k]
        fund = self.locals[k]
        gamma_k = fund.charge_matrix
        om_k = self.omega_shifts[k]
        rel = xs - self.positions[k]
        r = np.linalg.norm(rel, axis=-1)

        model_A = dirac_potential(rel, patch)[..., :, None, None] * gamma_k
        model_P = _cartan_matrix(om_k) / self.epsilon - gamma_k / (2.0 * r)[..., None, None]

        if cst.mu == 0:
            bA2, bP2 = rotated_remainder(rel, ts, fund.v, patch)
        else:
            bA2, bP2 = bps_remainder(rel, fund.v, patch)
        bA = fund.embedding.embed(bA2)
        bP = fund.embedding.embed(bP2)
        psi = self.psi[k]
        psid = dagger(psi)
        bA = psid @ bA @ psi
        bP = psid @ bP @ psi

        sA = np.zeros_like(bA)
        sP = np.zeros_like(bP)
        for l, cl in enumerate(spec.constituents):
            if l == k:
                continue
            gamma_l = self.singular.charges[l]
            pl = self.positions[l]
            d_kl = float(np.linalg.norm(self.positions[k] - pl))
            lpatch = "S" if self._spect_patch[k, l] else "N"
            coeff = dirac_potential(xs - pl, lpatch) - dirac_potential(
                (self.positions[k] - pl)[None, :], lpatch
            )
            sA += coeff[..., :, None, None] * gamma_l
            rl = np.linalg.norm(xs - pl, axis=-1)
            sP += (1.0 / (2.0 * d_kl) - 1.0 / (2.0 * rl))[..., None, None] * gamma_l

        return {
            "r": r,
            "chi": self.profile.chi(r),
            "model": (model_A, model_P),
            "b": (bA, bP),
            "s": (sA, sP),
        }

    def _annulus_eval(self, k, patch, xs, ts):
        parts = self.annulus_parts(k, patch, xs, ts)
        chi = parts["chi"]
        model_A, model_P = parts["model"]
        bA, bP = parts["b"]
        sA, sP = parts["s"]
        omchi = 1.0 - chi
        A = model_A + chi[..., None, None, None] * bA + omchi[..., None, None, None] * sA
        Phi = model_P + chi[..., None, None] * bP + omchi[..., None, None] * sP
        return A, Phi

    def exact_curvature(self, x, t):
        """Closed-form curvature where the glued field is exactly abelian
        (all r_k > R); falls back to finite differences on any other points."""
        x = np.asarray(x, dtype=float)
        t = np.broadcast_to(np.asarray(t, dtype=float), x.shape[:-1])
        r = self._radii(x)
        far = np.min(r, axis=-1) > self.R * 1.0001
        E = np.zeros(x.shape[:-1] + (3, self.n, self.n), dtype=complex)
        B = np.zeros_like(E)
        if np.any(far):
            Ef, Bf = self.singular.exact_curvature(x[far], t[far])
            E[far], B[far] = Ef, Bf
        if not np.all(far):
            from .fieldcalc import curvature_at

            inner = ~far
            curv = curvature_at(self, x[inner], t[inner], step=self.epsilon / 20.0)
            E[inner] = curv.E
            B[inner] = curv.B
        return E, B


def approximate_caloron(spec: CaloronSpec) -> ApproximateCaloron:
    return ApproximateCaloron(spec)


# ---------------------------------------------------------------------------
# alcove containment certificate

def alcove_exclusion_constant(spec: CaloronSpec) -> float:
    """Constant c with the property that outside the balls of radius c*eps
    the abelian Higgs field stays in a compact subset of the alcove: chosen
    so each single-monopole term eats at most half the asymptotic margin."""
    datum = spec.datum
    sigma_inf = float(alcove_margin(datum, spec.omega))
    pairings = []
    for mu in range(datum.rank + 1):
        for nu in range(datum.rank + 1):
            pairings.append(abs(datum.extended_cartan[mu][nu]))
    return max(pairings) / sigma_inf


def alcove_margin_report(spec: CaloronSpec, refine=1):
    """Scan the abelian Higgs field eps*Phi_sing outside the exclusion balls
    r_k >= c_excl * eps and report the worst facet margin sigma."""
    from .quadrature import sphere_rule

    datum = spec.datum
    eps = spec.epsilon
    c_excl = alcove_exclusion_constant(spec)
    r0 = c_excl * eps
    sing = singular_caloron(spec)

    simple = [as_float(a) for a in datum.simple_roots]
    lowest = as_float(datum.lowest_root)

    def margins(pts):
        _, Phi = sing(pts, 0.0)
        h = np.diagonal(eps * Phi, axis1=-2, axis2=-1).imag
        vals = [h @ a for a in simple]
        vals.append(1.0 + h @ lowest)
        return np.min(np.stack(vals, axis=-1), axis=-1)

    dirs, _ = sphere_rule(6 * refine, 10 * refine)
    worst = math.inf
    radii_factors = np.array([1.0, 1.25, 1.6, 2.2, 3.5, 6.0, 12.0, 30.0])
    for p in spec.positions:
        for f in radii_factors:
            pts = p[None, :] + (r0 * f) * dirs
            r_all = np.linalg.norm(pts[:, None, :] - spec.positions[None, :, :], axis=-1)
            ok = np.all(r_all >= r0 * 0.999999, axis=-1)
            if np.any(ok):
                worst = min(worst, float(np.min(margins(pts[ok]))))
    # coarse background lattice out to the far zone
    span = spec.d_max_eff * 3.0
    n_lat = 7 * refine
    grid = np.linspace(-span, span, n_lat)
    gx, gy, gz = np.meshgrid(grid, grid, grid, indexing="ij")
    pts = np.stack([gx, gy, gz], axis=-1).reshape(-1, 3)
    r_all = np.linalg.norm(pts[:, None, :] - spec.positions[None, :, :], axis=-1)
    ok = np.all(r_all >= r0, axis=-1)
    worst = min(worst, float(np.min(margins(pts[ok]))))
    return {"sigma": worst, "c_exclusion": c_excl, "r_exclusion": r0}
