"""Verification suite for a constructed approximate caloron.

Runs every invariant that is checkable at desk scale for a given spec:
gluing feasibility, local alcove data, Bogomolny residuals at the cores,
localization and pointwise bound of the self-dual error, gauge-patch
consistency on the annuli, charge recovery, holonomy at infinity, and the
energy against its closed-form value.  Produces a FieldReport plus a
pass/fail ledger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .assembler import (
    CaloronSpec,
    alcove_margin_report,
    approximate_caloron,
    holonomy_shifts,
)
from .fieldcalc import (
    FieldReport,
    MetricParams,
    curvature_at,
    integrate_energy,
    lie_norm_sq,
    magnetic_charge,
    sd_error_l2,
    sphere_averaged_holonomy,
    tr_f_wedge_f,
)
from .quadrature import desk_grid
from .rootsys import alcove_margin, as_float
from .samplers import dagger


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{status}] {self.name}: {self.value:.6g} (tol {self.tolerance:.3g}){extra}"


def energy_formula_float(spec: CaloronSpec) -> float:
    """Closed-form Yang-Mills energy of the spec's charge data in floats."""
    datum = spec.datum
    n = spec.counts()
    omega = np.asarray(spec.omega, dtype=float)
    total = n[0] * (1.0 + float(as_float(datum.lowest_root) @ omega))
    for mu in range(1, datum.rank + 1):
        av = datum.simple_coroots[mu - 1]
        total += (
            0.5
            * float(datum.norm_sq(av))
            * n[mu]
            * float(as_float(datum.simple_roots[mu - 1]) @ omega)
        )
    return total


def _one_form_norm(a_part, phi_part):
    """|a|_{g_eps} for a = a_i dx^i + eps*phi dt (orthonormal frame)."""
    return np.sqrt(
        np.sum(lie_norm_sq(a_part), axis=-1) + lie_norm_sq(phi_part)
    )


def run_verification(
    spec: CaloronSpec,
    grid="desk",
    fd_step: Optional[float] = None,
    seed: int = 0,
    n_probe: int = 200,
):
    """Full invariant suite; returns (FieldReport, [Check])."""
    rng = np.random.default_rng(seed)
    checks: List[Check] = []
    eps = spec.epsilon
    met = MetricParams(eps)
    samp = approximate_caloron(spec)
    R = samp.R
    datum = spec.datum
    if fd_step is None:
        fd_step = eps / 100.0

    # 1. alcove membership of omega and of every local parameter
    margin = float(alcove_margin(datum, spec.omega))
    checks.append(Check("alcove-omega-margin", margin > 0, margin, 0.0))
    shifts = holonomy_shifts(spec)
    shift_margin = min(float(alcove_margin(datum, om)) for om in shifts)
    checks.append(Check("alcove-local-parameters", shift_margin > 0, shift_margin, 0.0))

    # shift-size bound eps (n-1) max|coroot| / (2 d_min)
    if len(spec.constituents) > 1:
        max_norm = max(
            math.sqrt(float(datum.norm_sq(datum.node_coroot(c.mu))))
            for c in spec.constituents
        )
        bound = eps * (len(spec.constituents) - 1) * max_norm / (2.0 * spec.d_min)
        worst = max(
            float(np.linalg.norm(np.asarray(om) - np.asarray(spec.omega)))
            for om in shifts
        )
        checks.append(
            Check("holonomy-shift-bound", worst <= bound * 1.0000001, worst, bound)
        )

    # 2. gluing feasibility
    feas = R < spec.d_min / 2.0
    checks.append(Check("gluing-radius", feas, R, spec.d_min / 2.0, f"R/eps={R / eps:.2f}"))

    # 3. Bogomolny residual at the cores (self-dual error ~ FD noise)
    core_pts = []
    for p in spec.positions:
        u = rng.normal(size=(8, 3))
        u *= (0.3 * R / np.linalg.norm(u, axis=1))[:, None]
        core_pts.append(p + u)
    core_pts = np.concatenate(core_pts)
    ts = rng.uniform(0.0, 2.0 * np.pi, len(core_pts))
    curv = curvature_at(samp, core_pts, ts, step=fd_step)
    core_sd = float(np.sqrt(np.max(curv.sd_norm_sq())))
    checks.append(Check("core-self-dual-error", core_sd < 1e-3, core_sd, 1e-3))

    # 4. exterior region exactly abelian: FD self-dual error at far probes
    far_pts = rng.normal(size=(24, 3))
    far_pts /= np.linalg.norm(far_pts, axis=1)[:, None]
    far_pts *= (spec.d_max + 3.0 * R + 1.0) * rng.uniform(1.0, 2.0, 24)[:, None]
    curv = curvature_at(samp, far_pts, 0.0, step=min(eps / 10.0, 0.05))
    far_sd = float(np.sqrt(np.max(curv.sd_norm_sq())))
    checks.append(Check("far-self-dual-error", far_sd < 1e-6, far_sd, 1e-6))

    # 5. annulus pointwise bound: |F+| <= C [(1/r) max(|b|,|s|) + max(|b|^2,|s|^2)]
    #    with C from the cutoff profile (sup|r chi'| <= 15/4, plus the
    #    quadratic mixing term)
    n_ann = max(n_probe, 1)
    per = max(n_ann // max(len(spec.constituents), 1), 10)
    worst_ratio = 0.0
    for k, cst in enumerate(spec.constituents):
        p = spec.positions[k]
        u = rng.normal(size=(per, 3))
        u /= np.linalg.norm(u, axis=1)[:, None]
        radii = rng.uniform(0.5 * R, R, per)
        pts = p + radii[:, None] * u
        tk = rng.uniform(0.0, 2.0 * np.pi, per)
        chart = samp.chart(pts)
        patches = np.where((pts[:, 2] - p[2]) >= 0, "N", "S")
        for patch in ("N", "S"):
            sel = patches == patch
            if not np.any(sel):
                continue
            parts = samp.annulus_parts(k, patch, pts[sel], tk[sel])
            bnorm = _one_form_norm(*parts["b"])
            snorm = _one_form_norm(*parts["s"])
            mx = np.maximum(bnorm, snorm)
            bound = mx / parts["r"] + mx**2
            curv = curvature_at(samp, pts[sel], tk[sel], step=fd_step)
            ratio = np.sqrt(curv.sd_norm_sq()) / np.maximum(bound, 1e-300)
            worst_ratio = max(worst_ratio, float(np.max(ratio)))
    c_profile = 15.0 / 4.0 * 2.0 + 2.0
    checks.append(
        Check("annulus-fplus-bound", worst_ratio <= c_profile, worst_ratio, c_profile)
    )

    # 6. gauge patch consistency on the annuli: the north and south
    #    presentations differ by the recorded abelian transition
    worst_gauge = 0.0
    for k, cst in enumerate(spec.constituents):
        p = spec.positions[k]
        u = rng.normal(size=(12, 3))
        u /= np.linalg.norm(u, axis=1)[:, None]
        u[:, 2] *= 0.2  # stay near the equator, away from both strings
        u /= np.linalg.norm(u, axis=1)[:, None]
        pts = p + rng.uniform(0.55 * R, 0.95 * R, 12)[:, None] * u
        tk = rng.uniform(0.0, 2.0 * np.pi, 12)
        aN, pN = samp._annulus_eval(k, "N", pts, tk)
        aS, pS = samp._annulus_eval(k, "S", pts, tk)
        rel = pts - p
        phi_az = np.arctan2(rel[:, 1], rel[:, 0])
        gamma = samp.locals[k].charge_matrix
        w, v = np.linalg.eigh(gamma / 1j)
        uu = np.einsum("ij,pj,kj->pik", v, np.exp(-1j * np.outer(phi_az, w)), np.conjugate(v))
        uud = dagger(uu)
        # grad(phi) = (-y, x, 0)/rho^2
        rho2 = rel[:, 0] ** 2 + rel[:, 1] ** 2
        dphi = np.stack([-rel[:, 1] / rho2, rel[:, 0] / rho2, np.zeros(len(pts))], axis=-1)
        pred_A = np.einsum("pij,pajk,pkl->pail", uud, aN, uu) - dphi[..., :, None, None] * gamma
        pred_P = uud @ pN @ uu
        err = max(float(np.max(np.abs(aS - pred_A))), float(np.max(np.abs(pS - pred_P))))
        worst_gauge = max(worst_gauge, err)
    checks.append(Check("gauge-patch-consistency", worst_gauge < 1e-10, worst_gauge, 1e-10))

    # 7. alcove containment of the abelian Higgs field with a global margin
    rep1 = alcove_margin_report(spec, refine=1)
    rep2 = alcove_margin_report(spec, refine=2)
    sigma = rep2["sigma"]
    stable = abs(rep2["sigma"] - rep1["sigma"]) <= 0.1 * abs(rep1["sigma"])
    checks.append(
        Check(
            "alcove-containment-sigma",
            sigma > 0 and stable,
            sigma,
            0.0,
            f"refinement drift {abs(rep2['sigma'] - rep1['sigma']):.2e}",
        )
    )

    # 8. magnetic charge recovery
    radius = 2.0 * (spec.d_max + 1.0)
    coeffs, resid = magnetic_charge(samp, radius, quadrature=(12, 24))
    expected = spec.charge_coefficients()
    ok = coeffs == expected and resid < 0.05
    checks.append(
        Check("magnetic-charge", ok, resid, 0.05, f"recovered {coeffs}, expected {expected}")
    )

    # 9. holonomy at infinity vs the abelian model
    L = 10.0 * spec.d_max_eff
    phases = sphere_averaged_holonomy(samp, L, met, n_theta=6, n_phi=8, n_steps=64)
    gamma_vec = spec.charge_vector()
    model = 2.0 * np.pi * (np.asarray(spec.omega) - eps * gamma_vec / (2.0 * L))
    model = np.sort(model)[::-1]
    hol_err = float(np.max(np.abs(phases - model)))
    checks.append(Check("holonomy-infinity", hol_err < 1e-4, hol_err, 1e-4))

    # 10. self-dual error: localization on the annuli
    sd = sd_error_l2(samp, met, spec)
    checks.append(
        Check(
            "sd-error-localization",
            sd.annulus_fraction >= 0.95,
            sd.annulus_fraction,
            0.95,
            f"||F+||_L2 = {sd.value:.4g}",
        )
    )

    # 11. energy against the closed-form value
    core_scales = [1.0 / (2.0 * f.v) for f in samp.locals]
    vol = desk_grid(
        list(spec.positions),
        core_scales,
        spec.d_max_eff,
        fd_step=fd_step,
        nt=16,
        fine=(grid == "fine"),
    )
    energy = integrate_energy(samp, met, vol)
    formula = energy_formula_float(spec)
    rel_err = abs(energy.value - formula) / max(abs(formula), 1e-12)
    checks.append(
        Check("energy-vs-formula", rel_err < 0.02, energy.value, 0.02, f"formula {formula:.6g}")
    )
    topo = tr_f_wedge_f(samp, met, vol)

    report = FieldReport(
        ym_energy=energy.value,
        ym_energy_raw=energy.raw,
        energy_formula=formula,
        sd_error_l2=sd.value,
        sd_annulus_fraction=sd.annulus_fraction,
        recovered_charge=coeffs,
        charge_residual=resid,
        holonomy_eigenphases=tuple(float(p) for p in phases),
        holonomy_model_phases=tuple(float(p) for p in model),
        tr_f_wedge_f=topo,
        grid={
            "preset": vol.meta.get("preset"),
            "points": vol.total_points(),
            "r_max": vol.r_max,
            "nt": vol.nt,
            "fd_step": fd_step,
            "seed": seed,
            "gluing_radius": R,
            "alcove_sigma": sigma,
            "annulus_gauge": "two-patch abelian; spectator constant 1-forms subtracted at the centre",
        },
    )
    return report, checks
