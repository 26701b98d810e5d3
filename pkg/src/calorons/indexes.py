"""Closed-form index, energy and dimension formulas, in exact arithmetic.

All holonomy parameters entering these evaluators are rational Cartan
vectors; vanishing statements are asserted exactly, never to a floating
tolerance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import ResonanceError
from .rootsys import (
    RootDatum,
    Vector,
    charge_vector,
    dynkin_index_adjoint,
    pairing,
    vscale,
    vzero,
)


def energy_formula(datum: RootDatum, omega: Sequence, n: Sequence[int]):
    """Yang-Mills energy of a caloron with constituent counts (n_0,..,n_rk):

        n_0 (1 + alpha_0(omega)) + sum_mu (1/2)|alpha_mu^vee|^2 n_mu alpha_mu(omega)

    Exact when omega has rational coordinates.
    """
    total = n[0] * (1 + pairing(datum.lowest_root, omega))
    for mu in range(1, datum.rank + 1):
        av = datum.simple_coroots[mu - 1]
        total += (
            Fraction(1, 2)
            * datum.norm_sq(av)
            * n[mu]
            * pairing(datum.simple_roots[mu - 1], omega)
        )
    return total


def moduli_dimension(n: Sequence[int]) -> int:
    """Expected moduli dimension 4 * sum(n_mu)."""
    if any(int(x) < 0 for x in n):
        warnings.warn(
            "negative constituent count: the moduli space is expected to be empty",
            stacklevel=2,
        )
    return 4 * sum(int(x) for x in n)


def dynkin_index_su2(datum: RootDatum, mu: int) -> Fraction:
    """Dynkin index of the su(2) embedding at node mu acting on the
    complexified complement: (1/2) sum over roots alpha != +-(node root) of
    alpha(coroot)^2."""
    node = datum.node_root(mu)
    coroot = datum.node_coroot(mu)
    total = Fraction(0)
    for a in datum.positive_roots:
        total += pairing(a, coroot) ** 2
    # drop the +-node pair: its positive representative contributes 2^2
    total -= pairing(node, coroot) ** 2
    return total


def dynkin_index_su2_via_adjoint(datum: RootDatum, mu: int) -> Fraction:
    """Same quantity through the adjoint-index identity
    (1/2) ind_Ad |coroot|^2 - 4."""
    coroot = datum.node_coroot(mu)
    return Fraction(dynkin_index_adjoint(datum), 2) * datum.norm_sq(coroot) - 4


@dataclass(frozen=True)
class IndexReport:
    series: str
    rank: int
    mu: int
    omega: Vector
    chern_term: Fraction
    boundary_term: Fraction

    @property
    def total_index(self) -> int:
        total = self.chern_term + self.boundary_term
        assert total.denominator == 1
        return int(total)

    def to_dict(self):
        return {
            "series": self.series,
            "rank": self.rank,
            "mu": self.mu,
            "omega": [str(c) for c in self.omega],
            "chern_term": str(self.chern_term),
            "boundary_term": str(self.boundary_term),
            "total_index": self.total_index,
        }


def transverse_index(datum: RootDatum, mu: int, omega: Sequence) -> IndexReport:
    """Index of the deformation operator of the node-mu building block acting
    transversally to its stabilizer, split into Chern and boundary terms.

    Vanishes identically (exactly) for every simple type and every node.
    """
    omega = tuple(Fraction(c) for c in omega)
    node = datum.node_root(mu)
    coroot = datum.node_coroot(mu)
    sign = -1 if mu == 0 else 1
    n0 = 1 if mu == 0 else 0

    ind_p = dynkin_index_su2(datum, mu)
    a_omega = pairing(node, omega)
    chern = ind_p * (n0 + a_omega)

    rho = datum.rho()
    ind_ad = dynkin_index_adjoint(datum)
    boundary = 2 * (pairing(rho, coroot) - sign) - (
        Fraction(ind_ad, 2) * datum.norm_sq(coroot) - 4
    ) * a_omega
    return IndexReport(datum.series, datum.rank, mu, omega, chern, boundary)


# --------------------------------------------------------------------------
# twisted Dirac index for a family of representation twists


@dataclass(frozen=True)
class WeightList:
    """Weights of a representation as covectors on the Cartan, plus the
    representation's Dynkin index."""

    weights: Tuple[Vector, ...]
    dynkin_index_rho: Fraction

    def __len__(self):
        return len(self.weights)


def _rep_dynkin_index(datum: RootDatum, weights) -> Fraction:
    thetav = datum.coroots[datum.highest_root]
    return sum((pairing(w, thetav) ** 2 for w in weights), Fraction(0)) / 2


def weyl_closed(datum: RootDatum, weights) -> bool:
    """Sanity check: the weight multiset is stable under the simple
    reflections."""
    from collections import Counter

    bag = Counter(tuple(Fraction(c) for c in w) for w in weights)
    for a in datum.simple_roots:
        av = datum.coroots[a]
        refl = Counter()
        for w, k in bag.items():
            img = tuple(wc - pairing(w, av) * ac for wc, ac in zip(w, a))
            refl[img] += k
        if refl != bag:
            return False
    return True


def defining_weights(datum: RootDatum) -> WeightList:
    """Weights of the defining representation of su(n) (type A only)."""
    if datum.series != "A":
        raise ValueError("defining weights implemented for type A")
    dim = datum.ambient_dim
    ws = []
    for i in range(dim):
        ws.append(tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim)))
    return WeightList(tuple(ws), _rep_dynkin_index(datum, ws))


def adjoint_weights(datum: RootDatum) -> WeightList:
    """Weights of the adjoint representation: all roots plus rank zeros."""
    ws: List[Vector] = []
    for a in datum.positive_roots:
        ws.append(a)
        ws.append(vscale(-1, a))
    for _ in range(datum.rank):
        ws.append(vzero(datum.ambient_dim))
    return WeightList(tuple(ws), _rep_dynkin_index(datum, ws))


def weight_list(datum: RootDatum, weights, check_closure=True) -> WeightList:
    """Wrap externally supplied weights (e.g. from a file) with the closure
    sanity check."""
    ws = tuple(tuple(Fraction(c) for c in w) for w in weights)
    if check_closure and not weyl_closed(datum, ws):
        raise ValueError("weight multiset is not closed under the Weyl group")
    return WeightList(ws, _rep_dynkin_index(datum, ws))


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def twisted_dirac_index(
    datum: RootDatum,
    rep: WeightList,
    omega: Sequence,
    gamma_coeffs: Sequence[int],
    n0: int,
    s,
) -> int:
    """Index of the twisted Dirac family at spectral parameter s in (0,1):

        sum_w floor(w(omega)) w(gamma_m) + n0 ind(rho) + sum_{w : s_w < s} w(gamma_m)

    with s_w = 1 - frac(w(omega)).  s must be generic (!= every s_w).
    """
    omega = tuple(Fraction(c) for c in omega)
    s = Fraction(s)
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    gamma = charge_vector(datum, gamma_coeffs)

    total = Fraction(n0) * rep.dynkin_index_rho
    for w in rep.weights:
        w_omega = pairing(w, omega)
        w_gamma = pairing(w, gamma)
        fl = _floor_frac(w_omega)
        s_w = 1 - (w_omega - fl)
        if s == s_w:
            raise ResonanceError(s, w)
        total += fl * w_gamma
        if s_w < s:
            total += w_gamma
    assert total.denominator == 1, "twisted index not integral"
    return int(total)


def jump_loci(datum: RootDatum, rep: WeightList, omega: Sequence):
    """Sorted distinct values s_w in (0,1) where the twisted index jumps."""
    omega = tuple(Fraction(c) for c in omega)
    out = set()
    for w in rep.weights:
        w_omega = pairing(w, omega)
        s_w = 1 - (w_omega - _floor_frac(w_omega))
        if s_w < 1:
            out.add(s_w)
    return sorted(out)


def twisted_dirac_index_adjoint(
    datum: RootDatum, omega: Sequence, gamma_coeffs: Sequence[int], n0: int, s
) -> int:
    """Adjoint special case evaluated independently:

        2 sum_mu n_mu + sum_{alpha in R+} (delta_{s > s_alpha^+} - delta_{s > s_alpha^-}) alpha(gamma_m)

    with s_alpha^+ = 1 - alpha(omega), s_alpha^- = alpha(omega).
    """
    omega = tuple(Fraction(c) for c in omega)
    s = Fraction(s)
    gamma = charge_vector(datum, gamma_coeffs)
    n = [n0] + [
        c + n0 * m for c, m in zip(gamma_coeffs, datum.dual_coxeter_labels)
    ]
    total = Fraction(2 * sum(n))
    for a in datum.positive_roots:
        a_omega = pairing(a, omega)
        s_plus = 1 - a_omega
        s_minus = a_omega
        if s in (s_plus, s_minus):
            raise ResonanceError(s, a)
        delta = (1 if s > s_plus else 0) - (1 if s > s_minus else 0)
        total += delta * pairing(a, gamma)
    assert total.denominator == 1
    return int(total)


def positive_root_charge_sum(datum: RootDatum, gamma_coeffs: Sequence[int], n0: int):
    """Both sides of the identity sum_{alpha in R+} alpha(gamma_m)
    = 2 sum_mu (n_mu - n0 m_mu), exposed for experimentation."""
    gamma = charge_vector(datum, gamma_coeffs)
    lhs = sum((pairing(a, gamma) for a in datum.positive_roots), Fraction(0))
    n = [n0] + [c + n0 * m for c, m in zip(gamma_coeffs, datum.dual_coxeter_labels)]
    rhs = 2 * sum(n[mu] - n0 * m for mu, m in zip(range(1, datum.rank + 1), datum.dual_coxeter_labels))
    return lhs, rhs
