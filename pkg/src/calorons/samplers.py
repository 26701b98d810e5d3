"""Connection samplers: the universal field representation.

A sampler is a pure evaluator (x, t) -> (A, Phi) where A has shape
(..., 3, n, n) and Phi (..., n, n), both anti-Hermitian, for x (..., 3) and
t scalar or (...).  The connection 1-form is A_i dx^i + eps * Phi dt.

Samplers may be defined through several overlapping local gauges ("charts").
Finite-difference stencils must evaluate every stencil point in the chart of
the base point; `chart(x, t)` returns a per-point chart code (None when the
sampler is single-chart) and `__call__` accepts it back.
"""

from __future__ import annotations

import numpy as np


def _broadcast_t(x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if t.shape != x.shape[:-1]:
        t = np.broadcast_to(t, x.shape[:-1]).copy()
    return x, t


class ConnectionSampler:
    """Base class; subclasses implement evaluate()."""

    n = 2
    epsilon = 1.0
    t_independent = True

    def chart(self, x, t=None):
        return None

    def __call__(self, x, t, chart=None):
        x, t = _broadcast_t(x, t)
        return self.evaluate(x, t, chart)

    def evaluate(self, x, t, chart=None):
        raise NotImplementedError

    def exact_curvature(self, x, t):
        """Closed-form (E, B) components when available, else None."""
        return None


class ConstantAbelianSampler(ConnectionSampler):
    """Flat connection omega dt: A = 0, Phi = omega_matrix / eps."""

    def __init__(self, omega_matrix, epsilon):
        self.omega_matrix = np.asarray(omega_matrix, dtype=complex)
        self.n = self.omega_matrix.shape[0]
        self.epsilon = float(epsilon)

    def evaluate(self, x, t, chart=None):
        shape = x.shape[:-1]
        A = np.zeros(shape + (3, self.n, self.n), dtype=complex)
        Phi = np.broadcast_to(self.omega_matrix / self.epsilon, shape + (self.n, self.n)).copy()
        return A, Phi


class PulledBackSampler(ConnectionSampler):
    """Gauge transform of a sampler: A -> g^-1 A g + g^-1 dg."""

    def __init__(self, base, gauge_map):
        self.base = base
        self.gauge = gauge_map
        self.n = base.n
        self.epsilon = base.epsilon
        self.t_independent = base.t_independent and gauge_map.t_independent

    def chart(self, x, t=None):
        return self.base.chart(x, t)

    def evaluate(self, x, t, chart=None):
        A, Phi = self.base(x, t, chart)
        g = self.gauge(x, t)
        ginv = np.conjugate(np.swapaxes(g, -1, -2))
        dg = self.gauge.spatial_derivative(x, t)
        dgdt = self.gauge.time_derivative(x, t)
        A_new = np.einsum("...ij,...ajk,...kl->...ail", ginv, A, g) + np.einsum(
            "...ij,...ajk->...aik", ginv, dg
        )
        Phi_new = ginv @ Phi @ g + (ginv @ dgdt) / self.epsilon
        return A_new, Phi_new


def dagger(m):
    return np.conjugate(np.swapaxes(m, -1, -2))
