"""Metrics on the configuration space of the coupled rotor.

The orbital and spin angular momenta are realised as two particles on unit
spheres with angles ``(theta, phi)`` and ``(theta', phi')``. Writing
``L^2/(2 I_L) + S^2/(2 I_S) + (L.S)/I_LS`` in canonical momenta gives a
quadratic form ``p.G.p / 2`` whose matrix ``G`` is the inverse metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateMetric, StepTooLarge
from ._backend import kernels

DEFAULT_DET_TOL = 1e-12


@dataclass(frozen=True)
class InertiaTriple:
    """Moments of inertia ``I_L``, ``I_S`` and the spin-orbit coupling ``1/I_LS``.

    ``inv_I_LS`` may have either sign; 0 is the decoupled product of spheres.
    """

    I_L: float
    I_S: float
    inv_I_LS: float = 0.0

    def __post_init__(self):
        if not (self.I_L > 0 and self.I_S > 0):
            raise ValueError("I_L and I_S must be positive")
        if not math.isfinite(self.inv_I_LS):
            raise ValueError("inv_I_LS must be finite")

    @property
    def weak_coupling_ratio(self) -> float:
        """``|1/I_LS| / (1/I_L + 1/I_S)``; small means the perturbative regime."""
        return abs(self.inv_I_LS) / (1 / self.I_L + 1 / self.I_S)


@dataclass(frozen=True)
class ConfigPoint:
    theta: float
    phi: float
    theta_p: float
    phi_p: float

    def __post_init__(self):
        for name in ("theta", "theta_p"):
            v = getattr(self, name)
            if not 0.0 < v < math.pi:
                raise StepTooLarge(f"{name}={v} is outside the chart (0, pi)")

    def as_array(self):
        return np.array([self.theta, self.phi, self.theta_p, self.phi_p])

    @property
    def relative_angle(self) -> float:
        x = _unit(self.theta, self.phi)
        y = _unit(self.theta_p, self.phi_p)
        return math.acos(max(-1.0, min(1.0, float(x @ y))))


def _unit(theta, phi):
    return np.array([math.sin(theta) * math.cos(phi),
                     math.sin(theta) * math.sin(phi),
                     math.cos(theta)])


# ---------------------------------------------------------------------------
# metric fields: anything that can hand back a stack of g_{mu nu}
# ---------------------------------------------------------------------------

class MetricField:
    """A metric given pointwise on a coordinate chart.

    Subclasses implement :meth:`metric_batch`. ``polar_axes`` lists the
    coordinates that are polar angles and must stay away from 0 and pi.
    """

    dim: int
    polar_axes: tuple = ()

    def metric_batch(self, points):
        raise NotImplementedError

    def inverse_metric_batch(self, points):
        return np.linalg.inv(self.metric_batch(points))

    def check_chart(self, q, margin=0.0):
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dim,):
            raise ValueError(f"expected a point with {self.dim} coordinates, got {q.shape}")
        for ax in self.polar_axes:
            if not (q[ax] - margin > 0.0 and q[ax] + margin < math.pi):
                raise StepTooLarge(
                    f"coordinate {ax} = {q[ax]:.6g} is within {margin:.3g} of a pole")
        return q


class CoupledRotorMetric(MetricField):
    """The four-dimensional metric of two coupled rotors."""

    dim = 4
    polar_axes = (0, 2)

    def __init__(self, inertia: InertiaTriple):
        self.inertia = inertia

    def _args(self):
        i = self.inertia
        return float(i.I_L), float(i.I_S), float(i.inv_I_LS)

    def metric_batch(self, points):
        g, _ = kernels.coupled_metric_batch(np.atleast_2d(points), *self._args())
        return g

    def inverse_metric_batch(self, points):
        return kernels.coupled_inverse_metric_batch(np.atleast_2d(points), *self._args())


class SphereMetric(MetricField):
    """``I (dtheta^2 + sin^2 theta dphi^2)``: a sphere of radius ``sqrt(I)``."""

    dim = 2
    polar_axes = (0,)

    def __init__(self, inertia: float = 1.0):
        if inertia <= 0:
            raise ValueError("inertia must be positive")
        self.inertia = float(inertia)

    def metric_batch(self, points):
        points = np.atleast_2d(points)
        g = np.zeros((points.shape[0], 2, 2))
        g[:, 0, 0] = self.inertia
        g[:, 1, 1] = self.inertia * np.sin(points[:, 0]) ** 2
        return g

    def inverse_metric_batch(self, points):
        points = np.atleast_2d(points)
        G = np.zeros((points.shape[0], 2, 2))
        G[:, 0, 0] = 1.0 / self.inertia
        G[:, 1, 1] = 1.0 / (self.inertia * np.sin(points[:, 0]) ** 2)
        return G


class FlatMetric(MetricField):
    """Identity metric; a zero-curvature control."""

    def __init__(self, dim: int = 4):
        self.dim = dim

    def metric_batch(self, points):
        points = np.atleast_2d(points)
        return np.broadcast_to(np.eye(self.dim), (points.shape[0], self.dim, self.dim)).copy()

    def inverse_metric_batch(self, points):
        return self.metric_batch(points)


def as_metric_field(source) -> MetricField:
    if isinstance(source, MetricField):
        return source
    if isinstance(source, InertiaTriple):
        return CoupledRotorMetric(source)
    raise TypeError(f"cannot build a metric from {source!r}")


def _point(q):
    if isinstance(q, ConfigPoint):
        return q.as_array()
    return np.asarray(q, dtype=float)


# ---------------------------------------------------------------------------
# public pointwise operations
# ---------------------------------------------------------------------------

def inverse_metric(inertia, q):
    """``g^{mu nu}`` at one point as a 4x4 array."""
    field = as_metric_field(inertia)
    q = field.check_chart(_point(q))
    return field.inverse_metric_batch(q[None, :])[0]


def check_inverse_metric(G, det_tol=DEFAULT_DET_TOL):
    """Raise :class:`DegenerateMetric` unless ``G`` is safely positive definite."""
    scale = float(np.max(np.abs(G)))
    det = float(np.linalg.det(G))
    if not math.isfinite(det) or abs(det) < det_tol * scale ** G.shape[0]:
        raise DegenerateMetric(f"det g^(mu nu) = {det:.3e} is below tolerance")
    try:
        np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        lo = float(np.linalg.eigvalsh(G)[0])
        raise DegenerateMetric(
            f"inverse metric is not positive definite (lowest eigenvalue {lo:.3e})") from None
    return det


def metric(inertia, q, det_tol=DEFAULT_DET_TOL):
    """Return ``(g_{mu nu}, det g)`` at ``q``; checks the inverse metric first."""
    field = as_metric_field(inertia)
    q = field.check_chart(_point(q))
    G = field.inverse_metric_batch(q[None, :])[0]
    check_inverse_metric(G, det_tol)
    g = field.metric_batch(q[None, :])[0]
    return g, float(np.linalg.det(g))


def hamiltonian_from_components(inertia: InertiaTriple, q, p):
    """``L^2/2I_L + S^2/2I_S + (L.S)/I_LS`` with L and S built component-wise.

    Independent of the matrix layout in :func:`inverse_metric`; used to check it.
    """
    th, ph, thp, php = _point(q)
    p_th, p_ph, p_thp, p_php = p
    cot, cotp = 1 / math.tan(th), 1 / math.tan(thp)
    L = np.array([-math.sin(ph) * p_th - cot * math.cos(ph) * p_ph,
                  math.cos(ph) * p_th - cot * math.sin(ph) * p_ph,
                  p_ph])
    S = np.array([-math.sin(php) * p_thp - cotp * math.cos(php) * p_php,
                  math.cos(php) * p_thp - cotp * math.sin(php) * p_php,
                  p_php])
    return (L @ L / (2 * inertia.I_L) + S @ S / (2 * inertia.I_S)
            + inertia.inv_I_LS * (L @ S))
