"""Curvature and the Laplace-Beltrami operator by finite differences.

First and second derivatives of the metric come from central differences at
steps ``h`` and ``h/2``, combined by one Richardson step. Christoffel
symbols, the Ricci tensor and the scalar curvature are then assembled
analytically from these jets by the selected kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateMetric
from ._backend import kernels
from .metrics import DEFAULT_DET_TOL, _point, as_metric_field, check_inverse_metric

DEFAULT_STEP = 1e-3


def _stencil(q, s):
    """Centre, +-s e_i, and the four corners +-s e_i +-s e_j for i < j."""
    n = q.size
    E = np.eye(n) * s
    pts = [q]
    for i in range(n):
        pts += [q + E[i], q - E[i]]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        pts += [q + E[i] + E[j], q + E[i] - E[j], q - E[i] + E[j], q - E[i] - E[j]]
    return np.array(pts), pairs


def _jets_from_values(vals, n, pairs, s):
    """First and second derivative arrays from stencil values (any trailing shape)."""
    c = vals[0]
    d1 = np.empty((n,) + c.shape)
    d2 = np.empty((n, n) + c.shape)
    for i in range(n):
        fp, fm = vals[1 + 2 * i], vals[2 + 2 * i]
        d1[i] = (fp - fm) / (2 * s)
        d2[i, i] = (fp - 2 * c + fm) / (s * s)
    base = 1 + 2 * n
    for k, (i, j) in enumerate(pairs):
        pp, pm, mp, mm = vals[base + 4 * k: base + 4 * k + 4]
        d2[i, j] = d2[j, i] = (pp - pm - mp + mm) / (4 * s * s)
    return c, d1, d2


def _richardson(coarse, fine):
    return (4.0 * fine - coarse) / 3.0


@dataclass
class _Jets:
    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray


def metric_jets(field, q, s):
    """Metric and its first two derivatives at ``q`` with plain step ``s``."""
    pts, pairs = _stencil(q, s)
    vals = field.metric_batch(pts)
    if not np.all(np.isfinite(vals)):
        raise DegenerateMetric("metric is singular somewhere on the stencil")
    g, dg, ddg = _jets_from_values(vals, q.size, pairs, s)
    return _Jets(g, dg, ddg)


def _prepare(source, q, h, det_tol):
    if not h > 0:
        raise ValueError("step must be positive")
    field = as_metric_field(source)
    q = field.check_chart(_point(q), margin=2 * h)
    G = field.inverse_metric_batch(q[None, :])[0]
    check_inverse_metric(G, det_tol)
    return field, q


def _extrapolated_jets(field, q, h):
    coarse = metric_jets(field, q, h)
    fine = metric_jets(field, q, h / 2)
    best = _Jets(fine.g, _richardson(coarse.dg, fine.dg), _richardson(coarse.ddg, fine.ddg))
    return coarse, fine, best


def christoffel(source, q, h=DEFAULT_STEP, det_tol=DEFAULT_DET_TOL):
    """``Gamma[l, m, n] = Gamma^l_{mn}`` at ``q`` (Richardson-extrapolated)."""
    field, q = _prepare(source, q, h, det_tol)
    _, _, best = _extrapolated_jets(field, q, h)
    gamma, _, _ = kernels.curvature_from_jets(best.g, best.dg, best.ddg)
    return gamma


@dataclass
class CurvatureReport:
    christoffel: np.ndarray
    ricci: np.ndarray
    scalar_R: float
    step_h: float
    est_error: float
    plain: dict = field(default_factory=dict)


def scalar_curvature(source, q, h=DEFAULT_STEP, det_tol=DEFAULT_DET_TOL,
                     richardson=True) -> CurvatureReport:
    """Scalar curvature at ``q`` with an error estimate.

    ``est_error`` is the spread ``|R(h) - R(h/2)|`` of the two plain
    central-difference results, which bounds the error of the extrapolated
    value by a wide margin. With ``richardson=False`` the plain ``R(h)`` is
    reported instead.
    """
    field, q = _prepare(source, q, h, det_tol)
    coarse, fine, best = _extrapolated_jets(field, q, h)
    _, _, R_coarse = kernels.curvature_from_jets(coarse.g, coarse.dg, coarse.ddg)
    _, _, R_fine = kernels.curvature_from_jets(fine.g, fine.dg, fine.ddg)
    jets = best if richardson else coarse
    gamma, ricci, R = kernels.curvature_from_jets(jets.g, jets.dg, jets.ddg)
    return CurvatureReport(
        christoffel=gamma,
        ricci=ricci,
        scalar_R=float(R),
        step_h=float(h),
        est_error=abs(R_coarse - R_fine),
        plain={"R_h": float(R_coarse), "R_h2": float(R_fine)},
    )


def laplace_beltrami(scalar_field, source, q, h=DEFAULT_STEP, det_tol=DEFAULT_DET_TOL):
    """``g^{-1/2} d_mu (g^{1/2} g^{mu nu} d_nu psi)`` at ``q``.

    ``scalar_field`` maps a coordinate array of shape ``(dim,)`` to a float.
    Expanded as ``g^{mn} d_m d_n psi + (d_m g^{mn} + g^{mn} d_m ln sqrt g) d_n psi``.
    """
    field, q = _prepare(source, q, h, det_tol)
    n = q.size

    def psi_jets(s):
        pts, pairs = _stencil(q, s)
        vals = np.array([float(scalar_field(p)) for p in pts])
        return _jets_from_values(vals, n, pairs, s)

    coarse, fine, best = _extrapolated_jets(field, q, h)
    (_, dp_c, ddp_c), (_, dp_f, ddp_f) = psi_jets(h), psi_jets(h / 2)
    dpsi = _richardson(dp_c, dp_f)
    ddpsi = _richardson(ddp_c, ddp_f)

    gi = np.linalg.inv(best.g)
    # d_m g^{mn} summed over m, and d_m ln sqrt(g) = tr(g^-1 d_m g)/2
    div_gi = -np.einsum("ma,mab,bn->n", gi, best.dg, gi)
    dlog = 0.5 * np.einsum("ab,mba->m", gi, best.dg)
    return float(np.einsum("mn,mn->", gi, ddpsi)
                 + div_gi @ dpsi + np.einsum("mn,m,n->", gi, dlog, dpsi))
