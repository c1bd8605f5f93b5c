"""Dependence of the scalar curvature on the relative angle of the two rotors.

The diagonal rotation group acts by isometries, so ``R`` depends on a
configuration only through the angle ``beta`` between the two unit vectors.
Here ``R(beta)`` is sampled and fitted to ``R0 + kappa (f(beta) - 1)`` with
``f = 4 - 6 sin^2 beta``; how ``kappa`` scales with the coupling ``1/I_LS``
is measured rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..coupling import f_classical
from ..errors import DegenerateGrid
from .curvature import scalar_curvature
from .metrics import InertiaTriple

# Roundoff in second differences grows like eps/h^2 while the Richardson
# truncation error shrinks like h^4; 5e-3 balances the two for R ~ 1.
EXPANSION_STEP = 5e-3

DEFAULT_BETAS = tuple(np.linspace(0.2, math.pi - 0.2, 9))


def equator_point(beta):
    """``theta = theta' = pi/2``, ``phi - phi' = beta``."""
    return np.array([math.pi / 2, beta, math.pi / 2, 0.0])


def meridian_point(beta):
    """Both vectors in the x-z plane, symmetric about the equator."""
    return np.array([math.pi / 2 + beta / 2, 0.0, math.pi / 2 - beta / 2, 0.0])


@dataclass(frozen=True)
class ProfilePoint:
    beta: float
    R: float
    R_alt: float
    est_error: float


def curvature_profile(inertia: InertiaTriple, beta_grid, h=EXPANSION_STEP):
    """``R`` at each ``beta`` on the equator, cross-checked on a meridian."""
    out = []
    for beta in beta_grid:
        beta = float(beta)
        if not 0.0 < beta < math.pi:
            raise ValueError(f"beta={beta} must lie strictly inside (0, pi)")
        main = scalar_curvature(inertia, equator_point(beta), h)
        alt = scalar_curvature(inertia, meridian_point(beta), h)
        out.append(ProfilePoint(beta, main.scalar_R, alt.scalar_R,
                                main.est_error + alt.est_error))
    return out


@dataclass(frozen=True)
class ExpansionFit:
    inertia: InertiaTriple
    R0: float
    kappa: float
    residual_rms: float
    beta_samples: tuple = field(default=(), repr=False)

    @property
    def I_L(self):
        return self.inertia.I_L

    @property
    def I_S(self):
        return self.inertia.I_S

    @property
    def inv_I_LS(self):
        return self.inertia.inv_I_LS


def _fit_profile(inertia, betas, R):
    f = f_classical(betas)
    if np.ptp(f) == 0.0:
        raise DegenerateGrid("all beta samples give the same f")
    A = np.column_stack([np.ones_like(f), f - 1.0])
    (R0, kappa), *_ = np.linalg.lstsq(A, R, rcond=None)
    resid = R - A @ np.array([R0, kappa])
    return ExpansionFit(inertia, float(R0), float(kappa),
                        float(np.sqrt(np.mean(resid ** 2))),
                        tuple(zip(map(float, betas), map(float, R))))


def _check_grid(beta_grid):
    betas = np.asarray(list(beta_grid), dtype=float)
    if np.unique(betas).size < 2:
        raise DegenerateGrid("beta grid has fewer than two distinct values")
    if betas.size < 4:
        raise ValueError("need at least 4 beta values")
    return betas


def fit_expansion(I_L, I_S, inv_ILS_list, beta_grid=DEFAULT_BETAS, h=EXPANSION_STEP):
    """One :class:`ExpansionFit` per coupling in ``inv_ILS_list``."""
    betas = _check_grid(beta_grid)
    fits = []
    for inv in inv_ILS_list:
        inertia = InertiaTriple(I_L, I_S, float(inv))
        R = np.array([scalar_curvature(inertia, equator_point(b), h).scalar_R for b in betas])
        fits.append(_fit_profile(inertia, betas, R))
    return fits


def fit_single(inertia: InertiaTriple, beta_grid=DEFAULT_BETAS, h=EXPANSION_STEP):
    return fit_expansion(inertia.I_L, inertia.I_S, [inertia.inv_I_LS], beta_grid, h)[0]


def printed_r2_coefficients(inertia: InertiaTriple):
    """``(R0, kappa)`` exactly as printed: ``2(1/I_L + 1/I_S)`` and ``(16/3)(I_L + I_S)/I_LS``."""
    R0 = 2.0 * (1.0 / inertia.I_L + 1.0 / inertia.I_S)
    kappa = 16.0 / 3.0 * (inertia.I_L + inertia.I_S) * inertia.inv_I_LS
    return R0, kappa


def printed_r2(inertia: InertiaTriple, beta):
    R0, kappa = printed_r2_coefficients(inertia)
    return R0 + kappa * (f_classical(beta) - 1.0)


@dataclass(frozen=True)
class ScalingReport:
    """How ``kappa`` scales with the coupling across a set of fits.

    ``kappa1`` is the least-squares slope of ``kappa`` against ``1/I_LS``
    through the origin, ``kappa2`` the slope against ``(1/I_LS)^2``. Each
    ``*_spread`` is ``max/min - 1`` of the pointwise ratios; a law holds when
    its spread is small.
    """

    kappa1: float
    kappa1_spread: float
    kappa2: float
    kappa2_spread: float
    printed_kappa1: float
    ratios1: tuple
    ratios2: tuple


def _spread(r):
    r = np.asarray(r, dtype=float)
    if np.any(r == 0) or np.any(np.sign(r) != np.sign(r[0])):
        return math.inf
    a = np.abs(r)
    return float(a.max() / a.min() - 1.0)


def expansion_scaling(fits) -> ScalingReport:
    fits = [f for f in fits if f.inv_I_LS != 0.0]
    if not fits:
        raise DegenerateGrid("no fit with nonzero coupling")
    I_L, I_S = fits[0].I_L, fits[0].I_S
    x = np.array([f.inv_I_LS for f in fits])
    k = np.array([f.kappa for f in fits])
    slope1 = float(x @ k / (x @ x))
    x2 = x ** 2
    slope2 = float(x2 @ k / (x2 @ x2))
    r1, r2 = k / x, k / x2
    return ScalingReport(slope1, _spread(r1), slope2, _spread(r2),
                         16.0 / 3.0 * (I_L + I_S),
                         tuple(map(float, r1)), tuple(map(float, r2)))
