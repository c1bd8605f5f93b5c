"""Fine-structure levels with and without a ``c hbar^2 R`` term, and multiplet fits.

Level energies of the rotor Hamiltonian are affine in ``J(J+1)``, which is
what makes adjacent intervals grow linearly in ``J``. A curvature term adds
``c hbar^2 <R>_J`` with ``<R>_J = R0 + kappa (<f>_J - 1)``; the ``<f>_J``
are exact rationals from :mod:`lande_rterm.coupling`.

Interval arithmetic is carried out on exact rationals built from the float
inputs and rounded once at the end, so with ``c = 0`` every interval divided
by ``J`` is the same double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy import stats

from .coupling import CoupledLevel, allowed_J, f_expectation_6j, interval_factor
from .errors import InsufficientLevels, SingularDesign
from .exact import HalfInt
from .geometry import ExpansionFit, InertiaTriple, fit_single, printed_r2_coefficients

PRINTED_R2 = "printed"

KappaSource = Union[str, ExpansionFit]


@dataclass(frozen=True)
class LevelModel:
    """Level model; ``kappa_source`` is :data:`PRINTED_R2` or a measured fit."""

    inertia: InertiaTriple
    c: float = 0.0
    kappa_source: KappaSource = PRINTED_R2
    hbar_sq: float = 1.0

    def __post_init__(self):
        if not self.hbar_sq > 0:
            raise ValueError("hbar_sq must be positive")
        src = self.kappa_source
        if isinstance(src, ExpansionFit):
            if src.inertia != self.inertia:
                raise ValueError(
                    f"expansion fit was made for {src.inertia}, model uses {self.inertia}")
        elif src != PRINTED_R2:
            raise ValueError(f"unknown kappa source {src!r}")

    @classmethod
    def with_fitted_kappa(cls, inertia, c=0.0, hbar_sq=1.0, **fit_kw):
        """Measure ``(R0, kappa)`` for ``inertia`` and build the model on it."""
        return cls(inertia, c, fit_single(inertia, **fit_kw), hbar_sq)

    @property
    def curvature_coefficients(self) -> tuple[float, float]:
        """``(R0, kappa)`` from the chosen source."""
        if isinstance(self.kappa_source, ExpansionFit):
            return self.kappa_source.R0, self.kappa_source.kappa
        return printed_r2_coefficients(self.inertia)


def _q(x) -> Fraction:
    return Fraction(x) if not isinstance(x, HalfInt) else x.value


def _ls_energy_exact(level: CoupledLevel, inertia: InertiaTriple, hbar_sq) -> Fraction:
    L, S, J = level.L.value, level.S.value, level.J.value
    LL, SS, JJ = L * (L + 1), S * (S + 1), J * (J + 1)
    h2 = _q(hbar_sq)
    return (h2 / 2) * (LL / _q(inertia.I_L) + SS / _q(inertia.I_S)) \
        + (h2 / 2) * _q(inertia.inv_I_LS) * (JJ - LL - SS)


def ls_energy(level: CoupledLevel, inertia: InertiaTriple, hbar_sq=1.0) -> float:
    """``(hbar^2/2)[L(L+1)/I_L + S(S+1)/I_S] + (hbar^2/2)(1/I_LS)[J(J+1) - L(L+1) - S(S+1)]``."""
    return float(_ls_energy_exact(level, inertia, hbar_sq))


def _shift_exact(level: CoupledLevel, model: LevelModel) -> Fraction:
    if model.c == 0:
        return Fraction(0)
    R0, kappa = model.curvature_coefficients
    f = f_expectation_6j(level)
    return _q(model.c) * _q(model.hbar_sq) * (_q(R0) + _q(kappa) * (f - 1))


def perturbed_energy(level: CoupledLevel, model: LevelModel) -> float:
    """``ls_energy + c hbar^2 (R0 + kappa (<f>_J - 1))``."""
    return float(_ls_energy_exact(level, model.inertia, model.hbar_sq)
                 + _shift_exact(level, model))


def model_coefficients(L, S, model: LevelModel) -> dict:
    """``(E0, A, C)`` with ``E_J = E0 + A J(J+1)/2 + C <f>_J`` for this multiplet."""
    L, S = HalfInt.of(L).value, HalfInt.of(S).value
    LL, SS = L * (L + 1), S * (S + 1)
    i = model.inertia
    h2 = model.hbar_sq
    R0, kappa = model.curvature_coefficients
    E0 = (h2 / 2) * (float(LL) / i.I_L + float(SS) / i.I_S) \
        - (h2 / 2) * i.inv_I_LS * float(LL + SS) + model.c * h2 * (R0 - kappa)
    return {"E0": E0, "A": h2 * i.inv_I_LS, "C": model.c * h2 * kappa}


@dataclass(frozen=True)
class IntervalRow:
    J: HalfInt
    interval: float
    deviation: float
    factor: Fraction  # (<f>_J - <f>_{J-1}) / J


def interval_table(L, S, model: LevelModel) -> list[IntervalRow]:
    """``(E_J - E_{J-1})/J`` and its departure from ``hbar^2/I_LS`` for each upper ``J``."""
    Js = allowed_J(L, S)
    rows = []
    base = _q(model.hbar_sq) * _q(model.inertia.inv_I_LS)
    for lo, hi in zip(Js, Js[1:]):
        e_hi = _ls_energy_exact(CoupledLevel(L, S, hi), model.inertia, model.hbar_sq) \
            + _shift_exact(CoupledLevel(L, S, hi), model)
        e_lo = _ls_energy_exact(CoupledLevel(L, S, lo), model.inertia, model.hbar_sq) \
            + _shift_exact(CoupledLevel(L, S, lo), model)
        interval = (e_hi - e_lo) / hi.value
        rows.append(IntervalRow(hi, float(interval), float(interval - base),
                                interval_factor(L, S, hi)))
    return rows


# ---------------------------------------------------------------------------
# measured multiplets
# ---------------------------------------------------------------------------

@dataclass
class Multiplet:
    """Measured levels of one ``(L, S)`` term: ``levels[J] = (energy, uncertainty)``."""

    L: HalfInt
    S: HalfInt
    levels: dict
    label: str = ""

    def __post_init__(self):
        self.L = HalfInt.of(self.L)
        self.S = HalfInt.of(self.S)
        clean = {}
        for J, (E, u) in self.levels.items():
            J = HalfInt.of(J)
            CoupledLevel(self.L, self.S, J)  # triangle check
            E, u = float(E), float(u)
            if not math.isfinite(E):
                raise ValueError(f"energy for J={J} is not finite")
            if not (u >= 0 and math.isfinite(u)):
                raise ValueError(f"uncertainty for J={J} must be finite and nonnegative")
            clean[J] = (E, u)
        self.levels = dict(sorted(clean.items()))

    @property
    def Js(self):
        return list(self.levels)


@dataclass
class FitResult:
    E0: float
    A: float
    C: float
    covariance: np.ndarray
    dof: int
    c_kappa_bound: tuple
    residuals: dict
    confidence: float = 0.95
    scale_factor: float = 1.0
    c_estimate: Optional[tuple] = None
    notes: list = field(default_factory=list)


def design_matrix(m: Multiplet) -> np.ndarray:
    rows = []
    for J in m.Js:
        Jv = J.value
        f = f_expectation_6j(CoupledLevel(m.L, m.S, J))
        rows.append([1.0, float(Jv * (Jv + 1)) / 2.0, float(f)])
    return np.array(rows)


def fit_multiplet(m: Multiplet, confidence=0.95, kappa=None) -> FitResult:
    """Weighted least squares for ``E_J = E0 + A J(J+1)/2 + C <f>_J``.

    Weights are ``1/uncertainty^2`` (all ones when every uncertainty is zero).
    The covariance is scaled by the reduced chi-square and the interval on
    ``C`` uses Student's t with ``n - 3`` degrees of freedom. With exactly
    three levels there is no residual freedom: the covariance is left
    unscaled and the interval is unbounded.

    ``C = c hbar^2 kappa``; passing ``kappa`` (with ``hbar^2 = 1``) also
    reports the implied range of ``c``.
    """
    n = len(m.levels)
    if n < 3:
        raise InsufficientLevels(f"{m.label or 'multiplet'} has {n} levels; the fit needs 3")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    X = design_matrix(m)
    E = np.array([m.levels[J][0] for J in m.Js])
    u = np.array([m.levels[J][1] for J in m.Js])
    if np.all(u == 0):
        w = np.ones(n)
    elif np.any(u == 0):
        raise ValueError("uncertainties must be all zero or all positive")
    else:
        w = 1.0 / u ** 2

    sw = np.sqrt(w)
    Xw = X * sw[:, None]
    Ew = E * sw
    # column-scaled SVD so conditioning is judged independently of units
    norms = np.linalg.norm(Xw, axis=0)
    if np.any(norms == 0):
        zero = [name for name, nrm in zip(("E0", "A", "C"), norms) if nrm == 0]
        raise SingularDesign(f"design column(s) {zero} vanish for this multiplet",
                             {"zero_columns": zero, "f": X[:, 2].tolist()})
    _, sv, Vt = np.linalg.svd(Xw / norms, full_matrices=False)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else math.inf
    if cond > 1e10:
        raise SingularDesign(
            f"design is numerically rank deficient (condition number {cond:.3g}): "
            "1, J(J+1) and <f>_J cannot be separated with these levels and weights",
            {"condition_number": float(cond), "singular_values": [float(x) for x in sv]})

    beta, *_ = np.linalg.lstsq(Xw, Ew, rcond=None)
    resid = E - X @ beta
    dof = n - 3
    # (Xw^T Xw)^-1 from the SVD, avoiding the squared condition number of the normal equations
    scaled_inv = (Vt.T / sv ** 2) @ Vt
    unscaled = scaled_inv / np.outer(norms, norms)
    notes = []
    if dof > 0:
        s2 = float((w * resid ** 2).sum() / dof)
        cov = s2 * unscaled
        t = stats.t.ppf(0.5 + confidence / 2, dof)
        half = t * math.sqrt(cov[2, 2])
        bound = (float(beta[2] - half), float(beta[2] + half))
    else:
        s2 = 1.0
        cov = unscaled
        bound = (-math.inf, math.inf)
        notes.append("zero degrees of freedom: interval on C is unbounded")
    cov = 0.5 * (cov + cov.T)
    c_est = None
    if kappa:
        lo, hi = sorted((bound[0] / kappa, bound[1] / kappa))
        c_est = (float(beta[2] / kappa), lo, hi)
    return FitResult(
        E0=float(beta[0]), A=float(beta[1]), C=float(beta[2]),
        covariance=cov, dof=dof, c_kappa_bound=bound,
        residuals={J: float(r) for J, r in zip(m.Js, resid)},
        confidence=confidence, scale_factor=math.sqrt(s2),
        c_estimate=c_est, notes=notes,
    )


@dataclass
class LandeReport:
    ratios: dict
    quality: float
    threshold: float
    flagged: bool


def lande_report(m: Multiplet, threshold=0.05) -> LandeReport:
    """Ratios ``(E_J - E_{J-1})/J`` and their largest relative spread.

    ``quality = (max - min) / max(|ratio|)``; 0 for a perfect interval rule.
    Only adjacent ``J`` pairs present in the data are used.
    """
    if len(m.levels) < 3:
        raise InsufficientLevels("the interval rule needs at least three levels")
    ratios = {}
    Js = m.Js
    for lo, hi in zip(Js, Js[1:]):
        if hi.twice - lo.twice != 2:
            continue
        ratios[hi] = (m.levels[hi][0] - m.levels[lo][0]) / float(hi.value)
    if len(ratios) < 2:
        raise InsufficientLevels("fewer than two adjacent intervals present")
    r = np.array(list(ratios.values()))
    scale = float(np.max(np.abs(r)))
    quality = float((r.max() - r.min()) / scale) if scale else 0.0
    return LandeReport(ratios, quality, threshold, quality > threshold)


def synthetic_multiplet(L, S, E0, A, C, sigma=0.0, rng=None, label="synthetic") -> Multiplet:
    """Levels ``E0 + A J(J+1)/2 + C <f>_J`` plus optional Gaussian noise."""
    levels = {}
    for J in allowed_J(L, S):
        Jv = J.value
        f = f_expectation_6j(CoupledLevel(L, S, J))
        E = E0 + A * float(Jv * (Jv + 1)) / 2.0 + C * float(f)
        if sigma:
            E += rng.normal(0.0, sigma)
        levels[J] = (E, sigma)
    return Multiplet(L, S, levels, label)
