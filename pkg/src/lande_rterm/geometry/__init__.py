"""Curvature of the coupled-rotor configuration space."""

from ._backend import BACKEND
from .curvature import (
    DEFAULT_STEP,
    CurvatureReport,
    christoffel,
    laplace_beltrami,
    metric_jets,
    scalar_curvature,
)
from .expansion import (
    DEFAULT_BETAS,
    EXPANSION_STEP,
    ExpansionFit,
    ProfilePoint,
    ScalingReport,
    curvature_profile,
    equator_point,
    expansion_scaling,
    fit_expansion,
    fit_single,
    meridian_point,
    printed_r2,
    printed_r2_coefficients,
)
from .metrics import (
    DEFAULT_DET_TOL,
    ConfigPoint,
    CoupledRotorMetric,
    FlatMetric,
    InertiaTriple,
    MetricField,
    SphereMetric,
    hamiltonian_from_components,
    inverse_metric,
    metric,
)

__all__ = [
    "BACKEND",
    "ConfigPoint",
    "CoupledRotorMetric",
    "CurvatureReport",
    "DEFAULT_BETAS",
    "DEFAULT_DET_TOL",
    "DEFAULT_STEP",
    "EXPANSION_STEP",
    "ExpansionFit",
    "FlatMetric",
    "InertiaTriple",
    "MetricField",
    "ProfilePoint",
    "ScalingReport",
    "SphereMetric",
    "christoffel",
    "curvature_profile",
    "equator_point",
    "expansion_scaling",
    "fit_expansion",
    "fit_single",
    "hamiltonian_from_components",
    "inverse_metric",
    "laplace_beltrami",
    "meridian_point",
    "metric",
    "metric_jets",
    "printed_r2",
    "printed_r2_coefficients",
    "scalar_curvature",
]
