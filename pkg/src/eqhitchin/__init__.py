"""Exact machinery for automorphism-equivariant Hitchin indices.

Layers, bottom up: cyclotomic coefficients, truncated graded rings and
t^-1 series, splitting-principle K-classes, fixed-point combinatorics of a
prime-order curve automorphism, and per-component assembly of the localized
index with intersection-number oracles.
"""
from __future__ import annotations

from .cyclotomic import (
    CycloElem,
    LocalizedCyclo,
    SplitCyclo,
    cyc_mul,
    loc_inv,
    localize,
    phi_p,
    split,
    unsplit,
)
from .combinatorics import GeometryInput, Point, enumerate_higgs_components, enumerate_weight_tuples, seifert
from .errors import (
    ConfigError,
    DivergenceError,
    EqHitchinError,
    GeometryError,
    ModelInconsistencyError,
    NotInvertibleError,
    RootNormalizationError,
    StructureError,
)
from .graded import GradedElem, RingSpec, TSeries
from .kclasses import KClass, LineTerm

__version__ = "0.1.0"

__all__ = [
    "CycloElem",
    "LocalizedCyclo",
    "SplitCyclo",
    "cyc_mul",
    "loc_inv",
    "localize",
    "phi_p",
    "split",
    "unsplit",
    "GeometryInput",
    "Point",
    "enumerate_higgs_components",
    "enumerate_weight_tuples",
    "seifert",
    "GradedElem",
    "RingSpec",
    "TSeries",
    "KClass",
    "LineTerm",
    "ConfigError",
    "DivergenceError",
    "EqHitchinError",
    "GeometryError",
    "ModelInconsistencyError",
    "NotInvertibleError",
    "RootNormalizationError",
    "StructureError",
]
