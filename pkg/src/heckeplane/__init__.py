"""Closed-form planar Gaussians, the Weil-type representation, modular distributions,
Hecke word rewriting and exact level-one q-expansions."""

from .errors import DomainError, RewriteError, TruncationError, UnsupportedTransform
from .gaussian import Poly2, TestFunction, gauss_moment
from .hecke_words import HeckeWord, NormalForm, alpha_table, expand_t_power, rewrite
from .plane_rep import GroupElement, ana_apply, decompose, theta
from .qforms import QSeries, eigenforms, ramanujan_check
from .report import VerificationReport, emit, parse

__version__ = "0.1.0"

__all__ = [
    "DomainError", "RewriteError", "TruncationError", "UnsupportedTransform",
    "Poly2", "TestFunction", "gauss_moment",
    "HeckeWord", "NormalForm", "alpha_table", "expand_t_power", "rewrite",
    "GroupElement", "ana_apply", "decompose", "theta",
    "QSeries", "eigenforms", "ramanujan_check",
    "VerificationReport", "emit", "parse",
]
