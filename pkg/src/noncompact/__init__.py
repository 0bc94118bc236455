"""Exact step-function models of Lorentz norms, disjoint superadditivity,
covering nets and measures of non-compactness."""

from .coloring import (
    TriangleColoring,
    certify_lower_bound,
    color_recursive,
    min_colors_exhaustive,
    verify_coloring,
)
from .covering import FiniteSeq, alpha_bracket, build_constant_net, locate, refute_radius
from .lorentz import DOUBLE_STAR, STAR, LorentzExponents, lorentz_maximal_norm, lorentz_norm, norm, weak_norm
from .measure import StepFunction, indicator, make_step, maximal_value, rearrange
from .scaling import SobolevParams, double_disjoint, dilate, elementary_inequality_check, p_star, span_and_alpha
from .superadditivity import (
    DisjointFamily,
    build_family,
    constant_series,
    maximal_noncompactness_witness,
    required_constant,
)

__version__ = "0.1.0"
