"""Exact intersection numbers of p-spin curves from contour-integral generating functions."""
from .exact import Coefficient, GammaFactor, bernoulli, euler_characteristic, format_fraction, gamma_reduce, parse_fraction
from .onepoint import (
    IntersectionRecord,
    PunctureLabel,
    admissible_components,
    euler_records,
    one_point_ns,
    one_point_ns_fractional,
    one_point_r,
    riemann_roch_holds,
    solve_selection_one_point,
    spin_model,
)
from .openkp import MPolynomial, OpenLabel, open_one_point, string_equation_check
from .twopoint import ResidueOrder, two_point_p2, two_point_records, two_point_residue

__version__ = "0.1.0"
