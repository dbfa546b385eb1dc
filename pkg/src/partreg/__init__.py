"""Exact tools for experimenting with partition regularity of polynomial systems."""

from .algebra import (
    ParseError,
    Polynomial,
    PolySystem,
    has_constant_positive_solution,
    is_homogeneous,
    parse_polynomial,
    parse_system,
)
from .coloring import (
    GroundSet,
    enumerate_solutions,
    find_avoiding_coloring,
    near_zero_probe,
    rado_number,
    scaling_transfer_check,
)
from .lifter import LiftInstance, lift, verify_chain
from .rado import (
    ColumnsCertificate,
    RationalMatrix,
    columns_condition,
    linear_pr_verdict,
    subset_sum_zero,
    verify_certificate,
)
from .transforms import LevSpec, lev_family, merge_systems, power_substitution, reciprocal_transform

__version__ = "0.1.0"
