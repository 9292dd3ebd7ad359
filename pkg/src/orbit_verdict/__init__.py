"""Closed forms and asymptotic verdicts for iterates ``T^k x`` of affine maps
``T x = A x + c`` given in Jordan form, and for their averages."""
from __future__ import annotations

from .averages import (
    AverageExpansion,
    HPolynomial,
    brute_force_average,
    classify_average_block,
    classify_average_system,
    eval_average,
    eval_average_factored,
    eval_average_system,
    expand_average_block,
    expand_average_system,
    fixed_point,
    fixed_point_condition,
    h_polynomial,
)
from .combinatorics import binom, d_factor, s_sum, t_sum
from .errors import DomainError, IdentityViolation, ShapeError
from .iterates import (
    IterateExpansion,
    UnitIterateExpansion,
    brute_force_orbit,
    classify_block,
    classify_system,
    eval_iterate,
    eval_system,
    expand_block,
    expand_system,
)
from .jordan import (
    BlockVector,
    JordanBlock,
    JordanSystem,
    apply_affine,
    block_norm,
    diagonal_system,
    nilpotent_index,
)
from .property_p import (
    PropertyPOperator,
    Tail,
    WeightedShift,
    classify_property_p,
    tail_bound,
    weighted_shift_orbit,
)
from .scalar import KPolynomial, Scalar
from .verdict import Kind, Verdict

__version__ = "0.1.0"
