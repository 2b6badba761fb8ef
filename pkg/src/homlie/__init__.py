"""Exact-rational computer algebra for graded twisted Lie structures.

The central object is a finite-dimensional algebra graded by a finitely
generated abelian group, with a commutation-factor-skew bracket and a
degree-zero twist map.  The package validates the defining axioms from
structure constants, computes twisted derivation spaces and graded
Chevalley cohomology, and constructs and classifies extensions including
the degree-3 cohomological obstruction.  All arithmetic is exact over the
rationals, every check is decidable with zero tolerance, and every basis
choice is deterministic.
"""

from .algebra import BasisElement, ColorHomLieAlgebra, GradedVector, yau_twist
from .cochains import (
    CohomologySpace,
    Connection,
    GradedCochain,
    Module,
    bracket_wedge,
    chevalley_delta,
    cohomology_space,
    covariant_delta,
    delta_squared_residual,
    eps_perm,
    wedge_scalar,
)
from .derivations import (
    DerivationSpace,
    QuotientSpace,
    TwistedDerivation,
    ad_k,
    der_bracket,
    derivation_space,
    inner_space,
    outer_quotient,
    tilde_alpha,
)
from .errors import (
    FlatnessError,
    FormatError,
    HomlieError,
    InternalConsistencyError,
    StructureError,
    UnsupportedOperationError,
)
from .extensions import (
    EquivalenceWitness,
    ExtensionData,
    ExtensionSequence,
    ObstructionResult,
    build_extension,
    check_data,
    check_equivalence_by_b,
    check_sequence,
    extract_data,
    induced_phibar,
    lift_independence_check,
    obstruction_class,
    parameterize_extensions,
    split_solve,
    split_verify,
    transform_data_by_b,
)
from .grading import CommutationFactor, Degree, GradingGroup, epsilon_eval, epsilon_validate

__version__ = "0.1.0"

__all__ = [
    "BasisElement",
    "CohomologySpace",
    "ColorHomLieAlgebra",
    "CommutationFactor",
    "Connection",
    "Degree",
    "DerivationSpace",
    "EquivalenceWitness",
    "ExtensionData",
    "ExtensionSequence",
    "FlatnessError",
    "FormatError",
    "GradedCochain",
    "GradedVector",
    "GradingGroup",
    "HomlieError",
    "InternalConsistencyError",
    "Module",
    "ObstructionResult",
    "QuotientSpace",
    "StructureError",
    "TwistedDerivation",
    "UnsupportedOperationError",
    "ad_k",
    "bracket_wedge",
    "build_extension",
    "check_data",
    "check_equivalence_by_b",
    "check_sequence",
    "chevalley_delta",
    "cohomology_space",
    "covariant_delta",
    "delta_squared_residual",
    "der_bracket",
    "derivation_space",
    "eps_perm",
    "epsilon_eval",
    "epsilon_validate",
    "extract_data",
    "induced_phibar",
    "inner_space",
    "lift_independence_check",
    "obstruction_class",
    "outer_quotient",
    "parameterize_extensions",
    "split_solve",
    "split_verify",
    "transform_data_by_b",
    "wedge_scalar",
    "yau_twist",
]
