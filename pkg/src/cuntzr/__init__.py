"""Exact Cuntz-algebra bialgebra arithmetic and swap-implementing unitaries.

The package models the direct sum of all Cuntz algebras with its
divisor-pair comultiplication, the pure states parametrized by unit
vectors, their permutative realizations on the sequence space, and the
unitaries that carry the coproduct to its opposite on tensor products of
the realization spaces, together with verifiers for every identity the
construction satisfies.
"""

from .algebra import (
    AlgebraElement,
    CuntzMonomial,
    DirectSumElement,
    canonical_equal,
    level_expand,
    mono_product,
    substitute_generators,
)
from .coproduct import (
    TensorElement2,
    TensorElement3,
    canonical_equal2,
    canonical_equal3,
    check_coassoc,
    delta,
    delta_op,
    divisor_pairs,
    f_l,
    f_r,
    phi,
)
from .errors import (
    BadFactorization,
    BadLevel,
    CuntzrError,
    GramMismatch,
    MismatchedAlgebra,
    NotCommuting,
    NotUnitary,
    OutOfDomain,
    SpecError,
)
from .representations import (
    GPRepresentation,
    SpanBasis,
    act,
    act2,
    gns_lambda,
    lambda2,
    lambda3,
    span_basis,
)
from .rmatrix import (
    RMatrixOperator,
    VerificationReport,
    build_r,
    counterexample_demo,
    radix_swap_r,
    swap_index_pair,
    verify_intertwining,
    verify_symmetry,
    verify_ybe,
)
from .states import (
    GPState,
    StarComposite,
    UnitVector,
    boxtimes,
    commutes,
    gp_eval,
    star,
    state_from_json,
    state_to_json,
    twist_state,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "BadFactorization",
    "BadLevel",
    "CuntzMonomial",
    "CuntzrError",
    "DirectSumElement",
    "GPRepresentation",
    "GPState",
    "GramMismatch",
    "MismatchedAlgebra",
    "NotCommuting",
    "NotUnitary",
    "OutOfDomain",
    "RMatrixOperator",
    "SpanBasis",
    "SpecError",
    "StarComposite",
    "TensorElement2",
    "TensorElement3",
    "UnitVector",
    "VerificationReport",
    "act",
    "act2",
    "boxtimes",
    "build_r",
    "canonical_equal",
    "canonical_equal2",
    "canonical_equal3",
    "check_coassoc",
    "commutes",
    "counterexample_demo",
    "delta",
    "delta_op",
    "divisor_pairs",
    "f_l",
    "f_r",
    "gns_lambda",
    "gp_eval",
    "lambda2",
    "lambda3",
    "level_expand",
    "mono_product",
    "phi",
    "radix_swap_r",
    "span_basis",
    "star",
    "state_from_json",
    "state_to_json",
    "substitute_generators",
    "swap_index_pair",
    "twist_state",
    "verify_intertwining",
    "verify_symmetry",
    "verify_ybe",
]
