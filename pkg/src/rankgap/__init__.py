"""Rank-gap reduction toolkit over small finite fields.

Compiles CNF formulas and Boolean quadratic systems into linear
subspaces of symmetric matrices whose minimum nonzero rank separates
satisfiable instances (rank one reachable) from unsatisfiable ones
(every nonzero member above the gap), and bundles the exact oracles,
decomposition lemmas, decoder, and certificates that verify the
construction at enumerable scale.
"""

from .errors import (
    BudgetExceededError,
    InternalConsistencyError,
    ParseError,
    PreconditionError,
)
from .gfarith import (
    FieldElement,
    FieldSpec,
    LinearFunctional,
    format_field,
    make_field,
    make_linear_functional,
    parse_field_descriptor,
)
from .gflinalg import (
    FFMatrix,
    RankOneDecomposition,
    kernel_basis,
    packed_kernel_basis,
    packed_rank,
    rank,
    rank_descent,
    symmetric_rank_one_decomposition,
)
from .boolalg import (
    MAX_VARS,
    MonomialBasis,
    SquarefreePoly,
    basis_make,
    format_monomial,
    format_poly,
    indices_of,
    mask_of,
    parse_monomial,
    parse_poly,
    poly_eval,
    poly_mul,
)
from .frontends import (
    CnfFormula,
    QuadSystemSource,
    booleanity_polynomial,
    clause_polynomial,
    parse_dimacs,
    parse_quadeq,
)
from .subspace import PseudoMomentVector, SubspaceSpec, honest_moment_vector
from .superposition import (
    ConstantFreeSystem,
    DegreeChoice,
    MonomialQuadSystem,
    QuadEquation,
    RankCertificate,
    SuperpositionWitness,
    build_constant_free_system,
    build_matrix_subspace,
    build_monomial_quad_system,
    choose_degree,
    degree_regime,
    low_rank_to_superposition,
    rank_certificate,
)
from .moment import build_moment_subspace, localizing_row_count
from .decoder import (
    DecodeReport,
    LevelRankProfile,
    MultiplicationOperators,
    common_eigenvector,
    decode_assignment,
    find_flat_level,
    level_ranks,
    multiplication_operators,
)
from .oracles import (
    MembershipReport,
    MinrankReport,
    MonomialAssignment,
    PointSet,
    SuperpositionReport,
    check_membership,
    minrank_bruteforce,
    point_isolator,
    subspace_digest,
    sum_of_points,
    superposition_check,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "InternalConsistencyError",
    "ParseError",
    "PreconditionError",
    "FieldElement",
    "FieldSpec",
    "LinearFunctional",
    "format_field",
    "make_field",
    "make_linear_functional",
    "parse_field_descriptor",
    "FFMatrix",
    "RankOneDecomposition",
    "kernel_basis",
    "packed_kernel_basis",
    "packed_rank",
    "rank",
    "rank_descent",
    "symmetric_rank_one_decomposition",
    "MAX_VARS",
    "MonomialBasis",
    "SquarefreePoly",
    "basis_make",
    "format_monomial",
    "format_poly",
    "indices_of",
    "mask_of",
    "parse_monomial",
    "parse_poly",
    "poly_eval",
    "poly_mul",
    "CnfFormula",
    "QuadSystemSource",
    "booleanity_polynomial",
    "clause_polynomial",
    "parse_dimacs",
    "parse_quadeq",
    "PseudoMomentVector",
    "SubspaceSpec",
    "honest_moment_vector",
    "ConstantFreeSystem",
    "DegreeChoice",
    "MonomialQuadSystem",
    "QuadEquation",
    "RankCertificate",
    "SuperpositionWitness",
    "build_constant_free_system",
    "build_matrix_subspace",
    "build_monomial_quad_system",
    "choose_degree",
    "degree_regime",
    "low_rank_to_superposition",
    "rank_certificate",
    "build_moment_subspace",
    "localizing_row_count",
    "DecodeReport",
    "LevelRankProfile",
    "MultiplicationOperators",
    "common_eigenvector",
    "decode_assignment",
    "find_flat_level",
    "level_ranks",
    "multiplication_operators",
    "MembershipReport",
    "MinrankReport",
    "MonomialAssignment",
    "PointSet",
    "SuperpositionReport",
    "check_membership",
    "minrank_bruteforce",
    "point_isolator",
    "subspace_digest",
    "sum_of_points",
    "superposition_check",
    "__version__",
]
