"""Factor symplectic matrices over commutative rings into elementary symplectic matrices."""

from .compact import CompactReduction, inner_product, reduce_to_compact, unitarity_defect
from .core import (
    E,
    F,
    K,
    ElementaryFactor,
    FactorWord,
    LowerC,
    SymplecticMatrix,
    UpperB,
    apply_factor_left,
    check_symplectic,
    expand_K,
    expand_word,
    factor_to_matrix,
    invert_word,
    multiply_word,
    random_word,
    relative_frobenius,
    scale_word,
)
from .elimination import (
    EliminationTrace,
    NeighborhoodSpec,
    column_certificate,
    factor_count_bound,
    factor_near_identity,
    factor_stable_rank_one,
)
from .homotopy import (
    FamilyFactorization,
    SampledFamily,
    SampledPath,
    build_path_constant_complex,
    factor_constant_complex,
    factor_continuous_family,
    factor_null_homotopic,
    split_path,
)
from .rings import ComplexApprox, IntegersMod, PrimeField, Rationals, SampledFunctions, parse_ring

__version__ = "0.1.0"
