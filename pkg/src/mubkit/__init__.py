"""Mutually unbiased bases, nice unitary error bases and orthogonal decompositions of sl_n."""

from .classes import (
    ClassPartition,
    CommutingClass,
    SearchResult,
    classes_to_cartan_bases,
    partition_search,
    standard_partition,
    verify_class,
    verify_partition,
)
from .errorbases import (
    Cocycle,
    UnitaryErrorBasis,
    check_nice,
    composite_basis,
    nice_bound,
    pauli_basis,
    verify_nice,
    verify_ueb,
)
from .errors import MubkitError, Report
from .fields import (
    AbelianGroupSpec,
    FiniteField,
    LatinSquare,
    ParallelClass,
    character_table,
    dephase,
    ff_dual_basis,
    ff_make,
    ff_trace,
    is_character_table,
    mols_from_field,
    net_parallel_classes,
)
from .lie import (
    CartanSubalgebra,
    OrthogonalDecomposition,
    cartan_from_basis,
    cartans_to_mubs,
    is_cartan,
    is_dagger_closed,
    killing,
    killing_ad,
    mubs_to_cartans,
    unitary_basis_of_cartan,
    verify_od,
)
from .linalg import Subspace, fourier_matrix, simultaneous_eigenbasis, subspace_contains, subspace_rank
from .monomial import CyclotomicSum, MonomialMatrix, composite_pauli, is_monomial_dense, pauli
from .mub import (
    MubCollection,
    is_monomial_collection,
    latin_mubs,
    mubs_from_classes,
    same_basis,
    standardized_hadamard,
    verify_mubs,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupSpec",
    "CartanSubalgebra",
    "ClassPartition",
    "Cocycle",
    "CommutingClass",
    "CyclotomicSum",
    "FiniteField",
    "LatinSquare",
    "MonomialMatrix",
    "MubCollection",
    "MubkitError",
    "OrthogonalDecomposition",
    "ParallelClass",
    "Report",
    "SearchResult",
    "Subspace",
    "UnitaryErrorBasis",
    "cartan_from_basis",
    "cartans_to_mubs",
    "character_table",
    "check_nice",
    "classes_to_cartan_bases",
    "composite_basis",
    "composite_pauli",
    "dephase",
    "ff_dual_basis",
    "ff_make",
    "ff_trace",
    "fourier_matrix",
    "is_cartan",
    "is_character_table",
    "is_dagger_closed",
    "is_monomial_collection",
    "is_monomial_dense",
    "killing",
    "killing_ad",
    "latin_mubs",
    "mols_from_field",
    "mubs_from_classes",
    "mubs_to_cartans",
    "net_parallel_classes",
    "nice_bound",
    "partition_search",
    "pauli",
    "pauli_basis",
    "same_basis",
    "simultaneous_eigenbasis",
    "standard_partition",
    "standardized_hadamard",
    "subspace_contains",
    "subspace_rank",
    "unitary_basis_of_cartan",
    "verify_class",
    "verify_mubs",
    "verify_nice",
    "verify_od",
    "verify_partition",
    "verify_ueb",
]
