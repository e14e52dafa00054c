"""Two-qubit entanglement toolkit.

Measures (negativity, concurrence, entanglement of formation, relative
entropy of entanglement), the bound relations between them with tightness
certificates, local-filtering normal forms, and equal-concurrence ensemble
decompositions.
"""

from .bounds import (
    BoundVerdict,
    check_bounds,
    er_lower_curve,
    family_concurrence,
    family_sigmas,
    is_negativity_tight,
    negativity_lower_bound,
)
from .errors import (
    ComplexSigma,
    DomainError,
    IndexOutOfRange,
    InvalidSpec,
    NoConvergence,
    NonpositiveTrace,
    NotEntangled,
    NotHermitian,
    NotPSD,
    NotUnitTrace,
    OutOfRange,
    RankDeficient,
    VanishingTrace,
)
from .filters import (
    EnsembleDecomposition,
    FilterPair,
    NormalFormResult,
    apply_filter,
    bell_diagonal_normal_form,
    concurrence_transform,
    wootters_decomposition,
)
from .matcore import HermEigResult, herm_eig, herm_func, psd_factor, singular_values
from .measures import (
    MeasureReport,
    binary_entropy,
    concurrence,
    concurrence_bell_diagonal,
    concurrence_cholesky,
    concurrence_pure,
    eof,
    eof_from_concurrence,
    negativity,
    partial_transpose,
)
from .relent import (
    ERSolverConfig,
    EROptResult,
    er_bell_diagonal,
    er_mems_closed_form,
    rel_entropy_entanglement,
    relative_entropy,
    von_neumann_entropy,
)
from .states import (
    BellDiagonalSpec,
    ExtremalFamilySpec,
    bell_diagonal,
    bell_state,
    density_from_json,
    density_to_json,
    extremal_family,
    load_density,
    make_density,
    mems_rank2,
    optimal_family_spec,
    pure_density,
    reduced_state,
    sample_random,
    save_density,
    werner,
)

__version__ = "0.1.0"

__all__ = [
    "BellDiagonalSpec",
    "BoundVerdict",
    "ComplexSigma",
    "DomainError",
    "EROptResult",
    "ERSolverConfig",
    "EnsembleDecomposition",
    "ExtremalFamilySpec",
    "FilterPair",
    "HermEigResult",
    "IndexOutOfRange",
    "InvalidSpec",
    "MeasureReport",
    "NoConvergence",
    "NonpositiveTrace",
    "NormalFormResult",
    "NotEntangled",
    "NotHermitian",
    "NotPSD",
    "NotUnitTrace",
    "OutOfRange",
    "RankDeficient",
    "VanishingTrace",
    "apply_filter",
    "bell_diagonal",
    "bell_diagonal_normal_form",
    "bell_state",
    "binary_entropy",
    "check_bounds",
    "concurrence",
    "concurrence_bell_diagonal",
    "concurrence_cholesky",
    "concurrence_pure",
    "concurrence_transform",
    "density_from_json",
    "density_to_json",
    "eof",
    "eof_from_concurrence",
    "er_bell_diagonal",
    "er_lower_curve",
    "er_mems_closed_form",
    "extremal_family",
    "family_concurrence",
    "family_sigmas",
    "herm_eig",
    "herm_func",
    "is_negativity_tight",
    "load_density",
    "make_density",
    "mems_rank2",
    "negativity",
    "negativity_lower_bound",
    "optimal_family_spec",
    "partial_transpose",
    "psd_factor",
    "pure_density",
    "reduced_state",
    "rel_entropy_entanglement",
    "relative_entropy",
    "sample_random",
    "save_density",
    "singular_values",
    "von_neumann_entropy",
    "werner",
]
