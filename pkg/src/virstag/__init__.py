"""Exact classification of rank-2 staggered modules of the Virasoro algebra."""

from .scalars import (
    KacLabel,
    RatFunc,
    T_GEN,
    central_charge,
    kac_weight,
    parse_scalar,
    t_candidates_from_c,
)
from .algebra import AlgebraElement, negative_basis, normal_order, partitions
from .verma import (
    GradedVector,
    HWModule,
    SingularVector,
    VermaModule,
    find_singular,
    is_zero_in_quotient,
    kac_determinant_roots,
)
from .structure import IncompatibleError, ModuleStructure, classify, left_right_compatible
from .intersection import IntersectionElement, intersection_basis, intersection_dim
from .staggered import (
    BetaValue,
    DataPair,
    GaugeTransform,
    StaggeredAnswer,
    StaggeredProblem,
    UnsupportedConfigurationError,
    beta_invariants,
    critical_constraints,
    data_from_beta,
    exists,
    generic_beta_bar,
    moduli_dimension,
    oracle_singular,
    project_data,
    rohsiepe_exists,
    varpi,
)

__version__ = "0.1.0"
