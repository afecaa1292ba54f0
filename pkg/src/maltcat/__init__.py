"""maltcat: finite algebras, double groupoids and their 2-groupoid
reflection in Mal'tsev varieties."""

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    Signature,
    Term,
    ValidationError,
    all_homomorphisms,
    check_maltsev_term,
    eval_term,
    find_isomorphism,
    identity,
    image_factorization,
    is_homomorphism,
    parse_term,
    product,
    pullback,
    subalgebra,
    subalgebra_generated,
)
from .config import SizeLimitError, max_size, set_max_size
from .congruence import (
    CoequalizerResult,
    Congruence,
    PushoutResult,
    all_congruences,
    coequalizer,
    congruence_from_blocks,
    congruence_generated,
    delta_matrix_algebra,
    factor_through_surjection,
    full_congruence,
    identity_congruence,
    kernel_pair,
    pushout_along_regular_epi,
    quotient,
    split_pushout_retraction,
    tc_commutator,
    verify_pushout_universal,
)
from .internal import (
    DoubleFunctor,
    DoubleGroupoid,
    DoubleReflexiveGraph,
    GraphMorphism,
    InternalGroupoid,
    LodayAlgebra,
    LodayIdentityError,
    NontrivialCommutatorError,
    ReflexiveGraph,
    StructureError,
    check_double_groupoid,
    check_reflexive_graph,
    check_two_groupoid_identities,
    check_variety_presentation,
    groupoid_structure,
    groupoid_structures_exhaustive,
    is_internal_functor,
    is_regular_epi,
    is_two_groupoid,
    loday_decode,
    loday_decode_double,
    loday_encode,
    loday_encode_double,
)
from .natmaltsev import (
    AffineWitness,
    NotAffineError,
    PedicchioDiagram,
    check_square_pullback,
    commutator_cross_check,
    is_affine,
    is_double_centralizing,
    pedicchio_delta,
    unit_discrete_fibration_check,
)
from .reflection import (
    ConstructionError,
    CoreflectionResult,
    ReflectionResult,
    coreflect,
    factor_through_counit,
    factor_through_unit,
    reflect,
    reflect_morphism,
    verify_birkhoff_closure,
)

__version__ = "0.1.0"
