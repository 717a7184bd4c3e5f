"""Exact p-typical Witt vectors, the sequence model X(R), and the
generators-and-relations model with a certifying membership procedure."""

from .cdrep import (
    GeneratorTerm,
    Presentation,
    XElement,
    lift_witt_vector,
    project_sequence,
    project_to_W,
    x_generator,
    x_i_generator,
    x_membership,
)
from .cfunctor import (
    Additivity,
    FormalSum,
    InSaturation,
    NotIn,
    RelationCertificate,
    Sign,
    V,
    Witness,
    eta_evaluate,
    eta_is_zero,
    eta_nonzero_index,
    normalize_signs,
    reduce,
    v_shift,
    verify_certificate,
)
from .errors import *  # noqa: F401,F403
from .rings import PolyRing, RingDescriptor, RingElem, ZZ, Zmod, exact_div_int, poly_eval_int
from .universal import UniversalPolySet, generate_universal_polys
from .vandermonde import PVandermonde, det_exact, find_nonvanishing_point, independence_check
from .witt import (
    GhostVector,
    WittContext,
    WittVector,
    frobenius,
    ghost_inverse,
    ghost_map,
    int_scale,
    phi,
    recompose,
    teich_v_decompose,
    teichmuller,
    truncate,
    verschiebung,
    witt_add,
    witt_neg,
    witt_sub,
)

__version__ = "0.1.0"
