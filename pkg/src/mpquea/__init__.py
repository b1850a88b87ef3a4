"""Exact multiparameter and twisted quantized enveloping algebras."""

from .cartan import CartanDatum, build_cartan
from .errors import MpqueaError
from .freealg import AlgebraElement, TensorElement, overlap_check, pbw_counts
from .lattice import Lattice, TwistMatrix, q_psi, root_lattice, weight_lattice
from .mpmatrix import sigma_from_psi, theta, xi
from .qscalar import FieldScalar, context
from .quantumalg import (
    HopfSpec,
    ToralCocycle,
    build_jimbo,
    build_mpquea,
    check_hopf_axioms,
    pairing_context,
    quotient_to_g,
)
from .twist import TwistedHopfSpec, build_twquea
from .verify import (
    VerificationReport,
    verify_approx_iso,
    verify_cocycle_equiv,
    verify_duality,
    verify_hopf,
    verify_iso_borel,
    verify_iso_double,
    verify_iso_g,
)

__all__ = [
    "AlgebraElement",
    "CartanDatum",
    "FieldScalar",
    "HopfSpec",
    "Lattice",
    "MpqueaError",
    "TensorElement",
    "ToralCocycle",
    "TwistMatrix",
    "TwistedHopfSpec",
    "VerificationReport",
    "build_cartan",
    "build_jimbo",
    "build_mpquea",
    "build_twquea",
    "check_hopf_axioms",
    "context",
    "overlap_check",
    "pairing_context",
    "pbw_counts",
    "q_psi",
    "quotient_to_g",
    "root_lattice",
    "sigma_from_psi",
    "theta",
    "verify_approx_iso",
    "verify_cocycle_equiv",
    "verify_duality",
    "verify_hopf",
    "verify_iso_borel",
    "verify_iso_double",
    "verify_iso_g",
    "weight_lattice",
    "xi",
]
