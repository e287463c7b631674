"""Support tau-tilting pairs of bound quiver algebras over prime fields,
their Hasse quivers, semibricks and one-point extensions."""

__version__ = "0.1.0"

from .algebra import BoundQuiverAlgebra, build_algebra, path_algebra
from .rep import Representation, ModuleMap, decompose, hom_basis, projective, injective, simple
from .homology import tau, tau_inv, ext1_dim
from .tautilt import STPair, STPoset, enumerate_stau, left_mutation, phi, pt_lookup
from .opext import extend, verify_extension_theorems

__all__ = [
    "BoundQuiverAlgebra", "build_algebra", "path_algebra",
    "Representation", "ModuleMap", "decompose", "hom_basis", "projective", "injective", "simple",
    "tau", "tau_inv", "ext1_dim",
    "STPair", "STPoset", "enumerate_stau", "left_mutation", "phi", "pt_lookup",
    "extend", "verify_extension_theorems",
]
