"""Rationality obstructions for invariant fields of p-group central extensions.

Given an odd prime p and an alternating form gamma: Lambda^2 U -> V over
F_p, the package builds the central extension 0 -> V -> G -> U -> 0 of
exponent p, decides whether the invariant field of a faithful complex
representation of G has trivial unramified Brauer group, and computes a
degree-3 unramified-cohomology obstruction that can detect non-rationality
even when the Brauer obstruction vanishes.  Every computed quantity has an
independent check: a brute-force enumeration of decomposable multivectors
and a normalized bar-resolution cohomology oracle.
"""

from .catalog import BUILTINS, builtin
from .divisors import ElementaryDivisors, howell_orders
from .errors import (
    DegeneratePairingError,
    DimensionMismatchError,
    EvenPrimeError,
    GuardExceededError,
    InternalInconsistencyError,
    NontrivialRadicalError,
    NotPrimeError,
    NotSurjectiveError,
    SpecError,
    UnramifiedError,
)
from .exterior import ExtVector, duality_pairing, flag_subspace, render_multivector, wedge
from .groups import (
    GroupElement,
    GroupSpec,
    center_and_derived,
    commutator,
    enumerate_elements,
    inverse,
    load_spec,
    mul,
    power,
    validate_spec,
)
from .linalg import Subspace, kernel, rref
from .obstruction import ObstructionReport, analyze, dec_subgroup, dec_subgroup_bruteforce

__version__ = "0.1.0"

__all__ = [
    "BUILTINS",
    "ElementaryDivisors",
    "ExtVector",
    "GroupElement",
    "GroupSpec",
    "ObstructionReport",
    "Subspace",
    "analyze",
    "builtin",
    "center_and_derived",
    "commutator",
    "dec_subgroup",
    "dec_subgroup_bruteforce",
    "duality_pairing",
    "enumerate_elements",
    "flag_subspace",
    "howell_orders",
    "inverse",
    "kernel",
    "load_spec",
    "mul",
    "power",
    "render_multivector",
    "rref",
    "validate_spec",
    "wedge",
]
