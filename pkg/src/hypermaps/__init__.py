"""Regular hypermaps with rotation group PSL(2, p).

The package builds explicit generators for every hyperbolic type, decides
orientability from a single quadratic residue, checks that decision
against brute-force group enumeration, and scans primes for the set where
every such hypermap is non-orientable.
"""

from .cyclo import CycloContext, choose_nonzero_roots, cyclotomic_poly, norm, resultant
from .ff import Fp2Elem, FpElem, legendre, root_of_unity, sqrt_mod
from .hypermap import (
    build_flag_structure,
    euler_characteristic,
    genus,
    make_record,
    orientability_by_oracle,
    orientability_by_residue,
)
from .psl2 import ProjMat2, build_generators, enumerate_group, is_full_psl, verify_type
from .survey import classify_prime, density_report, hall_723, scan
from .triple import HyperbolicType, hyperbolic_types

__version__ = "0.1.0"

__all__ = [
    "CycloContext",
    "Fp2Elem",
    "FpElem",
    "HyperbolicType",
    "ProjMat2",
    "build_flag_structure",
    "build_generators",
    "choose_nonzero_roots",
    "classify_prime",
    "cyclotomic_poly",
    "density_report",
    "enumerate_group",
    "euler_characteristic",
    "genus",
    "hall_723",
    "hyperbolic_types",
    "is_full_psl",
    "legendre",
    "make_record",
    "norm",
    "orientability_by_oracle",
    "orientability_by_residue",
    "resultant",
    "root_of_unity",
    "scan",
    "sqrt_mod",
    "verify_type",
]
