"""Exact computer algebra for Koszul complexes and their rank certificates.

The package builds Koszul complexes over the rationals or over F2, verifies
and generates chain maps from level m down to level 0, computes their ranks
over the fraction field (fraction-free elimination or randomized evaluation),
checks the injectivity certificates that bound the rank from below by
2(n + floor(n/3)), analyzes cancellation graphs, and routes maps through
filtered free complexes.
"""

from .polynomials import Char, Poly
from .koszul import ComplexDescriptor, KElem, truncated_homology_dim
from .chain_maps import (
    ChainMap,
    GradingMode,
    Homotopy,
    RankMethod,
    homotopy_perturb,
    iota,
    is_degree_preserving,
    random_chain_map,
    rank,
    restricted_rank,
    verify_chain_map,
)
from .certificates import (
    BoundReport,
    CertificateFamily,
    Submodule,
    bound_report,
    certificate_generators,
    check_injectivity,
    classical_bound,
    improved_bound,
)
from .cancellation import (
    DiGraph,
    build_cancellation_graph,
    classify_terms,
    contradiction_witness,
)
from .hb_model import (
    ComplexMap,
    FiltComplex,
    compose_to_gamma,
    construct_alpha,
    koszul_filt_complex,
    verify_alpha,
    verify_beta,
    verify_filtration,
)

__version__ = "0.1.0"
