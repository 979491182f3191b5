"""Numerical toolkit for cyclic proximity systems.

Distances over point chains and region chains, contraction certification,
Picard-orbit diagnostics and solvers, a gallery of systems with known
answers, and a batch CLI.
"""

from .chains import (
    MonotonicityReport,
    PExponent,
    chain_point_distance,
    chain_self_distance,
    chain_set_distance,
    p_monotonicity_check,
)
from .gallery import (
    GALLERY,
    GallerySpec,
    GallerySystem,
    attainment_gap,
    build,
    list_gallery,
    make_affine_strip,
    make_kirk_interval,
    make_paper_lq_family,
    make_scaled_pair,
)
from .orbit import (
    AprioriBound,
    BoundednessReport,
    OrbitTrace,
    ProximityChainResult,
    SolveResult,
    apriori_error_bound,
    banach_solve,
    block_drift_trace,
    boundedness_probe,
    chain_trace,
    cross_block_chain_distance,
    dominant_edge,
    edge_trace,
    periodic_point_solve,
    picard_orbit,
    proximity_chain_extract,
)
from .spaces import (
    INFINITY,
    CapabilityError,
    Exponent,
    LqSpace,
    MetricReport,
    OracleSpace,
    Point,
    Space,
    as_exponent,
    check_point,
    lq_norm,
    p_combine,
    validate_metric,
)
from .system import (
    AlphaBoundResult,
    Ball,
    Box,
    ContractionCertificate,
    CyclicityReport,
    CyclicSystem,
    FiniteCloud,
    IndexedFamily,
    LinearPhi,
    MapError,
    Phi,
    PhiReport,
    Region,
    Segment,
    TabulatedPhi,
    alpha_bound_check,
    contraction_margin,
    region_distance,
    validate_phi,
    verify_contraction,
    verify_cyclicity,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaBoundResult",
    "AprioriBound",
    "Ball",
    "BoundednessReport",
    "Box",
    "CapabilityError",
    "ContractionCertificate",
    "CyclicSystem",
    "CyclicityReport",
    "Exponent",
    "FiniteCloud",
    "GALLERY",
    "GallerySpec",
    "GallerySystem",
    "INFINITY",
    "IndexedFamily",
    "LinearPhi",
    "LqSpace",
    "MapError",
    "MetricReport",
    "MonotonicityReport",
    "OracleSpace",
    "OrbitTrace",
    "PExponent",
    "Phi",
    "PhiReport",
    "Point",
    "ProximityChainResult",
    "Region",
    "Segment",
    "SolveResult",
    "Space",
    "TabulatedPhi",
    "alpha_bound_check",
    "apriori_error_bound",
    "as_exponent",
    "attainment_gap",
    "banach_solve",
    "block_drift_trace",
    "boundedness_probe",
    "build",
    "chain_point_distance",
    "chain_self_distance",
    "chain_set_distance",
    "chain_trace",
    "check_point",
    "contraction_margin",
    "cross_block_chain_distance",
    "dominant_edge",
    "edge_trace",
    "list_gallery",
    "lq_norm",
    "make_affine_strip",
    "make_kirk_interval",
    "make_paper_lq_family",
    "make_scaled_pair",
    "p_combine",
    "p_monotonicity_check",
    "periodic_point_solve",
    "picard_orbit",
    "proximity_chain_extract",
    "region_distance",
    "validate_metric",
    "validate_phi",
    "verify_contraction",
    "verify_cyclicity",
]
