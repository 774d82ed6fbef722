"""Isotropic four-revolute spherical wrists: enumeration, verification, classification."""
from .isoset import (
    Isometry,
    IsotropyReport,
    PointSet,
    antipodal_exchange,
    certify_isotropy,
    platonic,
    reflect_line,
    reflect_plane,
    second_moment,
    sets_equal,
    sets_equal_unordered,
    tetrahedron,
)
from .solver import SolutionRecord, SolutionSet, enumerate_closed_form, oracle_solve, record_to_pointset, residual
from .wrist import WristArchitecture, classify, dedupe_architectures, dh_extract, enumerate_chains, jacobian, wrist_isotropy

__version__ = "0.1.0"
