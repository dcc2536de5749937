"""Exact and numerical workbench for the McKay correspondence of C^3/G, G cyclic of prime order."""

__version__ = "0.1.0"

from .group import GroupAction, CyclotomicNumber, new_group, parse_group, character  # noqa: E402
from .mckay import MckayMatrix, cartan_matrices  # noqa: E402
from .eta import EtaTable, eta_invariant, eta_table  # noqa: E402
from .correspondence import predicted_intersection_matrix, verify_chain  # noqa: E402
from .quiver import Constellation, StabilityParam, enumerate_fixed_points  # noqa: E402
from .kempf_ness import kempf_ness_solve, moment_map  # noqa: E402

__all__ = [
    "GroupAction",
    "CyclotomicNumber",
    "new_group",
    "parse_group",
    "character",
    "MckayMatrix",
    "cartan_matrices",
    "EtaTable",
    "eta_invariant",
    "eta_table",
    "predicted_intersection_matrix",
    "verify_chain",
    "Constellation",
    "StabilityParam",
    "enumerate_fixed_points",
    "kempf_ness_solve",
    "moment_map",
]
