"""Indices of nilpotency of Hecke operators on modular forms mod p."""
from .basis import (
    D2_SPAN, F_BASIS, NEG_INF, PolyRep, delta_basis, expand, hecke_on_poly, to_poly,
)
from .errors import (
    BoundViolated, CeilingExceeded, HeckeNilError, HypothesisError, ModulusMismatch,
    PrecisionError, ResidualNonzero,
)
from .hecke import HeckeSpec, hecke_T, iterated_coeff, u_op
from .nilpotency import (
    crossover_check, degree_lower, index_sweep, modified_degree, nilpotency_index,
    ns_formula, s_index, verify_conjectures, verify_thm13,
)
from .partitions import (
    brute_force_tcore, check_prop15, check_thm16, check_thm18, power_partition_series,
    tcore_series,
)
from .reports import CongruenceReport, NilpotencyReport
from .series import QSeries, euler_product, kronecker, named_form, theta_expansion, theta_op

__version__ = "0.1.0"

__all__ = [
    "D2_SPAN", "F_BASIS", "NEG_INF", "PolyRep", "delta_basis", "expand", "hecke_on_poly",
    "to_poly", "BoundViolated", "CeilingExceeded", "HeckeNilError", "HypothesisError",
    "ModulusMismatch", "PrecisionError", "ResidualNonzero", "HeckeSpec", "hecke_T",
    "iterated_coeff", "u_op", "crossover_check", "degree_lower", "index_sweep",
    "modified_degree", "nilpotency_index", "ns_formula", "s_index", "verify_conjectures",
    "verify_thm13", "brute_force_tcore", "check_prop15", "check_thm16", "check_thm18",
    "power_partition_series", "tcore_series", "CongruenceReport", "NilpotencyReport",
    "QSeries", "euler_product", "kronecker", "named_form", "theta_expansion", "theta_op",
]
