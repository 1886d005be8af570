"""Bar-complex homology, filler norms and isoperimetry for finite groups over Z/l."""

from .chains import Chain, boundary, chain_size, random_chain
from .config import DEFAULT, RunConfig, load_config
from .errors import BarfillError, BudgetExhausted, CapExceeded, PreconditionError, SpecError
from .family import (CooDecomposition, FamilyReport, GroupFamily, asymp_probe, check_star,
                     coordinate_decompose, cyclic_embedding, diagonal_embed)
from .groups import FiniteGroup, build_group, parse_spec
from .homology import (HomologyResult, diagonal_torus, homologous, homology, index_prime_to_l,
                       induced_map, is_boundary, is_cycle, minimal_representative_bound)
from .isoperimetry import (FillerResult, check_phi, check_psi, filler_distance, filler_norm,
                           isop, isop_profile)
from .linalg import SparseMatrix, boundary_matrix

__version__ = "0.1.0"

__all__ = [
    "Chain", "boundary", "chain_size", "random_chain",
    "DEFAULT", "RunConfig", "load_config",
    "BarfillError", "BudgetExhausted", "CapExceeded", "PreconditionError", "SpecError",
    "CooDecomposition", "FamilyReport", "GroupFamily", "asymp_probe", "check_star",
    "coordinate_decompose", "cyclic_embedding", "diagonal_embed",
    "FiniteGroup", "build_group", "parse_spec",
    "HomologyResult", "diagonal_torus", "homologous", "homology", "index_prime_to_l",
    "induced_map", "is_boundary", "is_cycle", "minimal_representative_bound",
    "FillerResult", "check_phi", "check_psi", "filler_distance", "filler_norm", "isop",
    "isop_profile",
    "SparseMatrix", "boundary_matrix",
]
