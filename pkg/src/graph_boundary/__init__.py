"""Combinatorial graph boundary and discrete potential-theory checks."""

from .abp import abp_check, abp_sharp_constant, abp_universal_bound, torsion_function
from .boundary import (
    BoundarySet,
    boundary_set,
    boundary_via_levels,
    interior_check,
    is_witnessed,
    isoperimetric_report,
    level_partition,
)
from .energy import (
    Kernel,
    brute_force_max,
    improvement_move,
    maximize_energy,
    purge_interior,
)
from .errors import GraphBoundaryError, InputError
from .graph import DistanceMatrix, Graph, all_pairs_distances, build_graph, degree_extremes
from .hardy import hardy_certificate, hardy_check, hardy_weight, quadratic_form
from .io import encode_graph6, parse_edgelist, parse_graph6, write_dot
from .rng import RngSeed
from .scan import ScanRecord, analyze_graph, scan_corpus
from .spectral import (
    dirichlet_laplacian,
    faber_krahn_report,
    hotspots_ratio_check,
    hotspots_report,
    neumann_second_eigenpair,
    rayleigh_quotient,
    smallest_dirichlet_eigenpair,
)
from .walks import (
    estimate_exit_time,
    hitting_potential,
    interval_mean_exact,
    interval_tail_exact,
    simulate_exit_time,
    walk_distribution,
)
