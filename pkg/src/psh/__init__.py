"""Finite-dimensional pseudo-Hermitian quantum mechanics.

Metric operators, the physical state space and its metric, pseudo-unitary
evolution, and time-optimal evolution between fixed physical states.
"""

from .brachistochrone import (
    BrachistochroneProblem,
    BrachistochroneSolution,
    admissible_metric_constraint,
    min_time_bound,
    optimal_hamiltonian,
    s_z_observability_demo,
    sweep_hamiltonians,
    travel_time,
)
from .evolution import (
    Propagator,
    Trajectory,
    check_pseudo_unitarity,
    evolve_projection,
    evolve_state,
    instantaneous_speed,
    mirror_trajectory,
    path_length,
    propagator,
)
from .linalg import EigenSystem, adjoint, biorthonormalize, eig, expm_scaled, herm_sqrt
from .pseudoherm import (
    Hamiltonian,
    MetricOperator,
    Observable,
    build_metric_operator,
    expectation,
    hermitian_counterpart,
    is_observable,
    map_state,
    physical_inner,
    pseudo_adjoint,
)
from .statespace import (
    ChartPoint,
    MetricTensor,
    PhysicalState,
    TwoLevelMetricParams,
    antipodal_state,
    geodesic_distance,
    is_antipodal,
    isometry_map,
    line_element,
    metric_tensor,
    op_inner,
    phys_trace,
    project,
    two_level_line_element,
)

__version__ = "0.1.0"
