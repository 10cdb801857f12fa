"""Pseudo-unitary time evolution and path lengths in the state-space metric.

Propagators are exact: ``U(t) = R exp(-i E t / hbar) L^dagger`` from the cached
biorthonormal eigensystem.  Time grids only serve to sample the speed
``ds/dt`` for trapezoidal integration of the path length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import DimensionMismatch, ZeroState
from .linalg import adjoint, as_matrix, as_vector
from .pseudoherm import Hamiltonian, MetricOperator, map_operator, map_state
from .statespace import PhysicalState, isometry_map, line_element, project


@dataclass(frozen=True, eq=False)
class Propagator:
    matrix: np.ndarray
    time: float
    hamiltonian: Hamiltonian = field(repr=False)
    hbar: float = 1.0

    def inverse(self) -> np.ndarray:
        return propagator(self.hamiltonian, -self.time, self.hbar).matrix


def _check_hbar(hbar: float) -> None:
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")


def propagator(h: Hamiltonian, t: float, hbar: float = 1.0) -> Propagator:
    """``U(t) = exp(-i t H / hbar)``."""
    _check_hbar(hbar)
    if not np.isfinite(t):
        raise ValueError("time must be finite")
    sys = h.eigensystem
    phases = np.exp(-1j * t * sys.eigenvalues.real / hbar)
    u = (sys.right_vectors * phases) @ adjoint(sys.left_vectors)
    return Propagator(u, float(t), h, hbar)


def check_pseudo_unitarity(u: Propagator | np.ndarray, eta: MetricOperator) -> float:
    """Residual ``||eta^{-1} U^dagger eta U - I||`` (Frobenius)."""
    m = u.matrix if isinstance(u, Propagator) else as_matrix(u, square=True)
    if m.shape[0] != eta.dim:
        raise DimensionMismatch(f"propagator dimension {m.shape[0]} vs metric {eta.dim}")
    return float(np.linalg.norm(eta.eta_inv @ adjoint(m) @ eta.eta @ m - np.eye(eta.dim)))


def evolve_state(h: Hamiltonian, psi0, t: float, hbar: float = 1.0) -> np.ndarray:
    psi0 = as_vector(psi0, h.dim, name="psi0")
    if not np.any(psi0):
        raise ZeroState("cannot evolve the zero vector")
    return propagator(h, t, hbar).matrix @ psi0


def orbit(h: Hamiltonian, psi0, times, hbar: float = 1.0) -> np.ndarray:
    """State vectors ``U(t) psi0`` for every ``t`` in ``times``, shape ``(len(times), N)``."""
    _check_hbar(hbar)
    psi0 = as_vector(psi0, h.dim, name="psi0")
    sys = h.eigensystem
    coeffs = adjoint(sys.left_vectors) @ psi0
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), sys.eigenvalues.real) / hbar)
    return (phases * coeffs) @ sys.right_vectors.T


def evolve_projection(h: Hamiltonian, s: PhysicalState, t: float, hbar: float = 1.0) -> PhysicalState:
    """``Lambda(t) = U(t) Lambda U(t)^{-1}``."""
    u = propagator(h, t, hbar)
    lam = u.matrix @ s.lam @ u.inverse()
    return PhysicalState(lam, s.metric, u.matrix @ s.vector)


def instantaneous_speed(h: Hamiltonian, eta: MetricOperator, psi, hbar: float = 1.0) -> float:
    """``ds/dt`` for the displacement ``dpsi = -(i/hbar) H psi dt``."""
    _check_hbar(hbar)
    psi = as_vector(psi, h.dim, name="psi")
    return float(np.sqrt(line_element(psi, -1j * (h.matrix @ psi) / hbar, eta)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled curve of physical states with speeds and accumulated arc length.

    ``hamiltonian`` is the generator matrix when the curve is a dynamical
    orbit, else ``None``.
    """

    times: np.ndarray
    states: list
    speeds: np.ndarray
    arc_lengths: np.ndarray
    metric: MetricOperator
    hamiltonian: np.ndarray | None = None
    hbar: float = 1.0

    @property
    def path_length(self) -> float:
        return float(self.arc_lengths[-1])

    def fidelity_to_final(self) -> np.ndarray:
        """``tr(Lambda(t) Lambda(t_final))``, the transition probability to the last state."""
        final = self.states[-1].lam
        return np.array([np.trace(s.lam @ final).real for s in self.states])


def _arc(times: np.ndarray, speeds: np.ndarray) -> np.ndarray:
    return cumulative_trapezoid(speeds, times, initial=0.0)


def path_length(h: Hamiltonian, eta: MetricOperator, psi0, t_final: float, steps: int,
                hbar: float = 1.0) -> Trajectory:
    """Trajectory on a uniform grid of ``steps`` intervals over ``[0, t_final]``."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    psi0 = as_vector(psi0, h.dim, name="psi0")
    if not np.any(psi0):
        raise ZeroState("cannot evolve the zero vector")
    times = np.linspace(0.0, t_final, steps + 1)
    vectors = orbit(h, psi0, times, hbar)
    states = [project(v, eta) for v in vectors]
    speeds = np.array([instantaneous_speed(h, eta, v, hbar) for v in vectors])
    return Trajectory(times, states, speeds, _arc(times, speeds), eta, h.matrix, hbar)


def curve_trajectory(times, points, tangents, eta: MetricOperator) -> Trajectory:
    """Trajectory of an arbitrary smooth curve given its samples and derivatives."""
    times = np.asarray(times, dtype=float)
    points = np.asarray(points, dtype=complex)
    tangents = np.asarray(tangents, dtype=complex)
    if points.shape != tangents.shape or points.shape[0] != times.shape[0]:
        raise DimensionMismatch("times, points and tangents disagree in shape")
    states = [project(p, eta) for p in points]
    speeds = np.array([np.sqrt(line_element(p, d, eta)) for p, d in zip(points, tangents)])
    return Trajectory(times, states, speeds, _arc(times, speeds), eta)


def mirror_trajectory(traj: Trajectory, tangents=None) -> Trajectory:
    """Image of ``traj`` in the ordinary projective space (metric ``I``).

    States go through ``Lambda -> eta^{1/2} Lambda eta^{-1/2}``.  Speeds are
    recomputed there: from ``h = eta^{1/2} H eta^{-1/2}`` for dynamical
    trajectories, or from the mapped ``tangents`` for general curves.
    """
    eta = traj.metric
    ident = MetricOperator.identity(eta.dim)
    vectors = [map_state(s.vector, eta) for s in traj.states]
    states = [PhysicalState(isometry_map(s), ident, v) for s, v in zip(traj.states, vectors)]
    h_mirror = None if traj.hamiltonian is None else map_operator(traj.hamiltonian, eta)
    if h_mirror is not None:
        flows = [-1j * (h_mirror @ v) / traj.hbar for v in vectors]
    elif tangents is not None:
        flows = [eta.eta_sqrt @ as_vector(d) for d in tangents]
    else:
        raise ValueError("a non-dynamical trajectory needs its tangents to be mirrored")
    speeds = np.array([np.sqrt(line_element(v, d, ident)) for v, d in zip(vectors, flows)])
    return Trajectory(traj.times.copy(), states, speeds, _arc(traj.times, speeds), ident,
                      h_mirror, traj.hbar)
