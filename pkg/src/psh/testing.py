"""Random instances for property checks (used by ``psh verify`` and the test suite)."""

from __future__ import annotations

import numpy as np

from .linalg import adjoint
from .pseudoherm import Hamiltonian, MetricOperator
from .statespace import TwoLevelMetricParams


def complex_normal(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2.0)


def random_state(rng, dim: int) -> np.ndarray:
    return complex_normal(rng, dim)


def random_hermitian(rng, dim: int) -> np.ndarray:
    a = complex_normal(rng, dim, dim)
    return 0.5 * (a + adjoint(a))


def random_metric(rng, dim: int, spread: float = 1.0) -> MetricOperator:
    """``A^dagger A + I`` with ``A`` scaled by ``spread``."""
    a = spread * complex_normal(rng, dim, dim)
    return MetricOperator.from_matrix(adjoint(a) @ a + np.eye(dim))


def random_eigenbasis(rng, dim: int, max_cond: float = 50.0) -> np.ndarray:
    while True:
        r = complex_normal(rng, dim, dim)
        if np.linalg.cond(r) < max_cond:
            return r


def random_real_spectrum(rng, dim: int, min_gap: float = 0.1) -> np.ndarray:
    """Sorted real eigenvalues with pairwise separation at least ``min_gap``."""
    while True:
        e = np.sort(rng.uniform(-2.0, 2.0, size=dim))
        if dim == 1 or np.min(np.diff(e)) >= min_gap:
            return e


def random_pseudo_hermitian(rng, dim: int) -> Hamiltonian:
    """Non-Hermitian ``R diag(E) R^{-1}`` with real ``E`` and a well conditioned ``R``."""
    r = random_eigenbasis(rng, dim)
    e = random_real_spectrum(rng, dim)
    return Hamiltonian((r * e) @ np.linalg.inv(r))


def random_two_level_params(rng) -> TwoLevelMetricParams:
    while True:
        a, c = rng.uniform(0.2, 3.0, size=2)
        b1, b2 = rng.uniform(-2.0, 2.0, size=2)
        if a * c - (b1**2 + b2**2) > 0.05:
            return TwoLevelMetricParams(a, b1, b2, c)
