"""Metric operators, the physical inner product and the Hermitian picture.

A diagonalizable ``H`` with real spectrum is self-adjoint with respect to
``<<psi, phi>> = <psi|eta phi>`` for a positive-definite ``eta`` obeying
``H^dagger = eta H eta^{-1}``.  This module builds such an ``eta``, checks
given ones, and maps operators and states to the equivalent Hermitian
description through ``eta^{1/2}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._config import default_tol
from .errors import ComplexSpectrum, DimensionMismatch, MetricMismatch, ZeroState
from .linalg import EigenSystem, adjoint, as_matrix, as_vector, eig, herm_sqrt

#: default relative tolerance on |Im E| for the real-spectrum gate
SPECTRUM_REAL_TOL = 1e-9
#: default relative tolerance on the pseudo-Hermiticity residual
PSEUDO_HERMITICITY_TOL = 1e-9


class Hamiltonian:
    """A diagonalizable matrix with verified real spectrum.

    The eigensystem is computed once and cached.  Eigenvalues whose imaginary
    part exceeds ``spectrum_real_tol * (1 + |Re E|)`` raise
    :class:`~psh.errors.ComplexSpectrum`.
    """

    def __init__(self, matrix, *, spectrum_real_tol: float = SPECTRUM_REAL_TOL,
                 eigensystem: EigenSystem | None = None):
        self.matrix = as_matrix(matrix, square=True, name="Hamiltonian")
        self.spectrum_real_tol = spectrum_real_tol
        sys = eig(self.matrix) if eigensystem is None else eigensystem
        for e in sys.eigenvalues:
            if abs(e.imag) >= spectrum_real_tol * (1.0 + abs(e.real)):
                raise ComplexSpectrum(
                    f"complex eigenvalue {e.real:.12g}{e.imag:+.12g}j", eigenvalue=complex(e)
                )
        self.eigensystem = EigenSystem(
            sys.eigenvalues.real.astype(complex), sys.right_vectors, sys.left_vectors
        )

    @classmethod
    def from_hermitian(cls, h, metric: "MetricOperator") -> "Hamiltonian":
        """``H = eta^{-1/2} h eta^{1/2}`` for Hermitian ``h``; eigenvectors come from ``h``."""
        h = as_matrix(h, square=True)
        h = 0.5 * (h + adjoint(h))
        w, v = np.linalg.eigh(h)
        right = metric.eta_inv_sqrt @ v
        left = metric.eta_sqrt @ v
        norms = np.linalg.norm(right, axis=0)
        sys = EigenSystem(w.astype(complex), right / norms, left * norms)
        return cls(metric.eta_inv_sqrt @ h @ metric.eta_sqrt, eigensystem=sys)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def energies(self) -> np.ndarray:
        return self.eigensystem.eigenvalues.real.copy()

    @property
    def spread(self) -> float:
        """Largest minus smallest energy."""
        e = self.energies
        return float(e[-1] - e[0])

    def __repr__(self):
        return f"Hamiltonian(dim={self.dim}, energies={np.round(self.energies, 10).tolist()})"


@dataclass(frozen=True, eq=False)
class MetricOperator:
    """Positive-definite Hermitian ``eta`` with cached ``eta^{1/2}``, ``eta^{-1/2}``, ``eta^{-1}``."""

    eta: np.ndarray
    eta_sqrt: np.ndarray
    eta_inv_sqrt: np.ndarray
    eta_inv: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, eta, *, tol: float | None = None) -> "MetricOperator":
        eta = as_matrix(eta, square=True, name="metric")
        s, s_inv = herm_sqrt(eta, tol=tol)
        eta = 0.5 * (eta + adjoint(eta))
        return cls(eta, s, s_inv, s_inv @ s_inv)

    @classmethod
    def identity(cls, dim: int) -> "MetricOperator":
        i = np.eye(dim, dtype=complex)
        return cls(i, i.copy(), i.copy(), i.copy())

    @property
    def dim(self) -> int:
        return self.eta.shape[0]

    def is_identity(self, tol: float = 1e-14) -> bool:
        return bool(np.linalg.norm(self.eta - np.eye(self.dim)) <= tol)

    def same_as(self, other: "MetricOperator", tol: float = 1e-12) -> bool:
        if self is other:
            return True
        if self.dim != other.dim:
            return False
        scale = max(np.linalg.norm(self.eta), np.linalg.norm(other.eta))
        return bool(np.linalg.norm(self.eta - other.eta) <= tol * scale)

    def check_dim(self, n: int, what: str = "operand") -> None:
        if n != self.dim:
            raise DimensionMismatch(f"{what} has dimension {n}, metric has dimension {self.dim}")

    def pseudo_hermiticity_residual(self, h) -> float:
        """Relative residual ``||H^dagger eta - eta H|| / (||H|| ||eta||)``."""
        m = h.matrix if isinstance(h, Hamiltonian) else as_matrix(h, square=True)
        self.check_dim(m.shape[0], "Hamiltonian")
        scale = np.linalg.norm(m) * np.linalg.norm(self.eta)
        res = np.linalg.norm(adjoint(m) @ self.eta - self.eta @ m)
        return float(res / scale) if scale > 0 else float(res)


def build_metric_operator(h: Hamiltonian) -> MetricOperator:
    """Canonical metric ``eta = sum_n |phi_n><phi_n|`` over biorthonormal left eigenvectors.

    Right eigenvectors are unit normalized, which fixes the otherwise free
    positive rescaling of each eigenvector.  Hermitian ``H`` yields the identity.
    """
    if not isinstance(h, Hamiltonian):
        h = Hamiltonian(h)
    left = h.eigensystem.left_vectors
    eta = left @ adjoint(left)
    return MetricOperator.from_matrix(0.5 * (eta + adjoint(eta)))


def physical_inner(psi, phi, eta: MetricOperator) -> complex:
    """``<<psi, phi>> = <psi| eta phi>``."""
    psi = as_vector(psi, name="psi")
    phi = as_vector(phi, name="phi")
    if psi.shape != phi.shape:
        raise DimensionMismatch(f"vector lengths differ: {psi.shape[0]} vs {phi.shape[0]}")
    eta.check_dim(psi.shape[0], "vector")
    return complex(np.vdot(psi, eta.eta @ phi))


def physical_norm_sq(psi, eta: MetricOperator) -> float:
    return physical_inner(psi, psi, eta).real


def pseudo_adjoint(a, eta: MetricOperator) -> np.ndarray:
    """``A^# = eta^{-1} A^dagger eta``, the adjoint for the physical inner product."""
    a = as_matrix(a, square=True)
    eta.check_dim(a.shape[0], "operator")
    return eta.eta_inv @ adjoint(a) @ eta.eta


def is_observable(a, eta: MetricOperator, tol: float | None = None) -> bool:
    """True iff ``||A^# - A|| < tol (1 + ||A||)``."""
    tol = default_tol() if tol is None else tol
    a = as_matrix(a, square=True)
    return bool(np.linalg.norm(pseudo_adjoint(a, eta) - a) < tol * (1.0 + np.linalg.norm(a)))


@dataclass(frozen=True, eq=False)
class Observable:
    """An operator that is self-adjoint in the physical inner product."""

    matrix: np.ndarray
    metric: MetricOperator
    tol: float = 1e-10

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True)
        object.__setattr__(self, "matrix", m)
        if not is_observable(m, self.metric, self.tol):
            raise MetricMismatch("operator is not pseudo-Hermitian with respect to the metric")


def hermitian_counterpart(h: Hamiltonian, eta: MetricOperator, *, tol: float = PSEUDO_HERMITICITY_TOL) -> np.ndarray:
    """``h = eta^{1/2} H eta^{-1/2}``, Hermitian and isospectral with ``H``.

    Raises:
        MetricMismatch: ``eta`` does not make ``H`` pseudo-Hermitian within ``tol``.
    """
    m = h.matrix if isinstance(h, Hamiltonian) else as_matrix(h, square=True)
    res = eta.pseudo_hermiticity_residual(m)
    if res > tol:
        raise MetricMismatch(f"pseudo-Hermiticity residual {res:.3g} exceeds {tol:.1g}", residual=res)
    return eta.eta_sqrt @ m @ eta.eta_inv_sqrt


def map_operator(a, eta: MetricOperator) -> np.ndarray:
    """``A' = eta^{1/2} A eta^{-1/2}``."""
    a = as_matrix(a, square=True)
    eta.check_dim(a.shape[0], "operator")
    return eta.eta_sqrt @ a @ eta.eta_inv_sqrt


def map_state(psi, eta: MetricOperator) -> np.ndarray:
    """``psi' = eta^{1/2} psi``; an isometry from the physical space onto C^N."""
    psi = as_vector(psi, name="psi")
    eta.check_dim(psi.shape[0], "vector")
    return eta.eta_sqrt @ psi


def expectation(a, psi, eta: MetricOperator) -> complex:
    """``<<psi, A psi>> / <<psi, psi>>``."""
    a = as_matrix(a, square=True)
    psi = as_vector(psi, name="psi")
    norm = physical_inner(psi, psi, eta)
    if norm.real <= 0:
        raise ZeroState("expectation value of the zero vector")
    return physical_inner(psi, a @ psi, eta) / norm
