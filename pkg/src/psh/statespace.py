"""Physical states as eta-orthogonal rank-1 projections and the geometry of their space.

A ray through ``psi`` is represented by ``Lambda = |psi><psi| eta / <psi|eta psi>``.
The operator inner product ``(A, B) = tr(A^# B)`` induces the line element

    ds^2 = 2 [<<psi,psi>> <<dpsi,dpsi>> - |<<psi,dpsi>>|^2] / <<psi,psi>>^2

which at ``eta = I`` is twice the usual Fubini-Study metric.  The map
``Lambda -> eta^{1/2} Lambda eta^{-1/2}`` is an isometry onto the ordinary
projective space, so geodesic distances are computed from mapped vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DependentStates,
    DimensionMismatch,
    MetricMismatch,
    NotPositiveDefinite,
    ZeroState,
)
from .linalg import adjoint, as_matrix, as_vector
from .pseudoherm import MetricOperator, map_state, physical_inner, pseudo_adjoint

SQRT2 = np.sqrt(2.0)
#: |z1| / ||z|| below which the two-level chart z1 != 0 is not used
CHART_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class PhysicalState:
    """A ray of the physical Hilbert space.

    ``lam`` is the projection ``Lambda`` (the canonical datum); ``vector`` is
    one representative with ``lam @ vector == vector``.
    """

    lam: np.ndarray
    metric: MetricOperator
    vector: np.ndarray

    @property
    def dim(self) -> int:
        return self.lam.shape[0]

    def residuals(self) -> dict[str, float]:
        lam = self.lam
        return {
            "idempotence": float(np.linalg.norm(lam @ lam - lam)),
            "self_adjointness": float(np.linalg.norm(pseudo_adjoint(lam, self.metric) - lam)),
            "trace": float(abs(np.trace(lam) - 1.0)),
        }


def project(psi, eta: MetricOperator) -> PhysicalState:
    psi = as_vector(psi, name="psi")
    eta.check_dim(psi.shape[0], "state vector")
    bra = np.conj(psi) @ eta.eta
    norm = (bra @ psi).real
    if not norm > 0:
        raise ZeroState("cannot project onto the zero vector")
    return PhysicalState(np.outer(psi, bra) / norm, eta, psi)


def state_from_projection(lam, eta: MetricOperator) -> PhysicalState:
    """Wrap an existing projection; the representative is its largest column."""
    lam = as_matrix(lam, square=True)
    eta.check_dim(lam.shape[0], "projection")
    col = int(np.argmax(np.linalg.norm(lam, axis=0)))
    return PhysicalState(lam, eta, lam[:, col].copy())


def op_inner(a, b, eta: MetricOperator) -> complex:
    """``(A, B) = tr(eta^{-1} A^dagger eta B)``."""
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operator shapes differ: {a.shape} vs {b.shape}")
    return complex(np.trace(pseudo_adjoint(a, eta) @ b))


def eta_orthonormal_basis(eta: MetricOperator, start=None, *, drop_tol: float = 1e-10) -> np.ndarray:
    """Gram-Schmidt in ``<<.,.>>`` over the columns of ``start`` (standard basis by default).

    Numerically dependent columns are skipped.  Two passes of classical
    Gram-Schmidt are done per vector for stability.
    """
    n = eta.dim
    cols = np.eye(n, dtype=complex) if start is None else as_matrix(start)
    if cols.shape[0] != n:
        raise DimensionMismatch(f"seed vectors have length {cols.shape[0]}, metric has dimension {n}")
    basis: list[np.ndarray] = []
    for k in range(cols.shape[1]):
        v = cols[:, k].copy()
        size = np.sqrt(physical_inner(v, v, eta).real)
        for _ in range(2):
            for b in basis:
                v = v - b * physical_inner(b, v, eta)
        nv = np.sqrt(max(physical_inner(v, v, eta).real, 0.0))
        if nv <= drop_tol * max(size, 1e-300):
            continue
        basis.append(v / nv)
        if len(basis) == n:
            break
    return np.column_stack(basis)


def phys_trace(a, eta: MetricOperator, start=None) -> complex:
    """``sum_n <<psi_n, A psi_n>>`` over an eta-orthonormal basis built from ``start``."""
    a = as_matrix(a, square=True)
    eta.check_dim(a.shape[0], "operator")
    basis = eta_orthonormal_basis(eta, start)
    if basis.shape[1] != eta.dim:
        raise DependentStates("seed vectors do not span the space")
    return complex(sum(physical_inner(basis[:, k], a @ basis[:, k], eta) for k in range(eta.dim)))


def line_element(psi, dpsi, eta: MetricOperator) -> float:
    """Squared length ``ds^2`` of the displacement ``dpsi`` at ``psi``.

    Evaluated as ``2 <<d, d>> / <<psi, psi>>`` with ``d`` the part of ``dpsi``
    eta-orthogonal to ``psi``; this equals the closed form above but does not
    cancel catastrophically when ``dpsi`` is nearly along the ray.
    """
    psi = as_vector(psi, name="psi")
    dpsi = as_vector(dpsi, psi.shape[0], name="dpsi")
    eta.check_dim(psi.shape[0], "state vector")
    e_psi = eta.eta @ psi
    nn = np.vdot(psi, e_psi).real
    if not nn > 0:
        raise ZeroState("line element at the zero vector")
    perp = dpsi - psi * (np.vdot(e_psi, dpsi) / nn)
    return max(float(2.0 * np.vdot(perp, eta.eta @ perp).real / nn), 0.0)


def line_element_from_projections(psi, dpsi, eta: MetricOperator) -> float:
    """``tr(dLambda^# dLambda)`` with ``dLambda = Lambda(psi + dpsi) - Lambda(psi)``."""
    psi = as_vector(psi)
    d_lam = project(psi + as_vector(dpsi), eta).lam - project(psi, eta).lam
    return op_inner(d_lam, d_lam, eta).real


@dataclass(frozen=True)
class MetricTensor:
    """Components ``g_{ij*}`` with ``ds^2 = sum_ij g_{ij*} dz_i conj(dz_j)``."""

    components: np.ndarray

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def contract(self, dz) -> float:
        dz = as_vector(dz, self.dim, name="dz")
        return float(np.real(dz @ self.components @ np.conj(dz)))


def metric_tensor(z, eta: MetricOperator, *, sign: float = 1.0) -> MetricTensor:
    """Metric components at ``z`` in the standard coordinates of C^N.

    ``g_{ij*} = 2 sum_pq [eta_pq eta_ji - eta_pi eta_jq] conj(z_p) z_q / (z^dagger eta z)^2``.
    ``sign`` flips the second term and exists only to let the verification
    suite check that it detects a broken formula.
    """
    z = as_vector(z, name="z")
    eta.check_dim(z.shape[0], "point")
    e = eta.eta
    norm = np.real(np.conj(z) @ e @ z)
    if not norm > 0:
        raise ZeroState("metric tensor at the zero vector")
    u = np.conj(z) @ e      # u_i = sum_p conj(z_p) eta_pi
    w = e @ z               # w_j = sum_q eta_jq z_q
    g = 2.0 * (norm * e.T - sign * np.outer(u, w)) / norm**2
    return MetricTensor(g)


@dataclass(frozen=True)
class TwoLevelMetricParams:
    """Real parameters of a 2x2 metric ``[[a, b1 + i b2], [b1 - i b2, c]]``."""

    a: float
    b1: float
    b2: float
    c: float

    def __post_init__(self):
        if not all(np.isfinite([self.a, self.b1, self.b2, self.c])):
            raise ValueError("metric parameters must be finite")
        if not (self.a > 0 and self.c > 0 and self.d > 0):
            raise NotPositiveDefinite(
                f"metric parameters not positive definite: a={self.a}, c={self.c}, d={self.d}"
            )

    @property
    def beta(self) -> complex:
        return complex(self.b1, self.b2)

    @property
    def d(self) -> float:
        """``a c - |beta|^2``, the determinant."""
        return self.a * self.c - (self.b1**2 + self.b2**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b1, self.b2, self.c])

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.beta], [np.conj(self.beta), self.c]], dtype=complex)

    def metric(self) -> MetricOperator:
        return MetricOperator.from_matrix(self.matrix())

    @classmethod
    def from_matrix(cls, eta) -> "TwoLevelMetricParams":
        m = eta.eta if isinstance(eta, MetricOperator) else as_matrix(eta, square=True)
        if m.shape != (2, 2):
            raise DimensionMismatch("two-level parameters need a 2x2 metric")
        return cls(float(m[0, 0].real), float(m[0, 1].real), float(m[0, 1].imag), float(m[1, 1].real))


@dataclass(frozen=True)
class ChartPoint:
    """Point ``zeta = x + i y = z2 / z1`` in the chart ``z1 != 0``."""

    x: float
    y: float

    @property
    def zeta(self) -> complex:
        return complex(self.x, self.y)

    def embed(self) -> np.ndarray:
        return np.array([1.0, self.zeta], dtype=complex)

    @classmethod
    def from_vector(cls, z) -> "ChartPoint":
        z = as_vector(z, 2)
        if abs(z[0]) <= CHART_CUTOFF * np.linalg.norm(z):
            raise ValueError("point lies outside the chart z1 != 0")
        zeta = z[1] / z[0]
        return cls(float(zeta.real), float(zeta.imag))


def two_level_line_element(p: ChartPoint, dx: float, dy: float, m: TwoLevelMetricParams) -> float:
    """``2 d (dx^2 + dy^2) / [a + 2 (b1 x - b2 y) + c (x^2 + y^2)]^2``."""
    denom = m.a + 2.0 * (m.b1 * p.x - m.b2 * p.y) + m.c * (p.x**2 + p.y**2)
    return 2.0 * m.d * (dx**2 + dy**2) / denom**2


def isometry_map(state: PhysicalState) -> np.ndarray:
    """``Lambda' = eta^{1/2} Lambda eta^{-1/2}``, an ordinary orthogonal projection."""
    eta = state.metric
    return eta.eta_sqrt @ state.lam @ eta.eta_inv_sqrt


def mapped_unit_vector(state: PhysicalState) -> np.ndarray:
    v = map_state(state.vector, state.metric)
    return v / np.linalg.norm(v)


def _check_shared(s1: PhysicalState, s2: PhysicalState) -> None:
    if not s1.metric.same_as(s2.metric):
        raise MetricMismatch("states belong to different metric operators")


def fubini_angle(u: np.ndarray, v: np.ndarray) -> float:
    """Angle ``arccos |<u|v>|`` for unit vectors, accurate near 0 and pi/2."""
    overlap = np.vdot(u, v)
    cos = abs(overlap)
    sin = np.linalg.norm(v - u * overlap)
    return float(np.arctan2(sin, cos))


def geodesic_distance(s1: PhysicalState, s2: PhysicalState) -> float:
    """``sqrt(2) arccos(fidelity)``; ``pi / sqrt(2)`` for antipodal states."""
    _check_shared(s1, s2)
    return SQRT2 * fubini_angle(mapped_unit_vector(s1), mapped_unit_vector(s2))


def is_antipodal(s1: PhysicalState, s2: PhysicalState, tol: float = 1e-10) -> bool:
    _check_shared(s1, s2)
    return bool(
        np.linalg.norm(s1.lam @ s2.lam) < tol and np.linalg.norm(s2.lam @ s1.lam) < tol
    )


def antipodal_state(psi_i, m: TwoLevelMetricParams | MetricOperator) -> np.ndarray:
    """Representative of the ray eta-orthogonal to ``psi_i`` in two dimensions.

    With ``w = eta psi_i`` the result is ``(conj(w2), -conj(w1))``; for
    ``psi_i = (1, 0)`` this is ``(beta, -a)``.
    """
    psi_i = as_vector(psi_i, 2, name="psi_I")
    eta = m.matrix() if isinstance(m, TwoLevelMetricParams) else m.eta
    w = eta @ psi_i
    if not np.any(w):
        raise ZeroState("initial state is the zero vector")
    return np.array([np.conj(w[1]), -np.conj(w[0])], dtype=complex)
