"""Time-optimal evolution between fixed physical states.

Boundary data are Hamiltonian independent: two physical states, one metric
operator and the energy spread ``gap`` of the admissible Hamiltonians.  The
smallest possible travel time is ``sqrt(2) * distance * hbar / gap``, which
is ``pi hbar / gap`` for antipodal states.  Problems are solved by mapping
to the ordinary Hilbert space with ``eta^{1/2}``, where the optimal
generator is a rotation in the plane of the two mapped states.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from ._config import default_tol
from .errors import CoincidentStates, DependentStates, MetricMismatch, NeverReaches
from .evolution import instantaneous_speed, orbit
from .linalg import adjoint, as_vector
from .pseudoherm import Hamiltonian, MetricOperator, is_observable
from .statespace import (
    SQRT2,
    PhysicalState,
    TwoLevelMetricParams,
    antipodal_state,
    fubini_angle,
    geodesic_distance,
    mapped_unit_vector,
    project,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
#: default detection tolerance in geodesic distance
DETECTION_TOL = 1e-8
#: default number of grid intervals scanned before refinement
SCAN_INTERVALS = 10_000
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class BrachistochroneProblem:
    initial: PhysicalState
    final: PhysicalState
    metric: MetricOperator
    gap: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.gap > 0 and np.isfinite(self.gap)):
            raise ValueError(f"gap must be positive, got {self.gap}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        for s in (self.initial, self.final):
            if not s.metric.same_as(self.metric):
                raise MetricMismatch("boundary states do not share the problem metric")

    @classmethod
    def from_vectors(cls, psi_i, psi_f, metric: MetricOperator, gap: float, hbar: float = 1.0):
        return cls(project(psi_i, metric), project(psi_f, metric), metric, gap, hbar)

    @classmethod
    def antipodal(cls, m: TwoLevelMetricParams, gap: float, hbar: float = 1.0):
        """``psi_I = (1, 0)`` and ``psi_F = (beta, -a)`` under the metric ``m``."""
        metric = m.metric()
        psi_i = np.array([1.0, 0.0], dtype=complex)
        return cls.from_vectors(psi_i, antipodal_state(psi_i, m), metric, gap, hbar)

    def with_gap(self, gap: float) -> "BrachistochroneProblem":
        return BrachistochroneProblem(self.initial, self.final, self.metric, gap, self.hbar)


@dataclass(frozen=True, eq=False)
class BrachistochroneSolution:
    hamiltonian: Hamiltonian
    hermitian_generator: np.ndarray
    travel_time: float
    bound: float
    achieves_bound: bool


def min_time_bound(p: BrachistochroneProblem) -> float:
    return geodesic_distance(p.initial, p.final) * SQRT2 * p.hbar / p.gap


@dataclass(frozen=True)
class _Plane:
    """Orthonormal pair (u, v) of the mapped states with ``final ~ cos(theta) u + sin(theta) v``."""

    u: np.ndarray
    v: np.ndarray
    theta: float

    @property
    def basis(self) -> np.ndarray:
        return np.column_stack([self.u, self.v])

    def bloch_final(self) -> np.ndarray:
        return np.array([np.sin(2 * self.theta), 0.0, np.cos(2 * self.theta)])


def _plane(p: BrachistochroneProblem) -> _Plane:
    u = mapped_unit_vector(p.initial)
    f = mapped_unit_vector(p.final)
    overlap = np.vdot(u, f)
    if abs(overlap) > 0:
        f = f * (abs(overlap) / overlap)
    rest = f - u * np.vdot(u, f)
    size = np.linalg.norm(rest)
    theta = float(np.arctan2(size, abs(overlap)))
    if theta < 1e-12:
        raise CoincidentStates("initial and final states coincide")
    return _Plane(u, rest / size, theta)


def rotation_generator(plane_basis: np.ndarray, axis, gap: float) -> np.ndarray:
    """``(gap/2) Q (n . sigma) Q^dagger`` acting in the plane spanned by the columns of ``Q``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    local = 0.5 * gap * sum(c * s for c, s in zip(n, PAULI))
    return plane_basis @ local @ adjoint(plane_basis)


def _distance_along(h: Hamiltonian, eta: MetricOperator, psi0, target: np.ndarray, hbar: float):
    def dist(times):
        vecs = orbit(h, psi0, np.atleast_1d(times), hbar) @ eta.eta_sqrt.T
        vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
        overlap = vecs.conj() @ target
        sin = np.linalg.norm(target[None, :] - vecs * overlap[:, None], axis=1)
        return SQRT2 * np.arctan2(sin, np.abs(overlap))

    return dist


def _golden_min(f, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def travel_time(h, eta: MetricOperator, initial: PhysicalState, final: PhysicalState,
                t_max: float, tol: float = DETECTION_TOL, hbar: float = 1.0,
                intervals: int = SCAN_INTERVALS) -> float:
    """First time in ``(0, t_max]`` at which the orbit of ``initial`` meets ``final``.

    The distance to ``final`` is scanned on a uniform grid; every local
    minimum that could hide a zero is refined by golden-section search
    (the distance is V shaped, not smooth, at a crossing).  A crossing is
    accepted when the refined distance is below ``tol``.

    Raises:
        NeverReaches: no crossing within ``t_max``.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if not isinstance(h, Hamiltonian):
        h = Hamiltonian(h)
    target = mapped_unit_vector(final)
    dist = _distance_along(h, eta, initial.vector, target, hbar)
    times = np.linspace(0.0, t_max, intervals + 1)
    d = dist(times)
    dt = times[1] - times[0]
    speed = instantaneous_speed(h, eta, initial.vector, hbar)
    cutoff = 1.01 * speed * dt + tol
    padded = np.concatenate([[np.inf], d, [np.inf]])
    is_min = (padded[1:-1] <= padded[:-2]) & (padded[1:-1] <= padded[2:])
    is_min[0] = False
    closest = float(np.min(d[1:]))
    for i in np.flatnonzero(is_min & (d <= cutoff)):
        lo, hi = times[max(i - 1, 0)], times[min(i + 1, intervals)]
        t, dmin = _golden_min(lambda s: float(dist(s)[0]), lo, hi, 1e-14 * max(hi, 1.0))
        closest = min(closest, dmin)
        if dmin < tol and t > 0:
            return float(t)
    raise NeverReaches(
        f"orbit does not reach the final state within t_max={t_max:.6g} "
        f"(closest distance {closest:.3g})",
        closest_distance=closest,
    )


def _default_t_max(p: BrachistochroneProblem, bound: float) -> float:
    # a connecting rotation with the fixed spread never needs more than one period
    return max(4.0 * bound, 1.05 * 2.0 * np.pi * p.hbar / p.gap)


def optimal_hamiltonian(p: BrachistochroneProblem, *, tol: float = 1e-8) -> BrachistochroneSolution:
    """Generator of the great-circle rotation from the initial toward the final state.

    ``h`` has eigenvalues ``+-gap/2`` on the plane of the mapped states (0 on
    its complement); the returned Hamiltonian is ``eta^{-1/2} h eta^{1/2}``.
    """
    plane = _plane(p)
    h = rotation_generator(plane.basis, (0.0, 1.0, 0.0), p.gap)
    ham = Hamiltonian.from_hermitian(h, p.metric)
    bound = min_time_bound(p)
    tau = travel_time(ham, p.metric, p.initial, p.final, 4.0 * bound, hbar=p.hbar)
    return BrachistochroneSolution(ham, h, tau, bound, bool(abs(tau - bound) < tol * max(1.0, bound)))


@dataclass
class SweepReport:
    bound: float
    taus: np.ndarray
    bounds: np.ndarray
    rejected: int
    violations: int
    histogram: tuple[np.ndarray, np.ndarray] = field(repr=False)

    @property
    def samples(self) -> int:
        return int(self.taus.size)

    @property
    def min(self) -> float:
        return float(np.min(self.taus)) if self.taus.size else float("nan")

    @property
    def mean(self) -> float:
        return float(np.mean(self.taus)) if self.taus.size else float("nan")

    @property
    def min_excess(self) -> float:
        """Smallest ``tau - bound`` over the accepted samples."""
        return float(np.min(self.taus - self.bounds)) if self.taus.size else float("nan")

    def to_dict(self) -> dict:
        counts, edges = self.histogram
        return {
            "bound": float(self.bound),
            "samples": self.samples,
            "rejected": int(self.rejected),
            "violations": int(self.violations),
            "min": self.min,
            "mean": self.mean,
            "min_excess": self.min_excess,
            "histogram": {"counts": counts.tolist(), "edges": edges.tolist()},
        }


def _random_admissible_metric(rng, psi_i, psi_f, base: MetricOperator) -> MetricOperator:
    cons = admissible_metric_constraint(psi_i, psi_f)
    basis = cons.nullspace
    center = np.linalg.lstsq(basis, TwoLevelMetricParams.from_matrix(base).as_array(), rcond=None)[0]
    for _ in range(1000):
        coeffs = center * np.exp(rng.normal(scale=0.5, size=center.shape)) + rng.normal(size=center.shape)
        vals = basis @ coeffs
        try:
            return TwoLevelMetricParams(*vals).metric()
        except ValueError:
            continue
    return base


def sweep_hamiltonians(p: BrachistochroneProblem, samples: int, seed: int, *,
                       include_optimal: bool = False, vary_metric: bool = False,
                       workers: int = 1, violation_tol: float = 1e-8) -> SweepReport:
    """Travel times of random generators with spread ``gap`` that connect the boundary states.

    Each sample draws an axis ``n`` uniformly on the sphere with its own
    generator seeded by ``(seed, index)``, projects it onto the great circle
    of axes whose rotations carry the mapped initial state through the final
    one, and builds ``H = eta^{-1/2} (gap/2)(n . sigma) eta^{1/2}`` in the
    plane of the two states.  Orbits that miss the target are rejected.
    With ``vary_metric`` (two-level problems only) every sample also draws
    its own metric keeping the two state vectors orthogonality-compatible.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    bound = min_time_bound(p)

    def one(k: int):
        rng = np.random.default_rng([seed, k])
        prob = p
        if vary_metric:
            metric = _random_admissible_metric(rng, p.initial.vector, p.final.vector, p.metric)
            prob = BrachistochroneProblem.from_vectors(p.initial.vector, p.final.vector, metric,
                                                       p.gap, p.hbar)
        plane = _plane(prob)
        normal = np.array([0.0, 0.0, 1.0]) - plane.bloch_final()
        normal /= np.linalg.norm(normal)
        if include_optimal and k == 0:
            axis = np.array([0.0, 1.0, 0.0])
        else:
            axis = np.zeros(3)
            while np.linalg.norm(axis) < 1e-6:
                n = rng.normal(size=3)
                n /= np.linalg.norm(n)
                axis = n - normal * (n @ normal)
        ham = Hamiltonian.from_hermitian(rotation_generator(plane.basis, axis, prob.gap), prob.metric)
        b = min_time_bound(prob)
        try:
            tau = travel_time(ham, prob.metric, prob.initial, prob.final,
                              _default_t_max(prob, b), hbar=prob.hbar)
        except NeverReaches:
            return None
        return tau, b

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(samples)))
    else:
        results = [one(k) for k in range(samples)]
    accepted = [r for r in results if r is not None]
    taus = np.array([r[0] for r in accepted])
    bounds = np.array([r[1] for r in accepted])
    violations = int(np.sum(taus < bounds - violation_tol)) if taus.size else 0
    hist = _histogram(taus)
    return SweepReport(bound, taus, bounds, len(results) - len(accepted), violations, hist)


def _histogram(taus: np.ndarray, bins: int = 20):
    if not taus.size:
        return np.zeros(0, int), np.zeros(0)
    lo, hi = float(taus.min()), float(taus.max())
    pad = max(1e-6 * abs(hi), 1e-12)
    if hi - lo < pad:
        lo, hi = lo - pad, hi + pad
    return np.histogram(taus, bins=bins, range=(lo, hi))


@dataclass(frozen=True)
class AdmissibilityConstraint:
    """Linear constraint ``coefficients @ (a, b1, b2, c) = 0`` making the two vectors eta-orthogonal.

    ``beta_over_a`` is set when the initial vector is along ``(1, 0)``.
    """

    coefficients: np.ndarray
    nullspace: np.ndarray
    beta_over_a: complex | None
    diagonal_required: bool

    def admits(self, m: TwoLevelMetricParams, tol: float = 1e-10) -> bool:
        vals = m.as_array()
        return bool(np.linalg.norm(self.coefficients @ vals) <= tol * np.linalg.norm(vals))


def admissible_metric_constraint(psi_i, psi_f) -> AdmissibilityConstraint:
    """Metrics under which ``psi_f`` represents the state antipodal to ``psi_i``."""
    i1, i2 = as_vector(psi_i, 2, name="psi_I")
    f1, f2 = as_vector(psi_f, 2, name="psi_F")
    scale = np.linalg.norm([i1, i2]) * np.linalg.norm([f1, f2])
    if scale == 0 or abs(i1 * f2 - i2 * f1) <= 1e-12 * scale:
        raise DependentStates("initial and final vectors are linearly dependent")
    # <psi_F| eta psi_I> as a linear form in (a, b1, b2, c)
    form = np.array([
        np.conj(f1) * i1,
        np.conj(f1) * i2 + np.conj(f2) * i1,
        1j * (np.conj(f1) * i2 - np.conj(f2) * i1),
        np.conj(f2) * i2,
    ])
    coeffs = np.vstack([form.real, form.imag])
    ns = null_space(coeffs)
    beta_over_a = None
    if abs(i2) <= 1e-15 * abs(i1):
        beta_over_a = complex(-f1 / f2)
    diagonal = bool(np.allclose(ns[1:3, :], 0.0, atol=1e-12))
    return AdmissibilityConstraint(coeffs, ns, beta_over_a, diagonal)


def s_z(hbar: float = 1.0) -> np.ndarray:
    return 0.5 * hbar * PAULI[2]


def s_z_observability_demo(m: TwoLevelMetricParams, hbar: float = 1.0, tol: float | None = None) -> bool:
    """Whether ``S_z = (hbar/2) diag(1, -1)`` is an observable under the metric ``m``."""
    tol = default_tol() if tol is None else tol
    return is_observable(s_z(hbar), m.metric(), tol)
