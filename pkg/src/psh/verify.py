"""Randomized property suites behind ``psh verify``.

Each suite draws ``cases`` random instances, records the worst residual
and compares it with a fixed threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import brachistochrone as br
from . import evolution as ev
from . import linalg as la
from . import pseudoherm as ph
from . import statespace as ss
from . import testing as rnd


@dataclass
class SuiteResult:
    name: str
    worst: float
    threshold: float
    cases: int

    @property
    def passed(self) -> bool:
        return self.cases == 0 or self.worst < self.threshold

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.cases == 0:
            return f"{status}  {self.name:<34} no cases"
        return f"{status}  {self.name:<34} worst={self.worst:.3e}  limit={self.threshold:.1e}  cases={self.cases}"


def _rel(a, b) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def _dims(rng, dim_max: int) -> int:
    return int(rng.integers(2, max(dim_max, 2) + 1))


def suite_eig(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        h = rnd.random_pseudo_hermitian(rng, _dims(rng, dim_max))
        sys = h.eigensystem
        worst = max(worst, np.linalg.norm(sys.reconstruct() - h.matrix) / np.linalg.norm(h.matrix),
                    *sys.residuals(h.matrix)[2:])
    return worst


def suite_herm_sqrt(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        eta = rnd.random_metric(rng, _dims(rng, dim_max))
        s, s_inv = eta.eta_sqrt, eta.eta_inv_sqrt
        n = np.linalg.norm(eta.eta)
        worst = max(worst, np.linalg.norm(s @ s - eta.eta) / n,
                    np.linalg.norm(s @ eta.eta - eta.eta @ s) / n,
                    np.linalg.norm(s @ s_inv - np.eye(eta.dim)))
    return worst


def suite_expm_group(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        m = rnd.complex_normal(rng, n, n)
        c1, c2 = rnd.complex_normal(rng, 2) * 0.5
        lhs = la.expm_scaled(m, c1) @ la.expm_scaled(m, c2)
        worst = max(worst, np.linalg.norm(lhs - la.expm_scaled(m, c1 + c2)) / np.linalg.norm(lhs))
    return worst


def suite_metric(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        h = rnd.random_pseudo_hermitian(rng, _dims(rng, dim_max))
        eta = ph.build_metric_operator(h)
        if np.linalg.eigvalsh(eta.eta)[0] <= 0:
            return np.inf
        worst = max(worst, eta.pseudo_hermiticity_residual(h))
    return worst


def suite_equivalence(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        h = rnd.random_pseudo_hermitian(rng, n)
        eta = ph.build_metric_operator(h)
        a = eta.eta_inv_sqrt @ rnd.random_hermitian(rng, n) @ eta.eta_sqrt
        psi = rnd.random_state(rng, n)
        lhs = ph.expectation(a, psi, eta)
        psi_m = ph.map_state(psi, eta)
        rhs = np.vdot(psi_m, ph.map_operator(a, eta) @ psi_m) / np.vdot(psi_m, psi_m)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300), abs(lhs.imag))
        e = ph.hermitian_counterpart(h, eta)
        worst = max(worst, np.max(np.abs(np.linalg.eigvalsh(0.5 * (e + la.adjoint(e))) - h.energies))
                    / max(np.max(np.abs(h.energies)), 1.0))
    return worst


def suite_sharp(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        eta = rnd.random_metric(rng, n, spread=0.5)
        a, b = rnd.complex_normal(rng, n, n), rnd.complex_normal(rng, n, n)
        s = lambda x: ph.pseudo_adjoint(x, eta)
        worst = max(worst, np.linalg.norm(s(s(a)) - a) / np.linalg.norm(a),
                    np.linalg.norm(s(a @ b) - s(b) @ s(a)) / np.linalg.norm(a @ b))
    return worst


def suite_projection(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        eta = rnd.random_metric(rng, n)
        psi = rnd.random_state(rng, n)
        st = ss.project(psi, eta)
        c = complex(*rng.normal(size=2))
        worst = max(worst, *st.residuals().values(),
                    np.linalg.norm(st.lam @ psi - psi) / np.linalg.norm(psi),
                    np.max(np.abs(ss.project(c * psi, eta).lam - st.lam)))
    return worst


def suite_defining_vs_closed(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        eta = rnd.random_metric(rng, n)
        psi = rnd.random_state(rng, n)
        d = rnd.complex_normal(rng, n)
        d *= 1e-5 / np.linalg.norm(d)
        worst = max(worst, _rel(ss.line_element(psi, d, eta), ss.line_element_from_projections(psi, d, eta)))
    return worst


def suite_closed_vs_tensor(rng, cases, dim_max, metric_tensor: Callable = ss.metric_tensor, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        eta = rnd.random_metric(rng, n)
        z, dz = rnd.random_state(rng, n), rnd.complex_normal(rng, n)
        worst = max(worst, _rel(metric_tensor(z, eta).contract(dz), ss.line_element(z, dz, eta)))
    return worst


def suite_tensor_vs_chart(rng, cases, dim_max, metric_tensor: Callable = ss.metric_tensor, **_):
    worst = 0.0
    for _ in range(cases):
        m = rnd.random_two_level_params(rng)
        x, y, dx, dy = rng.normal(size=4)
        p = ss.ChartPoint(x, y)
        dz = np.array([0.0, complex(dx, dy)])
        worst = max(worst, _rel(ss.two_level_line_element(p, dx, dy, m),
                                metric_tensor(p.embed(), m.metric()).contract(dz)))
    return worst


def suite_isometry(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        eta = rnd.random_metric(rng, n)
        a, b, c = (rnd.complex_normal(rng, n) for _ in range(3))
        w = rng.uniform(0.5, 3.0)
        t = np.linspace(0.0, 1.0, 401)
        pts = a + np.outer(t, b) + np.outer(np.sin(w * t), c)
        tan = np.outer(np.ones_like(t), b) + np.outer(w * np.cos(w * t), c)
        traj = ev.curve_trajectory(t, pts, tan, eta)
        mirror = ev.mirror_trajectory(traj, tan)
        worst = max(worst, _rel(traj.path_length, mirror.path_length))
    return worst


def suite_evolution(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        h = rnd.random_pseudo_hermitian(rng, n)
        eta = ph.build_metric_operator(h)
        t1, t2 = rng.uniform(-3, 3, size=2)
        u1, u2 = ev.propagator(h, t1), ev.propagator(h, t2)
        worst = max(worst, np.linalg.norm(u1.matrix @ u2.matrix - ev.propagator(h, t1 + t2).matrix),
                    ev.check_pseudo_unitarity(u1, eta))
        psi = rnd.random_state(rng, n)
        t_end = 10 * 2 * np.pi / h.spread
        n0 = ph.physical_norm_sq(psi, eta)
        for t in np.linspace(0, t_end, 7):
            worst = max(worst, abs(ph.physical_norm_sq(ev.evolve_state(h, psi, t), eta) / n0 - 1))
    return worst


def suite_mirror(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        h = rnd.random_pseudo_hermitian(rng, n)
        eta = ph.build_metric_operator(h)
        herm = ph.Hamiltonian(ph.hermitian_counterpart(h, eta))
        psi = rnd.random_state(rng, n)
        t = rng.uniform(0, 5)
        a = ph.map_state(ev.evolve_state(h, psi, t), eta)
        b = ev.evolve_state(herm, ph.map_state(psi, eta), t)
        worst = max(worst, np.linalg.norm(a - b) / np.linalg.norm(a))
    return worst


def suite_universality(rng, cases, dim_max, **_):
    worst = 0.0
    for _ in range(cases):
        n = _dims(rng, dim_max)
        h = rnd.random_pseudo_hermitian(rng, n)
        eta = ph.build_metric_operator(h)
        psi = rnd.random_state(rng, n)
        tau0 = rng.uniform(0.2, 2.0)
        prob = br.BrachistochroneProblem.from_vectors(psi, ev.evolve_state(h, psi, tau0), eta, h.spread)
        tau = br.travel_time(h, eta, prob.initial, prob.final, 1.2 * tau0)
        bound = br.min_time_bound(prob)
        worst = max(worst, bound - tau)
        sol = br.optimal_hamiltonian(prob)
        worst = max(worst, abs(sol.travel_time - bound))
    return worst


SUITES = {
    "eig reconstruction": (suite_eig, 1e-9),
    "herm_sqrt": (suite_herm_sqrt, 1e-10),
    "expm group law": (suite_expm_group, 1e-10),
    "metric pseudo-Hermiticity": (suite_metric, 1e-9),
    "expectation equivalence": (suite_equivalence, 1e-9),
    "pseudo-adjoint algebra": (suite_sharp, 1e-12),
    "projection algebra": (suite_projection, 1e-11),
    "defining vs closed line element": (suite_defining_vs_closed, 1e-3),
    "closed line element vs tensor": (suite_closed_vs_tensor, 1e-10),
    "tensor vs two-level chart": (suite_tensor_vs_chart, 1e-12),
    "isometry of path lengths": (suite_isometry, 1e-8),
    "pseudo-unitary evolution": (suite_evolution, 1e-10),
    "mirror correspondence": (suite_mirror, 1e-10),
    "speed-limit universality": (suite_universality, 1e-8),
}


def _faulty_metric_tensor(z, eta):
    return ss.metric_tensor(z, eta, sign=-1.0)


def run_suites(seed: int = 0, cases: int = 20, dim_max: int = 6, *, inject_fault: bool = False) -> list[SuiteResult]:
    hooks = {"metric_tensor": _faulty_metric_tensor} if inject_fault else {}
    results = []
    for k, (name, (fn, limit)) in enumerate(SUITES.items()):
        rng = np.random.default_rng([seed, k])
        worst = float(fn(rng, cases, dim_max, **hooks)) if cases > 0 else 0.0
        results.append(SuiteResult(name, worst, limit, cases))
    return results
