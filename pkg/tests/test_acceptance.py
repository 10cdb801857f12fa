"""Acceptance criteria, each run at its stated tolerance.

Every test prints one ``ACCEPTANCE <n> PASS|FAIL`` line with the worst
measured residual, then asserts.  Run with ``pytest tests/test_acceptance.py -v``
(the lines are printed even under output capture).
"""

import json

import numpy as np
import pytest

from psh import brachistochrone as br
from psh import cli
from psh import evolution as ev
from psh import pseudoherm as ph
from psh import statespace as ss
from psh import testing as rnd

SEED = 8_675_309


def report(capsys, number, title, worst, limit, extra=""):
    ok = bool(worst < limit)
    with capsys.disabled():
        print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title:<38} "
              f"worst={worst:.3e} limit={limit:.0e} {extra}".rstrip())
    return ok


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture
def rng(request):
    return np.random.default_rng([SEED, int(request.node.name.split("_")[1])])


def _brach_run(tmp_path, params):
    out = tmp_path / "brach.json"
    code = cli.main(["brach", "--eta-params", params, "--gap", "1", "--hbar", "1",
                     "--samples", "500", "--seed", "0", "--out", str(out)])
    return code, json.loads(out.read_text())


def test_01_brachistochrone_bound(tmp_path, capsys):
    worst = 0.0
    violations = 0
    for params in ("1,0,0,1", "2,1,0.5,1.5"):
        code, doc = _brach_run(tmp_path, params)
        assert code == 0
        assert doc["sweep"]["samples"] == 500
        violations += doc["sweep"]["violations"]
        worst = max(worst, abs(doc["bound"] - np.pi), abs(doc["travel_time"] - doc["bound"]))
        assert doc["achieves_bound"] is True
    capsys.readouterr()
    ok = report(capsys, 1, "brachistochrone bound (cmd_brach)", worst, 1e-8,
                f"violations={violations}")
    assert ok and violations == 0


def test_02_universality(rng, capsys):
    worst_equal = 0.0
    worst_undercut = -np.inf
    problems = 0
    while problems < 200:
        n = int(rng.integers(2, 7))
        base = rnd.random_pseudo_hermitian(rng, n)
        gap = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
        h = ph.Hamiltonian(base.matrix * (gap / base.spread))
        eta = ph.build_metric_operator(h)
        psi = rnd.random_state(rng, n)
        tau0 = rng.uniform(0.2, 2.0) / gap
        prob = br.BrachistochroneProblem.from_vectors(psi, ev.evolve_state(h, psi, tau0), eta, gap)
        tau = br.travel_time(h, eta, prob.initial, prob.final, 1.2 * tau0)

        ident = ph.MetricOperator.identity(n)
        herm = ph.Hamiltonian(ph.hermitian_counterpart(h, eta))
        start = ss.project(ph.map_state(prob.initial.vector, eta), ident)
        end = ss.project(ph.map_state(prob.final.vector, eta), ident)
        tau_mirror = br.travel_time(herm, ident, start, end, 1.2 * tau0)

        worst_equal = max(worst_equal, abs(tau - tau_mirror) / tau)
        worst_undercut = max(worst_undercut, br.min_time_bound(prob) - tau)
        problems += 1
    ok1 = report(capsys, 2, "universality: (H,eta) vs (h,I) times", worst_equal, 1e-10,
                 f"problems={problems}")
    ok2 = report(capsys, 2, "universality: bound minus tau", max(worst_undercut, 0.0), 1e-8,
                 f"problems={problems}")
    assert ok1 and ok2


def test_03_isometry(rng, capsys):
    worst = 0.0
    curves = 0
    for _ in range(60):
        n = int(rng.integers(2, 7))
        h = rnd.random_pseudo_hermitian(rng, n)
        eta = ph.build_metric_operator(h)
        traj = ev.path_length(h, eta, rnd.random_state(rng, n), rng.uniform(0.5, 4.0), 400)
        worst = max(worst, rel(traj.path_length, ev.mirror_trajectory(traj).path_length))
        curves += 1
    for _ in range(60):
        n = int(rng.integers(2, 7))
        eta = rnd.random_metric(rng, n)
        a, b, c = (rnd.complex_normal(rng, n) for _ in range(3))
        w = rng.uniform(0.5, 3.0)
        t = np.linspace(0.0, 1.0, 401)
        pts = a + np.outer(t, b) + np.outer(np.sin(w * t), c)
        tan = np.outer(np.ones_like(t), b) + np.outer(w * np.cos(w * t), c)
        traj = ev.curve_trajectory(t, pts, tan, eta)
        worst = max(worst, rel(traj.path_length, ev.mirror_trajectory(traj, tan).path_length))
        curves += 1
    assert report(capsys, 3, "isometry of path lengths", worst, 1e-8, f"curves={curves}")


def test_04_metric_chain(rng, capsys):
    w54 = w43 = w85 = 0.0
    for _ in range(120):
        n = int(rng.integers(2, 7))
        eta = rnd.random_metric(rng, n)
        z, dz = rnd.random_state(rng, n), rnd.complex_normal(rng, n)
        w54 = max(w54, rel(ss.metric_tensor(z, eta).contract(dz), ss.line_element(z, dz, eta)))

        d = rnd.complex_normal(rng, n)
        d *= 1e-5 / np.linalg.norm(d)
        w43 = max(w43, rel(ss.line_element(z, d, eta), ss.line_element_from_projections(z, d, eta)))

        m = rnd.random_two_level_params(rng)
        x, y, dx, dy = rng.normal(size=4)
        p = ss.ChartPoint(x, y)
        w85 = max(w85, rel(ss.two_level_line_element(p, dx, dy, m),
                           ss.metric_tensor(p.embed(), m.metric()).contract([0.0, complex(dx, dy)])))
    oks = [
        report(capsys, 4, "tensor contraction vs closed form", w54, 1e-10, "instances=120"),
        report(capsys, 4, "closed form vs tr(dL# dL), step 1e-5", w43, 1e-3, "instances=120"),
        report(capsys, 4, "two-level chart vs tensor", w85, 1e-12, "instances=120"),
    ]
    assert all(oks)


def test_05_fubini_study(rng, capsys):
    flat = ss.TwoLevelMetricParams(1.0, 0.0, 0.0, 1.0)
    ident = ph.MetricOperator.identity(2)
    worst = 0.0
    for _ in range(100):
        x, y, dx, dy = rng.normal(size=4)
        expected = 2.0 * (dx**2 + dy**2) / (1.0 + x**2 + y**2) ** 2
        p = ss.ChartPoint(x, y)
        worst = max(worst, rel(ss.two_level_line_element(p, dx, dy, flat), expected),
                    rel(ss.line_element(p.embed(), [0.0, complex(dx, dy)], ident), expected))
    assert report(capsys, 5, "Fubini-Study reduction at eta = I", worst, 1e-13, "points=100")


def test_06_trace_identity(rng, capsys):
    worst = 0.0
    for _ in range(120):
        n = int(rng.integers(2, 9))
        eta = rnd.random_metric(rng, n)
        a = rnd.complex_normal(rng, n, n)
        seeds = [None] + [rnd.complex_normal(rng, n, n) for _ in range(2)]
        bases = [ss.eta_orthonormal_basis(eta, s) for s in seeds]
        assert min(np.linalg.norm(bases[i] - bases[j]) for i in range(3) for j in range(i)) > 1e-3
        tr = np.trace(a)
        for s in seeds:
            worst = max(worst, abs(ss.phys_trace(a, eta, s) - tr) / max(abs(tr), 1.0))
    assert report(capsys, 6, "trace identity over 3 bases", worst, 1e-12, "pairs=120")


def test_07_projection_algebra(rng, capsys):
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        eta = rnd.random_metric(rng, n)
        psi = rnd.random_state(rng, n)
        lam = ss.project(psi, eta).lam
        phi = rnd.random_state(rng, n)
        phi = phi - psi * (ph.physical_inner(psi, phi, eta) / ph.physical_inner(psi, psi, eta))
        worst = max(worst,
                    np.linalg.norm(lam @ lam - lam),
                    np.linalg.norm(ph.pseudo_adjoint(lam, eta) - lam),
                    np.linalg.norm(lam @ psi - psi) / np.linalg.norm(psi),
                    np.linalg.norm(lam @ phi) / np.linalg.norm(phi))
    ok1 = report(capsys, 7, "projection algebra residuals", worst, 1e-11, "instances=100")

    a, beta = 2.0, 1 + 1j
    m = ss.TwoLevelMetricParams(a, beta.real, beta.imag, 3.0)
    eta = m.metric()
    lam_i = ss.project([1, 0], eta).lam
    lam_f = ss.project(ss.antipodal_state([1, 0], m), eta).lam
    expected_i = np.array([[1, beta / a], [0, 0]])
    expected_f = np.array([[0, -beta / a], [0, 1]])
    entry = max(np.max(np.abs(lam_i - expected_i)), np.max(np.abs(lam_f - expected_f)))
    ok2 = report(capsys, 7, "explicit Lambda_I, Lambda_F entries", entry, 1e-13, "(a,beta)=(2,1+i)")
    assert ok1 and ok2


def test_08_pseudo_unitarity(rng, capsys):
    w_unit = w_norm = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        h = rnd.random_pseudo_hermitian(rng, n)
        eta = ph.build_metric_operator(h)
        psi = rnd.random_state(rng, n)
        n0 = ph.physical_norm_sq(psi, eta)
        for t in np.linspace(0.0, 10 * 2 * np.pi / h.spread, 11):
            w_unit = max(w_unit, ev.check_pseudo_unitarity(ev.propagator(h, t), eta))
            w_norm = max(w_norm, abs(ph.physical_norm_sq(ev.evolve_state(h, psi, t), eta) / n0 - 1.0))
    ok1 = report(capsys, 8, "U#U = I over 10 gap-periods", w_unit, 1e-10, "systems=100")
    ok2 = report(capsys, 8, "physical-norm drift", w_norm, 1e-10, "systems=100")
    assert ok1 and ok2


def test_09_sz_observability(capsys):
    positive = (0.5, 1.0, 2.0, 3.0, 4.0)
    signed = (-1.0, -0.5, 0.0, 0.5, 1.0)
    checked = mismatches = 0
    for a in positive:
        for b1 in signed:
            for b2 in signed:
                for c in positive:
                    if a * c - b1**2 - b2**2 <= 0:
                        continue
                    m = ss.TwoLevelMetricParams(a, b1, b2, c)
                    checked += 1
                    mismatches += br.s_z_observability_demo(m) != (b1 == 0 and b2 == 0)
    assert report(capsys, 9, "S_z observable iff b1 = b2 = 0", float(mismatches), 0.5,
                  f"grid points={checked}")


def test_10_antipodality_preserved(rng, capsys):
    worst = 0.0
    cons = br.admissible_metric_constraint([1, 0], [1 + 1j, -2])
    made = 0
    while made < 100:
        if made % 2:
            m = rnd.random_two_level_params(rng)
            psi_f = ss.antipodal_state([1, 0], m)
        else:
            vals = cons.nullspace @ rng.normal(size=cons.nullspace.shape[1])
            try:
                m = ss.TwoLevelMetricParams(*vals)
            except ValueError:
                continue
            assert cons.admits(m)
            psi_f = np.array([1 + 1j, -2])
        eta = m.metric()
        li = ss.isometry_map(ss.project([1, 0], eta))
        lf = ss.isometry_map(ss.project(psi_f, eta))
        worst = max(worst, np.linalg.norm(li @ lf), np.linalg.norm(lf @ li))
        made += 1
    assert report(capsys, 10, "antipodality preserved by the map", worst, 1e-12, "metrics=100")
