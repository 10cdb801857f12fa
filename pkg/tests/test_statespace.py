import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from psh import pseudoherm as ph
from psh import statespace as ss
from psh import testing as rnd
from psh.errors import MetricMismatch, ZeroState

from conftest import cnormal

PI_OVER_SQRT2 = 2.221441469079183
QUARTER_TURN = 1.1107207345395915  # sqrt(2) * pi / 4


def segment_length(psi1, psi2, eta, phase):
    """Length of the straight segment (1-s) psi1 + s e^{i phase} psi2 in the eta line element."""
    target = np.exp(1j * phase) * psi2
    tangent = target - psi1

    def speed(s):
        return np.sqrt(ss.line_element((1 - s) * psi1 + s * target, tangent, eta))

    return quad(speed, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def shortest_segment(psi1, psi2, eta):
    """Infimum over segment phases; such segments include the great circle."""
    step = 2 * np.pi / 24
    phases = step * np.arange(24)
    lengths = [segment_length(psi1, psi2, eta, p) for p in phases]
    k = int(np.argmin(lengths))
    res = minimize_scalar(lambda p: segment_length(psi1, psi2, eta, p),
                          bounds=(phases[k] - step, phases[k] + step),
                          method="bounded", options={"xatol": 1e-10})
    return min(res.fun, lengths[k])


def test_oracle_constants():
    assert PI_OVER_SQRT2 == pytest.approx(np.pi / np.sqrt(2), abs=1e-15)
    ident = ph.MetricOperator.identity(2)
    assert segment_length(np.array([1, 0j]), np.array([0, 1j]), ident, 0.3) == pytest.approx(PI_OVER_SQRT2, abs=1e-10)
    assert shortest_segment(np.array([1, 0j]), np.array([1, 1j]) / np.sqrt(2), ident) == pytest.approx(QUARTER_TURN, abs=1e-8)


def test_project_examples():
    st_ = ss.project([1, 0], ph.MetricOperator.identity(2))
    np.testing.assert_array_equal(st_.lam, [[1, 0], [0, 0]])
    m = ss.TwoLevelMetricParams(2.0, 1.0, 1.0, 3.0)
    beta, a = m.beta, m.a
    lam_i = ss.project([1, 0], m.metric()).lam
    np.testing.assert_allclose(lam_i, [[1, beta / a], [0, 0]], atol=1e-13)
    for nu in (1.0, -2.5 + 0.3j):
        lam_f = ss.project(nu * np.array([beta, -a]), m.metric()).lam
        np.testing.assert_allclose(lam_f, [[0, -beta / a], [0, 1]], atol=1e-13)
    with pytest.raises(ZeroState):
        ss.project([0, 0], m.metric())


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 7))
def test_projection_algebra(seed, dim):
    rng = np.random.default_rng(seed)
    eta = rnd.random_metric(rng, dim)
    psi = cnormal(rng, dim)
    s = ss.project(psi, eta)
    assert max(s.residuals().values()) < 1e-11
    assert np.linalg.norm(s.lam @ psi - psi) < 1e-11 * np.linalg.norm(psi)
    phi = cnormal(rng, dim)
    phi = phi - psi * ph.physical_inner(psi, phi, eta) / ph.physical_inner(psi, psi, eta)
    assert np.linalg.norm(s.lam @ phi) < 1e-11 * np.linalg.norm(phi)
    c = complex(*rng.normal(size=2))
    assert np.max(np.abs(ss.project(c * psi, eta).lam - s.lam)) < 1e-12


def test_op_inner(rng):
    a, b = cnormal(rng, 3, 3), cnormal(rng, 3, 3)
    assert ss.op_inner(a, b, ph.MetricOperator.identity(3)) == pytest.approx(np.sum(np.conj(a) * b))
    eta = rnd.random_metric(rng, 3)
    basis = ss.eta_orthonormal_basis(eta)
    lams = [ss.project(basis[:, k], eta).lam for k in range(3)]
    gram = np.array([[ss.op_inner(x, y, eta) for y in lams] for x in lams])
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)
    val = ss.op_inner(a, a, eta)
    assert abs(val.imag) < 1e-12 * abs(val) and val.real > 0


def test_phys_trace_examples(rng):
    eta = rnd.random_metric(rng, 4)
    assert ss.phys_trace(np.eye(4), eta) == pytest.approx(4.0, abs=1e-12)
    assert ss.phys_trace(ss.project(cnormal(rng, 4), eta).lam, eta) == pytest.approx(1.0, abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 8))
def test_phys_trace_basis_independent(seed, dim):
    rng = np.random.default_rng(seed)
    eta = rnd.random_metric(rng, dim)
    a = cnormal(rng, dim, dim)
    for start in (None, cnormal(rng, dim, dim), cnormal(rng, dim, dim + 2)):
        assert abs(ss.phys_trace(a, eta, start) - np.trace(a)) < 1e-12 * max(1.0, np.linalg.norm(a)) * 10


def test_line_element_examples(rng):
    eta = rnd.random_metric(rng, 3)
    psi = cnormal(rng, 3)
    assert ss.line_element(psi, psi, eta) < 1e-14
    assert ss.line_element(psi, (0.3 - 2j) * psi, eta) < 1e-13
    eps = 1e-3
    assert ss.line_element([1, 0], [0, eps], ph.MetricOperator.identity(2)) == pytest.approx(2 * eps**2, rel=1e-14)
    with pytest.raises(ZeroState):
        ss.line_element([0, 0, 0], psi, eta)


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 6))
def test_line_element_matches_projection_differences(seed, dim):
    rng = np.random.default_rng(seed)
    eta = rnd.random_metric(rng, dim)
    psi = cnormal(rng, dim)
    d = cnormal(rng, dim)
    d *= 1e-5 / np.linalg.norm(d)
    # oracle: tr(dL^# dL) from raw projections, computed here without the library
    def lam(v):
        return np.outer(v, np.conj(v) @ eta.eta) / np.real(np.conj(v) @ eta.eta @ v)
    dl = lam(psi + d) - lam(psi)
    oracle = np.trace(np.linalg.inv(eta.eta) @ dl.conj().T @ eta.eta @ dl).real
    val = ss.line_element(psi, d, eta)
    assert abs(val - oracle) / val < 1e-3
    assert abs(ss.line_element_from_projections(psi, d, eta) - oracle) < 1e-9 * oracle


def test_metric_tensor_examples(rng):
    g = ss.metric_tensor([1, 0], ph.MetricOperator.identity(2))
    dzeta = 0.3 - 0.4j
    assert g.contract([0, dzeta]) == pytest.approx(2 * abs(dzeta) ** 2, rel=1e-14)
    eta = rnd.random_metric(rng, 4)
    z = cnormal(rng, 4)
    gz = ss.metric_tensor(z, eta)
    assert abs(gz.contract((1.5 + 2j) * z)) < 1e-13
    np.testing.assert_allclose(gz.components, gz.components.T.conj(), atol=1e-13)


def brute_force_tensor(z, eta):
    """Component-by-component quadruple sum, straight from the index formula."""
    n = len(z)
    e = eta.eta
    norm = sum(e[m, k] * np.conj(z[m]) * z[k] for m in range(n) for k in range(n))
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            g[i, j] = 2 * sum((e[p, q] * e[j, i] - e[p, i] * e[j, q]) * np.conj(z[p]) * z[q]
                              for p in range(n) for q in range(n)) / norm**2
    return g


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 5))
def test_metric_tensor_against_index_formula_and_line_element(seed, dim):
    rng = np.random.default_rng(seed)
    eta = rnd.random_metric(rng, dim)
    z, dz = cnormal(rng, dim), cnormal(rng, dim)
    g = ss.metric_tensor(z, eta)
    np.testing.assert_allclose(g.components, brute_force_tensor(z, eta), atol=1e-12)
    le = ss.line_element(z, dz, eta)
    assert abs(g.contract(dz) - le) < 1e-10 * le


@given(seed=st.integers(0, 2**32 - 1))
def test_metric_tensor_positive_off_ray(seed):
    rng = np.random.default_rng(seed)
    eta = rnd.random_metric(rng, 3)
    z = cnormal(rng, 3)
    dz = cnormal(rng, 3)
    # keep only the eta-orthogonal part
    dz = dz - z * ph.physical_inner(z, dz, eta) / ph.physical_inner(z, z, eta)
    assert ss.metric_tensor(z, eta).contract(dz) > 0
    w, _ = np.linalg.eigh(ss.metric_tensor(z, eta).components)
    assert np.sum(np.abs(w) < 1e-12 * np.max(w)) == 1


def test_two_level_line_element_examples():
    m = ss.TwoLevelMetricParams(1.0, 0.0, 0.0, 1.0)
    assert ss.two_level_line_element(ss.ChartPoint(0, 0), 0.2, 0.5, m) == pytest.approx(2 * (0.04 + 0.25))
    m = ss.TwoLevelMetricParams(2.0, 1.0, 1.0, 3.0)
    assert m.d == 4.0
    assert np.linalg.det(m.matrix()).real == pytest.approx(4.0)
    with pytest.raises(ValueError):
        ss.TwoLevelMetricParams(1.0, 1.0, 1.0, 1.0)


@given(seed=st.integers(0, 2**32 - 1))
def test_two_level_matches_general_tensor(seed):
    rng = np.random.default_rng(seed)
    m = rnd.random_two_level_params(rng)
    x, y, dx, dy = rng.normal(size=4)
    p = ss.ChartPoint(x, y)
    chart = ss.two_level_line_element(p, dx, dy, m)
    general = ss.metric_tensor(p.embed(), m.metric()).contract([0, complex(dx, dy)])
    assert abs(chart - general) < 1e-12 * general


def test_isometry_map(rng):
    ident = ph.MetricOperator.identity(3)
    s = ss.project(cnormal(rng, 3), ident)
    np.testing.assert_array_equal(ss.isometry_map(s), s.lam)
    m = ss.TwoLevelMetricParams(2.0, 1.0, 1.0, 3.0)
    eta = m.metric()
    li = ss.project([1, 0], eta)
    lf = ss.project(ss.antipodal_state([1, 0], m), eta)
    pi_ = ss.isometry_map(li)
    assert np.linalg.norm(pi_ - pi_.conj().T) < 1e-11
    assert np.linalg.norm(pi_ @ pi_ - pi_) < 1e-11
    assert abs(np.trace(pi_) - 1) < 1e-12
    assert np.linalg.norm(pi_ @ ss.isometry_map(lf)) < 1e-12
    v = ph.map_state([1, 0], eta)
    np.testing.assert_allclose(pi_, np.outer(v, v.conj()) / np.vdot(v, v), atol=1e-12)


def test_geodesic_distance_examples(rng):
    ident = ph.MetricOperator.identity(2)
    s1 = ss.project([1, 0], ident)
    assert ss.geodesic_distance(s1, s1) == 0.0
    s2 = ss.project(np.array([1, 1]) / np.sqrt(2), ident)
    assert ss.geodesic_distance(s1, s2) == pytest.approx(QUARTER_TURN, abs=1e-14)
    m = ss.TwoLevelMetricParams(2.0, 1.0, 1.0, 3.0)
    eta = m.metric()
    a, b = ss.project([1, 0], eta), ss.project(ss.antipodal_state([1, 0], m), eta)
    assert ss.geodesic_distance(a, b) == pytest.approx(PI_OVER_SQRT2, abs=1e-14)
    assert ss.geodesic_distance(a, b) == pytest.approx(shortest_segment(a.vector, b.vector, eta), abs=1e-6)
    with pytest.raises(MetricMismatch):
        ss.geodesic_distance(a, ss.project([1, 0], ident))


@given(seed=st.integers(0, 2**32 - 1))
def test_geodesic_distance_is_shortest_segment(seed):
    rng = np.random.default_rng(seed)
    eta = rnd.random_two_level_params(rng).metric()
    psi1, psi2 = cnormal(rng, 2), cnormal(rng, 2)
    d = ss.geodesic_distance(ss.project(psi1, eta), ss.project(psi2, eta))
    assert d == pytest.approx(shortest_segment(psi1, psi2, eta), abs=1e-6)
    assert d == pytest.approx(ss.geodesic_distance(ss.project(psi2, eta), ss.project(psi1, eta)), abs=1e-15)


def test_is_antipodal(rng):
    m = ss.TwoLevelMetricParams(2.0, 1.0, 1.0, 3.0)
    eta = m.metric()
    li, lf = ss.project([1, 0], eta), ss.project(ss.antipodal_state([1, 0], m), eta)
    assert ss.is_antipodal(li, lf)
    assert not ss.is_antipodal(li, li)
    other = ss.project(cnormal(rng, 2), eta)
    assert abs(ph.physical_inner(li.vector, other.vector, eta)) > 0
    assert not ss.is_antipodal(li, other)


def test_antipodal_state_examples(rng):
    out = ss.antipodal_state([1, 0], ss.TwoLevelMetricParams(1, 0, 0, 1))
    np.testing.assert_array_equal(out, [0, -1])
    out = ss.antipodal_state([1, 0], ss.TwoLevelMetricParams(2, 1, 1, 3))
    np.testing.assert_array_equal(out, [1 + 1j, -2])
    for _ in range(20):
        m = rnd.random_two_level_params(rng)
        psi = cnormal(rng, 2)
        f = ss.antipodal_state(psi, m)
        assert abs(np.vdot(f, m.matrix() @ psi)) < 1e-13 * max(1.0, np.linalg.norm(f) * np.linalg.norm(psi))


def test_chart_point_roundtrip():
    p = ss.ChartPoint.from_vector([2.0, 1 - 3j])
    assert p.zeta == pytest.approx(0.5 - 1.5j)
    with pytest.raises(ValueError):
        ss.ChartPoint.from_vector([0, 1])


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 6))
def test_line_element_equals_literal_closed_form(seed, dim):
    rng = np.random.default_rng(seed)
    eta = rnd.random_metric(rng, dim)
    psi, d = cnormal(rng, dim), cnormal(rng, dim)
    e = eta.eta
    nn = np.vdot(psi, e @ psi).real
    literal = 2 * (nn * np.vdot(d, e @ d).real - abs(np.vdot(psi, e @ d)) ** 2) / nn**2
    assert ss.line_element(psi, d, eta) == pytest.approx(literal, rel=1e-11)
