"""Gaussian states, conjugate mode construction, entropy, and serialization."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qicsim import gaussian_cv as g
from qicsim.errors import (
    DegenerateVarianceError,
    ImpureStateError,
    PreconditionError,
    StateFileError,
    UnphysicalModeError,
    UnphysicalStateError,
)

IDENTITY_TOL = 1e-12
PURITY_TOL = 1e-8
DET_TOL = 1e-9

# Mode entanglement entropy at g = 1 (mode determinant 1/2), evaluated to 30
# significant digits with mpmath: 0.553303299720515717370808039043.
ENTROPY_AT_G1 = 0.5533032997205157


def standard_entropy(det_m):
    """Independent oracle: entropy from the symplectic eigenvalue nu."""
    nu = math.sqrt(det_m)
    if nu - 0.5 < 1e-12:
        return 0.0
    return (nu + 0.5) * math.log(nu + 0.5) - (nu - 0.5) * math.log(nu - 0.5)


# ---- symplectic form and state factories ----


def test_symplectic_form_structure():
    om = g.symplectic_form(3)
    assert om.shape == (6, 6)
    np.testing.assert_allclose(om, -om.T, atol=IDENTITY_TOL)
    np.testing.assert_allclose(om @ om, -np.eye(6), atol=IDENTITY_TOL)
    np.testing.assert_allclose(om[:2, :2], [[0, 1], [-1, 0]], atol=IDENTITY_TOL)


def test_vacuum_state():
    state = g.vacuum_state(2)
    np.testing.assert_allclose(state.covariance, np.eye(4) / 2, atol=IDENTITY_TOL)
    np.testing.assert_allclose(state.mean, np.zeros(4), atol=IDENTITY_TOL)
    assert state.purity_residual() < PURITY_TOL


def test_single_mode_squeezed():
    r = 0.7
    state = g.single_mode_squeezed(r)
    expected = np.diag([np.exp(2 * r), np.exp(-2 * r)]) / 2
    np.testing.assert_allclose(state.covariance, expected, atol=IDENTITY_TOL)
    assert state.purity_residual() < PURITY_TOL


def test_two_mode_squeezed_is_pure():
    state = g.two_mode_squeezed(0.9)
    assert state.n_modes == 2
    assert state.purity_residual() < PURITY_TOL
    # reduced single-mode covariance is thermal with variance cosh(2r)/2
    assert abs(state.covariance[0, 0] - np.cosh(1.8) / 2) < 1e-12


def test_random_pure_states_satisfy_purity_relation():
    rng = np.random.default_rng(41)
    for _ in range(25):
        n = int(rng.integers(1, 9))
        state = g.random_pure_state(n, rng)
        assert state.purity_residual() < PURITY_TOL


def test_state_validation_rejects_asymmetry():
    cov = np.eye(2) / 2
    cov[0, 1] = 1e-3
    with pytest.raises(UnphysicalStateError):
        g.GaussianState(np.zeros(2), cov)


def test_state_validation_rejects_uncertainty_violation():
    with pytest.raises(UnphysicalStateError):
        g.GaussianState(np.zeros(2), 0.1 * np.eye(2))


def test_require_pure_rejects_thermal():
    thermal = g.GaussianState(np.zeros(2), 0.8 * np.eye(2))
    with pytest.raises(ImpureStateError) as exc:
        g.require_pure(thermal)
    assert "residual" in str(exc.value)


# ---- conjugate mode construction ----


def test_conjugate_vacuum_gives_momentum():
    state = g.vacuum_state(1)
    pair = g.conjugate_qic_vector(np.array([1.0, 0.0]), state)
    np.testing.assert_allclose(pair.v, [1, 0], atol=IDENTITY_TOL)
    np.testing.assert_allclose(pair.u, [0, 1], atol=IDENTITY_TOL)
    assert pair.q_offset == 0.0 and pair.p_offset == 0.0


@pytest.mark.parametrize("r", [0.3, 1.1, 2.0])
def test_conjugate_squeezed_still_momentum(r):
    # u = (0, 1) regardless of squeezing: Omega M v has no q component and
    # the 1/(v^T M v) factor cancels the p variance.
    state = g.single_mode_squeezed(r)
    pair = g.conjugate_qic_vector(np.array([1.0, 0.0]), state)
    np.testing.assert_allclose(pair.u, [0, 1], atol=1e-12)
    mode = g.mode_covariance(pair, state)
    assert abs(mode.det - 0.25) < DET_TOL


def test_conjugate_two_mode_squeezed_spreads():
    state = g.two_mode_squeezed(0.8)
    pair = g.conjugate_qic_vector(np.array([1.0, 0.0, 0.0, 0.0]), state)
    # conjugate weighting reaches the second mode
    assert np.max(np.abs(pair.u[2:])) > 1e-4
    mode = g.mode_covariance(pair, state)
    assert abs(mode.det - 0.25) < 1e-10


def test_conjugate_matches_closed_form():
    rng = np.random.default_rng(42)
    for _ in range(10):
        n = int(rng.integers(1, 6))
        state = g.random_pure_state(n, rng)
        v = rng.standard_normal(2 * n)
        pair = g.conjugate_qic_vector(v, state)
        m = state.covariance
        om = g.symplectic_form(n)
        expected_u = -(om @ m @ v) / float(v @ m @ v)
        np.testing.assert_allclose(pair.u, expected_u, atol=1e-12)
        assert abs(pair.q_offset - v @ state.mean) < 1e-12
        assert abs(pair.p_offset - pair.u @ state.mean) < 1e-12


def test_conjugate_identities_random_states():
    rng = np.random.default_rng(43)
    for _ in range(30):
        n = int(rng.integers(1, 9))
        state = g.random_pure_state(n, rng)
        v = rng.standard_normal(2 * n)
        pair = g.conjugate_qic_vector(v, state)
        m = state.covariance
        om = g.symplectic_form(n)
        assert abs(pair.v @ om @ pair.u - 1.0) < 1e-8
        assert abs(pair.v @ m @ pair.u) < 1e-8
        assert abs(g.mode_covariance(pair, state).det - 0.25) < 1e-8


def test_conjugate_is_unique_minimizer():
    rng = np.random.default_rng(44)
    state = g.random_pure_state(3, rng)
    v = rng.standard_normal(6)
    pair = g.conjugate_qic_vector(v, state)
    m = state.covariance
    om = g.symplectic_form(3)
    # admissible perturbations keep both constraints and must increase det m
    basis = np.linalg.qr(np.column_stack([om.T @ v, m @ v]))[0]
    for _ in range(20):
        delta = rng.standard_normal(6)
        delta -= basis @ (basis.T @ delta)
        if np.linalg.norm(delta) < 1e-9:
            continue
        delta /= np.linalg.norm(delta)
        u_pert = pair.u + 0.05 * delta
        var_q = float(v @ m @ v)
        var_p = float(u_pert @ m @ u_pert)
        cross = float(v @ m @ u_pert)
        det_pert = var_q * var_p - cross * cross
        assert det_pert > 0.25 + 1e-12


def test_conjugate_rejects_degenerate_direction():
    with pytest.raises(DegenerateVarianceError):
        g.conjugate_qic_vector(np.zeros(2), g.vacuum_state(1))


def test_conjugate_rejects_impure_state():
    thermal = g.GaussianState(np.zeros(2), 0.8 * np.eye(2))
    with pytest.raises(ImpureStateError):
        g.conjugate_qic_vector(np.array([1.0, 0.0]), thermal)


def test_mode_pair_validates_pairing():
    with pytest.raises(ValueError):
        g.ModePair(np.array([1.0, 0.0]), np.array([1.0, 0.0]), 0.0, 0.0)


# ---- mode covariance and entropy ----


def test_mode_covariance_vacuum():
    state = g.vacuum_state(1)
    pair = g.conjugate_qic_vector(np.array([1.0, 0.0]), state)
    mode = g.mode_covariance(pair, state)
    np.testing.assert_allclose(mode.matrix, np.eye(2) / 2, atol=IDENTITY_TOL)


def test_mode_covariance_off_diagonal_vanishes():
    rng = np.random.default_rng(45)
    state = g.random_pure_state(4, rng)
    pair = g.conjugate_qic_vector(rng.standard_normal(8), state)
    mode = g.mode_covariance(pair, state)
    assert abs(mode.matrix[0, 1]) < 1e-10
    assert abs(mode.matrix[0, 1] - mode.matrix[1, 0]) < 1e-15


def test_mode_covariance_uncertainty_bound():
    # a non-conjugate u still yields det m >= 1/4 on a pure state
    rng = np.random.default_rng(46)
    state = g.random_pure_state(4, rng)
    om = g.symplectic_form(4)
    for _ in range(10):
        v = rng.standard_normal(8)
        u = rng.standard_normal(8)
        pairing = float(v @ om @ u)
        if abs(pairing) < 1e-6:
            continue
        u /= pairing
        pair = g.ModePair(v, u, 0.0, 0.0)
        mode = g.mode_covariance(pair, state)
        assert mode.det >= 0.25 - 1e-10


def test_mode_covariance_rejects_unphysical():
    with pytest.raises(UnphysicalModeError):
        g.ModeCovariance(np.diag([0.3, 0.3]))


def test_entropy_zero_for_pure_mode():
    assert g.mode_entropy(g.ModeCovariance(np.eye(2) / 2)) == 0.0


def test_entropy_at_g1_matches_high_precision_value():
    mode = g.ModeCovariance(np.diag([np.sqrt(2) / 2, np.sqrt(2) / 2]))
    assert abs(mode.det - 0.5) < 1e-15
    assert abs(g.mode_entropy(mode) - ENTROPY_AT_G1) < 1e-10
    # and the closed form evaluated directly
    closed = math.sqrt(2) * math.log(1 + math.sqrt(2)) + math.log(0.5)
    assert abs(g.mode_entropy(mode) - closed) < 1e-12


def test_entropy_matches_symplectic_eigenvalue_form():
    # dual route: the g-form must agree with the standard nu-form
    for det in (0.2500001, 0.26, 0.5, 1.0, 4.0, 25.0):
        mode = g.ModeCovariance(np.diag([math.sqrt(det), math.sqrt(det)]))
        assert abs(g.mode_entropy(mode) - standard_entropy(det)) < 1e-10


def test_entropy_monotone_in_det():
    dets = 0.25 * (1.0 + np.logspace(-9, 2, 120))
    values = [g.mode_entropy(g.ModeCovariance(np.diag([math.sqrt(d)] * 2)))
              for d in dets]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[0] < 1e-4   # S -> 0 as det m -> 1/4
    assert values[-1] > 1.0


def test_entropy_qic_mode_is_zero():
    rng = np.random.default_rng(47)
    state = g.random_pure_state(5, rng)
    pair = g.conjugate_qic_vector(rng.standard_normal(10), state)
    assert g.mode_entropy(g.mode_covariance(pair, state)) < 1e-7


# ---- shift writes ----


def test_shift_write_theta_zero():
    state = g.vacuum_state(2)
    out = g.apply_shift_write(state, np.array([1.0, 0, 0, 0]), 0.0)
    np.testing.assert_allclose(out.mean, state.mean, atol=0)
    np.testing.assert_allclose(out.covariance, state.covariance, atol=0)


def test_shift_write_vacuum_displacement():
    state = g.vacuum_state(1)
    out = g.apply_shift_write(state, np.array([1.0, 0.0]), 1.0)
    np.testing.assert_allclose(out.mean, [0.0, -1.0], atol=IDENTITY_TOL)


def test_shift_write_preserves_covariance_exactly():
    rng = np.random.default_rng(48)
    state = g.random_pure_state(3, rng)
    out = g.apply_shift_write(state, rng.standard_normal(6), 0.83)
    assert np.array_equal(out.covariance, state.covariance)


def test_shift_write_moves_conjugate_offset_linearly():
    rng = np.random.default_rng(49)
    state = g.random_pure_state(2, rng)
    v = rng.standard_normal(4)
    pair = g.conjugate_qic_vector(v, state)
    theta = 0.61
    written = g.apply_shift_write(state, v, theta)
    om = g.symplectic_form(2)
    # Q offset is invariant (v^T Omega v = 0); P offset shifts by -theta
    assert abs(float(v @ written.mean) - pair.q_offset) < 1e-12
    expected_p = pair.p_offset + theta * float(pair.u @ om @ v)
    assert abs(float(pair.u @ written.mean) - expected_p) < 1e-12
    assert abs(float(pair.u @ om @ v) + 1.0) < 1e-10


# ---- multi-parameter writes ----


def test_multiparam_two_mode_vacuum():
    state = g.vacuum_state(2)
    report = g.multiparam_conditions(
        [np.array([1.0, 0, 0, 0]), np.array([0, 0, 1.0, 0])], state)
    assert report.commuting and report.independent
    assert report.pairing_ok
    np.testing.assert_allclose(report.pairings, np.eye(2), atol=1e-9)


def test_multiparam_single_mode_clash():
    state = g.vacuum_state(1)
    report = g.multiparam_conditions(
        [np.array([1.0, 0.0]), np.array([0.0, 1.0])], state)
    assert not report.commuting
    assert abs(report.omega_products[0, 1] - 1.0) < 1e-12


def test_multiparam_two_mode_squeezed_not_independent():
    state = g.two_mode_squeezed(0.8)
    report = g.multiparam_conditions(
        [np.array([1.0, 0, 0, 0]), np.array([0, 0, 1.0, 0])], state)
    assert report.commuting
    assert not report.independent
    # q-q cross covariance is sinh(2r)*cosh(2r) scaled; just nonzero
    assert abs(report.covariance_products[0, 1]) > 1e-3


def test_multiparam_requires_two_vectors():
    with pytest.raises(PreconditionError):
        g.multiparam_conditions([np.array([1.0, 0.0])], g.vacuum_state(1))


def test_shift_fisher_vacuum_value():
    state = g.vacuum_state(2)
    f = g.shift_fisher_matrix(
        [np.array([1.0, 0, 0, 0]), np.array([0, 0, 1.0, 0])], state)
    np.testing.assert_allclose(f, 2.0 * np.eye(2), atol=1e-12)


def test_shift_fisher_scales_quadratically():
    state = g.vacuum_state(2)
    v1 = np.array([1.0, 0, 0, 0])
    v2 = np.array([0, 0, 1.0, 0])
    base = g.shift_fisher_matrix([v1, v2], state)
    scaled = g.shift_fisher_matrix([3.0 * v1, v2], state)
    assert abs(scaled[0, 0] - 9.0 * base[0, 0]) < 1e-10
    assert abs(scaled[1, 1] - base[1, 1]) < 1e-12


def test_shift_fisher_single_vector_is_variance():
    rng = np.random.default_rng(50)
    state = g.random_pure_state(2, rng)
    v = rng.standard_normal(4)
    f = g.shift_fisher_matrix([v], state)
    assert f.shape == (1, 1)
    assert abs(f[0, 0] - 4.0 * float(v @ state.covariance @ v)) < 1e-12


def test_shift_fisher_rejects_unmet_conditions():
    state = g.vacuum_state(1)
    with pytest.raises(PreconditionError):
        g.shift_fisher_matrix(
            [np.array([1.0, 0.0]), np.array([0.0, 1.0])], state)


def test_shift_fisher_invariant_under_shifts():
    rng = np.random.default_rng(51)
    state = g.vacuum_state(2)
    vs = [np.array([1.0, 0, 0, 0]), np.array([0, 0, 1.0, 0])]
    before = g.shift_fisher_matrix(vs, state)
    shifted = g.apply_shift_write(state, rng.standard_normal(4), 1.7)
    after = g.shift_fisher_matrix(vs, shifted)
    assert np.array_equal(before, after)


def test_invariance_drift_report():
    state = g.vacuum_state(2)
    v1 = np.array([1.0, 0, 0, 0])
    v2 = np.array([0, 0, 1.0, 0])
    pair = g.conjugate_qic_vector(v1, state)
    drift = g.qic_invariance_under_other_writes(pair, v2, 1.9, state)
    assert drift.q_drift < 1e-10 and drift.p_drift < 1e-10
    # writing along v1 itself drifts P by exactly theta
    drift_self = g.qic_invariance_under_other_writes(pair, v1, 1.9, state)
    assert drift_self.q_drift < 1e-12
    assert abs(drift_self.p_drift - 1.9) < 1e-12
    none = g.qic_invariance_under_other_writes(pair, v2, 0.0, state)
    assert none.q_drift == 0.0 and none.p_drift == 0.0


# ---- CV swap descriptor ----


def test_cv_swap_vacuum_descriptor():
    state = g.vacuum_state(1)
    pair = g.conjugate_qic_vector(np.array([1.0, 0.0]), state)
    coupling = g.cv_swap_generator(pair)
    np.testing.assert_allclose(coupling.pair.v, [1, 0], atol=IDENTITY_TOL)
    np.testing.assert_allclose(coupling.pair.u, [0, 1], atol=IDENTITY_TOL)
    assert coupling.strength == np.pi / 2


def test_cv_swap_descriptor_round_trips():
    rng = np.random.default_rng(52)
    state = g.random_pure_state(3, rng)
    pair = g.conjugate_qic_vector(rng.standard_normal(6), state)
    coupling = g.cv_swap_generator(pair)
    back = g.SwapCoupling.from_text(coupling.to_text())
    assert np.array_equal(back.pair.v, coupling.pair.v)
    assert np.array_equal(back.pair.u, coupling.pair.u)
    assert back.strength == coupling.strength


def test_cv_swap_squeezed_descriptor():
    state = g.single_mode_squeezed(1.3)
    pair = g.conjugate_qic_vector(np.array([1.0, 0.0]), state)
    coupling = g.cv_swap_generator(pair)
    np.testing.assert_allclose(coupling.pair.u, [0, 1], atol=1e-12)


# ---- serialization ----


def test_state_file_round_trip_exact(tmp_path):
    rng = np.random.default_rng(53)
    state = g.random_pure_state(4, rng, mean_scale=2.0)
    path = tmp_path / "state.txt"
    g.write_state_file(path, state)
    back = g.read_state_file(path)
    assert np.array_equal(back.mean, state.mean)
    assert np.array_equal(back.covariance, state.covariance)


def test_pair_file_round_trip_exact(tmp_path):
    rng = np.random.default_rng(54)
    state = g.random_pure_state(2, rng)
    pair = g.conjugate_qic_vector(rng.standard_normal(4), state)
    path = tmp_path / "pair.txt"
    g.write_pair_file(path, pair)
    back = g.read_pair_file(path)
    assert np.array_equal(back.v, pair.v)
    assert np.array_equal(back.u, pair.u)
    assert back.q_offset == pair.q_offset and back.p_offset == pair.p_offset


@pytest.mark.parametrize("content,lineno", [
    ("nonsense N=2\nmean: 0,0,0,0\n", 1),
    ("gaussian N=x\nmean: 0,0\n", 1),
    ("gaussian N=1\nmean 0,0\n0.5,0\n0,0.5\n", 2),
    ("gaussian N=1\nmean: 0,0\n0.5,zz\n0,0.5\n", 3),
    ("gaussian N=1\nmean: 0,0\n0.5,0\n", 4),
    ("gaussian N=1\nmean: 0,0,0\n0.5,0\n0,0.5\n", 2),
])
def test_state_file_parse_errors_carry_line_numbers(tmp_path, content, lineno):
    path = tmp_path / "bad.txt"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(StateFileError) as exc:
        g.read_state_file(path)
    assert exc.value.lineno == lineno


@settings(max_examples=80, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_decimal_round_trip_is_exact(x):
    assert float(format(x, ".17g")) == x
