"""Harmonic chain: dispersion, mode matrix, vacuum state, and evolution."""

import math

import numpy as np
import pytest

from qicsim import gaussian_cv, lattice_field as lf
from qicsim.errors import (
    InvalidDimensionError,
    NumericalFailureError,
    PreconditionError,
)
from qicsim.linalg import max_abs

N_SITES = 30
ETA = 0.4
WRITE_SITE = 15

# omega at the written site for the figure parameters: sqrt(1 + 2*0.4*(1-cos(pi)))
OMEGA_15 = math.sqrt(2.6)


def reference_mode_matrix(config):
    """Element-by-element four-case table (independent oracle)."""
    n = config.n_sites
    omegas = lf.dispersion(config)
    a = np.zeros((2 * n, 2 * n), dtype=complex)
    for row in range(1, 2 * n + 1):          # 1-based indices
        site = (row + 1) // 2 if row % 2 == 1 else row // 2
        for col in range(1, 2 * n + 1):
            creation = col % 2 == 0
            k = col // 2 if creation else (col + 1) // 2
            f = np.exp(2j * np.pi * k * site / n) / np.sqrt(n)
            if creation:
                f = np.conj(f)
            w = omegas[k - 1]
            if row % 2 == 1:                 # q row
                a[row - 1, col - 1] = f / np.sqrt(2 * w)
            else:                            # p row
                scale = np.sqrt(w / 2) / 1j
                a[row - 1, col - 1] = (-scale if creation else scale) * f
    return a


# ---- dispersion ----


def test_dispersion_minimum_at_k_equals_n():
    w = lf.dispersion(lf.LatticeConfig(12, 0.7))
    assert abs(w[-1] - 1.0) < 1e-15
    assert w.min() >= 1.0 - 1e-15


def test_dispersion_written_site_value():
    w = lf.dispersion(lf.LatticeConfig(N_SITES, ETA))
    assert abs(w[WRITE_SITE - 1] - OMEGA_15) < 1e-12


def test_dispersion_reflection_symmetry():
    w = lf.dispersion(lf.LatticeConfig(17, 1.3))
    for k in range(1, 17):
        assert abs(w[k - 1] - w[17 - k - 1]) < 1e-12


def test_config_validation():
    with pytest.raises(InvalidDimensionError):
        lf.LatticeConfig(0, 0.4)
    with pytest.raises(ValueError):
        lf.LatticeConfig(10, 0.0)
    with pytest.raises(ValueError):
        lf.LatticeConfig(10, -1.0)


# ---- mode matrix ----


def test_mode_matrix_matches_reference_table():
    config = lf.LatticeConfig(6, 0.9)
    mm = lf.mode_matrix(config)
    assert max_abs(mm.a - reference_mode_matrix(config)) < 1e-13


def test_mode_matrix_inverse_quality():
    mm = lf.mode_matrix(lf.LatticeConfig(N_SITES, ETA))
    assert max_abs(mm.a @ mm.a_inv - np.eye(2 * N_SITES)) < 1e-10


def test_mode_matrix_single_site():
    # one site: a single unit-frequency oscillator, q = (a + a^dag)/sqrt(2)
    mm = lf.mode_matrix(lf.LatticeConfig(1, 0.5))
    assert abs(mm.omegas[0] - 1.0) < 1e-15
    expected = np.array([[1, 1], [-1j, 1j]]) / np.sqrt(2)
    assert max_abs(mm.a - expected) < 1e-13


def test_mode_matrix_maps_conjugate_ladder_to_real():
    rng = np.random.default_rng(61)
    config = lf.LatticeConfig(9, 0.4)
    mm = lf.mode_matrix(config)
    coeffs = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    ladder = np.empty(18, dtype=complex)
    ladder[0::2] = coeffs
    ladder[1::2] = coeffs.conj()
    assert max_abs((mm.a @ ladder).imag) < 1e-10


# ---- vacuum state ----


def test_vacuum_single_site_is_unit_oscillator():
    state = lf.vacuum_covariance(lf.LatticeConfig(1, 2.2))
    np.testing.assert_allclose(state.covariance, np.eye(2) / 2, atol=1e-14)


def test_vacuum_purity_relation_at_figure_size():
    state = lf.vacuum_covariance(lf.LatticeConfig(N_SITES, ETA))
    m = state.covariance
    om = gaussian_cv.symplectic_form(N_SITES)
    assert max_abs(m @ om @ m - om / 4) < 1e-9


def test_vacuum_decouples_as_eta_vanishes():
    state = lf.vacuum_covariance(lf.LatticeConfig(8, 1e-9))
    assert max_abs(state.covariance - np.eye(16) / 2) < 1e-8


def test_vacuum_matches_mode_matrix_route():
    # dual route: cosine-kernel assembly vs A (ladder vacuum moments) A^T
    config = lf.LatticeConfig(7, 0.6)
    state = lf.vacuum_covariance(config)
    mm = lf.mode_matrix(config)
    n = config.n_sites
    ladder_moments = np.zeros((2 * n, 2 * n), dtype=complex)
    for k in range(n):
        ladder_moments[2 * k, 2 * k + 1] = 1.0   # <a_k a_k^dag> = 1 in vacuum
    direct = mm.a @ ladder_moments @ mm.a.T
    direct = (direct + direct.T) / 2
    assert max_abs(direct.imag) < 1e-12
    assert max_abs(state.covariance - direct.real) < 1e-10


def test_vacuum_q_correlations_decay_with_distance():
    state = lf.vacuum_covariance(lf.LatticeConfig(N_SITES, ETA))
    qq = state.covariance[0::2, 0::2]
    # nearest-neighbour correlation exceeds the maximal-distance one
    assert abs(qq[0, 1]) > abs(qq[0, 15])


# ---- evolution ----


def _figure_pair():
    config = lf.LatticeConfig(N_SITES, ETA)
    state = lf.vacuum_covariance(config)
    v = np.zeros(2 * N_SITES)
    v[2 * (WRITE_SITE - 1)] = 1.0
    pair = gaussian_cv.conjugate_qic_vector(v, state)
    return config, state, pair


def test_evolve_time_zero_is_identity():
    config, _, pair = _figure_pair()
    mm = lf.mode_matrix(config)
    evolved = lf.evolve_pair(pair, 0.0, mm)
    assert np.array_equal(evolved.v_t, pair.v)
    assert np.array_equal(evolved.u_t, pair.u)
    assert evolved.imag_residue == 0.0


def test_evolve_preserves_symplectic_pairing():
    config, _, pair = _figure_pair()
    mm = lf.mode_matrix(config)
    om = gaussian_cv.symplectic_form(N_SITES)
    for t in (1.0, 5.0, 25.0, 50.0):
        evolved = lf.evolve_pair(pair, t, mm)
        assert abs(evolved.v_t @ om @ evolved.u_t - 1.0) < 1e-9
        assert evolved.imag_residue < 1e-9


def test_evolve_round_trip():
    config, _, pair = _figure_pair()
    mm = lf.mode_matrix(config)
    forward = lf.evolve_pair(pair, 17.0, mm)
    back = lf.evolve_pair(
        gaussian_cv.ModePair(forward.v_t, forward.u_t,
                             pair.q_offset, pair.p_offset), -17.0, mm)
    assert max_abs(back.v_t - pair.v) < 1e-9
    assert max_abs(back.u_t - pair.u) < 1e-9


def test_evolved_mode_determinant_is_stationary():
    config, state, pair = _figure_pair()
    mm = lf.mode_matrix(config)
    m = state.covariance
    for t in (1.0, 5.0, 25.0, 50.0):
        ev = lf.evolve_pair(pair, t, mm)
        var_q = float(ev.v_t @ m @ ev.v_t)
        var_p = float(ev.u_t @ m @ ev.u_t)
        cross = float(ev.v_t @ m @ ev.u_t)
        assert abs(var_q * var_p - cross * cross - 0.25) < 1e-8


def test_evolution_preserves_symplectic_products():
    rng = np.random.default_rng(62)
    config = lf.LatticeConfig(14, 0.8)
    mm = lf.mode_matrix(config)
    om = gaussian_cv.symplectic_form(14)
    v1 = rng.standard_normal(28)
    v2 = rng.standard_normal(28)
    before = float(v1 @ om @ v2)
    t = 9.0
    v1_t, res1 = lf.evolve_vector(v1, t, mm)
    v2_t, res2 = lf.evolve_vector(v2, t, mm)
    assert max(res1, res2) < 1e-9
    assert abs(float(v1_t @ om @ v2_t) - before) < 1e-9


def test_evolve_detects_corrupted_matrix():
    # A lopsided single-entry bump breaks the conjugate-column symmetry,
    # so the evolved row picks up a genuinely imaginary part.
    config, _, pair = _figure_pair()
    mm = lf.mode_matrix(config)
    bad_inv = mm.a_inv.copy()
    bad_inv[0, 0] += 0.05
    broken = lf.ModeMatrix(mm.a, bad_inv, mm.omegas)
    with pytest.raises(NumericalFailureError):
        lf.evolve_pair(pair, 3.0, broken)


# ---- figure experiment ----


def test_figure_profiles_time_zero():
    config = lf.LatticeConfig(N_SITES, ETA)
    prof = lf.figure_experiment(config, WRITE_SITE, [0.0])[0]
    expected_v_q = np.zeros(N_SITES)
    expected_v_q[WRITE_SITE - 1] = 1.0
    np.testing.assert_allclose(prof.v_q, expected_v_q, atol=0)
    np.testing.assert_allclose(prof.v_p, np.zeros(N_SITES), atol=0)
    # the conjugate weighting is nonlocal already at t = 0
    off_site = np.delete(np.abs(prof.u_p), WRITE_SITE - 1)
    assert off_site.max() > 1e-4
    np.testing.assert_allclose(prof.u_q, np.zeros(N_SITES), atol=1e-12)


def test_figure_support_spreads():
    config = lf.LatticeConfig(N_SITES, ETA)
    profiles = lf.figure_experiment(config, WRITE_SITE, [0.0, 25.0, 50.0])
    supports = [p.support() for p in profiles]
    assert supports[0] < supports[1] <= supports[2]
    assert supports[0] < supports[2]


def test_figure_invariants_reported():
    config = lf.LatticeConfig(N_SITES, ETA)
    for prof in lf.figure_experiment(config, WRITE_SITE, [0.0, 25.0, 50.0]):
        assert abs(prof.pairing - 1.0) < 1e-9
        assert abs(prof.det_m - 0.25) < 1e-8
        assert prof.imag_residue < 1e-9


def test_figure_translation_covariance():
    config = lf.LatticeConfig(N_SITES, ETA)
    t = 25.0
    base = lf.figure_experiment(config, 5, [t])[0]
    shifted = lf.figure_experiment(config, 9, [t])[0]
    for name in ("v_q", "v_p", "u_q", "u_p"):
        rolled = np.roll(getattr(base, name), 4)
        assert max_abs(getattr(shifted, name) - rolled) < 1e-10


def test_figure_rejects_out_of_range_site():
    config = lf.LatticeConfig(N_SITES, ETA)
    with pytest.raises(PreconditionError):
        lf.figure_experiment(config, 0, [0.0])
    with pytest.raises(PreconditionError):
        lf.figure_experiment(config, 31, [0.0])
