"""Periodic chain of coupled oscillators as a discretized 1+1D field.

The chain Hamiltonian in dimensionless canonical pairs is

    H = (1/2) sum_n p_n^2 + (1/2 + eta) sum_n q_n^2 - eta sum_n q_n q_{n+1}

with periodic identification q_{N+1} = q_1 and coupling eta > 0.  Its normal
modes have frequencies omega_k = sqrt(1 + 2 eta (1 - cos(2 pi k / N))) for
k = 1 .. N (minimum 1 at k = N) and plane-wave profiles
f_k(n) = exp(2 pi i k n / N) / sqrt(N).

Sites are 1-based in every public interface.  The canonical vector follows
the package-wide interleaved ordering (q_1, p_1, ..., q_N, p_N), and the
mode matrix A collects the expansion of (q_n, p_n) over the ladder column
vector (a_1, a_1', ..., a_N, a_N').  Heisenberg evolution multiplies the
ladder operators by exp(+- i omega_k t), so a weighting row w transforms as
w(t)' = w' A diag(exp(i omega_k t), exp(-i omega_k t)) A^{-1}; the result is
real up to a numerical residue that is checked before truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IllConditionedError,
    InternalConsistencyError,
    InvalidDimensionError,
    NumericalFailureError,
    PreconditionError,
)
from .gaussian_cv import (
    GaussianState,
    ModePair,
    conjugate_qic_vector,
    mode_covariance_matrix,
    symplectic_form,
)
from .linalg import max_abs

INVERSION_GATE = 1e-8
IMAG_RESIDUE_TOL = 1e-9
EVOLVED_PAIRING_TOL = 1e-9
VACUUM_PURITY_TOL = 1e-8


@dataclass(frozen=True)
class LatticeConfig:
    """Chain size and coupling; N = 1 is the single-oscillator limit."""

    n_sites: int
    eta: float

    def __post_init__(self):
        if self.n_sites < 1:
            raise InvalidDimensionError(f"need at least one site, got {self.n_sites}")
        if not self.eta > 0.0:
            raise ValueError(f"coupling eta must be positive, got {self.eta}")


def dispersion(config: LatticeConfig) -> np.ndarray:
    """Mode frequencies omega_k, k = 1 .. N; omega_N = 1 is the minimum."""
    k = np.arange(1, config.n_sites + 1)
    return np.sqrt(1.0 + 2.0 * config.eta * (1.0 - np.cos(2.0 * np.pi * k / config.n_sites)))


@dataclass(frozen=True)
class ModeMatrix:
    """Ladder-to-canonical expansion A, its inverse, and the frequencies."""

    a: np.ndarray
    a_inv: np.ndarray
    omegas: np.ndarray

    @property
    def n_sites(self) -> int:
        return self.omegas.size


def mode_matrix(config: LatticeConfig) -> ModeMatrix:
    """Build A with rows (q_1, p_1, ...) and columns (a_1, a_1', ...).

    q_n = sum_k (f_k(n) a_k + f_k(n)* a_k') / sqrt(2 omega_k)
    p_n = -i sum_k sqrt(omega_k / 2) (f_k(n) a_k - f_k(n)* a_k')
    """
    n = config.n_sites
    omegas = dispersion(config)
    sites = np.arange(1, n + 1)
    modes = np.arange(1, n + 1)
    profiles = np.exp(2.0j * np.pi * np.outer(sites, modes) / n) / np.sqrt(n)
    a = np.zeros((2 * n, 2 * n), dtype=complex)
    q_scale = 1.0 / np.sqrt(2.0 * omegas)
    p_scale = np.sqrt(omegas / 2.0)
    a[0::2, 0::2] = profiles * q_scale
    a[0::2, 1::2] = profiles.conj() * q_scale
    a[1::2, 0::2] = -1.0j * profiles * p_scale
    a[1::2, 1::2] = 1.0j * profiles.conj() * p_scale
    a_inv = np.linalg.inv(a)
    residual = max_abs(a @ a_inv - np.eye(2 * n))
    if residual > INVERSION_GATE:
        raise IllConditionedError(
            f"mode matrix inversion residual {residual:.3e} exceeds {INVERSION_GATE}")
    return ModeMatrix(a=a, a_inv=a_inv, omegas=omegas)


def vacuum_covariance(config: LatticeConfig) -> GaussianState:
    """Ground-state moments: zero mean, circulant q-q and p-p blocks.

    <q_n q_m> = (1/2N) sum_k cos(2 pi k (n-m)/N) / omega_k
    <p_n p_m> = (1/2N) sum_k omega_k cos(2 pi k (n-m)/N)
    with vanishing symmetrized q-p correlations.
    """
    n = config.n_sites
    omegas = dispersion(config)
    seps = np.arange(n)
    cosines = np.cos(2.0 * np.pi * np.outer(seps, np.arange(1, n + 1)) / n)
    profile_q = cosines @ (1.0 / omegas) / (2.0 * n)
    profile_p = cosines @ omegas / (2.0 * n)
    idx = np.arange(n)
    # Indexing by the cyclic distance keeps the blocks exactly symmetric.
    dist = np.minimum((idx[:, None] - idx[None, :]) % n,
                      (idx[None, :] - idx[:, None]) % n)
    cov = np.zeros((2 * n, 2 * n))
    cov[0::2, 0::2] = profile_q[dist]
    cov[1::2, 1::2] = profile_p[dist]
    state = GaussianState(np.zeros(2 * n), cov)
    residual = state.purity_residual()
    if residual > VACUUM_PURITY_TOL:
        raise InternalConsistencyError(
            f"vacuum covariance purity residual {residual:.3e}")
    return state


# ---- Heisenberg evolution of weighting vectors ----


def evolve_vector(w: np.ndarray, t: float, mm: ModeMatrix) -> tuple:
    """Free evolution of one weighting row; returns (w(t), imaginary residue)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (2 * mm.n_sites,):
        raise ValueError("weighting vector length does not match the chain")
    if t == 0.0:
        return w.copy(), 0.0
    phases = np.empty(2 * mm.n_sites, dtype=complex)
    phases[0::2] = np.exp(1.0j * mm.omegas * t)
    phases[1::2] = np.exp(-1.0j * mm.omegas * t)
    row = ((w @ mm.a) * phases) @ mm.a_inv
    return row.real, max_abs(row.imag)


@dataclass(frozen=True)
class EvolvedPair:
    """A capsule pair's weighting vectors after free evolution for time t."""

    t: float
    v_t: np.ndarray
    u_t: np.ndarray
    imag_residue: float


def evolve_pair(pair: ModePair, t: float, mm: ModeMatrix) -> EvolvedPair:
    """Evolve both members of a capsule pair, with residue and pairing gates."""
    if pair.n_modes != mm.n_sites:
        raise ValueError("pair and chain have different sizes")
    v_t, res_v = evolve_vector(pair.v, t, mm)
    u_t, res_u = evolve_vector(pair.u, t, mm)
    residue = max(res_v, res_u)
    if residue >= IMAG_RESIDUE_TOL:
        raise NumericalFailureError(
            f"imaginary evolution residue {residue:.3e} at t = {t}")
    pairing = v_t @ symplectic_form(mm.n_sites) @ u_t
    if abs(pairing - 1.0) > EVOLVED_PAIRING_TOL:
        raise InternalConsistencyError(
            f"evolved pair lost canonicality: v(t)'Omega u(t) = {pairing!r}")
    return EvolvedPair(t=float(t), v_t=v_t, u_t=u_t, imag_residue=residue)


# ---- The delocalization experiment ----


@dataclass(frozen=True)
class SiteProfiles:
    """Site-resolved weighting profiles of the evolved capsule pair at one time."""

    t: float
    v_q: np.ndarray
    v_p: np.ndarray
    u_q: np.ndarray
    u_p: np.ndarray
    pairing: float
    det_m: float
    imag_residue: float

    def support(self, threshold: float = 1e-3) -> int:
        """Number of sites where the partner weighting exceeds the threshold."""
        weight = np.maximum(np.abs(self.u_q), np.abs(self.u_p))
        return int(np.sum(weight > threshold))


def figure_experiment(config: LatticeConfig, write_site: int, times) -> list:
    """Track the capsule pair of a single-site q write through free evolution.

    The write targets q at write_site (1-based) in the chain vacuum.  For
    each requested time the evolved weighting profiles are returned together
    with the canonical pairing, the mode determinant against the stationary
    vacuum, and the truncation residue.
    """
    if not 1 <= write_site <= config.n_sites:
        raise PreconditionError(
            f"write site {write_site} outside 1..{config.n_sites}")
    state = vacuum_covariance(config)
    mm = mode_matrix(config)
    v = np.zeros(2 * config.n_sites)
    v[2 * (write_site - 1)] = 1.0
    pair = conjugate_qic_vector(v, state)
    omega = symplectic_form(config.n_sites)
    profiles = []
    for t in times:
        ep = evolve_pair(pair, float(t), mm)
        m = mode_covariance_matrix(ep.v_t, ep.u_t, state.covariance)
        profiles.append(SiteProfiles(
            t=ep.t,
            v_q=ep.v_t[0::2], v_p=ep.v_t[1::2],
            u_q=ep.u_t[0::2], u_p=ep.u_t[1::2],
            pairing=float(ep.v_t @ omega @ ep.u_t),
            det_m=float(np.linalg.det(m)),
            imag_residue=ep.imag_residue))
    return profiles
