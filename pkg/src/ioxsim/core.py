"""Effective two-mode non-Hermitian model.

A cavity photon (C) and an exciton-like emitter (X) decay into one common
photonic continuum.  After eliminating the continuum in the memoryless limit
the pair is governed by the 2x2 effective Hamiltonian

    H_k = [[z^C, g~], [g~, z^X]],      g~ = g_R - i sqrt(gamma_c gamma_x),

with complex poles z^C = eps_c(k) - i(gamma_c + gamma_nr_c) and
z^X = eps_x(k) - i(gamma_x + gamma_nr_x).  The shared environment makes the
off-diagonal coupling complex, which is what produces level attraction,
exceptional points and bound states in the continuum.

Units: hbar = 1 and the reference photon decay rate sets the energy scale.
Momenta are quoted in the dimensionless convention k = (true momentum) /
sqrt(2 m_C * reference rate), so the photon kinetic term is exactly k**2.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DegenerateModesError

# Relative tolerance used when matching the EP/BiC closed-form conditions.
CONDITION_RTOL = 1e-9

# Two branches count as coalesced when |omega_U - omega_L| = |sqrt(D)| falls
# below this times the local energy scale.
DEGENERACY_TOL = 1e-7


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the coupled photon-exciton pair.

    eps0        exciton transition energy (defaults deep into the regime
                where the memoryless elimination of the bath is valid)
    delta       photon-exciton detuning at k = 0
    g_rabi      coherent (Rabi) coupling
    mass_ratio  m_C/m_X; 0 means a flat exciton dispersion
    gamma_c     radiative photon decay into the common bath
    gamma_x     radiative exciton decay into the common bath
    gamma_nr_c  nonradiative photon loss (independent bath)
    gamma_nr_x  nonradiative exciton loss (independent bath)
    """

    eps0: float = 1000.0
    delta: float = 0.0
    g_rabi: float = 0.0
    mass_ratio: float = 0.0
    gamma_c: float = 1.0
    gamma_x: float = 0.0
    gamma_nr_c: float = 0.0
    gamma_nr_x: float = 0.0

    def __post_init__(self):
        if self.eps0 <= 0:
            raise ValueError("eps0 must be positive")
        if min(self.gamma_c, self.gamma_x, self.gamma_nr_c, self.gamma_nr_x) < 0:
            raise ValueError("decay rates must be non-negative")
        if self.g_rabi < 0:
            raise ValueError("g_rabi must be non-negative")
        if not 0.0 <= self.mass_ratio <= 1.0:
            raise ValueError("mass_ratio must lie in [0, 1]")

    @property
    def markov_advisory(self):
        """True when eps0 is not far above every rate; the memoryless
        (Markov) forms are then suspect."""
        rates = (self.gamma_c, self.gamma_x, self.gamma_nr_c,
                 self.gamma_nr_x, self.g_rabi)
        return self.eps0 < 100.0 * max(rates)

    @property
    def total_rate(self):
        return self.gamma_c + self.gamma_x + self.gamma_nr_c + self.gamma_nr_x


@dataclass(frozen=True)
class ComplexPole:
    """Complex diagonal poles and off-diagonal coupling of H_k."""

    z_c: complex
    z_x: complex
    g_tilde: complex


@dataclass(frozen=True, eq=False)
class ComplexBranch:
    """One complex eigenvalue of H_k with its normalized eigenvector.

    label is "L" (minus sign of the principal square root) or "U" (plus).
    degenerate marks a coalesced (exceptional) point, where both branches
    carry the same eigenvector.
    """

    omega: complex
    label: str
    eigvec: np.ndarray
    k: float
    degenerate: bool = False


@dataclass(frozen=True)
class Detunings:
    """Energy and linewidth detunings d_eps = Re(z_c - z_x),
    d_gamma = -Im(z_c - z_x)."""

    d_eps: float
    d_gamma: float


@dataclass(frozen=True)
class EpCondition:
    """One sign branch of the exceptional-point condition.

    sign +1 means d_eps = +2 sqrt(gamma_c gamma_x) with d_gamma = -2 g_rabi;
    sign -1 is the mirrored pair.  k_ep is the ring radius at which the
    kinetic detuning meets the target, or None if unreachable.
    """

    sign: int
    d_eps_ep: float
    k_ep: float | None


@dataclass(frozen=True)
class BicCondition:
    """Detuning at which the lower branch linewidth vanishes.

    exact is False when nonradiative losses spoil the exact cancellation;
    the formula value is still reported.
    """

    d_eps_bic: float
    k_bic: float | None
    exact: bool


def kinetic_energies(p, k):
    """Bare kinetic energies (eps_c, eps_x) at dimensionless momentum k.

    eps_c = eps0 + delta + k**2, eps_x = eps0 + mass_ratio * k**2.
    """
    k2 = np.asarray(k, dtype=float) ** 2
    eps_c = p.eps0 + p.delta + k2
    eps_x = p.eps0 + p.mass_ratio * k2
    if np.ndim(k) == 0:
        return float(eps_c), float(eps_x)
    return eps_c, eps_x


def complex_poles(p, k):
    """ComplexPole at momentum k; nonradiative rates enter the diagonals."""
    eps_c, eps_x = kinetic_energies(p, k)
    z_c = eps_c - 1j * (p.gamma_c + p.gamma_nr_c)
    z_x = eps_x - 1j * (p.gamma_x + p.gamma_nr_x)
    g_tilde = p.g_rabi - 1j * np.sqrt(p.gamma_c * p.gamma_x)
    return ComplexPole(z_c, z_x, g_tilde)


def effective_hamiltonian(p, k):
    """2x2 complex matrix H_k = [[z_c, g~], [g~, z_x]]."""
    pole = complex_poles(p, k)
    return np.array([[pole.z_c, pole.g_tilde],
                     [pole.g_tilde, pole.z_x]])


def principal_sqrt(d):
    """Principal square root: Re >= 0, and Im >= 0 on the Re = 0 cut."""
    d = np.asarray(d, dtype=complex)
    # strip negative-zero imaginary parts so negative reals map to +i side
    d = np.where(d.imag == 0.0, d.real + 0.0j, d)
    return np.sqrt(d)


def discriminant(p, k):
    """D = (z_c - z_x)**2 + 4 g~**2; branches coalesce where D = 0.

    Computed from the detunings, in which eps0 cancels algebraically;
    forming z_c - z_x from the full poles would lose ~7 digits to
    cancellation at eps0 = 1000 and blur exact EP/BiC points.
    """
    det = detunings(p, k)
    dz = det.d_eps - 1j * det.d_gamma
    g_tilde = p.g_rabi - 1j * np.sqrt(p.gamma_c * p.gamma_x)
    return dz * dz + 4.0 * g_tilde * g_tilde


def _branch_eigvec(pole, omega):
    """Normalized kernel vector of (omega*1 - H) with a fixed phase."""
    # Two algebraically equivalent kernel constructions; keep the one with
    # the larger norm for stability near decoupled limits.
    v1 = np.array([pole.g_tilde, omega - pole.z_c])
    v2 = np.array([omega - pole.z_x, pole.g_tilde])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    nrm = np.linalg.norm(v)
    if nrm < 1e-14 * max(1.0, abs(pole.z_c), abs(pole.z_x)):
        # fully degenerate (proportional to identity): any direction works
        v = np.array([1.0 + 0.0j, 0.0 + 0.0j])
        nrm = 1.0
    v = v / nrm
    return _fix_phase(v)


def _fix_phase(v):
    """Rotate the overall phase so the first nonzero component is real > 0."""
    for comp in v:
        if abs(comp) > 1e-12:
            return v * (comp.conjugate() / abs(comp))
    return v


def eigen_branches(p, k):
    """Both complex eigenvalue branches at momentum k.

    Returns (lower, upper) ComplexBranch with
    omega = (z_c + z_x -/+ sqrt(D)) / 2 on the principal square-root branch;
    "U" carries the plus sign.  At a coalescence (|sqrt(D)| below tolerance)
    both branches carry the single shared eigenvector and degenerate=True.
    """
    pole = complex_poles(p, k)
    det = detunings(p, k)
    dz = det.d_eps - 1j * det.d_gamma
    d = dz * dz + 4.0 * pole.g_tilde * pole.g_tilde
    sq = complex(principal_sqrt(d))
    half_sum = 0.5 * (pole.z_c + pole.z_x)
    omega_l = half_sum - 0.5 * sq
    omega_u = half_sum + 0.5 * sq
    scale = max(1.0, abs(dz), 2.0 * abs(pole.g_tilde))
    degenerate = abs(sq) <= DEGENERACY_TOL * scale
    if degenerate:
        vec = _branch_eigvec(pole, half_sum)
        vec_l = vec_u = vec
    else:
        vec_l = _branch_eigvec(pole, omega_l)
        vec_u = _branch_eigvec(pole, omega_u)
    kf = float(k)
    return (ComplexBranch(omega_l, "L", vec_l, kf, degenerate),
            ComplexBranch(omega_u, "U", vec_u, kf, degenerate))


def track_branches(p, kgrid):
    """Continuity-sorted branches along an increasing momentum grid.

    Returns two lists of ComplexBranch.  The first list starts on the "L"
    branch of the first grid point.  At each step the assignment maximizes
    eigenvector overlap with the previous point and falls back to
    closest-eigenvalue matching when the overlaps tie or the point is
    degenerate.  Output is deterministic.
    """
    kgrid = np.asarray(kgrid, dtype=float)
    if kgrid.ndim != 1 or kgrid.size == 0:
        raise ValueError("kgrid must be a nonempty 1-d array")
    if kgrid.size > 1 and np.any(np.diff(kgrid) <= 0):
        raise ValueError("kgrid must be strictly increasing")

    first = eigen_branches(p, kgrid[0])
    tracks = ([first[0]], [first[1]])
    for k in kgrid[1:]:
        new = eigen_branches(p, k)
        prev = (tracks[0][-1], tracks[1][-1])
        keep = (abs(np.vdot(prev[0].eigvec, new[0].eigvec)) ** 2
                + abs(np.vdot(prev[1].eigvec, new[1].eigvec)) ** 2)
        swap = (abs(np.vdot(prev[0].eigvec, new[1].eigvec)) ** 2
                + abs(np.vdot(prev[1].eigvec, new[0].eigvec)) ** 2)
        if new[0].degenerate or prev[0].degenerate or abs(keep - swap) < 1e-12:
            keep = -(abs(prev[0].omega - new[0].omega)
                     + abs(prev[1].omega - new[1].omega))
            swap = -(abs(prev[0].omega - new[1].omega)
                     + abs(prev[1].omega - new[0].omega))
        if keep >= swap:
            tracks[0].append(new[0])
            tracks[1].append(new[1])
        else:
            tracks[0].append(new[1])
            tracks[1].append(new[0])
    return tracks


def detunings(p, k):
    """Detunings at momentum k; nonradiative rates are included in d_gamma.

    d_eps is formed without eps0 (it cancels exactly), keeping EP/BiC
    condition checks at full precision.
    """
    d_eps = p.delta + (1.0 - p.mass_ratio) * float(k) ** 2
    d_gamma = (p.gamma_c + p.gamma_nr_c) - (p.gamma_x + p.gamma_nr_x)
    return Detunings(d_eps, d_gamma)


def _solve_ring_radius(p, target):
    """Momentum at which d_eps(k) = target, or None if unreachable.

    d_eps(k) = delta + (1 - mass_ratio) k**2 is monotone in k, so for
    mass_ratio = 0 the radius is sqrt(target - delta); otherwise the root is
    found by bisection.
    """
    d0 = detunings(p, 0.0).d_eps
    tol = CONDITION_RTOL * max(1.0, abs(target), abs(d0))
    if abs(d0 - target) <= tol:
        return 0.0
    if p.mass_ratio == 0.0:
        radicand = target - p.delta
        return float(np.sqrt(radicand)) if radicand >= 0 else None
    if p.mass_ratio == 1.0:
        return None  # d_eps is k-independent and did not match at k = 0
    if target < d0:
        return None
    f = lambda k: detunings(p, k).d_eps - target
    k_hi = 1.0
    while f(k_hi) < 0:
        k_hi *= 2.0
        if k_hi > 1e8:
            return None
    return float(bisect(f, 0.0, k_hi, xtol=1e-12))


def ep_conditions(p):
    """Sign branches of the exceptional-point condition satisfied by p.

    An EP requires d_gamma = -sign * 2 g_rabi together with
    d_eps = sign * 2 sqrt(gamma_c gamma_x).  d_gamma is momentum independent
    here (rates are k-independent), so each sign either holds for the whole
    parameter set or not at all; for matching signs the ring radius k_ep
    solving d_eps(k) = d_eps_ep is attached.  Returns a possibly empty list.
    """
    d_gamma = detunings(p, 0.0).d_gamma
    s = np.sqrt(p.gamma_c * p.gamma_x)
    out = []
    for sign in (+1, -1):
        required = -sign * 2.0 * p.g_rabi
        tol = CONDITION_RTOL * max(1.0, abs(d_gamma), 2.0 * p.g_rabi)
        if abs(d_gamma - required) <= tol:
            target = sign * 2.0 * s
            out.append(EpCondition(sign, target, _solve_ring_radius(p, target)))
            if p.g_rabi == 0.0 and s == 0.0:
                break  # both signs collapse onto the same condition
    return out


def bic_condition(p):
    """Detuning (and ring radius) of the undamped lower branch.

    d_eps_bic = g_rabi * d_gamma / sqrt(gamma_c gamma_x).  The linewidth
    cancellation is exact only for purely radiative losses; with
    nonradiative rates present the formula value is still returned with
    exact=False.
    """
    if p.gamma_c * p.gamma_x == 0.0:
        raise ValueError("BiC condition undefined: gamma_c * gamma_x = 0")
    d_gamma = detunings(p, 0.0).d_gamma
    d_eps_bic = p.g_rabi * d_gamma / np.sqrt(p.gamma_c * p.gamma_x)
    exact = p.gamma_nr_c == 0.0 and p.gamma_nr_x == 0.0
    return BicCondition(float(d_eps_bic), _solve_ring_radius(p, d_eps_bic), exact)
