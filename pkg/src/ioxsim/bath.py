"""First-principles photonic environment layer.

The emitter and cavity mode exchange excitations with a continuum of
out-of-plane photon modes dispersing as omega = c*sqrt(k^2 + q^2) with
q >= 0 (one emitting mirror).  This module computes the environment
density of states, the time- and frequency-domain memory kernels
(including Cauchy principal values), the frequency-dependent response
matrix M(k, omega) and its Green's inverse, the Markov rates that the
memoryless theory uses, and an exact-diagonalization oracle built from a
discretized realization of the same bath.  The oracle is the ground
truth against which the closed-form memoryless results are validated:
in particular it demonstrates that a common environment generates an
off-diagonal dissipative coupling sqrt(gamma_c*gamma_x) between the two
modes, which independent baths cannot produce.

Work in units hbar = 1; energies are measured in units of a reference
rate, the same convention as the rest of the package.
"""

from dataclasses import dataclass

import numpy as np

from .core import SystemParams, kinetic_energies
from .errors import (
    EvanescentRegionError,
    KernelAccuracyError,
    RecurrenceLimitError,
    SingularMatrixError,
)

PV_GRID_POINTS = 4001
RECURRENCE_SAFETY = 0.5


@dataclass(frozen=True)
class BathSpec:
    """Flat-coupling photonic environment on a frequency window.

    kappa_c, kappa_x are the (real, non-negative) coupling amplitudes of
    the cavity mode and the emitter to each environment mode; the
    relative phase is zero because both sit at the same location.  The
    window restricts quadrature and discretization to omega in
    [omega_window[0], omega_window[1]]; coupling amplitudes roll off
    smoothly (half-cosine) over taper_frac of the window at each end to
    suppress hard-edge ringing.
    """

    kappa_c: float
    kappa_x: float
    omega_window: tuple
    c_light: float = 1.0
    taper_frac: float = 0.05

    def __post_init__(self):
        lo, hi = self.omega_window
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError("omega_window must be a finite increasing pair")
        if lo <= 0.0:
            raise ValueError("omega_window must be positive")
        if self.c_light <= 0.0:
            raise ValueError("c_light must be positive")
        if self.kappa_c < 0.0 or self.kappa_x < 0.0:
            raise ValueError("couplings must be non-negative")
        if not 0.0 <= self.taper_frac < 0.5:
            raise ValueError("taper_frac must lie in [0, 0.5)")

    def taper(self, omega):
        """Coupling-amplitude rolloff: 1 deep inside the window, 0 at its ends."""
        lo, hi = self.omega_window
        width = (hi - lo) * self.taper_frac
        omega = np.asarray(omega, dtype=float)
        if width == 0.0:
            return np.where((omega >= lo) & (omega <= hi), 1.0, 0.0)
        edge = np.minimum(omega - lo, hi - omega) / width
        return np.where(edge <= 0.0, 0.0,
                        np.where(edge >= 1.0, 1.0, np.sin(0.5 * np.pi * edge)))


def env_density_of_states(b, k, omega):
    """Density of environment modes rho_k(omega) = omega/(c sqrt(omega^2 - c^2 k^2)).

    Follows from inverting d(omega)/dq for the half-line dispersion
    omega = c sqrt(k^2 + q^2).  Only omega > c|k| is radiative; below the
    light cone there are no environment modes to emit into.
    """
    omega = np.asarray(omega, dtype=float)
    ck = b.c_light * abs(k)
    if np.any(omega <= ck):
        raise EvanescentRegionError(
            "no radiative environment modes at omega <= c|k| = %g" % ck)
    out = omega / (b.c_light * np.sqrt(omega * omega - ck * ck))
    return out if out.ndim else float(out)


def _coupling_matrix(b):
    kap = np.array([b.kappa_c, b.kappa_x])
    return np.outer(kap, kap)


def _spectral_weight(b, k, omega):
    """rho(omega) * taper(omega)^2 inside the window, 0 outside."""
    omega = np.asarray(omega, dtype=float)
    lo, hi = b.omega_window
    ck = b.c_light * abs(k)
    # endpoints count as inside so a hard (untapered) window is exactly
    # flat on quadrature grids
    inside = (omega >= lo) & (omega <= hi) & (omega > ck)
    out = np.zeros(omega.shape)
    if np.any(inside):
        out[inside] = (env_density_of_states(b, k, omega[inside])
                       * b.taper(omega[inside]) ** 2)
    return out


def _window_grid(b, k, npoints):
    lo, hi = b.omega_window
    ck = b.c_light * abs(k)
    if lo <= ck:
        raise EvanescentRegionError(
            "omega_window starts inside the evanescent zone (omega_min <= c|k|)")
    return np.linspace(lo, hi, npoints)


def kernel_time(b, k, tau, npoints=PV_GRID_POINTS):
    """Time-domain memory kernel Gamma(tau), a 2x2 matrix per time.

    Gamma^{AB}(tau) = theta(tau) * integral over the window of
    kappa^A kappa^B rho(omega) taper(omega)^2 exp(-i omega tau).
    Returns shape (2, 2) for scalar tau, (n, 2, 2) for an array; zero
    for tau < 0 by definition of the retarded kernel.
    """
    grid = _window_grid(b, k, npoints)
    weight = _spectral_weight(b, k, grid)
    kmat = _coupling_matrix(b)
    tau = np.asarray(tau, dtype=float)
    phases = np.exp(-1j * np.outer(tau.ravel(), grid))
    vals = np.trapezoid(phases * weight, grid, axis=-1)
    vals = np.where(tau.ravel() >= 0.0, vals, 0.0)
    out = vals.reshape(tau.shape + (1, 1)) * kmat
    return out if tau.ndim else out.reshape(2, 2)


def _pv_integral(grid, f, omega):
    """Cauchy principal value of f(x)/(omega - x) over the grid's span.

    Pole subtraction: the regular remainder (f(x) - f(omega))/(omega - x)
    is integrated by the trapezoid rule and the subtracted pole carries
    the analytic term f(omega) * log((omega - a)/(b - omega)).
    """
    a, b_end = grid[0], grid[-1]
    if not a < omega < b_end:
        return float(np.trapezoid(f / (omega - grid), grid))
    cell = grid[1] - grid[0]
    if min(omega - a, b_end - omega) <= cell:
        raise KernelAccuracyError(
            "principal-value pole within one grid cell of a window endpoint")
    f_at = np.interp(omega, grid, f)
    diff = omega - grid
    near = np.abs(diff) < 0.5 * cell
    regular = np.where(near, 0.0, (f - f_at) / np.where(near, 1.0, diff))
    if np.any(near):
        # limit of the subtracted integrand at the pole is -f'(omega)
        regular[near] = -np.gradient(f, grid)[near]
    return float(np.trapezoid(regular, grid) + f_at * np.log((omega - a) / (b_end - omega)))


def kernel_freq(b, k, omega, npoints=PV_GRID_POINTS):
    """Frequency-domain kernel Gamma~(omega), a 2x2 complex matrix per omega.

    Real part: pi * kappa^A kappa^B rho(omega) taper(omega)^2 on the
    radiative zone inside the window, zero elsewhere (no modes to emit
    into).  Imaginary part: principal-value integral of the spectral
    weight against 1/(omega - omega'), evaluated by pole subtraction.
    Raises KernelAccuracyError when the pole sits within one grid cell
    of a window endpoint, where the subtraction loses accuracy.
    """
    grid = _window_grid(b, k, npoints)
    weight = _spectral_weight(b, k, grid)
    kmat = _coupling_matrix(b)
    omega_arr = np.asarray(omega, dtype=float)
    out = np.empty(omega_arr.shape + (2, 2), dtype=complex)
    for idx, w in np.ndenumerate(omega_arr):
        re = np.pi * _spectral_weight(b, k, np.array([w]))[0]
        im = _pv_integral(grid, weight, float(w))
        out[idx] = (re + 1j * im) * kmat
    return out if omega_arr.ndim else out.reshape(2, 2)


@dataclass(frozen=True)
class MemoryKernel:
    """Frequency-sampled memory kernel: gamma_tilde[i] is the 2x2 matrix
    Gamma~(omega_grid[i])."""

    omega_grid: np.ndarray
    gamma_tilde: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.omega_grid, dtype=float)
        gam = np.asarray(self.gamma_tilde)
        if grid.ndim != 1 or gam.shape != grid.shape + (2, 2):
            raise ValueError("gamma_tilde must hold one 2x2 matrix per frequency")
        if np.any(gam[:, 0, 0].real < -1e-12) or np.any(gam[:, 1, 1].real < -1e-12):
            raise ValueError("diagonal damping must be non-negative")
        if not np.allclose(gam[:, 0, 1], gam[:, 1, 0], rtol=0.0, atol=1e-12):
            raise ValueError("kernel must be symmetric for real couplings")


def sample_kernel(b, k, omega_grid, npoints=PV_GRID_POINTS):
    """Evaluate kernel_freq on a grid and wrap it as a MemoryKernel."""
    omega_grid = np.asarray(omega_grid, dtype=float)
    return MemoryKernel(omega_grid, kernel_freq(b, k, omega_grid, npoints))


def markov_rates(b, omega0, k=0.0):
    """Golden-rule rates (gamma_c, gamma_x, cross) at carrier omega0.

    gamma^A = pi * rho(omega0) * (kappa^A * taper(omega0))^2; the cross
    rate equals sqrt(gamma_c * gamma_x) exactly for real couplings to a
    single shared environment.
    """
    w = np.pi * _spectral_weight(b, k, np.array([omega0]))[0]
    gc = w * b.kappa_c ** 2
    gx = w * b.kappa_x ** 2
    return gc, gx, w * b.kappa_c * b.kappa_x


def bath_for_rates(gamma_c, gamma_x, omega0, omega_window,
                   c_light=1.0, taper_frac=0.05):
    """Invert the golden rule: couplings that realize target rates at omega0."""
    if gamma_c < 0.0 or gamma_x < 0.0:
        raise ValueError("rates must be non-negative")
    probe = BathSpec(0.0, 0.0, omega_window, c_light, taper_frac)
    rho_t2 = _spectral_weight(probe, 0.0, np.array([omega0]))[0]
    if rho_t2 <= 0.0:
        raise ValueError("omega0 must sit inside the untapered window interior")
    scale = np.pi * rho_t2
    return BathSpec(np.sqrt(gamma_c / scale), np.sqrt(gamma_x / scale),
                    omega_window, c_light, taper_frac)


def _bare_hamiltonian(p, k):
    eps_c, eps_x = kinetic_energies(p, k)
    return np.array([[eps_c, p.g_rabi], [p.g_rabi, eps_x]])


def full_matrix(b, p, k, omega, npoints=PV_GRID_POINTS, memoryless=False):
    """Response matrix M(k, omega) = omega*1 - H_bare + i*Gamma~(omega).

    Damping comes entirely from the bath b; the rates stored in p are
    ignored here (p supplies the kinetic energies and Rabi coupling
    only).  With memoryless=True the kernel is frozen at its value on
    the carrier p.eps0 and the principal-value part is dropped, which
    reproduces the closed-form theory exactly.
    """
    if memoryless:
        gc, gx, cross = markov_rates(b, p.eps0, k=k)
        gam = np.array([[gc, cross], [cross, gx]], dtype=complex)
    else:
        gam = kernel_freq(b, k, omega, npoints)
    ident = np.eye(2)
    return omega * ident - _bare_hamiltonian(p, k) + 1j * gam


def full_matrix_lossy(b, p, k, omega, loss_c=None, loss_x=None,
                      npoints=PV_GRID_POINTS, memoryless=False):
    """M'(k, omega): adds private loss baths on the diagonal of M.

    loss_c and loss_x are BathSpec instances whose kappa_c quantifies
    the nonradiative coupling of the cavity mode and the emitter to
    their own independent environments; each contributes i*Gamma~ to
    its diagonal entry only.
    """
    m = full_matrix(b, p, k, omega, npoints, memoryless)
    for slot, loss in ((0, loss_c), (1, loss_x)):
        if loss is None:
            continue
        if memoryless:
            extra = markov_rates(loss, p.eps0, k=k)[0]
        else:
            extra = kernel_freq(loss, k, omega, npoints)[0, 0]
        m[slot, slot] += 1j * extra
    return m


def green_matrix(b, p, k, omega, npoints=PV_GRID_POINTS, memoryless=False):
    """System Green's matrix G = M^{-1} at real frequency omega."""
    m = full_matrix(b, p, k, omega, npoints, memoryless)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(1.0, abs(m[0, 0]) + abs(m[1, 1])) ** 2
    if abs(det) < 1e-14 * scale:
        raise SingularMatrixError("response matrix singular at omega = %g" % omega)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


@dataclass(frozen=True)
class DiscretizedBath:
    """Uniform-grid realization of a BathSpec with N discrete modes.

    Couplings g_j = kappa * taper(omega_j) * sqrt(rho(omega_j) * dw)
    make the Fermi-golden-rule decay rate of the discrete bath equal to
    the continuum rate by construction.
    """

    mode_freqs: np.ndarray
    coupling_c: np.ndarray
    coupling_x: np.ndarray

    @property
    def n_modes(self):
        return self.mode_freqs.size

    @property
    def spacing(self):
        return float(self.mode_freqs[1] - self.mode_freqs[0])


def discretize_bath(b, n_modes, k=0.0):
    """Midpoint discretization of the window into n_modes bath modes."""
    if n_modes < 2:
        raise ValueError("need at least two bath modes")
    lo, hi = b.omega_window
    dw = (hi - lo) / n_modes
    freqs = lo + (np.arange(n_modes) + 0.5) * dw
    root_weight = np.sqrt(_spectral_weight(b, k, freqs) * dw)
    return DiscretizedBath(freqs, b.kappa_c * root_weight, b.kappa_x * root_weight)


class BathOracle:
    """Exact single-excitation diagonalization of system + discretized bath.

    Builds the (N+2)-dimensional real symmetric matrix in the basis
    (cavity, emitter, bath modes), diagonalizes it once, and answers
    spectral and dynamical questions exactly (up to the discretization
    itself).  Everything the memoryless theory predicts — branch
    positions, linewidths, the off-diagonal dissipative coupling, the
    undamped-state plateau — must emerge here from first principles.
    """

    def __init__(self, d, p, k=0.0, min_modes=2000, window_margin=50.0):
        if d.n_modes < min_modes:
            raise ValueError(
                "oracle needs >= %d bath modes for converged rates" % min_modes)
        eps_c, eps_x = kinetic_energies(p, k)
        lo, hi = d.mode_freqs[0], d.mode_freqs[-1]
        margin = window_margin * max(p.total_rate, 1e-12)
        if min(eps_c, eps_x) - margin < lo or max(eps_c, eps_x) + margin > hi:
            raise ValueError("bath window too narrow around the system lines")
        self.params = p
        self.k = k
        self.bath = d
        n = d.n_modes
        h = np.zeros((n + 2, n + 2))
        h[0, 0], h[1, 1] = eps_c, eps_x
        h[0, 1] = h[1, 0] = p.g_rabi
        h[0, 2:] = h[2:, 0] = d.coupling_c
        h[1, 2:] = h[2:, 1] = d.coupling_x
        h[2:, 2:][np.diag_indices(n)] = d.mode_freqs
        self.energies, self.states = np.linalg.eigh(h)
        self._sys = self.states[:2, :]

    @property
    def recurrence_time(self):
        return 2.0 * np.pi / self.bath.spacing

    def default_eta(self):
        """Lorentzian broadening that washes out the discrete level comb."""
        return 10.0 * self.bath.spacing

    def spectrum(self, omega_grid, eta=None):
        """System-projected local density of states on omega_grid."""
        eta = self.default_eta() if eta is None else float(eta)
        if eta < 2.0 * self.bath.spacing:
            raise KernelAccuracyError(
                "broadening below twice the level spacing exposes the mode comb")
        omega_grid = np.asarray(omega_grid, dtype=float)
        weight = (self._sys ** 2).sum(axis=0)
        diff = omega_grid[:, None] - self.energies[None, :]
        lor = (eta / np.pi) / (diff * diff + eta * eta)
        return lor @ weight

    def dynamics(self, initial, t_grid, chunk=256):
        """Exact amplitudes (c(t), x(t)) from an initial system excitation."""
        t_grid = np.asarray(t_grid, dtype=float)
        if np.any(t_grid < 0.0):
            raise ValueError("times must be non-negative")
        if np.max(t_grid, initial=0.0) > RECURRENCE_SAFETY * self.recurrence_time:
            raise RecurrenceLimitError(
                "requested times exceed %.0f%% of the recurrence time %.3g"
                % (100 * RECURRENCE_SAFETY, self.recurrence_time))
        c0, x0 = initial
        coeff = self._sys[0] * c0 + self._sys[1] * x0  # V^T psi0, bath empty
        c_out = np.empty(t_grid.size, dtype=complex)
        x_out = np.empty(t_grid.size, dtype=complex)
        for start in range(0, t_grid.size, chunk):
            ts = t_grid[start:start + chunk]
            phases = np.exp(-1j * np.outer(ts, self.energies)) * coeff
            c_out[start:start + chunk] = phases @ self._sys[0]
            x_out[start:start + chunk] = phases @ self._sys[1]
        return c_out, x_out

    def green_system(self, omega_grid, eta=None):
        """Retarded 2x2 Green's matrix of the system block, eta-broadened."""
        eta = self.default_eta() if eta is None else float(eta)
        omega_grid = np.asarray(omega_grid, dtype=float)
        denom = 1.0 / (omega_grid[:, None] - self.energies[None, :] + 1j * eta)
        g = np.empty((omega_grid.size, 2, 2), dtype=complex)
        g[:, 0, 0] = denom @ (self._sys[0] * self._sys[0])
        g[:, 0, 1] = denom @ (self._sys[0] * self._sys[1])
        g[:, 1, 0] = g[:, 0, 1]
        g[:, 1, 1] = denom @ (self._sys[1] * self._sys[1])
        return g

    def effective_damping(self, omega_grid, eta=None):
        """Damping matrix the bath induces, extracted from the exact G.

        Inverts the system Green's matrix back to the M-form
        M = omega*1 - H_bare + i*Gamma~ and solves for Gamma~, removing
        the artificial eta broadening.  The off-diagonal entry is the
        dissipative coupling generated by the common environment.
        """
        eta = self.default_eta() if eta is None else float(eta)
        g = self.green_system(omega_grid, eta)
        omega_grid = np.asarray(omega_grid, dtype=float)
        det = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]
        if np.any(np.abs(det) == 0.0):
            raise SingularMatrixError("system Green's matrix singular")
        inv = np.empty_like(g)
        inv[:, 0, 0] = g[:, 1, 1] / det
        inv[:, 1, 1] = g[:, 0, 0] / det
        inv[:, 0, 1] = -g[:, 0, 1] / det
        inv[:, 1, 0] = -g[:, 1, 0] / det
        h_bare = _bare_hamiltonian(self.params, self.k)
        ident = np.eye(2)
        gam = -1j * (inv - omega_grid[:, None, None] * ident + h_bare)
        return gam - eta * ident


def oracle_spectrum(d, p, omega_grid, k=0.0, eta=None):
    """LDOS of the discretized-bath oracle (convenience wrapper)."""
    return BathOracle(d, p, k=k).spectrum(omega_grid, eta)


def oracle_dynamics(d, p, initial, t_grid, k=0.0):
    """Exact oracle amplitudes (convenience wrapper)."""
    return BathOracle(d, p, k=k).dynamics(initial, t_grid)
