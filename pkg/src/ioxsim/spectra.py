"""Spectral observables of the memoryless model.

Power spectrum (emission into the common environment for a given input
occupation), single-bath scattering amplitude, the 3x3 scattering matrix
with two extra nonradiative baths, and reflection/absorption spectra.

Density-of-states ratios of the auxiliary baths are absorbed into the rate
parameters, so only decay rates appear in this API; with that convention
the single-bath amplitude is exactly unimodular and R + A = 1.
"""

from dataclasses import dataclass

import numpy as np

from .core import complex_poles, eigen_branches
from .errors import DivergentPointError, SingularMatrixError

# an omega closer than this (times local scale) to an undamped pole is
# reported as divergent rather than as a huge float
POLE_TOL = 1e-12

_KINDS = ("power", "reflection", "absorption")


class InputOccupation:
    """Input photon distribution n(omega), dimensionless and >= 0.

    Wraps a nonnegative constant, a callable omega -> n, or a tabulated
    (omega_points, values) pair interpolated linearly.
    """

    def __init__(self, n_of_omega=1.0):
        if callable(n_of_omega):
            self._fn = n_of_omega
        elif np.ndim(n_of_omega) == 0:
            const = float(n_of_omega)
            if const < 0:
                raise ValueError("occupation must be non-negative")
            self._fn = lambda omega: np.full_like(
                np.asarray(omega, dtype=float), const)
        else:
            pts, vals = (np.asarray(a, dtype=float) for a in n_of_omega)
            if pts.ndim != 1 or pts.shape != vals.shape:
                raise ValueError("tabulated occupation needs matching 1-d arrays")
            if np.any(np.diff(pts) <= 0):
                raise ValueError("tabulated omega points must increase")
            self._fn = lambda omega: np.interp(omega, pts, vals)

    def __call__(self, omega):
        n = np.asarray(self._fn(np.asarray(omega, dtype=float)), dtype=float)
        if np.any(n < 0):
            raise ValueError("occupation evaluated negative")
        return n if n.ndim else float(n)


def as_occupation(n):
    """Pass an InputOccupation through; wrap anything else."""
    return n if isinstance(n, InputOccupation) else InputOccupation(1.0 if n is None else n)


@dataclass(frozen=True)
class SpectrumGrid:
    """A spectrum sampled on a (k, omega) grid.

    kind is one of "power", "reflection", "absorption".  divergent marks
    grid points sitting exactly on an undamped pole (intensity NaN there).
    """

    k_values: np.ndarray
    omega_values: np.ndarray
    intensity: np.ndarray
    kind: str
    divergent: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "k_values", np.asarray(self.k_values, float))
        object.__setattr__(self, "omega_values",
                           np.asarray(self.omega_values, float))
        object.__setattr__(self, "intensity", np.asarray(self.intensity, float))
        if self.kind not in _KINDS:
            raise ValueError("kind must be one of %s" % (_KINDS,))
        for ax in (self.k_values, self.omega_values):
            if ax.ndim != 1 or ax.size == 0:
                raise ValueError("grid axes must be nonempty 1-d arrays")
            if ax.size > 1 and np.any(np.diff(ax) <= 0):
                raise ValueError("grid axes must be strictly increasing")
        if self.intensity.shape != (self.k_values.size, self.omega_values.size):
            raise ValueError("intensity shape does not match the axes")
        finite = self.intensity[np.isfinite(self.intensity)]
        if self.kind == "power":
            if np.any(finite < -1e-12):
                raise ValueError("power spectrum must be non-negative")
        else:
            if np.any(finite < -1e-9) or np.any(finite > 1 + 1e-9):
                raise ValueError("%s values must lie in [0, 1]" % self.kind)


def _resolvent(p, k, omega):
    """Cofactor inverse of M = omega*1 - H_k, vectorized over omega.

    Returns (g11, g22, g12, det, pole).  Off-diagonals of G are equal by
    symmetry of M.
    """
    pole = complex_poles(p, k)
    omega = np.asarray(omega, dtype=complex)
    a = omega - pole.z_c
    b = omega - pole.z_x
    det = a * b - pole.g_tilde ** 2
    return b / det, a / det, pole.g_tilde / det, det, pole


def _branch_distances(p, k, omega):
    low, up = eigen_branches(p, k)
    omega = np.asarray(omega, dtype=float)
    return omega - low.omega, omega - up.omega, low, up


def _divergence_mask(p, dl, du, low, up):
    # Imaginary parts of the eigenmodes live on the rate scale, not the
    # carrier-frequency scale, so the on-pole ball must use the former;
    # tying it to |omega| ~ eps0 would swallow genuinely resolvable
    # near-pole points.
    scale = POLE_TOL * max(1.0, p.total_rate + abs(p.g_rabi))
    mask = np.zeros(np.shape(dl), dtype=bool)
    for dist, branch in ((dl, low), (du, up)):
        if abs(branch.omega.imag) < scale:
            mask |= np.abs(dist) < scale
    return mask


def _power_with_mask(p, k, omega, n):
    """Power spectrum values plus a mask of on-pole (divergent) points."""
    occupation = as_occupation(n)
    dl, du, low, up = _branch_distances(p, k, omega)
    pole = complex_poles(p, k)
    om = np.asarray(omega, dtype=float)
    gt = pole.g_tilde
    a_term = 4.0 * (abs(gt) ** 2 + np.abs(om - pole.z_x) ** 2)
    b_term = 4.0 * (abs(gt) ** 2 + np.abs(om - pole.z_c) ** 2)
    d_term = 8.0 * ((2.0 * om - pole.z_c - pole.z_x) * np.conj(gt)).real
    num = (a_term * p.gamma_c + b_term * p.gamma_x
           + d_term * np.sqrt(p.gamma_c * p.gamma_x))
    mask = _divergence_mask(p, dl, du, low, up)
    den = np.abs(dl) ** 2 * np.abs(du) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(mask, np.nan, num * occupation(om) / den)
    return out, mask


def power_spectrum(p, k, omega, n=None):
    """Emission intensity I(k, omega) for input occupation n (default 1).

    I = [A gamma_c + B gamma_x + D sqrt(gamma_c gamma_x)] n(omega) /
    (|omega - omega_L|^2 |omega - omega_U|^2) with
    A = 4(|g~|^2 + |omega - z_x|^2), B = 4(|g~|^2 + |omega - z_c|^2),
    D = 8 Re[(2 omega - z_c - z_x) conj(g~)].  Nonradiative rates enter
    only through z_c, z_x.  Raises DivergentPointError exactly on an
    undamped pole; use power_spectrum_grid to get flagged grids instead.
    """
    out, mask = _power_with_mask(p, k, omega, n)
    if np.any(mask):
        raise DivergentPointError(
            "power spectrum diverges on an undamped pole at omega = %s"
            % np.asarray(omega)[mask if np.ndim(omega) else ...])
    return out if np.ndim(omega) else float(out)


def power_spectrum_grid(p, k_values, omega_values, n=None):
    """Power spectrum on a (k, omega) grid; on-pole points are flagged."""
    k_values = np.asarray(k_values, dtype=float)
    omega_values = np.asarray(omega_values, dtype=float)
    intensity = np.empty((k_values.size, omega_values.size))
    mask = np.zeros_like(intensity, dtype=bool)
    for i, k in enumerate(k_values):
        intensity[i], mask[i] = _power_with_mask(p, k, omega_values, n)
    return SpectrumGrid(k_values, omega_values, intensity, "power", mask)


def _check_nonsingular(det, pole, omega):
    scale = np.maximum(1.0, np.abs(np.asarray(omega, dtype=complex))
                       + max(abs(pole.z_c), abs(pole.z_x))) ** 2
    bad = np.abs(det) < 1e-14 * scale
    if np.any(bad):
        raise SingularMatrixError(
            "response matrix singular (undamped pole) at omega = %s"
            % np.asarray(omega)[bad if np.ndim(omega) else ...])


def scattering_amplitude_single_bath(p, k, omega):
    """Amplitude S(k, omega) for the common bath alone; |S| = 1.

    S = 1 - 2i [gamma_c G11 + gamma_x G22 + sqrt(gamma_c gamma_x)(G12+G21)].
    Requires purely radiative damping.
    """
    if p.gamma_nr_c != 0.0 or p.gamma_nr_x != 0.0:
        raise ValueError("single-bath amplitude requires zero nonradiative rates")
    g11, g22, g12, det, pole = _resolvent(p, k, omega)
    _check_nonsingular(det, pole, omega)
    s = np.sqrt(p.gamma_c * p.gamma_x)
    amp = 1.0 - 2.0j * (p.gamma_c * g11 + p.gamma_x * g22 + 2.0 * s * g12)
    return amp if np.ndim(omega) else complex(amp)


def scattering_matrix_three_bath(p, k, omega):
    """3x3 scattering matrix among the common bath (1), the matter loss
    bath (2) and the photon loss bath (3).

    Built from one shared cofactor inversion of M' (nonradiative rates on
    the diagonal); density-of-states ratios are absorbed into the rates.
    """
    g11, g22, g12, det, pole = _resolvent(p, k, omega)
    _check_nonsingular(det, pole, omega)
    g21 = g12
    gc, gx = p.gamma_c, p.gamma_x
    gg, gm = p.gamma_nr_c, p.gamma_nr_x
    s_cx = np.sqrt(gc * gx)
    smat = np.empty((3, 3), dtype=complex)
    smat[0, 0] = 1.0 - 2.0j * (gc * g11 + gx * g22 + s_cx * (g12 + g21))
    smat[1, 1] = 1.0 - 2.0j * gm * g22
    smat[2, 2] = 1.0 - 2.0j * gg * g11
    smat[0, 1] = -2.0j * (np.sqrt(gc * gm) * g12 + np.sqrt(gx * gm) * g22)
    smat[1, 0] = -2.0j * (np.sqrt(gc * gm) * g21 + np.sqrt(gx * gm) * g22)
    smat[0, 2] = -2.0j * (np.sqrt(gc * gg) * g11 + np.sqrt(gx * gg) * g21)
    smat[2, 0] = -2.0j * (np.sqrt(gc * gg) * g11 + np.sqrt(gx * gg) * g12)
    smat[1, 2] = -2.0j * np.sqrt(gg * gm) * g21
    smat[2, 1] = -2.0j * np.sqrt(gg * gm) * g12
    return smat


def reflection(p, k, omega):
    """R = |S11|^2, vectorized over omega."""
    g11, g22, g12, det, pole = _resolvent(p, k, omega)
    _check_nonsingular(det, pole, omega)
    s = np.sqrt(p.gamma_c * p.gamma_x)
    s11 = 1.0 - 2.0j * (p.gamma_c * g11 + p.gamma_x * g22 + 2.0 * s * g12)
    out = np.abs(s11) ** 2
    return out if np.ndim(omega) else float(out)


def absorption_components(p, k, omega):
    """(A_gamma, A_m): absorption lineshapes of the photon and matter loss
    channels, vectorized over omega."""
    pole = complex_poles(p, k)
    om = np.asarray(omega, dtype=float)
    dl, du, _, _ = _branch_distances(p, k, omega)
    den = np.abs(dl) ** 2 * np.abs(du) ** 2
    gt = pole.g_tilde
    s = np.sqrt(p.gamma_c * p.gamma_x)
    a_gamma = (4.0 * (p.gamma_c * np.abs(om - pole.z_x) ** 2
                      + p.gamma_x * abs(gt) ** 2)
               + 8.0 * s * (np.conj(gt) * (om - pole.z_x)).real) / den
    a_m = (4.0 * (p.gamma_c * abs(gt) ** 2
                  + p.gamma_x * np.abs(om - pole.z_c) ** 2)
           + 8.0 * s * (np.conj(gt) * (om - pole.z_c)).real) / den
    return a_gamma, a_m


def absorption(p, k, omega):
    """A = gamma_nr_c * A_gamma + gamma_nr_x * A_m, vectorized over omega."""
    a_gamma, a_m = absorption_components(p, k, omega)
    out = p.gamma_nr_c * a_gamma + p.gamma_nr_x * a_m
    return out if np.ndim(omega) else float(out)


def reflection_grid(p, k_values, omega_values):
    """Reflection on a (k, omega) grid."""
    k_values = np.asarray(k_values, dtype=float)
    omega_values = np.asarray(omega_values, dtype=float)
    vals = np.empty((k_values.size, omega_values.size))
    for i, k in enumerate(k_values):
        vals[i] = reflection(p, k, omega_values)
    return SpectrumGrid(k_values, omega_values, vals, "reflection")


def absorption_grid(p, k_values, omega_values):
    """Absorption on a (k, omega) grid."""
    k_values = np.asarray(k_values, dtype=float)
    omega_values = np.asarray(omega_values, dtype=float)
    vals = np.empty((k_values.size, omega_values.size))
    for i, k in enumerate(k_values):
        vals[i] = absorption(p, k, omega_values)
    return SpectrumGrid(k_values, omega_values, vals, "absorption")


def power_absorption_relation_check(p, k, omega, n=None):
    """|I - (A_gamma + A_m) n|; vanishes identically, returned as evidence."""
    occupation = as_occupation(n)
    intensity = power_spectrum(p, k, omega, occupation)
    a_gamma, a_m = absorption_components(p, k, omega)
    resid = np.abs(intensity - (a_gamma + a_m) * occupation(omega))
    return resid if np.ndim(omega) else float(resid)


def default_omega_window(p):
    """(lo, hi) window around eps0 wide enough for every lineshape."""
    span = 8.0 * max(p.g_rabi, p.total_rate, 1.0)
    return p.eps0 - span, p.eps0 + span


def lorentzian_pair_fit(omega, values, centers_guess, widths_guess=None):
    """Least-squares fit of a gridded spectrum to two Lorentzian components.

    Returns (centers, half_widths, amplitudes) with centers sorted
    ascending.  This is the standard way to quote "peak positions" for
    overlapping resonances; with level attraction the two components merge
    into a single visible maximum, but the fit still recovers both centers
    (the memoryless lineshapes are exactly rational with two pole pairs).
    Deterministic for a deterministic initial guess.
    """
    from scipy.optimize import curve_fit

    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=float)
    c1, c2 = centers_guess
    if widths_guess is None:
        widths_guess = (1.0, 1.0)
    w1, w2 = widths_guess
    top = values.max()

    def model(x, a1, x1, g1, a2, x2, g2):
        return (a1 * g1 ** 2 / ((x - x1) ** 2 + g1 ** 2)
                + a2 * g2 ** 2 / ((x - x2) ** 2 + g2 ** 2))

    p0 = [top, c1, w1, top, c2, w2]
    popt, _ = curve_fit(model, omega, values, p0=p0, maxfev=20000)
    comps = sorted([(popt[1], abs(popt[2]), popt[0]),
                    (popt[4], abs(popt[5]), popt[3])])
    centers = np.array([comps[0][0], comps[1][0]])
    widths = np.array([comps[0][1], comps[1][1]])
    amps = np.array([comps[0][2], comps[1][2]])
    return centers, widths, amps
