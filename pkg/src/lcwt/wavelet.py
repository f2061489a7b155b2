"""Admissible wavelets built in the LCT domain, their constants, daughters
and window geometry."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .core import CanonicalMatrix, SampledSignal
from .errors import DegenerateBranch, DivergentAdmissibility, InvalidScale, NotAdmissible, NotAPair, ZeroCentre
from .lct import LctSpectrum, chirp_dft, kernel_prefactor, lct_fast, lct_kernel

ADMISSIBILITY_TOL = 1e-3
LOG_U_MIN, LOG_U_MAX = np.log(1e-4), np.log(1e3)
N_LOG_NODES = 4096
DIVERGENCE_ALPHA = 0.1
_NEGLIGIBLE = 1e-28  # |Psi|^2 relative floor treated as exact zero
_SUPPORT_REL = 1e-10
_CHUNK = 1 << 20


def _mexican_hat(u):
    u = np.asarray(u, dtype=float)
    return (u * u * np.exp(-0.5 * u * u)).astype(complex)


def _odd_gauss(u):
    u = np.asarray(u, dtype=float)
    return (u * np.exp(-0.5 * u * u)).astype(complex)


def _bump(u):
    u = np.abs(np.asarray(u, dtype=float))
    out = np.zeros(u.shape)
    inside = (u > 0.5) & (u < 2.0)
    x = np.log2(u[inside])
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x * x))
    return out.astype(complex)


# name -> (spectrum, default half-width of the u grid)
BUILTIN_SPECTRA: dict[str, tuple[Callable, float]] = {
    "lc-mexican-hat": (_mexican_hat, 12.0),
    "lc-odd-gauss": (_odd_gauss, 12.0),
    "lc-bump": (_bump, 3.0),
}


def cubic_spectrum(u0: float, du: float, values) -> Callable:
    """Cubic interpolant of uniform samples, zero outside the sampled span."""
    values = np.asarray(values, dtype=complex)
    u = u0 + du * np.arange(values.size)
    re = CubicSpline(u, values.real, extrapolate=False)
    im = CubicSpline(u, values.imag, extrapolate=False)

    def fn(x):
        x = np.asarray(x, dtype=float)
        out = re(x) + 1j * im(x)
        return np.where(np.isfinite(out), out, 0.0)

    return fn


def _log_nodes(n_nodes: int):
    v = np.linspace(LOG_U_MIN, LOG_U_MAX, n_nodes)
    w = np.full(n_nodes, v[1] - v[0])
    w[0] = w[-1] = 0.5 * (v[1] - v[0])
    return np.exp(v), w


def _check_decay(u: np.ndarray, p: np.ndarray, scale: float, side: str) -> None:
    """Fit ``|Psi|^2 ~ c u^alpha`` on the smallest decade of the nodes."""
    sel = u <= 10.0 * u[0]
    ps = p[sel]
    if np.all(ps <= _NEGLIGIBLE * scale):
        return
    if np.any(ps <= 0):
        return  # isolated zeros: no power law to fit, integrable
    alpha = np.polyfit(np.log(u[sel]), np.log(ps), 1)[0]
    if alpha <= DIVERGENCE_ALPHA:
        raise DivergentAdmissibility(
            f"|Psi(u)|^2 ~ u^{alpha:.3g} near u=0 on the {side} side; |Psi|^2/u is not integrable"
        )


def _spectrum_callable(psi, M: CanonicalMatrix) -> Callable:
    if isinstance(psi, LcWavelet):
        return psi.spectrum
    if isinstance(psi, LctSpectrum):
        return cubic_spectrum(psi.xi0, psi.dxi, psi.values)
    if isinstance(psi, SampledSignal):
        if M.b_is_zero:
            raise DegenerateBranch("admissibility needs B != 0")
        S = lct_fast(psi, M)
        return cubic_spectrum(S.xi0, S.dxi, S.values)
    if callable(psi):
        return psi
    raise TypeError(f"cannot take a spectrum from {type(psi).__name__}")


def admissibility_constant(psi, M: CanonicalMatrix, *, n_nodes: int = N_LOG_NODES) -> tuple[float, float]:
    """Half-line admissibility integrals.

    Parameters
    ----------
    psi : SampledSignal, LctSpectrum, LcWavelet or callable
        The wavelet.  A time-domain signal is transformed with
        :func:`lct_fast` and its spectrum interpolated; a callable is taken
        to be ``Psi(u)`` directly.
    M : CanonicalMatrix
    n_nodes : int
        Log-spaced nodes per half line.

    Returns
    -------
    (C_pos, C_neg) : tuple of float
        ``int_0^inf |Psi(u)|^2 du/u`` and its mirror on ``u < 0``.

    Raises
    ------
    DivergentAdmissibility
        When ``|Psi|^2`` does not decay near the origin.
    """
    if M.b_is_zero:
        raise DegenerateBranch("admissibility needs B != 0")
    fn = _spectrum_callable(psi, M)
    u, w = _log_nodes(n_nodes)
    p_pos = np.abs(fn(u)) ** 2
    p_neg = np.abs(fn(-u)) ** 2
    scale = max(p_pos.max(), p_neg.max(), np.finfo(float).tiny)
    _check_decay(u, p_pos, scale, "positive")
    _check_decay(u, p_neg, scale, "negative")
    return float(np.sum(w * p_pos)), float(np.sum(w * p_neg))


def _agree(x, y, tol) -> bool:
    m = max(abs(x), abs(y))
    return m > 0 and abs(x - y) <= tol * m


def pair_admissibility(psi, phi, M: CanonicalMatrix, *, tol: float = ADMISSIBILITY_TOL,
                       n_nodes: int = N_LOG_NODES) -> complex:
    """Cross constant ``int conj(Psi(u)) Phi(u) du/|u|`` shared by both half lines.

    Raises
    ------
    NotAPair
        If the two half-line values disagree beyond ``tol`` or vanish.
    """
    f1 = _spectrum_callable(psi, M)
    f2 = _spectrum_callable(phi, M)
    u, w = _log_nodes(n_nodes)
    c_pos = complex(np.sum(w * np.conj(f1(u)) * f2(u)))
    c_neg = complex(np.sum(w * np.conj(f1(-u)) * f2(-u)))
    value = 0.5 * (c_pos + c_neg)
    if abs(value) < 1e-10 or not _agree(c_pos, c_neg, tol):
        raise NotAPair(f"half-line cross constants {c_pos:.6g} and {c_neg:.6g} do not define a pair")
    return value


@dataclass(frozen=True)
class WindowGeometry:
    time_centre: float
    time_radius: float
    lct_centre: float
    lct_radius: float
    q_factor: float

    @property
    def area(self) -> float:
        return 4.0 * self.time_radius * self.lct_radius


@dataclass(frozen=True)
class DaughterWavelet:
    a: float
    b: float
    samples: SampledSignal


@dataclass(frozen=True, eq=False)
class LcWavelet:
    """Analysing wavelet held as LCT-domain samples plus its time form.

    ``spectrum_form`` holds ``Psi(u_j)`` on a uniform grid and ``time_form``
    is its exact discrete inverse.  ``spectrum`` evaluates ``Psi`` off the
    grid: analytically for factory wavelets, by cubic interpolation for
    user-supplied samples.
    """

    name: str
    matrix: CanonicalMatrix
    spectrum_form: LctSpectrum = field(repr=False)
    time_form: SampledSignal = field(repr=False)
    admissibility: float
    c_pos: float
    c_neg: float
    spectrum: Callable = field(repr=False)
    half_width: float

    @property
    def norm(self) -> float:
        return self.time_form.norm()

    @property
    def u_grid(self) -> np.ndarray:
        return self.spectrum_form.xi

    @property
    def period(self) -> float:
        """Period of the band-limited interpolant in time."""
        return 2.0 * np.pi * abs(self.matrix.B) / self.spectrum_form.dxi

    def _weights(self) -> np.ndarray:
        M, S = self.matrix, self.spectrum_form
        u = S.xi
        return S.values * np.exp(-0.5j * M.D / M.B * u * u) * S.dxi * np.conj(kernel_prefactor(M.B))

    def dechirped(self, x) -> np.ndarray:
        """``exp(iA x^2/2B) psi(x)`` at arbitrary ``x`` (band-limited interpolation)."""
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.zeros(flat.size, dtype=complex)
        c = self._weights()
        u = self.spectrum_form.xi / self.matrix.B
        inside = np.abs(flat) <= 0.5 * self.period
        idx = np.nonzero(inside)[0]
        step = max(1, _CHUNK // u.size)
        for s in range(0, idx.size, step):
            sl = idx[s:s + step]
            out[sl] = np.exp(1j * flat[sl, None] * u[None, :]) @ c
        return out.reshape(x.shape)

    def dechirped_uniform(self, x0: float, h: float, m: int) -> np.ndarray:
        """:meth:`dechirped` on ``x0 + h*arange(m)`` through a chirp-z transform."""
        S, B = self.spectrum_form, self.matrix.B
        # sum_j c_j exp(i u_j x_l / B) with u_j = u0 + j*du, x_l = x0 + l*h
        y = self._weights() * np.exp(1j * S.dxi * x0 / B * np.arange(S.n))
        x = x0 + h * np.arange(m)
        out = _chirp_sum(y, S.dxi * h / B, m) * np.exp(1j * S.xi0 * x / B)
        out[np.abs(x) > 0.5 * self.period] = 0.0
        return out

    def evaluate(self, x) -> np.ndarray:
        """``psi(x)`` at arbitrary points."""
        x = np.asarray(x, dtype=float)
        M = self.matrix
        return np.exp(-0.5j * M.A / M.B * x * x) * self.dechirped(x)


def _chirp_sum(y: np.ndarray, theta: float, m: int) -> np.ndarray:
    """``sum_j y_j exp(i theta j l)`` for ``l < m`` by Bluestein convolution.

    Phases are formed as ``theta * k^2 / 2`` from exact integer squares;
    raising a rounded ``exp(i theta)`` to the power ``k^2/2`` (as generic
    chirp-z routines do) costs about ``1e-10`` at these lengths.
    """
    n = y.size
    L = 1 << int(n + m - 2).bit_length()
    j = np.arange(n, dtype=float)
    l = np.arange(m, dtype=float)
    k = np.arange(-(n - 1), m, dtype=float)
    kern = np.exp(-0.5j * theta * (k * k))
    a = np.zeros(L, dtype=complex)
    a[:n] = y * np.exp(0.5j * theta * (j * j))
    b = np.zeros(L, dtype=complex)
    b[: kern.size] = kern
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    return np.exp(0.5j * theta * (l * l)) * conv[n - 1 : n - 1 + m]


def _support_half_width(sig: SampledSignal) -> float:
    mag = np.abs(sig.values)
    keep = np.nonzero(mag > _SUPPORT_REL * mag.max())[0]
    t = sig.times[keep]
    return float(np.max(np.abs(t))) + sig.dt


def wavelet_from_samples(
    u0: float,
    du: float,
    values,
    M: CanonicalMatrix,
    *,
    name: str = "custom",
    spectrum: Callable | None = None,
    admissibility_tol: float = ADMISSIBILITY_TOL,
    require_admissible: bool = True,
) -> LcWavelet:
    """Build an :class:`LcWavelet` from LCT-domain samples ``Psi(u0 + j*du)``.

    ``spectrum`` is the off-grid evaluator; by default a cubic interpolant
    of the samples.  With ``require_admissible`` the half-line constants
    must be positive and agree within ``admissibility_tol``.
    """
    if M.b_is_zero:
        raise DegenerateBranch("wavelets need B != 0")
    values = np.asarray(values, dtype=complex)
    spec = LctSpectrum(u0, du, values, M)
    t_vals = chirp_dft(values, u0, du, M.inverse())
    time_form = SampledSignal(t_vals[0], t_vals[1], t_vals[2])
    fn = spectrum if spectrum is not None else cubic_spectrum(u0, du, values)
    c_pos, c_neg = admissibility_constant(fn, M)
    if require_admissible:
        if not (c_pos > 0 and c_neg > 0 and np.isfinite(c_pos) and np.isfinite(c_neg)):
            raise NotAdmissible(f"half-line constants C+={c_pos:.6g}, C-={c_neg:.6g} must both be positive")
        if not _agree(c_pos, c_neg, admissibility_tol):
            raise NotAdmissible(
                f"C+={c_pos:.10g} and C-={c_neg:.10g} differ by more than {admissibility_tol:g} relative"
            )
    return LcWavelet(
        name=name,
        matrix=M,
        spectrum_form=spec,
        time_form=time_form,
        admissibility=0.5 * (c_pos + c_neg),
        c_pos=c_pos,
        c_neg=c_neg,
        spectrum=fn,
        half_width=_support_half_width(time_form),
    )


def make_wavelet(
    name: str,
    M: CanonicalMatrix,
    *,
    n: int = 4096,
    u_max: float | None = None,
    admissibility_tol: float = ADMISSIBILITY_TOL,
) -> LcWavelet:
    """Factory for the built-in wavelets.

    Parameters
    ----------
    name : {"lc-mexican-hat", "lc-odd-gauss", "lc-bump"}
    M : CanonicalMatrix
    n : int
        Number of LCT-domain samples.
    u_max : float, optional
        Half-width of the sampled LCT-domain interval.

    Examples
    --------
    >>> from lcwt.core import CanonicalMatrix
    >>> psi = make_wavelet("lc-odd-gauss", CanonicalMatrix(1, 2, 0.5, 2))
    >>> round(psi.admissibility, 4)
    0.5
    """
    if name not in BUILTIN_SPECTRA:
        raise KeyError(f"unknown wavelet {name!r}; choose from {sorted(BUILTIN_SPECTRA)}")
    fn, default_umax = BUILTIN_SPECTRA[name]
    u_max = default_umax if u_max is None else float(u_max)
    du = 2.0 * u_max / n
    u0 = -u_max
    values = fn(u0 + du * np.arange(n))
    return wavelet_from_samples(u0, du, values, M, name=name, spectrum=fn, admissibility_tol=admissibility_tol)


def combine_wavelets(alpha: complex, psi: LcWavelet, beta: complex, phi: LcWavelet) -> LcWavelet:
    """``alpha*psi + beta*phi`` on a shared spectral grid; admissibility is not required."""
    s1, s2 = psi.spectrum_form, phi.spectrum_form
    if psi.matrix != phi.matrix or s1.n != s2.n or s1.xi0 != s2.xi0 or s1.dxi != s2.dxi:
        raise NotAPair("wavelets must share matrix and spectral grid to be combined")
    f1, f2 = psi.spectrum, phi.spectrum

    def fn(u):
        return alpha * f1(u) + beta * f2(u)

    return wavelet_from_samples(
        s1.xi0, s1.dxi, alpha * s1.values + beta * s2.values, psi.matrix,
        name=f"({alpha})*{psi.name}+({beta})*{phi.name}", spectrum=fn, require_admissible=False,
    )


def _check_scale(a: float) -> None:
    if not (np.isfinite(a) and a > 0):
        raise InvalidScale(f"scale a must be > 0, got {a!r}")


def daughter_values(psi: LcWavelet, a: float, b: float, t: np.ndarray) -> np.ndarray:
    """``exp(-iA/2B((t^2-b^2)-(a(t-b))^2)) sqrt(a) psi(a(t-b))`` at the points ``t``."""
    _check_scale(a)
    M = psi.matrix
    t = np.asarray(t, dtype=float)
    x = a * (t - b)
    return np.sqrt(a) * np.exp(-0.5j * M.A / M.B * (t * t - b * b)) * psi.dechirped(x)


def daughter(psi: LcWavelet, a: float, b: float, grid) -> DaughterWavelet:
    """Sample the daughter wavelet at scale ``a`` and shift ``b``.

    ``grid`` is a :class:`SampledSignal` whose grid is reused, or a tuple
    ``(t0, dt, n)``.
    """
    _check_scale(a)
    t0, dt, n = (grid.t0, grid.dt, grid.n) if isinstance(grid, SampledSignal) else grid
    n = int(n)
    M = psi.matrix
    t = t0 + dt * np.arange(n)
    core = psi.dechirped_uniform(a * (t0 - b), a * dt, n)
    vals = np.sqrt(a) * np.exp(-0.5j * M.A / M.B * (t * t - b * b)) * core
    return DaughterWavelet(float(a), float(b), SampledSignal(t0, dt, vals))


def lct_of_daughter(psi: LcWavelet, a: float, b: float, xi):
    """Closed-form LCT of the daughter wavelet.

    ``sqrt(2 pi i B)/sqrt(a) * K_M(b, xi) * exp(-iD (xi/a)^2 / 2B) * Psi(xi/a)``.
    """
    _check_scale(a)
    M = psi.matrix
    xi = np.asarray(xi, dtype=float)
    u = xi / a
    pref = np.sqrt(complex(0.0, 2.0 * np.pi * M.B)) / np.sqrt(a)
    return pref * lct_kernel(M, b, xi) * np.exp(-0.5j * M.D / M.B * u * u) * psi.spectrum(u)


def _moments(x: np.ndarray, density: np.ndarray) -> tuple[float, float]:
    total = density.sum()
    if total <= 0:
        raise ZeroCentre("zero-energy window")
    mean = float(np.sum(x * density) / total)
    var = float(np.sum((x - mean) ** 2 * density) / total)
    return mean, float(np.sqrt(max(var, 0.0)))


def window_geometry(psi: LcWavelet, a: float, b: float, *, half_line: str | None = None) -> WindowGeometry:
    """Centres, radii and Q-factor of the daughter's time and LCT windows.

    Parameters
    ----------
    half_line : {None, "positive", "negative"}
        Restrict the LCT-domain moments to one half line.  Wavelets whose
        ``|Psi|`` is even have zero full-line centre, so the Q-factor is
        only defined per half line for them.

    Raises
    ------
    ZeroCentre
        When the LCT-domain centre vanishes.
    """
    _check_scale(a)
    tf = psi.time_form
    e_t, d_t = _moments(tf.times, np.abs(tf.values) ** 2)
    u = psi.u_grid
    dens = np.abs(psi.spectrum_form.values) ** 2
    if half_line == "positive":
        dens = np.where(u > 0, dens, 0.0)
    elif half_line == "negative":
        dens = np.where(u < 0, dens, 0.0)
    elif half_line is not None:
        raise ValueError(f"half_line must be None, 'positive' or 'negative', got {half_line!r}")
    e_u, d_u = _moments(u, dens)
    if abs(e_u) <= 1e-12 * max(d_u, 1.0):
        raise ZeroCentre("LCT-domain centre is zero; the Q-factor is undefined (try half_line)")
    return WindowGeometry(
        time_centre=e_t / a + b,
        time_radius=d_t / a,
        lct_centre=a * e_u,
        lct_radius=a * d_u,
        q_factor=d_u / e_u,
    )
