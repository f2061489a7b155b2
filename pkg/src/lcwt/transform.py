"""Forward and inverse wavelet transform on a scale/shift grid."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import GRID_RTOL, CanonicalMatrix, PlaneMeasureSet, SampledSignal, ScaleShiftGrid, inner_product
from .errors import DegenerateBranch, GridMismatch, GridTooCoarse, InvalidScale, NotAPair, ZeroSignal
from .lct import chirp_dft, lct_fast, native_dxi, next_pow2, pad_signal
from .wavelet import LcWavelet, daughter, pair_admissibility

DEFAULT_N_SCALES = 64
DEFAULT_COVERAGE = 0.9999
DEFAULT_CAPTURE = 0.995
_MAX_EXTRA_OCTAVES = 6
MIN_CAPTURED = 0.99
_STEP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Scalogram:
    """Unnormalised coefficients ``W[j, k]`` at ``(a_j, b_k)``."""

    coefficients: np.ndarray = field(repr=False)
    grid: ScaleShiftGrid
    wavelet_id: str
    matrix: CanonicalMatrix
    source_norm: float

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex, copy=True)
        if c.shape != self.grid.shape:
            raise GridMismatch(f"coefficients {c.shape} do not match grid {self.grid.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "source_norm", float(self.source_norm))

    @property
    def cell_measure(self) -> np.ndarray:
        return self.grid.cell_measure

    def energy(self) -> float:
        """Grid quadrature of ``|W|^2 da db``."""
        return float(np.sum(np.abs(self.coefficients) ** 2 * self.grid.cell_measure))

    def norm(self) -> float:
        return float(np.sqrt(self.energy()))

    def with_coefficients(self, coefficients) -> "Scalogram":
        return Scalogram(coefficients, self.grid, self.wavelet_id, self.matrix, self.source_norm)

    def inner(self, other: "Scalogram") -> complex:
        if other.grid != self.grid:
            raise GridMismatch("scalograms live on different grids")
        return complex(np.sum(self.coefficients * np.conj(other.coefficients) * self.grid.cell_measure))


def _require_lcwt_matrix(M: CanonicalMatrix) -> None:
    if M.b_is_zero:
        raise DegenerateBranch("the wavelet transform is defined for B != 0 only")


def _step_ratio(db: float, dt: float) -> tuple[int, int]:
    """``(up, down)`` with ``db = dt * down / up`` and one of them 1."""
    r = db / dt
    if abs(r - round(r)) <= _STEP_TOL * max(r, 1.0) and round(r) >= 1:
        return 1, int(round(r))
    q = dt / db
    if abs(q - round(q)) <= _STEP_TOL * q:
        return int(round(q)), 1
    raise GridMismatch(f"shift step {db!r} is not an integer multiple or divisor of the sample step {dt!r}")


def analysis_window(f: SampledSignal, psi: LcWavelet, grid: ScaleShiftGrid) -> int:
    """Padded FFT length whose window holds the signal, the shift range
    and the widest daughter on both sides."""
    lo = min(f.t0, grid.b0)
    hi = max(f.t_end, grid.shifts[-1])
    width = hi - lo + 2.0 * psi.half_width / grid.a_min
    return next_pow2(max(f.n, int(np.ceil(width / f.dt)) + 1))


def lcwt_fast(f: SampledSignal, psi: LcWavelet, grid: ScaleShiftGrid, *, n_fft: int | None = None) -> Scalogram:
    """Fast transform through the LCT domain.

    Each row is ``L^{M^-1}`` of
    ``sqrt(-2 pi i B)/sqrt(a) * exp(iD (xi/a)^2 / 2B) * F(xi) * conj(Psi(xi/a))``
    evaluated on the shift axis with one chirp-FFT-chirp per scale.

    Parameters
    ----------
    f : SampledSignal
    psi : LcWavelet
    grid : ScaleShiftGrid
        Shift step must be an integer multiple or divisor of ``f.dt``.
    n_fft : int, optional
        Override the padded length chosen by :func:`analysis_window`.
    """
    M = psi.matrix
    _require_lcwt_matrix(M)
    up, down = _step_ratio(grid.db, f.dt)
    n_pad = analysis_window(f, psi, grid) if n_fft is None else int(n_fft)
    n_pad = max(n_pad, next_pow2(-(-grid.n_shifts * down // up)))
    fp = pad_signal(f, n_pad)
    xi0, dxi, F = chirp_dft(fp.values, fp.t0, fp.dt, M)
    xi = xi0 + dxi * np.arange(n_pad)
    n_tot = n_pad * up
    lead = (n_tot - n_pad) // 2
    xi0_tot = xi0 - lead * dxi
    Minv = M.inverse()
    pref = np.sqrt(complex(0.0, -2.0 * np.pi * M.B))
    out = np.empty(grid.shape, dtype=complex)
    row = np.zeros(n_tot, dtype=complex)
    for j, a in enumerate(grid.scales):
        u = xi / a
        g = (pref / np.sqrt(a)) * np.exp(0.5j * M.D / M.B * u * u) * F * np.conj(psi.spectrum(u))
        row[lead:lead + n_pad] = g
        _, _, w = chirp_dft(row, xi0_tot, dxi, Minv, grid.b0)
        out[j] = w[: grid.n_shifts * down : down]
    return Scalogram(out, grid, psi.name, M, f.norm())


def direct_coefficients(
    f: SampledSignal,
    dechirped_uniform: Callable[[float, float, int], np.ndarray],
    a_over_b: float,
    grid: ScaleShiftGrid,
) -> np.ndarray:
    """Quadrature ``sum_t f(t) conj(daughter_{a,b}(t)) dt``.

    The daughter is ``sqrt(a) exp(-i r/2 (t^2-b^2)) phi(a(t-b))`` where
    ``r = a_over_b`` and ``phi(x)`` is returned on uniform grids by
    ``dechirped_uniform(x0, h, m)``.  When the shifts sit on the sample
    grid each scale needs one evaluation of ``phi`` on ``N + (K-1)*m``
    points; otherwise ``phi`` is evaluated per shift.
    """
    t = f.times
    h = f.values * np.exp(0.5j * a_over_b * t * t) * f.dt
    b = grid.shifts
    out = np.empty(grid.shape, dtype=complex)
    off = (grid.b0 - f.t0) / f.dt
    m = grid.db / f.dt
    aligned = (
        abs(off - round(off)) <= _STEP_TOL * max(1.0, abs(off))
        and abs(m - round(m)) <= _STEP_TOL * max(1.0, m)
        and round(m) >= 1
    )
    bphase = np.exp(-0.5j * a_over_b * b * b)
    for j, a in enumerate(grid.scales):
        if a <= 0:
            raise InvalidScale(f"scale {a!r} is not positive")
        if aligned:
            off_i, m_i = int(round(off)), int(round(m))
            d_min = -off_i - m_i * (grid.n_shifts - 1)
            d_max = f.n - 1 - off_i
            phi = dechirped_uniform(a * f.dt * d_min, a * f.dt, d_max - d_min + 1)
            idx = np.arange(f.n)[None, :] - off_i - m_i * np.arange(grid.n_shifts)[:, None] - d_min
            out[j] = np.conj(phi[idx]) @ h
        else:
            for k, bk in enumerate(b):
                phi = dechirped_uniform(a * (f.t0 - bk), a * f.dt, f.n)
                out[j, k] = np.conj(phi) @ h
        out[j] *= np.sqrt(a) * bphase
    return out


def lcwt_direct(f: SampledSignal, psi: LcWavelet, grid: ScaleShiftGrid) -> Scalogram:
    """Reference transform ``<f, psi^M_{a,b}>`` by time-domain quadrature."""
    M = psi.matrix
    _require_lcwt_matrix(M)
    coeffs = direct_coefficients(f, psi.dechirped_uniform, M.A / M.B, grid)
    return Scalogram(coeffs, grid, psi.name, M, f.norm())


def classical_cwt(f: SampledSignal, psi_fn: Callable, grid: ScaleShiftGrid) -> np.ndarray:
    """Chirp-free reference ``sum_t f(t) conj(sqrt(a) psi(a(t-b))) dt``."""
    t = f.times
    out = np.empty(grid.shape, dtype=complex)
    for j, a in enumerate(grid.scales):
        x = a * (t[None, :] - grid.shifts[:, None])
        out[j] = (np.conj(np.sqrt(a) * psi_fn(x)) @ f.values) * f.dt
    return out


def spectral_band(f: SampledSignal, M: CanonicalMatrix, coverage: float) -> tuple[float, float]:
    """``|xi|`` band holding ``coverage`` of the energy of ``L^M f``."""
    F = lct_fast(f, M)
    xi = np.abs(F.xi)
    e = np.abs(F.values) ** 2
    if e.sum() == 0:
        raise ZeroSignal("signal has no energy")
    order = np.argsort(xi)
    xs, cum = xi[order], np.cumsum(e[order]) / e.sum()
    tail = 0.5 * (1.0 - coverage)
    lo = xs[np.searchsorted(cum, tail)]
    hi = xs[min(np.searchsorted(cum, 1.0 - tail), xs.size - 1)]
    return max(lo, F.dxi), max(hi, 2.0 * F.dxi)


def admissibility_band(psi: LcWavelet, coverage: float) -> tuple[float, float]:
    """``|u|`` band holding ``coverage`` of the mass of ``|Psi(u)|^2 du/|u|``."""
    v = np.linspace(np.log(1e-4), np.log(1e3), 8192)
    u = np.exp(v)
    dens = np.abs(psi.spectrum(u)) ** 2 + np.abs(psi.spectrum(-u)) ** 2
    cum = np.cumsum(dens)
    cum /= cum[-1]
    tail = 0.5 * (1.0 - coverage)
    return float(u[np.searchsorted(cum, tail)]), float(u[min(np.searchsorted(cum, 1.0 - tail), u.size - 1)])


def predicted_capture(f: SampledSignal, psi: LcWavelet, scales: np.ndarray, *, oversample: int = 8) -> float:
    """Fraction of ``2 pi |B| C ||f||^2`` a scale axis can hold when the
    shift axis is unbounded.

    Each LCT frequency ``xi`` is weighted by ``ln(r) sum_j |Psi(xi/a_j)|^2``
    over the half-line constant; the spectrum is oversampled so the weight,
    which varies on the scale of ``a_min``, is resolved near ``xi = 0``.
    """
    n = oversample * next_pow2(f.n)
    # half-step offset: the weight vanishes at xi = 0, a point of no measure
    dxi = native_dxi(psi.matrix, n, f.dt)
    F = lct_fast(f, psi.matrix, n_fft=n, out_start=-(n // 2 - 0.5) * dxi)
    e = np.abs(F.values) ** 2
    if e.sum() == 0:
        raise ZeroSignal("signal has no energy")
    log_r = np.log(scales[1] / scales[0]) if scales.size > 1 else 1.0
    xi = F.xi
    w = np.zeros(xi.size)
    for a in scales:
        w += np.abs(psi.spectrum(xi / a)) ** 2
    half = np.where(xi >= 0, psi.c_pos, psi.c_neg)
    return float(np.sum(e * np.minimum(w * log_r / half, 1.0)) / e.sum())


def default_grid(
    f: SampledSignal,
    psi: LcWavelet,
    *,
    n_scales: int = DEFAULT_N_SCALES,
    coverage: float = DEFAULT_COVERAGE,
    capture: float = DEFAULT_CAPTURE,
) -> ScaleShiftGrid:
    """Geometric scales covering the product of the signal's LCT band and
    the wavelet's admissibility band; shifts on the signal grid.

    Energy near ``xi = 0`` is reached only by small scales, so ``a_min`` is
    lowered an octave at a time (at most ``_MAX_EXTRA_OCTAVES``) until
    :func:`predicted_capture` reaches ``capture``.  A row at scale ``a``
    spreads over roughly ``2 pi |B| / a`` along the shift axis, so the
    signal window is padded by that width at ``a_min`` on both sides.
    """
    xi_lo, xi_hi = spectral_band(f, psi.matrix, coverage)
    u_lo, u_hi = admissibility_band(psi, coverage)
    a_min, a_max = xi_lo / u_hi, xi_hi / u_lo
    for _ in range(_MAX_EXTRA_OCTAVES):
        scales = a_min * (a_max / a_min) ** np.linspace(0.0, 1.0, n_scales)
        if predicted_capture(f, psi, scales) >= capture:
            break
        a_min /= 2.0
    pad = int(np.ceil(2.0 * np.pi * abs(psi.matrix.B) / (a_min * f.dt)))
    return ScaleShiftGrid.from_range(a_min, a_max, n_scales, f.t0 - pad * f.dt, f.dt, f.n + 2 * pad)


def plancherel_ratio(S: Scalogram, psi: LcWavelet) -> float:
    """``||W||^2_grid / (2 pi |B| C ||f||^2)``."""
    if S.source_norm == 0:
        raise ZeroSignal("source signal has zero norm")
    return S.energy() / (2.0 * np.pi * abs(psi.matrix.B) * psi.admissibility * S.source_norm ** 2)


@dataclass(frozen=True)
class Reconstruction:
    signal: SampledSignal
    relative_error: float | None
    captured_fraction: float


def reconstruct(
    S: Scalogram,
    psi: LcWavelet,
    phi: LcWavelet | None = None,
    *,
    reference: SampledSignal | None = None,
    min_fraction: float = MIN_CAPTURED,
) -> Reconstruction:
    """Discretised inversion with cell measure ``a_j ln(r) db``.

    For every scale the row is moved to the LCT domain, multiplied by the
    synthesis daughter's spectrum factor and accumulated; one inverse LCT
    then returns the signal on the shift grid.

    Parameters
    ----------
    S : Scalogram
        Coefficients computed with ``psi``.
    psi, phi : LcWavelet
        Analysis and synthesis wavelets; ``phi`` defaults to ``psi``.
    reference : SampledSignal, optional
        Original signal; when given the relative L2 error is reported.
    min_fraction : float
        Warn with :class:`GridTooCoarse` when the grid energy captures less
        than this fraction of ``2 pi |B| C ||f||^2``.
    """
    M = psi.matrix
    _require_lcwt_matrix(M)
    if phi is None:
        phi = psi
        c = complex(psi.admissibility)
    else:
        if phi.matrix != M:
            raise NotAPair("analysis and synthesis wavelets use different matrices")
        c = pair_admissibility(psi, phi, M)
    g = S.grid
    captured = plancherel_ratio(S, psi) if S.source_norm > 0 else 1.0
    if captured < min_fraction:
        warnings.warn(
            f"scale range captures {captured:.4f} of the admissibility mass (< {min_fraction})",
            GridTooCoarse,
            stacklevel=2,
        )
    n_pad = next_pow2(2 * g.n_shifts)
    lead = (n_pad - g.n_shifts) // 2
    t0 = g.b0 - lead * g.db
    rows = np.zeros((g.n_scales, n_pad), dtype=complex)
    rows[:, lead:lead + g.n_shifts] = S.coefficients
    xi0, dxi, R = chirp_dft(rows, t0, g.db, M)
    xi = xi0 + dxi * np.arange(n_pad)
    acc = np.zeros(n_pad, dtype=complex)
    pref = np.sqrt(complex(0.0, 2.0 * np.pi * M.B))
    for j, (a, da) in enumerate(zip(g.scales, g.scale_widths)):
        u = xi / a
        acc += R[j] * (pref / np.sqrt(a)) * np.exp(-0.5j * M.D / M.B * u * u) * phi.spectrum(u) * da
    _, _, out = chirp_dft(acc, xi0, dxi, M.inverse(), t0)
    vals = out[lead:lead + g.n_shifts] / (2.0 * np.pi * abs(M.B) * c)
    sig = SampledSignal(g.b0, g.db, vals)
    err = None
    if reference is not None:
        ref = _on_shift_grid(reference, g)
        denom = reference.norm()
        err = float(np.linalg.norm(vals - ref) * np.sqrt(g.db) / denom) if denom > 0 else float(sig.norm())
    return Reconstruction(sig, err, captured)


def _on_shift_grid(ref: SampledSignal, g: ScaleShiftGrid) -> np.ndarray:
    """Zero-extend ``ref`` onto the shift axis, which must contain its grid."""
    off = (ref.t0 - g.b0) / g.db
    k = int(round(off))
    if (
        abs(ref.dt - g.db) > GRID_RTOL * g.db
        or abs(off - k) > _STEP_TOL * max(1.0, abs(off))
        or k < 0
        or k + ref.n > g.n_shifts
    ):
        raise GridMismatch("reference signal must lie on the shift grid")
    out = np.zeros(g.n_shifts, dtype=complex)
    out[k:k + ref.n] = ref.values
    return out


def inner_product_relation_check(
    f: SampledSignal,
    g: SampledSignal,
    psi: LcWavelet,
    phi: LcWavelet | None = None,
    grid: ScaleShiftGrid | None = None,
) -> float:
    """Relative gap between ``<W_psi f, W_phi g>_grid`` and ``2 pi |B| C_{psi,phi} <f, g>``."""
    phi = psi if phi is None else phi
    M = psi.matrix
    c = complex(psi.admissibility) if phi is psi else pair_admissibility(psi, phi, M)
    grid = default_grid(f, psi) if grid is None else grid
    lhs = lcwt_fast(f, psi, grid).inner(lcwt_fast(g, phi, grid))
    scale = 2.0 * np.pi * abs(M.B)
    rhs = scale * c * inner_product(f, g)
    denom = scale * abs(c) * f.norm() * g.norm()
    if denom == 0:
        raise ZeroSignal("inner product relation needs nonzero inputs")
    return abs(lhs - rhs) / denom


@dataclass(frozen=True)
class ReproducingKernelValue:
    x: float
    y: float
    a: float
    b: float
    value: complex
    bound: float

    @property
    def within_bound(self) -> bool:
        return abs(self.value) <= self.bound + 1e-9


def kernel_bound(psi: LcWavelet) -> float:
    return psi.norm ** 2 / (2.0 * np.pi * abs(psi.matrix.B) * psi.admissibility)


def reproducing_kernel(psi: LcWavelet, x: float, y: float, a: float, b: float) -> ReproducingKernelValue:
    """``<psi_{a,b}, psi_{x,y}> / (2 pi |B| C)`` by LCT-domain quadrature.

    With ``m = min(a, x)`` the integral over ``xi = m u`` uses the wavelet's
    own spectral nodes, so the diagonal reproduces the discrete ``||psi||^2``.
    """
    for s in (a, x):
        if not (np.isfinite(s) and s > 0):
            raise InvalidScale(f"scale must be > 0, got {s!r}")
    M = psi.matrix
    S = psi.spectrum_form
    m = min(a, x)
    xi = m * S.xi
    dxi = m * S.dxi
    if abs(b - y) > np.pi * abs(M.B) / dxi:
        ip = 0j  # beyond the alias-free range the daughters do not overlap
    else:
        pa = S.values if m == a else psi.spectrum(xi / a)
        px = S.values if m == x else psi.spectrum(xi / x)
        ph = np.exp(-1j * xi * (b - y) / M.B - 0.5j * M.D / M.B * xi * xi * (1.0 / a**2 - 1.0 / x**2))
        ip = np.exp(0.5j * M.A / M.B * (b * b - y * y)) / np.sqrt(a * x) * np.sum(ph * pa * np.conj(px)) * dxi
    scale = 2.0 * np.pi * abs(M.B) * psi.admissibility
    return ReproducingKernelValue(float(x), float(y), float(a), float(b), complex(ip / scale), kernel_bound(psi))


def kernel_on_grid(psi: LcWavelet, a: float, b: float, signal_grid: SampledSignal, grid: ScaleShiftGrid) -> np.ndarray:
    """``K(x_j, y_k; a, b)`` over a scale/shift grid, via the transform of
    the sampled daughter ``psi_{a,b}``."""
    d = daughter(psi, a, b, signal_grid).samples
    W = lcwt_fast(d, psi, grid).coefficients
    return W / (2.0 * np.pi * abs(psi.matrix.B) * psi.admissibility)


def reproduce(S: Scalogram, K: np.ndarray) -> complex:
    """``<F, K>_grid``; equals ``F(a, b)`` when ``K`` is the kernel at ``(a, b)``."""
    return complex(np.sum(S.coefficients * np.conj(K) * S.grid.cell_measure))


def modulate(g: SampledSignal, freq: float) -> SampledSignal:
    return g.with_values(g.values * np.exp(1j * freq * g.times))


def dilate(g: SampledSignal, lam: float) -> SampledSignal:
    """``sqrt(lam) g(lam t)`` resampled exactly onto a rescaled grid."""
    return SampledSignal(g.t0 / lam, g.dt / lam, np.sqrt(lam) * g.values)


def translate(g: SampledSignal, y: float) -> SampledSignal:
    return SampledSignal(g.t0 + y, g.dt, g.values)


def elementary_properties_check(
    f: SampledSignal,
    g: SampledSignal,
    psi: LcWavelet,
    phi: LcWavelet,
    lam: float,
    y: float,
    grid: ScaleShiftGrid,
    *,
    alpha: complex = 1.5 - 0.5j,
    beta: complex = -0.25 + 2.0j,
) -> dict:
    """Largest pointwise gap, relative to the largest coefficient, for the
    linearity, wavelet-linearity, dilation and translation identities.

    Dilation compares ``W^M_psi(delta_lam g)(a, b)`` with the transform of
    ``g`` under ``(A, lam^2 B; C/lam^2, D)`` at ``(a/lam, lam b)``.  The
    wavelet on the right is ``exp(iA(1-lam^-2)u^2/2B) psi(u)``; its
    dechirped form coincides with that of ``psi``, so only the chirp rate
    of the daughter changes.  Translation compares ``W(tau_y g)(a, b)``
    with ``exp(iA y(y-b)/B) W(e^{iAyt/B} g)(a, b-y)``.
    """
    from .wavelet import combine_wavelets

    M = psi.matrix
    rho = M.A / M.B

    def rel(x, y_):
        return float(np.max(np.abs(x - y_)) / max(np.max(np.abs(y_)), 1e-300))

    Wf = lcwt_direct(f, psi, grid).coefficients
    Wg = lcwt_direct(g, psi, grid).coefficients
    lin = rel(lcwt_direct(alpha * f + beta * g, psi, grid).coefficients, alpha * Wf + beta * Wg)

    mix = combine_wavelets(alpha, psi, beta, phi)
    Wphi = lcwt_direct(g, phi, grid).coefficients
    wlin = rel(lcwt_direct(g, mix, grid).coefficients, np.conj(alpha) * Wg + np.conj(beta) * Wphi)

    lhs = direct_coefficients(dilate(g, lam), psi.dechirped_uniform, rho, grid)
    g_tilde = ScaleShiftGrid(grid.a_min / lam, grid.ratio, grid.n_scales, grid.b0 * lam, grid.db * lam, grid.n_shifts)
    rhs = direct_coefficients(g, psi.dechirped_uniform, rho / lam**2, g_tilde)
    dil = rel(lhs, rhs)

    lhs = direct_coefficients(translate(g, y), psi.dechirped_uniform, rho, grid)
    g_shift = ScaleShiftGrid(grid.a_min, grid.ratio, grid.n_scales, grid.b0 - y, grid.db, grid.n_shifts)
    rhs = direct_coefficients(modulate(g, rho * y), psi.dechirped_uniform, rho, g_shift)
    rhs = rhs * np.exp(1j * rho * y * (y - grid.shifts))[None, :]
    tr = rel(lhs, rhs)
    return {"linearity": lin, "wavelet_linearity": wlin, "dilation": dil, "translation": tr}


def measure_set(S: Scalogram, mask) -> PlaneMeasureSet:
    return PlaneMeasureSet(mask, S.grid)
