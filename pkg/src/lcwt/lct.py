"""Discrete linear canonical transform.

Two evaluation paths are provided.  :func:`lct_direct` is a plain O(N*n)
quadrature against the kernel and serves as the reference.  :func:`lct_fast`
factors the kernel into chirp, DFT and chirp, which is exact on the grid
``dxi = 2*pi*|B| / (N*dt)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CanonicalMatrix, SampledSignal, check_same_grid, inner_product
from .errors import DegenerateBranch, InvalidMatrix

_CHUNK = 1 << 20  # kernel entries evaluated per block in lct_direct


@dataclass(frozen=True)
class LctSpectrum:
    """Samples ``values[j]`` of the transform at ``xi0 + j*dxi``."""

    xi0: float
    dxi: float
    values: np.ndarray = field(repr=False)
    matrix: CanonicalMatrix

    def __post_init__(self):
        object.__setattr__(self, "xi0", float(self.xi0))
        object.__setattr__(self, "dxi", float(self.dxi))
        vals = np.array(self.values, dtype=complex, copy=True)
        if not self.dxi > 0:
            raise ValueError("dxi must be positive")
        if not np.all(np.isfinite(vals)):
            raise ValueError("spectrum values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def xi(self) -> np.ndarray:
        return self.xi0 + self.dxi * np.arange(self.n)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dxi))

    def as_signal(self) -> SampledSignal:
        """Reinterpret the spectrum as a signal on its frequency grid."""
        return SampledSignal(self.xi0, self.dxi, self.values)


def _require_b(M: CanonicalMatrix) -> None:
    if M.b_is_zero:
        raise DegenerateBranch(f"B = {M.B!r} is zero; use lct_b_zero")


def kernel_prefactor(B: float) -> complex:
    """``1/sqrt(2*pi*i*B)`` with the principal root."""
    return 1.0 / np.sqrt(complex(0.0, 2.0 * np.pi * B))


def lct_kernel(M: CanonicalMatrix, t, xi):
    """Kernel ``K_M(t, xi)``; broadcasts over array arguments."""
    _require_b(M)
    t = np.asarray(t, dtype=float)
    xi = np.asarray(xi, dtype=float)
    phase = 0.5 * (M.A * t * t - 2.0 * xi * t + M.D * xi * xi) / M.B
    out = kernel_prefactor(M.B) * np.exp(1j * phase)
    return complex(out) if out.ndim == 0 else out


def next_pow2(n: int) -> int:
    return 1 << max(1, int(n - 1).bit_length())


def pad_signal(f: SampledSignal, n_total: int) -> SampledSignal:
    """Zero-pad symmetrically about the support to ``n_total`` samples."""
    if n_total < f.n:
        raise ValueError(f"cannot pad {f.n} samples down to {n_total}")
    left = (n_total - f.n) // 2
    vals = np.zeros(n_total, dtype=complex)
    vals[left:left + f.n] = f.values
    return SampledSignal(f.t0 - left * f.dt, f.dt, vals)


def native_dxi(M: CanonicalMatrix, n: int, dt: float) -> float:
    return 2.0 * np.pi * abs(M.B) / (n * dt)


def chirp_dft(values: np.ndarray, t0: float, dt: float, M: CanonicalMatrix, xi0: float | None = None):
    """Chirp, DFT, chirp on exactly ``len(values)`` points (no padding).

    Works on the last axis, so a stack of rows is transformed at once.
    Returns ``(xi0, dxi, spectrum)``.
    """
    _require_b(M)
    values = np.asarray(values, dtype=complex)
    n = values.shape[-1]
    A, B, D = M.A, M.B, M.D
    dxi = native_dxi(M, n, dt)
    if xi0 is None:
        xi0 = -(n // 2) * dxi
    k = np.arange(n)
    t = t0 + dt * k
    y = values * np.exp(1j * (0.5 * A / B * t * t - xi0 * k * dt / B))
    Y = np.fft.fft(y, axis=-1) if B > 0 else np.fft.ifft(y, axis=-1) * n
    xi = xi0 + dxi * k
    post = (dt * kernel_prefactor(B)) * np.exp(1j * (0.5 * D / B * xi * xi - xi * t0 / B))
    return float(xi0), dxi, Y * post


def lct_fast(
    f: SampledSignal,
    M: CanonicalMatrix,
    *,
    n_fft: int | None = None,
    out_start: float | None = None,
) -> LctSpectrum:
    """Fast LCT by chirp multiplication and one FFT.

    Parameters
    ----------
    f : SampledSignal
        Input samples.
    M : CanonicalMatrix
        Transform parameters, ``B`` nonzero.
    n_fft : int, optional
        Transform length after symmetric zero-padding.  Defaults to the
        next power of two ``>= f.n``.
    out_start : float, optional
        First output frequency.  Defaults to ``-(n_fft//2)*dxi`` so that
        ``xi = 0`` is a grid point.

    Returns
    -------
    LctSpectrum
        ``n_fft`` samples with step ``2*pi*|B|/(n_fft*dt)``.
    """
    _require_b(M)
    n = next_pow2(f.n) if n_fft is None else int(n_fft)
    fp = pad_signal(f, n) if n != f.n else f
    xi0, dxi, vals = chirp_dft(fp.values, fp.t0, fp.dt, M, out_start)
    return LctSpectrum(xi0, dxi, vals, M)


def lct_direct(f: SampledSignal, M: CanonicalMatrix, xi_grid=None) -> LctSpectrum:
    """Reference quadrature ``sum_k f(t_k) K_M(t_k, xi_j) dt``.

    ``xi_grid`` is ``(xi0, dxi, n)``; by default the native grid of
    :func:`lct_fast` for the same input is used.
    """
    _require_b(M)
    if xi_grid is None:
        n = next_pow2(f.n)
        dxi = native_dxi(M, n, f.dt)
        xi_grid = (-(n // 2) * dxi, dxi, n)
    xi0, dxi, n = float(xi_grid[0]), float(xi_grid[1]), int(xi_grid[2])
    xi = xi0 + dxi * np.arange(n)
    t = f.times
    nz = f.values != 0
    t, fv = t[nz], f.values[nz]
    out = np.zeros(n, dtype=complex)
    step = max(1, _CHUNK // max(1, t.size))
    for s in range(0, n, step):
        K = lct_kernel(M, t[None, :], xi[s:s + step, None])
        out[s:s + step] = K @ fv * f.dt
    return LctSpectrum(xi0, dxi, out, M)


def lct_b_zero(f: SampledSignal, M: CanonicalMatrix, xi_grid=None) -> LctSpectrum:
    """Degenerate branch ``sqrt(D) exp(i C D xi^2 / 2) f(D xi)``.

    Off-grid values of ``f`` come from linear interpolation and are zero
    outside the sampled interval.  The default output grid maps exactly
    onto the input samples.
    """
    if not M.b_is_zero:
        raise InvalidMatrix("lct_b_zero needs B == 0")
    assert M.D != 0.0, "D == 0 with B == 0 violates the unit determinant"
    D, C = M.D, M.C
    if xi_grid is None:
        dxi = f.dt / abs(D)
        xi0 = f.t0 / D if D > 0 else f.t_end / D
        xi_grid = (xi0, dxi, f.n)
    xi0, dxi, n = float(xi_grid[0]), float(xi_grid[1]), int(xi_grid[2])
    xi = xi0 + dxi * np.arange(n)
    x = D * xi
    t = f.times
    re = np.interp(x, t, f.values.real, left=0.0, right=0.0)
    im = np.interp(x, t, f.values.imag, left=0.0, right=0.0)
    vals = np.sqrt(complex(D)) * np.exp(0.5j * C * D * xi * xi) * (re + 1j * im)
    return LctSpectrum(xi0, dxi, vals, M)


def lct(f: SampledSignal, M: CanonicalMatrix, **kwargs) -> LctSpectrum:
    """Dispatch to :func:`lct_b_zero` or :func:`lct_fast` on ``M.b_is_zero``."""
    return lct_b_zero(f, M) if M.b_is_zero else lct_fast(f, M, **kwargs)


def lct_inverse(F: LctSpectrum, t0: float) -> SampledSignal:
    """Invert :func:`lct_fast` output; ``t0`` is the padded input start."""
    xi0, dxi, vals = chirp_dft(F.values, F.xi0, F.dxi, F.matrix.inverse(), t0)
    return SampledSignal(xi0, dxi, vals)


def parseval_check(f: SampledSignal, g: SampledSignal, M: CanonicalMatrix) -> float:
    """Relative discrepancy ``|<f,g> - <Lf,Lg>| / (|f| |g|)``."""
    check_same_grid(f, g)
    Lf, Lg = lct_fast(f, M), lct_fast(g, M)
    lhs = inner_product(f, g)
    rhs = complex(np.vdot(Lg.values, Lf.values) * Lf.dxi)
    denom = f.norm() * g.norm()
    if denom == 0.0:
        return abs(lhs - rhs)
    return abs(lhs - rhs) / denom


def metaplectic_sign(M: CanonicalMatrix, N: CanonicalMatrix) -> int:
    """Sign ``s`` with ``L^M L^N = s * L^{MN}`` under the principal root.

    Composing two kernels yields a Gaussian integral whose phase differs
    from the principal branch of the product by ``pi`` exactly when
    ``sgn B_M == sgn B_N != sgn B_MN``.
    """
    P = M @ N
    for X in (M, N, P):
        _require_b(X)
    sm, sn, sp = np.sign(M.B), np.sign(N.B), np.sign(P.B)
    return -1 if (sm == sn and sp != sm) else 1
