import warnings

import numpy as np
import pytest

from lcwt.core import FOURIER, CanonicalMatrix, SampledSignal, ScaleShiftGrid
from lcwt.errors import GridMismatch, GridTooCoarse, InvalidScale, NotAPair
from lcwt.lct import lct_direct, lct_fast
from lcwt.signals import gaussian_chirp, random_packets
from lcwt.transform import (
    classical_cwt,
    default_grid,
    elementary_properties_check,
    inner_product_relation_check,
    kernel_on_grid,
    lcwt_direct,
    lcwt_fast,
    plancherel_ratio,
    reconstruct,
    reproduce,
    reproducing_kernel,
    kernel_bound,
)
from lcwt.wavelet import daughter, make_wavelet

from conftest import M_STD


def packets(seed, **kw):
    return random_packets(np.random.default_rng(seed), **kw)


def small_grid(f, n_scales=16, n_shifts=256, a=(0.3, 4.0)):
    off = (f.n - n_shifts) // 2
    return ScaleShiftGrid.from_range(a[0], a[1], n_scales, f.t0 + off * f.dt, f.dt, n_shifts)


def rel_sup(x, y):
    return np.max(np.abs(x - y)) / np.max(np.abs(y))


def test_zero_signal_gives_zero(mexhat):
    f = SampledSignal(-30, 60 / 1024, np.zeros(1024))
    g = small_grid(f)
    assert not np.any(lcwt_direct(f, mexhat, g).coefficients)
    assert not np.any(lcwt_fast(f, mexhat, g).coefficients)


def test_fourier_matrix_reduces_to_classical_cwt():
    psi = make_wavelet("lc-mexican-hat", FOURIER)
    f = packets(1)
    g = small_grid(f)
    W = lcwt_direct(f, psi, g).coefficients
    # inverse transform of u^2 exp(-u^2/2) under (0,-1;1,0), in closed form
    closed = lambda t: np.exp(0.25j * np.pi) * (1 - t * t) * np.exp(-0.5 * t * t)  # noqa: E731
    assert np.max(np.abs(W - classical_cwt(f, closed, g))) <= 1e-10


@pytest.mark.parametrize("seed", range(3))
def test_fast_matches_direct(mexhat, seed):
    f = packets(seed)
    g = small_grid(f)
    assert rel_sup(lcwt_fast(f, mexhat, g).coefficients, lcwt_direct(f, mexhat, g).coefficients) <= 1e-6


def test_fast_matches_direct_off_sample_shifts(oddgauss):
    f = packets(4)
    g = ScaleShiftGrid.from_range(0.5, 2.0, 4, -3.0 + 0.5 * f.dt, 2 * f.dt, 40)
    with pytest.raises(GridMismatch):
        lcwt_fast(f, oddgauss, ScaleShiftGrid(0.5, 2.0, 3, 0.0, 0.7 * f.dt, 10))
    half = ScaleShiftGrid.from_range(0.5, 2.0, 4, -3.0, f.dt / 2, 40)
    assert rel_sup(lcwt_fast(f, oddgauss, half).coefficients, lcwt_direct(f, oddgauss, half).coefficients) <= 1e-6
    assert rel_sup(lcwt_fast(f, oddgauss, g).coefficients, lcwt_direct(f, oddgauss, g).coefficients) <= 1e-6


def test_row_spectrum_matches_product_form(mexhat):
    f = gaussian_chirp(0.5, 1.2, freq=1.0)
    g = ScaleShiftGrid(1.0, 1.2, 3, -1024 * f.dt, f.dt, 8192)
    S = lcwt_fast(f, mexhat, g)
    M = M_STD
    for j, a in enumerate(g.scales):
        R = lct_fast(SampledSignal(g.b0, g.db, S.coefficients[j]), M)
        F = lct_direct(f, M, (R.xi0, R.dxi, R.n))
        u = R.xi / a
        G = np.sqrt(complex(0, -2 * np.pi * M.B)) / np.sqrt(a) * np.exp(0.5j * M.D / M.B * u * u)
        G = G * F.values * np.conj(mexhat.spectrum(u))
        assert rel_sup(R.values, G) <= 1e-6


def test_daughter_atom_peaks_at_its_own_parameters(oddgauss):
    f0 = SampledSignal(-30, 60 / 1024, np.zeros(1024))
    a0, b0 = 1.5, -6.0 + 150 * f0.dt
    atom = daughter(oddgauss, a0, b0, f0).samples
    g = ScaleShiftGrid.from_range(0.75, 3.0, 17, -6.0, f0.dt, 256)
    W = np.abs(lcwt_direct(atom, oddgauss, g).coefficients)
    j, k = np.unravel_index(np.argmax(W), W.shape)
    assert abs(np.log(g.scales[j] / a0)) <= np.log(g.ratio) / 2 + 1e-12
    assert abs(g.shifts[k] - b0) <= g.db / 2 + 1e-12
    assert W.max() == pytest.approx(atom.norm() ** 2, rel=1e-8)


@pytest.mark.parametrize("M", [CanonicalMatrix(0, 2, -0.5, 0), FOURIER])
@pytest.mark.parametrize("c", [0.0, 1.3, -2.1])
def test_ridge_tracks_real_pulse(M, c):
    psi = make_wavelet("lc-mexican-hat", M)
    f = gaussian_chirp(c, 1.0)
    f = f.with_values(f.values.real)
    g = default_grid(f, psi, n_scales=16)
    W = np.abs(lcwt_fast(f, psi, g).coefficients)
    ridge = g.shifts[np.argmax(W, axis=1)]
    assert np.max(np.abs(ridge - c)) <= g.db


def test_plancherel_upper_consistency_and_default_band(mexhat):
    for seed in range(3):
        f = packets(seed)
        S = lcwt_fast(f, mexhat, default_grid(f, mexhat))
        r = plancherel_ratio(S, mexhat)
        assert 0.98 <= r <= 1.0 + 1e-9


def test_inner_product_relation(mexhat):
    f = packets(7)
    assert inner_product_relation_check(f, f, mexhat) <= 0.02
    # disjoint LCT supports: both sides vanish
    n, dt = 1024, 60 / 1024
    lo = gaussian_chirp(0.0, 3.0, freq=1.0)
    hi = gaussian_chirp(0.0, 3.0, freq=-6.0)
    grid = default_grid(lo + hi, mexhat)
    assert inner_product_relation_check(lo, hi, mexhat, grid=grid) <= 0.02


def test_inner_product_relation_pair(mexhat):
    phi = make_wavelet("lc-mexican-hat", M_STD)
    f = packets(8)
    assert inner_product_relation_check(f, f, mexhat, phi) <= 0.02


def test_reconstruct_zero_and_same_pair(mexhat):
    f = SampledSignal(-30, 60 / 1024, np.zeros(1024))
    g = ScaleShiftGrid.from_range(1 / 16, 16, 64, f.t0, f.dt, f.n)
    S = lcwt_fast(f, mexhat, g)
    assert not np.any(reconstruct(S, mexhat).signal.values)
    h = gaussian_chirp(0.5, 3.0, freq=1.5, rate=-0.5)
    S = lcwt_fast(h, mexhat, g)
    r1 = reconstruct(S, mexhat, reference=h)
    r2 = reconstruct(S, mexhat, mexhat, reference=h)
    assert np.allclose(r1.signal.values, r2.signal.values, rtol=1e-13, atol=1e-15)
    assert r1.relative_error <= 1e-2


def test_reconstruct_errors(mexhat):
    h = gaussian_chirp(0.0, 3.0, freq=2.0)
    narrow = ScaleShiftGrid.from_range(0.5, 1.0, 8, h.t0, h.dt, h.n)
    S = lcwt_fast(h, mexhat, narrow)
    with pytest.warns(GridTooCoarse):
        reconstruct(S, mexhat)
    other = make_wavelet("lc-mexican-hat", FOURIER)
    with pytest.raises(NotAPair):
        reconstruct(S, mexhat, other)


def test_kernel_diagonal_and_bound(oddgauss):
    bound = kernel_bound(oddgauss)
    k = reproducing_kernel(oddgauss, 1.3, 0.2, 1.3, 0.2)
    assert abs(k.value - bound) <= 1e-9 * bound
    rng = np.random.default_rng(5)
    for _ in range(50):
        x, a = rng.uniform(0.3, 3, 2)
        y, b = rng.uniform(-5, 5, 2)
        kv = reproducing_kernel(oddgauss, x, y, a, b)
        assert kv.within_bound
        assert abs(kv.value) < bound
    with pytest.raises(InvalidScale):
        reproducing_kernel(oddgauss, 0.0, 0.0, 1.0, 0.0)


def test_reproducing_property(mexhat):
    f = packets(9)
    g = default_grid(f, mexhat)
    S = lcwt_fast(f, mexhat, g)
    j, k = 40, 512
    a, b = g.scales[j], g.shifts[k]
    K = kernel_on_grid(mexhat, a, b, f, g)
    assert reproduce(S, K) == pytest.approx(S.coefficients[j, k], rel=0.02)


def test_elementary_properties(mexhat, oddgauss):
    f = packets(10)
    g = gaussian_chirp(0.3, 1.0)
    grid = ScaleShiftGrid.from_range(0.5, 2.0, 6, -3.0, 4 * f.dt, 24)
    gaps = elementary_properties_check(f, g, mexhat, oddgauss, 2.0, 0.0, grid)
    assert gaps["linearity"] <= 1e-12
    assert gaps["wavelet_linearity"] <= 1e-6
    assert gaps["dilation"] <= 1e-6
    assert gaps["translation"] <= 1e-15
    shifted = elementary_properties_check(f, g, mexhat, oddgauss, 0.5, 1.25, grid)
    assert shifted["dilation"] <= 1e-6 and shifted["translation"] <= 1e-6
