import numpy as np
import pytest
from hypothesis import given, strategies as st

from lcwt.core import FOURIER, CanonicalMatrix, SampledSignal
from lcwt.errors import DegenerateBranch, DivergentAdmissibility, InvalidScale, NotAdmissible, NotAPair, ZeroCentre
from lcwt.lct import lct_fast
from lcwt.wavelet import (
    BUILTIN_SPECTRA,
    admissibility_constant,
    combine_wavelets,
    daughter,
    daughter_values,
    lct_of_daughter,
    make_wavelet,
    pair_admissibility,
    wavelet_from_samples,
    window_geometry,
)

from conftest import M_STD

WIDE = (-50.0, 0.02, 5000)
_ODD_GAUSS = make_wavelet("lc-odd-gauss", M_STD)


def odd_gauss(u):
    return u * np.exp(-0.5 * u * u)


@pytest.mark.parametrize("name, expected", [("lc-odd-gauss", 0.5), ("lc-mexican-hat", 0.5), ("lc-bump", 0.68163)])
def test_builtin_admissibility(name, expected):
    psi = make_wavelet(name, M_STD)
    assert psi.c_pos == pytest.approx(expected, abs=1e-4)
    assert psi.c_neg == pytest.approx(expected, abs=1e-4)
    assert abs(psi.c_pos - psi.c_neg) <= 1e-3 * max(psi.c_pos, psi.c_neg)


@pytest.mark.parametrize("name", sorted(BUILTIN_SPECTRA))
def test_admissibility_stable_under_node_doubling(name):
    fn = BUILTIN_SPECTRA[name][0]
    c1 = admissibility_constant(fn, M_STD)
    c2 = admissibility_constant(fn, M_STD, n_nodes=8192)
    assert c2[0] == pytest.approx(c1[0], rel=1e-3)
    assert c2[1] == pytest.approx(c1[1], rel=1e-3)


def test_one_sided_spectrum_is_not_admissible():
    u = np.linspace(-12, 12, 4096, endpoint=False)
    vals = np.where(u > 0, odd_gauss(u), 0.0)
    spec = lambda x: np.where(np.asarray(x) > 0, odd_gauss(np.asarray(x)), 0.0)  # noqa: E731
    assert admissibility_constant(spec, M_STD)[1] == 0.0
    with pytest.raises(NotAdmissible):
        wavelet_from_samples(u[0], u[1] - u[0], vals, M_STD, spectrum=spec)


def test_gaussian_spectrum_diverges():
    with pytest.raises(DivergentAdmissibility):
        admissibility_constant(lambda u: np.exp(-0.5 * np.asarray(u) ** 2), M_STD)


def test_admissibility_needs_nonzero_b():
    with pytest.raises(DegenerateBranch):
        admissibility_constant(odd_gauss, CanonicalMatrix(1, 0, 0, 1))


def test_time_domain_input_matches_spectrum(oddgauss):
    c = admissibility_constant(oddgauss.time_form, M_STD)
    assert c[0] == pytest.approx(0.5, rel=1e-4) and c[1] == pytest.approx(0.5, rel=1e-4)


def test_fourier_case_matches_classical_constant():
    psi = make_wavelet("lc-mexican-hat", FOURIER)
    tf = SampledSignal.from_function(psi.evaluate, -40.0, 0.05, 1600)
    # ordinary Fourier transform of the time samples, integrated with du/|u|
    v = np.linspace(np.log(1e-4), np.log(40.0), 4096)  # below the sampling Nyquist
    u = np.exp(v)
    weights = np.full(v.size, v[1] - v[0])
    weights[[0, -1]] *= 0.5
    t = tf.times
    ft = lambda w: np.exp(-1j * np.outer(w, t)) @ tf.values * tf.dt / np.sqrt(2 * np.pi)  # noqa: E731
    classical = 0.5 * (np.sum(weights * np.abs(ft(u)) ** 2) + np.sum(weights * np.abs(ft(-u)) ** 2))
    assert psi.admissibility == pytest.approx(classical, rel=1e-6)


def test_pair_constants(mexhat):
    c = pair_admissibility(mexhat, mexhat, M_STD)
    assert c.real == pytest.approx(mexhat.admissibility, rel=1e-12) and abs(c.imag) < 1e-15
    c2 = pair_admissibility(mexhat, lambda u: 2 * mexhat.spectrum(u), M_STD)
    assert c2 == pytest.approx(2 * c, rel=1e-12)
    bump = BUILTIN_SPECTRA["lc-bump"][0]
    with pytest.raises(NotAPair):
        pair_admissibility(bump, lambda u: bump(np.asarray(u) / 8.0), M_STD)


def test_combined_wavelet_spectrum(mexhat, oddgauss):
    mix = combine_wavelets(2.0, mexhat, -1j, oddgauss)
    u = np.linspace(-3, 3, 7)
    assert np.allclose(mix.spectrum(u), 2 * mexhat.spectrum(u) - 1j * oddgauss.spectrum(u), atol=1e-6)


def test_daughter_fourier_is_classical():
    psi = make_wavelet("lc-odd-gauss", FOURIER)
    d = daughter(psi, 1.7, 0.4, WIDE).samples
    x = 1.7 * (d.times - 0.4)
    assert np.allclose(d.values, np.sqrt(1.7) * psi.evaluate(x), atol=1e-10)


def test_daughter_identity_placement(mexhat):
    d = daughter(mexhat, 1.0, 0.0, mexhat.time_form).samples
    assert np.allclose(d.values, mexhat.time_form.values, atol=1e-10)


@given(st.floats(0.5, 4.0), st.floats(-5.0, 5.0))
def test_daughter_norm_preserved(a, b):
    psi = _ODD_GAUSS
    d = daughter(psi, a, b, WIDE).samples
    assert d.norm() == pytest.approx(psi.norm, rel=1e-10)


def test_daughter_uniform_matches_pointwise(oddgauss):
    d = daughter(oddgauss, 1.3, -0.7, (-10, 0.05, 400)).samples
    assert np.allclose(d.values, daughter_values(oddgauss, 1.3, -0.7, d.times), atol=1e-10)


@pytest.mark.parametrize("a", [0.0, -1.0, np.nan])
def test_daughter_rejects_bad_scale(oddgauss, a):
    with pytest.raises(InvalidScale):
        daughter(oddgauss, a, 0.0, WIDE)


@pytest.mark.parametrize("seed", range(4))
def test_daughter_spectrum_two_paths(oddgauss, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(1, 3), rng.uniform(-3, 3)
    d = daughter(oddgauss, a, b, (-25.6, 0.05, 1024)).samples
    F = lct_fast(d, M_STD)
    closed = lct_of_daughter(oddgauss, a, b, F.xi)
    assert np.max(np.abs(F.values - closed)) <= 1e-5
    assert np.allclose(np.abs(closed), np.abs(oddgauss.spectrum(F.xi / a)) / np.sqrt(a), atol=1e-12)


def test_unshifted_unit_daughter_spectrum_is_psi(mexhat):
    xi = np.linspace(-6, 6, 25)
    assert np.allclose(lct_of_daughter(mexhat, 1.0, 0.0, xi), mexhat.spectrum(xi), atol=1e-14)


@pytest.mark.parametrize("name", ["lc-mexican-hat", "lc-odd-gauss"])
def test_window_geometry_scaling(name):
    psi = make_wavelet(name, M_STD)
    with pytest.raises(ZeroCentre):
        window_geometry(psi, 1.0, 0.0)
    geo = {a: window_geometry(psi, a, 0.3, half_line="positive") for a in (0.5, 1, 2, 4)}
    q = [g.q_factor for g in geo.values()]
    assert np.ptp(q) <= 1e-10
    areas = [g.area for g in geo.values()]
    assert np.ptp(areas) <= 1e-8 * areas[0]
    assert geo[2].time_radius == pytest.approx(geo[1].time_radius / 2, rel=1e-8)
    assert geo[2].lct_radius == pytest.approx(geo[1].lct_radius * 2, rel=1e-8)


def test_window_radius_matches_sampled_daughter(mexhat):
    a, b = 2.0, 1.5
    g = window_geometry(mexhat, a, b, half_line="positive")
    d = daughter(mexhat, a, b, WIDE).samples
    w = np.abs(d.values) ** 2
    mean = np.sum(d.times * w) / w.sum()
    std = np.sqrt(np.sum((d.times - mean) ** 2 * w) / w.sum())
    assert mean == pytest.approx(g.time_centre, abs=1e-6)
    assert std == pytest.approx(g.time_radius, rel=1e-6)
