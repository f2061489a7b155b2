import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lcwt.core import CanonicalMatrix
from lcwt.wavelet import make_wavelet

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

M_STD = CanonicalMatrix(1.0, 2.0, 0.5, 2.0)

_ACCEPTANCE: dict = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    _ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def m_std():
    return M_STD


@pytest.fixture(scope="session")
def mexhat():
    return make_wavelet("lc-mexican-hat", M_STD)


@pytest.fixture(scope="session")
def oddgauss():
    return make_wavelet("lc-odd-gauss", M_STD)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
