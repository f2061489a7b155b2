"""Linear canonical wavelet transform: the LCT, admissible chirped wavelets,
scalograms with inversion, and numerical checks of uncertainty bounds."""

from .core import (
    FOURIER,
    IDENTITY,
    CanonicalMatrix,
    PlaneMeasureSet,
    SampledSignal,
    ScaleShiftGrid,
    inner_product,
    matrix_compose,
    matrix_inverse,
    random_unimodular,
    rotation,
    shear,
)
from .errors import *  # noqa: F401,F403
from .lct import LctSpectrum, lct, lct_b_zero, lct_direct, lct_fast, lct_inverse, metaplectic_sign, parseval_check
from .wavelet import (
    LcWavelet,
    admissibility_constant,
    combine_wavelets,
    daughter,
    lct_of_daughter,
    make_wavelet,
    pair_admissibility,
    wavelet_from_samples,
    window_geometry,
)
from .transform import (
    Scalogram,
    default_grid,
    lcwt_direct,
    lcwt_fast,
    plancherel_ratio,
    reconstruct,
    reproducing_kernel,
)
from .lcsg import read_lcsg, write_lcsg
from .io import ingest

__version__ = "0.1.0"
