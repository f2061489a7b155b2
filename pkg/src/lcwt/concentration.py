"""Energy concentration of scalograms and the uncertainty bounds built on it.

All measures are grid quadratures with cell ``a_j ln(r) db``; continuum
constants (``2 pi |B| C``, ``|G_s| = pi s^2 / 2``) enter the right-hand
sides unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import PlaneMeasureSet, SampledSignal, ScaleShiftGrid
from .errors import BoundaryMass, MeasureTooLarge, NotConcentrated, OutOfRange, ZeroSignal
from .transform import Scalogram, default_grid, lcwt_fast
from .wavelet import LcWavelet

GRACE = 1e-9


@dataclass(frozen=True)
class ConcentrationReport:
    """Outcome of one bound check; ``holds`` iff ``slack >= -GRACE*|rhs|``.

    Lower bounds read ``lhs >= rhs`` and have ``slack = lhs - rhs``.  For
    upper bounds (``upper=True``, ``lhs <= rhs``) the slack is ``rhs - lhs``.
    """

    theorem: str
    lhs: float
    rhs: float
    epsilon: float = float("nan")
    omega_measure: float = float("nan")
    parameters: dict = field(default_factory=dict)
    upper: bool = False
    grid_metadata: dict = field(default_factory=dict)

    @property
    def bound_rhs(self) -> float:
        return self.rhs

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs if self.upper else self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack >= -GRACE * abs(self.rhs)

    @property
    def ratio(self) -> float:
        """Margin factor, ``>= 1`` when the bound holds."""
        num, den = (self.rhs, self.lhs) if self.upper else (self.lhs, self.rhs)
        return num / den if den != 0 else float("inf")

    def to_dict(self, grid_metadata: dict | None = None) -> dict:
        params = dict(self.parameters)
        params.setdefault("direction", "upper" if self.upper else "lower")
        if np.isfinite(self.epsilon):
            params.setdefault("epsilon", self.epsilon)
        if np.isfinite(self.omega_measure):
            params.setdefault("omega_measure", self.omega_measure)
        return {
            "theorem": self.theorem,
            "parameters": params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": bool(self.holds),
            "grid_metadata": grid_metadata if grid_metadata is not None else self.grid_metadata,
        }


def _plancherel_constant(psi: LcWavelet) -> float:
    return 2.0 * np.pi * abs(psi.matrix.B) * psi.admissibility


def _check_grid(S: Scalogram, omega: PlaneMeasureSet) -> None:
    if omega.grid != S.grid:
        from .errors import GridMismatch

        raise GridMismatch("measure set and scalogram use different grids")


def epsilon_concentration(S: Scalogram, omega: PlaneMeasureSet) -> float:
    """Smallest ``eps`` with ``||1_{Omega^c} W|| <= eps ||W||`` on the grid."""
    _check_grid(S, omega)
    e = np.abs(S.coefficients) ** 2 * S.grid.cell_measure
    total = e.sum()
    if total == 0:
        raise ZeroSignal("scalogram has no energy")
    return float(np.sqrt(max(e[~omega.mask].sum(), 0.0) / total))


def essential_support(S: Scalogram, epsilon: float) -> PlaneMeasureSet:
    """Greedy minimal-measure set keeping ``(1 - eps^2)`` of the grid energy.

    Cells are taken in decreasing order of energy density ``|W|^2``; at a
    fixed cell grid this order minimises the measure for a given energy.
    """
    if not 0.0 <= epsilon < 1.0:
        raise OutOfRange(f"epsilon must lie in [0, 1), got {epsilon!r}")
    dens = np.abs(S.coefficients) ** 2
    e = dens * S.grid.cell_measure
    total = e.sum()
    if total == 0:
        raise ZeroSignal("scalogram has no energy")
    order = np.argsort(-dens, axis=None, kind="stable")
    cum = np.cumsum(e.ravel()[order])
    target = (1.0 - epsilon**2) * total
    k = min(int(np.searchsorted(cum, target)) + 1, order.size)
    mask = np.zeros(dens.size, dtype=bool)
    mask[order[:k]] = True
    return PlaneMeasureSet(mask.reshape(dens.shape), S.grid)


def top_density_set(S: Scalogram, max_measure: float) -> PlaneMeasureSet:
    """Highest-density cells whose total measure stays within ``max_measure``."""
    dens = np.abs(S.coefficients).ravel() ** 2
    order = np.argsort(-dens, kind="stable")
    cum = np.cumsum(S.grid.cell_measure.ravel()[order])
    k = int(np.searchsorted(cum, max_measure, side="right"))
    mask = np.zeros(dens.size, dtype=bool)
    mask[order[:k]] = True
    return PlaneMeasureSet(mask.reshape(S.grid.shape), S.grid)


def _require_concentrated(S: Scalogram, omega: PlaneMeasureSet, epsilon: float) -> None:
    measured = epsilon_concentration(S, omega)
    if measured > epsilon + GRACE:
        raise NotConcentrated(f"measured concentration {measured:.6g} exceeds epsilon {epsilon:.6g}")


def donoho_stark_check(S: Scalogram, psi: LcWavelet, epsilon: float, omega: PlaneMeasureSet) -> ConcentrationReport:
    """``|Omega| ||psi||^2 >= 2 pi |B| C (1 - eps^2)``."""
    _require_concentrated(S, omega, epsilon)
    m = omega.measure()
    return ConcentrationReport(
        "donoho-stark", m * psi.norm**2, _plancherel_constant(psi) * (1.0 - epsilon**2), epsilon, m
    )


def lieb_check(S: Scalogram, psi: LcWavelet, epsilon: float, omega: PlaneMeasureSet, p: float) -> ConcentrationReport:
    """``|Omega| ||psi||^2 >= 2 pi |B| C (1 - eps^2)^(p/(p-2))`` for ``p > 2``."""
    if not p > 2:
        raise OutOfRange(f"the Lieb bound needs p > 2, got {p!r}")
    _require_concentrated(S, omega, epsilon)
    m = omega.measure()
    rhs = _plancherel_constant(psi) * (1.0 - epsilon**2) ** (p / (p - 2.0))
    ds_rhs = _plancherel_constant(psi) * (1.0 - epsilon**2)
    return ConcentrationReport(
        "lieb", m * psi.norm**2, rhs, epsilon, m, {"p": p, "donoho_stark_rhs": ds_rhs}
    )


def time_support(f: SampledSignal, epsilon: float) -> tuple[np.ndarray, float, float]:
    """Greedy ``eps``-support of ``|f|^2`` in time.

    Returns ``(mask, m(E), measured_eps)``.
    """
    e = np.abs(f.values) ** 2
    total = e.sum()
    if total == 0:
        raise ZeroSignal("signal has no energy")
    order = np.argsort(-e, kind="stable")
    cum = np.cumsum(e[order])
    k = min(int(np.searchsorted(cum, (1.0 - epsilon**2) * total)) + 1, e.size)
    mask = np.zeros(e.size, dtype=bool)
    mask[order[:k]] = True
    measured = float(np.sqrt(max(e[~mask].sum(), 0.0) / total))
    return mask, k * f.dt, measured


def joint_check(
    S: Scalogram,
    f: SampledSignal,
    psi: LcWavelet,
    eps_omega: float,
    omega: PlaneMeasureSet,
    eps_e: float,
    *,
    norm: str = "L4",
    p: float | None = None,
) -> ConcentrationReport:
    """Joint time and time-scale concentration bounds.

    ``norm="L4"``:
    ``|Omega| m(E) ||psi||^2 ||f||_4^4 >= 2 pi |B| C k(eps_O) (1-eps_E^2)^2 ||f||_2^4``.
    ``norm="Linf"``:
    ``|Omega| m(E) ||psi||^2 ||f||_inf^2 >= 2 pi |B| C k(eps_O) (1-eps_E^2) ||f||_2^2``.
    ``k(eps) = 1 - eps^2``, or ``(1 - eps^2)^(p/(p-2))`` when ``p`` is given.
    """
    _require_concentrated(S, omega, eps_omega)
    _, m_e, measured = time_support(f, eps_e)
    if measured > eps_e + GRACE:
        raise NotConcentrated(f"time concentration {measured:.6g} exceeds {eps_e:.6g}")
    if p is None:
        k = 1.0 - eps_omega**2
        name = "donoho-stark"
    else:
        if not p > 2:
            raise OutOfRange(f"p must exceed 2, got {p!r}")
        k = (1.0 - eps_omega**2) ** (p / (p - 2.0))
        name = "lieb"
    m = omega.measure()
    n2 = f.norm()
    if norm == "L4":
        n4 = float(np.sum(np.abs(f.values) ** 4) * f.dt)
        lhs = m * m_e * psi.norm**2 * n4
        rhs = _plancherel_constant(psi) * k * (1.0 - eps_e**2) ** 2 * n2**4
    elif norm == "Linf":
        ninf = float(np.max(np.abs(f.values)))
        lhs = m * m_e * psi.norm**2 * ninf**2
        rhs = _plancherel_constant(psi) * k * (1.0 - eps_e**2) * n2**2
    else:
        raise ValueError(f"norm must be 'L4' or 'Linf', got {norm!r}")
    params = {"norm": norm, "epsilon_E": eps_e, "m_E": m_e}
    if p is not None:
        params["p"] = p
    return ConcentrationReport(f"{name}-joint-{norm}", lhs, rhs, eps_omega, m, params)


def scalogram_lp_norm(S: Scalogram, p: float) -> float:
    """``(sum |W|^p da db)^(1/p)``, or ``max |W|`` for ``p = inf``."""
    if not p >= 2:
        raise OutOfRange(f"p must be in [2, inf], got {p!r}")
    mag = np.abs(S.coefficients)
    if np.isinf(p):
        return float(mag.max())
    return float(np.sum(mag**p * S.grid.cell_measure) ** (1.0 / p))


def lp_bound_check(S: Scalogram, psi: LcWavelet, p: float) -> ConcentrationReport:
    """``||W||_p <= (2 pi |B| C)^(1/p) ||f|| ||psi||^(1-2/p)``; sup bound for ``p = inf``."""
    lhs = scalogram_lp_norm(S, p)
    if np.isinf(p):
        rhs = psi.norm * S.source_norm
    else:
        rhs = _plancherel_constant(psi) ** (1.0 / p) * S.source_norm * psi.norm ** (1.0 - 2.0 / p)
    return ConcentrationReport("lp-bound", lhs, rhs, parameters={"p": p if np.isfinite(p) else "inf"}, upper=True)


def dispersion(S: Scalogram, p: float) -> float:
    """``(sum |(a,b)|^p |W|^2 da db)^(1/p)`` with ``|(a,b)| = sqrt(a^2 + b^2)``."""
    if not p > 0:
        raise OutOfRange(f"p must be positive, got {p!r}")
    g = S.grid
    r2 = g.scales[:, None] ** 2 + g.shifts[None, :] ** 2
    val = np.sum(r2 ** (0.5 * p) * np.abs(S.coefficients) ** 2 * g.cell_measure)
    return float(val ** (1.0 / p))


@dataclass(frozen=True)
class DispersionRecord:
    p: float
    value: float
    n_index: int


BOUNDARY_FRACTION = 0.05
BOUNDARY_TOL = 1e-10


def hermite_ons(n_max: int, grid) -> list[SampledSignal]:
    """Hermite functions ``h_0 .. h_{n_max}`` by the normalised recurrence.

    ``grid`` is a :class:`SampledSignal` or ``(t0, dt, n)``.

    Raises
    ------
    BoundaryMass
        If ``h_{n_max}`` keeps more than ``1e-10`` of its energy in the
        outer 5% of the window on either side.
    """
    t0, dt, n = (grid.t0, grid.dt, grid.n) if isinstance(grid, SampledSignal) else grid
    t = t0 + dt * np.arange(int(n))
    h = [np.pi**-0.25 * np.exp(-0.5 * t * t)]
    if n_max >= 1:
        h.append(np.sqrt(2.0) * t * h[0])
    for k in range(1, n_max):
        h.append(np.sqrt(2.0 / (k + 1)) * t * h[k] - np.sqrt(k / (k + 1)) * h[k - 1])
    last = h[n_max]
    edge = max(1, int(BOUNDARY_FRACTION * t.size))
    e = last**2
    frac = (e[:edge].sum() + e[-edge:].sum()) / e.sum()
    if frac > BOUNDARY_TOL:
        raise BoundaryMass(f"h_{n_max} has boundary mass {frac:.3g} on [{t[0]:.4g}, {t[-1]:.4g}]")
    return [SampledSignal(t0, dt, v) for v in h[: n_max + 1]]


def family_grid(
    psi: LcWavelet,
    ons: Sequence[SampledSignal],
    *,
    n_scales: int = 64,
    shift_factor: int = 4,
    low_octaves: int = 1,
) -> ScaleShiftGrid:
    """One grid spanning the default grids of all members.

    Large-support daughters at the smallest scales spill far outside the
    signal window, so the shift axis is widened ``shift_factor`` times about
    the window centre and the scale axis gets ``low_octaves`` extra octaves
    at the bottom at the same ratio.
    """
    grids = [default_grid(f, psi, n_scales=n_scales, capture=0.0) for f in ons]
    lo = min(g.a_min for g in grids)
    hi = max(g.a_max for g in grids)
    ratio = (hi / lo) ** (1.0 / (n_scales - 1))
    extra = int(np.ceil(low_octaves * np.log(2.0) / np.log(ratio)))
    f = ons[0]
    n_shifts = f.n * int(shift_factor)
    b0 = f.t0 - (n_shifts - f.n) // 2 * f.dt
    return ScaleShiftGrid(lo / ratio**extra, ratio, n_scales + extra, b0, f.dt, n_shifts)


def normalized_transforms(psi: LcWavelet, ons: Sequence[SampledSignal], grid: ScaleShiftGrid) -> list[Scalogram]:
    """``W(phi_n / sqrt(2 pi |B| C))`` for every member."""
    c = np.sqrt(_plancherel_constant(psi))
    return [lcwt_fast(f * (1.0 / c), psi, grid) for f in ons]


def complement_norm(S: Scalogram, omega: PlaneMeasureSet) -> float:
    _check_grid(S, omega)
    return float(np.sqrt(np.sum((np.abs(S.coefficients) ** 2 * S.grid.cell_measure)[~omega.mask])))


def projection_bound_check(f, psi: LcWavelet, omega: PlaneMeasureSet) -> ConcentrationReport:
    """``||1_{Omega^c} W f|| >= sqrt(2 pi |B| C - |Omega| ||psi||^2) ||f||``.

    ``f`` is a signal (transformed on ``omega.grid``) or a ready scalogram.
    """
    m = omega.measure()
    limit = _plancherel_constant(psi) / psi.norm**2
    if m >= limit:
        raise MeasureTooLarge(f"|Omega| = {m:.6g} must be below 2 pi |B| C / ||psi||^2 = {limit:.6g}")
    S = f if isinstance(f, Scalogram) else lcwt_fast(f, psi, omega.grid)
    lhs = complement_norm(S, omega)
    rhs = np.sqrt(_plancherel_constant(psi) - m * psi.norm**2) * S.source_norm
    return ConcentrationReport("projection", lhs, float(rhs), omega_measure=m)


def trace_bound_check(psi: LcWavelet, transforms: Sequence[Scalogram], omega: PlaneMeasureSet) -> ConcentrationReport:
    """``sum_n (1 - ||1_{Omega^c} W phi_n'||) <= |Omega| ||psi||^2 / (2 pi |B| C)``
    for normalised transforms ``W phi_n'``."""
    lhs = float(sum(1.0 - complement_norm(S, omega) for S in transforms))
    m = omega.measure()
    rhs = m * psi.norm**2 / _plancherel_constant(psi)
    return ConcentrationReport("trace", lhs, rhs, omega_measure=m, parameters={"card": len(transforms)}, upper=True)


def cardinality_bound_check(
    psi: LcWavelet, transforms: Sequence[Scalogram], s: float, epsilon: float
) -> ConcentrationReport:
    """``Card <= s^2 ||psi||^2 / (4 |B| C (1 - eps))`` over the members whose
    normalised transform is ``eps``-concentrated on ``G_s``; the others are
    excluded and listed."""
    passing, excluded = [], []
    for n, S in enumerate(transforms):
        G = PlaneMeasureSet.half_disk(S.grid, s)
        (passing if epsilon_concentration(S, G) <= epsilon + GRACE else excluded).append(n)
    rhs = s**2 * psi.norm**2 / (4.0 * abs(psi.matrix.B) * psi.admissibility * (1.0 - epsilon))
    return ConcentrationReport(
        "cardinality",
        float(len(passing)),
        rhs,
        epsilon,
        np.pi * s * s / 2.0,
        {"s": s, "passing": passing, "excluded": excluded},
        upper=True,
    )


def concentration_radius(transforms: Sequence[Scalogram], epsilon: float, *, tol: float = 1e-6) -> float:
    """Smallest ``s`` (bisection) at which every transform is
    ``eps``-concentrated on ``G_s``."""
    g = transforms[0].grid
    hi = float(np.hypot(g.a_max, max(abs(g.b0), abs(g.shifts[-1])))) * 1.01

    def ok(s):
        return all(epsilon_concentration(S, PlaneMeasureSet.half_disk(g, s)) <= epsilon for S in transforms)

    if not ok(hi):
        raise NotConcentrated("no radius inside the grid concentrates every member")
    lo = 0.0
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if ok(mid) else (mid, hi)
    return hi


def shapiro_rhs(psi: LcWavelet, card: int, p: float) -> float:
    c = 3.0 * abs(psi.matrix.B) * psi.admissibility / (2.0 ** (4.0 / p + 2.0) * psi.norm**2)
    return card ** (p / 2.0 + 1.0) / 2.0 ** (p + 1.0) * c ** (p / 2.0)


def shapiro_dispersion_check(
    psi: LcWavelet, transforms: Sequence[Scalogram], p: float, indices: Sequence[int]
) -> ConcentrationReport:
    """``sum_{n in L} rho_p(W phi_n')^p >= Card^(p/2+1) / 2^(p+1) * (3|B|C / (2^(4/p+2) ||psi||^2))^(p/2)``."""
    if not p > 0:
        raise OutOfRange(f"p must be positive, got {p!r}")
    idx = list(indices)
    if not idx:
        raise OutOfRange("the index set must be non-empty")
    records = [DispersionRecord(p, dispersion(transforms[n], p), n) for n in idx]
    lhs = float(sum(r.value**p for r in records))
    return ConcentrationReport(
        "shapiro",
        lhs,
        shapiro_rhs(psi, len(idx), p),
        parameters={"p": p, "card": len(idx), "min_dispersion": min(r.value for r in records)},
    )


def dispersion_cardinality_check(psi: LcWavelet, transforms: Sequence[Scalogram], p: float) -> ConcentrationReport:
    """``Card <= 2^(4/p+1) R^2 ||psi||^2 / (4 |B| C)`` with ``R = max rho_p``."""
    R = max(dispersion(S, p) for S in transforms)
    rhs = 2.0 ** (4.0 / p + 1.0) * R * R * psi.norm**2 / (4.0 * abs(psi.matrix.B) * psi.admissibility)
    return ConcentrationReport(
        "dispersion-cardinality", float(len(transforms)), rhs, parameters={"p": p, "R": R}, upper=True
    )


# randomized suite ------------------------------------------------------------

SUITE_MATRICES = ((1.0, 2.0, 0.5, 2.0), (0.0, 1.0, -1.0, 0.0), (0.6, 0.8, -0.8, 0.6), (2.0, -1.5, 0.0, 0.5))
SUITE_WAVELETS = ("lc-mexican-hat", "lc-odd-gauss")
LIEB_EXPONENTS = (3.0, 4.0, 6.0)


@dataclass(frozen=True)
class SuiteCase:
    index: int
    scalogram: Scalogram
    signal: SampledSignal
    wavelet: LcWavelet
    epsilon: float
    epsilon_e: float
    omega: PlaneMeasureSet


def suite_cases(seed: int = 42, n_cases: int = 50) -> list[SuiteCase]:
    """Seeded random unit-norm wave-packet signals with their scalograms,
    concentration levels and greedy essential supports."""
    from .core import CanonicalMatrix
    from .signals import normalized, random_packets
    from .wavelet import make_wavelet

    rng = np.random.default_rng(seed)
    cache: dict = {}
    cases = []
    for i in range(n_cases):
        key = (SUITE_MATRICES[i % len(SUITE_MATRICES)], SUITE_WAVELETS[(i // len(SUITE_MATRICES)) % 2])
        if key not in cache:
            cache[key] = make_wavelet(key[1], CanonicalMatrix(*key[0]))
        psi = cache[key]
        f = normalized(random_packets(rng, n_packets=int(rng.integers(1, 5))))
        # bounds on measured set sizes do not need the deep scale floor
        S = lcwt_fast(f, psi, default_grid(f, psi, capture=0.0))
        eps = float(rng.uniform(0.1, 0.9))
        eps_e = float(rng.uniform(0.1, 0.9))
        cases.append(SuiteCase(i, S, f, psi, eps, eps_e, essential_support(S, eps)))
    return cases


def uncertainty_suite(seed: int = 42, n_cases: int = 50) -> list[ConcentrationReport]:
    """Donoho-Stark, Lieb (p = 3, 4, 6) and the joint L4 / Linf variants on
    ``n_cases`` random cases: ``n_cases * 12`` reports."""
    out = []
    for c in suite_cases(seed, n_cases):
        S, psi, eps, om = c.scalogram, c.wavelet, c.epsilon, c.omega
        tag = {"case": c.index, "wavelet": psi.name, "matrix": list(psi.matrix.as_tuple())}
        reps = [donoho_stark_check(S, psi, eps, om)]
        reps += [lieb_check(S, psi, eps, om, p) for p in LIEB_EXPONENTS]
        for norm in ("L4", "Linf"):
            reps.append(joint_check(S, c.signal, psi, eps, om, c.epsilon_e, norm=norm))
            reps += [joint_check(S, c.signal, psi, eps, om, c.epsilon_e, norm=norm, p=p) for p in LIEB_EXPONENTS]
        for r in reps:
            r.parameters.update(tag)
            r.grid_metadata.update(S.grid.metadata())
        out += reps
    return out


HERMITE_WINDOW = (-30.0, 60.0 / 1024, 1024)
OMEGA_FRACTIONS = (0.1, 0.25, 0.5, 0.9)
DISK_RADII = (1.0, 1.5, 2.0)


def hermite_transforms(psi: LcWavelet, n_max: int = 16, window=HERMITE_WINDOW) -> list[Scalogram]:
    ons = hermite_ons(n_max, window)
    return normalized_transforms(psi, ons, family_grid(psi, ons))


def complement_suite(psi: LcWavelet, transforms: Sequence[Scalogram], n_max: int = 8) -> list[ConcentrationReport]:
    """Complement-energy and trace-sum reports over members ``0..n_max``.

    Test sets are the densest cells of each member up to a fraction of the
    admissible measure ``2 pi |B| C / ||psi||^2``, plus small half-disks.
    """
    family = list(transforms[: n_max + 1])
    limit = _plancherel_constant(psi) / psi.norm**2
    grid = family[0].grid
    sets = [("top", n, fr, top_density_set(family[n], fr * limit)) for n in range(len(family)) for fr in OMEGA_FRACTIONS]
    sets += [("disk", None, s, PlaneMeasureSet.half_disk(grid, s)) for s in DISK_RADII]
    out = []
    for kind, n, size, om in sets:
        if om.measure() >= limit:
            continue
        tag = {"omega": kind, "omega_size": size}
        if n is not None:
            tag["omega_member"] = n
        tr = trace_bound_check(psi, family, om)
        tr.parameters.update(tag)
        out.append(tr)
        for k, S in enumerate(family):
            r = projection_bound_check(S, psi, om)
            r.parameters.update(tag, member=k)
            out.append(r)
    return out


CARDINALITIES = (1, 2, 4, 8, 16)
DISPERSION_EXPONENTS = (1.0, 2.0, 4.0)


def shapiro_suite(psi: LcWavelet, transforms: Sequence[Scalogram], epsilon: float = 0.5) -> list[ConcentrationReport]:
    """Cardinality (at the bisected radius) and dispersion reports for the
    families ``{0..k-1}``, ``k`` in ``CARDINALITIES``."""
    out = []
    for k in CARDINALITIES:
        family = list(transforms[:k])
        s = concentration_radius(family, epsilon)
        out.append(cardinality_bound_check(psi, family, s, epsilon))
        for p in DISPERSION_EXPONENTS:
            out.append(shapiro_dispersion_check(psi, transforms, p, range(k)))
            out.append(dispersion_cardinality_check(psi, family, p))
    return out
