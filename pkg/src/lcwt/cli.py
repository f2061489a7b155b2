"""Batch front end: ``lcwt <config.json> [--out DIR] [--seed N] [--tol-scale X]``.

The configuration is a single JSON document::

    {
      "input": "builtin:chirp(f0=2,f1=20,T=4)",    # or "x.csv", or {"path": "x.wav", "format": "wav"}
      "matrix": [1, 2, 0.5, 2],
      "wavelet": "lc-mexican-hat",                 # or {"name": ..., "n": 4096}
      "grid": {"n_scales": 64},                    # optional: a_min, a_max, coverage
      "tasks": ["transform", "verify-parseval"],
      "output": "out",
      "seed": 42,
      "tolerances": {"parseval": 1e-9, "plancherel": 0.02}
    }

Exit status: 0 when every verification holds, 1 when one fails, 2 for an
invalid configuration, 3 when a task raises.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import concentration as conc
from .core import CanonicalMatrix, ScaleShiftGrid
from .errors import ConfigError, InvalidMatrix, LcwtError
from .io import ingest
from .lcsg import atomic_write, encode
from .lct import parseval_check
from .signals import normalized, random_packets
from .transform import DEFAULT_COVERAGE, DEFAULT_N_SCALES, default_grid, lcwt_fast, plancherel_ratio, reconstruct
from .wavelet import BUILTIN_SPECTRA, make_wavelet

TASKS = ("transform", "reconstruct", "verify-parseval", "verify-up", "verify-shapiro")
DEFAULT_SEED = 42
DEFAULT_TOLERANCES = {"parseval": 1e-9, "plancherel": 0.02}
HEATMAP_DECADES = 6.0
EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_TASK = 0, 1, 2, 3


@dataclass
class RunConfig:
    input: str
    input_format: str | None
    matrix: CanonicalMatrix
    wavelet: str
    wavelet_n: int
    tasks: list
    output: Path
    grid: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    suite_cases: int = 50

    @classmethod
    def from_dict(cls, raw: dict, base: Path = Path(".")) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        for key in ("input", "matrix", "wavelet", "tasks"):
            if key not in raw:
                raise ConfigError(f"missing required field {key!r}")
        src = raw["input"]
        if isinstance(src, dict):
            path, fmt = src.get("path"), src.get("format")
        else:
            path, fmt = src, None
        if not isinstance(path, str):
            raise ConfigError("input must be a path or builtin:<name> string")
        if not path.startswith("builtin:"):
            p = Path(path) if Path(path).is_absolute() else base / path
            if not p.exists():
                raise ConfigError(f"input file {str(p)!r} does not exist")
            path = str(p)
        m = raw["matrix"]
        if isinstance(m, dict):
            m = [m.get(k) for k in "ABCD"]
        try:
            matrix = CanonicalMatrix.from_sequence(m)
        except InvalidMatrix as exc:
            raise ConfigError(f"matrix: {exc}") from None
        except (TypeError, ValueError):
            raise ConfigError("matrix must be four numbers [A, B, C, D]") from None
        if matrix.b_is_zero:
            raise ConfigError("matrix: B must be nonzero for the wavelet transform")
        wav = raw["wavelet"]
        wav = wav if isinstance(wav, dict) else {"name": wav}
        if wav.get("name") not in BUILTIN_SPECTRA:
            raise ConfigError(f"wavelet must be one of {sorted(BUILTIN_SPECTRA)}, got {wav.get('name')!r}")
        tasks = raw["tasks"]
        if not isinstance(tasks, list) or not tasks:
            raise ConfigError("tasks must be a non-empty list")
        unknown = [t for t in tasks if t not in TASKS]
        if unknown:
            raise ConfigError(f"unknown tasks {unknown}; choose from {list(TASKS)}")
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(raw.get("tolerances", {}))
        out = Path(raw.get("output", "lcwt-out"))
        grid = raw.get("grid", {})
        if not isinstance(grid, dict) or set(grid) - {"n_scales", "a_min", "a_max", "coverage"}:
            raise ConfigError("grid accepts n_scales, a_min, a_max, coverage")
        return cls(
            input=path,
            input_format=fmt,
            matrix=matrix,
            wavelet=wav["name"],
            wavelet_n=int(wav.get("n", 4096)),
            tasks=list(tasks),
            output=out if out.is_absolute() else base / out,
            grid=grid,
            seed=int(raw.get("seed", DEFAULT_SEED)),
            tolerances=tol,
            suite_cases=int(raw.get("suite_cases", 50)),
        )


def _dump(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode()


def heatmap(S) -> tuple[bytes, str]:
    """P5 image of ``log10(|W| / max|W|)`` clipped at ``-6`` decades, largest
    scale on the top row, plus the min/max sidecar text."""
    mag = np.abs(S.coefficients)[::-1]
    top = float(mag.max())
    if top > 0:
        with np.errstate(divide="ignore"):
            lv = np.log10(mag / top)
        lv = np.clip(lv, -HEATMAP_DECADES, 0.0)
        gray = np.rint((lv + HEATMAP_DECADES) / HEATMAP_DECADES * 255.0).astype(np.uint8)
    else:
        gray = np.zeros(mag.shape, dtype=np.uint8)
    h, w = gray.shape
    img = f"P5\n{w} {h}\n255\n".encode() + gray.tobytes()
    side = f"min_abs={float(mag.min())!r}\nmax_abs={top!r}\nlog10_floor={-HEATMAP_DECADES!r}\n"
    return img, side


class Runner:
    def __init__(self, cfg: RunConfig, tol_scale: float = 1.0):
        self.cfg = cfg
        self.tol_scale = tol_scale
        self.signal = ingest(cfg.input, cfg.input_format)
        self.psi = make_wavelet(cfg.wavelet, cfg.matrix, n=cfg.wavelet_n)
        self._grid = None
        self._scalogram = None

    @property
    def grid(self) -> ScaleShiftGrid:
        if self._grid is None:
            g = self.cfg.grid
            n = int(g.get("n_scales", DEFAULT_N_SCALES))
            if "a_min" in g and "a_max" in g:
                f = self.signal
                self._grid = ScaleShiftGrid.from_range(float(g["a_min"]), float(g["a_max"]), n, f.t0, f.dt, f.n)
            else:
                cov = float(g.get("coverage", DEFAULT_COVERAGE))
                self._grid = default_grid(self.signal, self.psi, n_scales=n, coverage=cov)
        return self._grid

    @property
    def scalogram(self):
        if self._scalogram is None:
            self._scalogram = lcwt_fast(self.signal, self.psi, self.grid)
        return self._scalogram

    def write(self, name: str, data: bytes) -> None:
        atomic_write(self.cfg.output / name, data)

    def context(self) -> dict:
        f = self.signal
        return {
            "input": self.cfg.input if self.cfg.input.startswith("builtin:") else Path(self.cfg.input).name,
            "signal": {"t0": f.t0, "dt": f.dt, "n": f.n},
            "matrix": list(self.cfg.matrix.as_tuple()),
            "wavelet": self.psi.name,
            "admissibility": self.psi.admissibility,
            "seed": self.cfg.seed,
        }

    # tasks -----------------------------------------------------------------

    def transform(self) -> bool:
        S = self.scalogram
        self.write("scalogram.lcsg", encode(S))
        img, side = heatmap(S)
        self.write("scalogram.pgm", img)
        self.write("scalogram.pgm.txt", side.encode())
        meta = self.context()
        meta.update(grid_metadata=S.grid.metadata(), source_norm=S.source_norm,
                    plancherel_ratio=plancherel_ratio(S, self.psi))
        self.write("transform.json", _dump(meta))
        return True

    def reconstruct(self) -> bool:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rec = reconstruct(self.scalogram, self.psi, reference=self.signal)
        sig = rec.signal
        rows = "".join(f"{t!r},{v.real!r},{v.imag!r}\n" for t, v in zip(sig.times, sig.values))
        self.write("reconstruction.csv", rows.encode())
        meta = self.context()
        meta.update(relative_error=rec.relative_error, captured_fraction=rec.captured_fraction,
                    warnings=[str(w.message) for w in caught], grid_metadata=self.grid.metadata())
        self.write("reconstruct.json", _dump(meta))
        return True

    def verify_parseval(self) -> bool:
        f = self.signal
        rng = np.random.default_rng(self.cfg.seed)
        g = random_packets(rng, t0=f.t0, dt=f.dt, n=f.n,
                           centre_range=(f.t0 + 0.3 * f.n * f.dt, f.t0 + 0.7 * f.n * f.dt))
        gap = parseval_check(f, g, self.cfg.matrix)
        tol = self.cfg.tolerances["parseval"] * self.tol_scale
        ratio = plancherel_ratio(self.scalogram, self.psi)
        ptol = self.cfg.tolerances["plancherel"] * self.tol_scale
        reports = [
            conc.ConcentrationReport("lct-parseval", gap, tol, parameters={"quantity": "relative inner-product gap"}, upper=True),
            conc.ConcentrationReport("lcwt-plancherel", abs(ratio - 1.0), ptol,
                                     parameters={"quantity": "|grid ratio - 1|", "ratio": ratio}, upper=True),
        ]
        return self._report("parseval.json", reports, self.grid.metadata())

    def verify_up(self) -> bool:
        reports = conc.uncertainty_suite(self.cfg.seed, self.cfg.suite_cases)
        docs = [r.to_dict() for r in reports]
        S = conc.lcwt_fast(normalized(self.signal), self.psi, self.grid)
        for eps in (0.25, 0.5, 0.75):
            om = conc.essential_support(S, eps)
            for r in [conc.donoho_stark_check(S, self.psi, eps, om)] + [
                conc.lieb_check(S, self.psi, eps, om, p) for p in conc.LIEB_EXPONENTS
            ]:
                r.parameters["case"] = "input"
                docs.append(r.to_dict(self.grid.metadata()))
        return self._write_docs("uncertainty.json", docs)

    def verify_shapiro(self) -> bool:
        W = conc.hermite_transforms(self.psi)
        reports = conc.complement_suite(self.psi, W) + conc.shapiro_suite(self.psi, W)
        return self._report("shapiro.json", reports, W[0].grid.metadata())

    def _report(self, name, reports, grid_meta) -> bool:
        return self._write_docs(name, [r.to_dict(grid_meta) for r in reports])

    def _write_docs(self, name, docs) -> bool:
        ok = all(d["holds"] for d in docs)
        doc = {"context": self.context(), "all_hold": ok, "n_records": len(docs), "records": docs}
        self.write(name, _dump(doc))
        return ok


def run(cfg: RunConfig, tol_scale: float = 1.0, stderr=None) -> int:
    """Execute the configured tasks in order; returns the exit status."""
    stderr = sys.stderr if stderr is None else stderr
    cfg.output.mkdir(parents=True, exist_ok=True)
    current = "ingest"
    try:
        runner = Runner(cfg, tol_scale)
        ok = True
        for current in cfg.tasks:
            ok = getattr(runner, current.replace("-", "_"))() and ok
    except (LcwtError, ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "task": current}
        print(json.dumps(err), file=stderr)
        return EXIT_TASK
    return EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="lcwt", description="Linear canonical wavelet transform batch runner.")
    ap.add_argument("config", help="JSON run configuration")
    ap.add_argument("--out", help="output directory (overrides the config)")
    ap.add_argument("--seed", type=int, help=f"seed for randomized suites (default {DEFAULT_SEED})")
    ap.add_argument("--tol-scale", type=float, default=1.0, help="multiply every verification tolerance")
    args = ap.parse_args(argv)
    cfg_path = Path(args.config)
    try:
        try:
            raw = json.loads(cfg_path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {cfg_path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{cfg_path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        cfg = RunConfig.from_dict(raw, cfg_path.parent)
        if not args.tol_scale > 0:
            raise ConfigError("--tol-scale must be positive")
    except ConfigError as exc:
        print(json.dumps({"error": "ConfigError", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        cfg.output = Path(args.out)
    if args.seed is not None:
        cfg.seed = args.seed
    return run(cfg, args.tol_scale)


if __name__ == "__main__":
    sys.exit(main())
