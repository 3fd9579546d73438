"""Parameter-grid sweeps of the spectral diagnostics with per-cell checkpointing.

A sweep varies two couplings over value grids (real or complex, e.g. purely
imaginary ranges), recomputes the sector Hamiltonian from the cached term
blocks at every cell, diagonalizes, and aggregates either the mean spacing
ratio <r> or the CSR angular average <cos theta>.  Each cell checkpoints to
its own JSON file, so interrupted sweeps resume without recomputation.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .basis import ChainConfig, build_sector
from .operators import build_hamiltonian
from .spectra import csr, diagonalize, r_statistic

_AXIS_PARAMS = ("jh", "jc", "jz", "jn")
_DIAGNOSTICS = ("mean_r", "mean_cos_theta")


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    if z.real == 0:
        return f"{z.imag:.12g}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


@dataclass(frozen=True)
class SweepSpec:
    """Two-axis coupling sweep of one diagnostic in one symmetry sector."""

    base: ChainConfig
    axis1: tuple  # (parameter name, tuple of complex values)
    axis2: tuple
    diagnostic: str
    sector: tuple  # (M, k_index)
    central_fraction: float = 0.8

    def __post_init__(self):
        for name, values in (self.axis1, self.axis2):
            if name not in _AXIS_PARAMS:
                raise ValueError(f"unknown sweep parameter {name!r}")
            if len(values) == 0:
                raise ValueError(f"axis {name!r} has no values")
        if self.diagnostic not in _DIAGNOSTICS:
            raise ValueError(f"unknown diagnostic {self.diagnostic!r}")
        if self.axis1[0] == "jn" or self.axis2[0] == "jn":
            if not self.base.hops:
                raise ValueError("sweeping jn requires a hop term in the base config")
        object.__setattr__(self, "axis1", (self.axis1[0], tuple(map(complex, self.axis1[1]))))
        object.__setattr__(self, "axis2", (self.axis2[0], tuple(map(complex, self.axis2[1]))))

    def cell_config(self, i: int, j: int) -> ChainConfig:
        updates = {self.axis1[0]: self.axis1[1][i]}
        updates[self.axis2[0]] = self.axis2[1][j]
        cfg = self.base
        if "jn" in updates:
            jn = updates.pop("jn")
            dist = cfg.hops[0][0]
            hops = ((dist, jn),) + cfg.hops[1:]
            cfg = dataclasses.replace(cfg, hops=hops)
        return dataclasses.replace(cfg, **updates)

    def to_json_dict(self) -> dict:
        return {
            "base": {
                "n_sites": self.base.n_sites,
                "jh": [self.base.jh.real, self.base.jh.imag],
                "jc": [self.base.jc.real, self.base.jc.imag],
                "jz": [self.base.jz.real, self.base.jz.imag],
                "hops": [[d, j.real, j.imag] for d, j in self.base.hops],
            },
            "axis1": [self.axis1[0], [[v.real, v.imag] for v in self.axis1[1]]],
            "axis2": [self.axis2[0], [[v.real, v.imag] for v in self.axis2[1]]],
            "diagnostic": self.diagnostic,
            "sector": list(self.sector),
            "central_fraction": self.central_fraction,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SweepSpec":
        base = data["base"]
        cfg = ChainConfig(
            n_sites=base["n_sites"],
            jh=complex(*base["jh"]),
            jc=complex(*base["jc"]),
            jz=complex(*base["jz"]),
            hops=tuple((d, complex(re, im)) for d, re, im in base["hops"]),
        )
        return cls(
            base=cfg,
            axis1=(data["axis1"][0], tuple(complex(re, im) for re, im in data["axis1"][1])),
            axis2=(data["axis2"][0], tuple(complex(re, im) for re, im in data["axis2"][1])),
            diagnostic=data["diagnostic"],
            sector=tuple(data["sector"]),
            central_fraction=data.get("central_fraction", 0.8),
        )

    def config_hash(self) -> str:
        blob = json.dumps(self.to_json_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class SweepResult:
    spec: SweepSpec
    grid: np.ndarray              # diagnostic values, NaN on failure
    status: np.ndarray            # 'ok' | 'failed:<msg>'
    dim: int
    cell_meta: list = field(default_factory=list)
    manifest: dict = field(default_factory=dict)


def _evaluate_cell(spec: SweepSpec, i: int, j: int) -> dict:
    cfg = spec.cell_config(i, j)
    M, kappa = spec.sector
    sec = build_sector(cfg, M, kappa)
    t0 = time.perf_counter()
    H = build_hamiltonian(cfg, sec)
    es = diagonalize(H, want_vectors=False)
    dropped = 0
    if spec.diagnostic == "mean_r":
        if H.hermitian_flag != "hermitian":
            raise ValueError("mean_r requires a Hermitian cell; use mean_cos_theta")
        stats = r_statistic(es.values.real, central_fraction=spec.central_fraction)
        value = stats.mean_r
        dropped = stats.dropped_degenerate
    else:
        stats = csr(es.values)
        value = stats.mean_cos_theta
        dropped = stats.collapsed_duplicates
    return {
        "i": i,
        "j": j,
        "value": value,
        "dim": sec.dim,
        "dropped": dropped,
        "wall_time": time.perf_counter() - t0,
        "status": "ok",
    }


def run_sweep(spec: SweepSpec, out_dir, resume: bool = False) -> SweepResult:
    """Evaluate every grid cell, checkpointing each to ``out_dir/checkpoints``.

    With ``resume`` set, cells whose checkpoint exists are loaded instead of
    recomputed; per-cell failures are recorded and the sweep continues.
    Writes ``sweep.csv`` and ``manifest.json`` into ``out_dir``.
    """
    os.makedirs(out_dir, exist_ok=True)
    ckpt_dir = os.path.join(out_dir, "checkpoints")
    os.makedirs(ckpt_dir, exist_ok=True)
    n1, n2 = len(spec.axis1[1]), len(spec.axis2[1])
    grid = np.full((n1, n2), np.nan)
    status = np.full((n1, n2), "", dtype=object)
    cell_meta = []
    t_start = time.time()
    for i in range(n1):
        for j in range(n2):
            path = os.path.join(ckpt_dir, f"cell_{i:04d}_{j:04d}.json")
            if resume and os.path.exists(path):
                with open(path) as fh:
                    cell = json.load(fh)
            else:
                try:
                    cell = _evaluate_cell(spec, i, j)
                except Exception as exc:  # record and continue
                    cell = {"i": i, "j": j, "value": None, "dim": 0,
                            "dropped": 0, "wall_time": 0.0,
                            "status": f"failed:{exc}"}
                tmp = path + ".tmp"
                with open(tmp, "w") as fh:
                    json.dump(cell, fh)
                os.replace(tmp, path)  # atomic per-cell checkpoint
            cell_meta.append(cell)
            status[i, j] = cell["status"]
            if cell["status"] == "ok":
                grid[i, j] = cell["value"]
    manifest = {
        "config_hash": spec.config_hash(),
        "spec": spec.to_json_dict(),
        "code_version": _package_version(),
        "threads": os.environ.get("OMP_NUM_THREADS", "default"),
        "wall_time": time.time() - t_start,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    result = SweepResult(spec=spec, grid=grid, status=status,
                         dim=max((c["dim"] for c in cell_meta), default=0),
                         cell_meta=cell_meta, manifest=manifest)
    _write_csv(result, os.path.join(out_dir, "sweep.csv"))
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    return result


def _write_csv(result: SweepResult, path) -> None:
    spec = result.spec
    lines = [f"# diagnostic={spec.diagnostic} sector={spec.sector} "
             f"hash={spec.config_hash()}",
             "axis1,axis2,value,dim,status"]
    for cell in result.cell_meta:
        i, j = cell["i"], cell["j"]
        v1 = _fmt_complex(spec.axis1[1][i])
        v2 = _fmt_complex(spec.axis2[1][j])
        value = "" if cell["value"] is None else f"{cell['value']:.12g}"
        lines.append(f"{v1},{v2},{value},{cell['dim']},{cell['status']}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _package_version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("spin1chain")
    except PackageNotFoundError:
        return "unknown"
