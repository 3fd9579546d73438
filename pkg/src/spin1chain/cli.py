"""Command-line interface: every diagnostic as a subcommand with run manifests.

Complex couplings are written as ``RE`` or ``RE,IM`` (e.g. ``--jn 0,0.2`` for
0.2i).  Each run resolves its configuration, writes the outputs into
``out/<subcommand>/<config-hash>/`` and drops a ``manifest.json`` next to
them; every CSV carries a ``# manifest: <path>`` header line.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from .basis import ChainConfig, build_sector
from .dynamics import default_time_grid, fidelity_series
from .entanglement import entropy_scan
from .krylov import bilanczos_matrix, equal_weight_initial_state, krylov_complexity
from .operators import build_hamiltonian
from .spectra import (
    csr,
    diagonalize,
    ginibre_levels,
    goe_levels,
    poisson_levels,
    poisson_spacing_pdf,
    r_statistic,
    reference_constants,
    uniform_complex_levels,
    wigner_surmise_pdf,
)
from .states import coherent_state, neel_state, tower_energy, verify_tower
from .sweeps import SweepSpec, run_sweep


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    """'RE' or 'RE,IM' -> complex; round-trips through format_complex."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"malformed complex literal {text!r}; expected RE or RE,IM")


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g},{z.imag:g}"


def _add_common(parser: _Parser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config file with defaults")
    parser.add_argument("--n", type=int, help="number of sites")
    parser.add_argument("--jh", help="Heisenberg coupling (RE[,IM])")
    parser.add_argument("--jc", help="chiral coupling (RE[,IM])")
    parser.add_argument("--jz", help="Zeeman coupling (RE[,IM])")
    parser.add_argument("--jn", help="long-range hop coupling (RE[,IM])")
    parser.add_argument("--hop", type=int, help="hop distance n")
    parser.add_argument("--sector", help="M,K symmetry sector")
    parser.add_argument("--out", default="out", help="output directory root")
    parser.add_argument("--threads", type=int, help="thread cap for numerical kernels")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed for synthetic ensembles")


# Workhorse parameter point: (J_h, J_c, J_z, n) = (1, 1, 0.5, 3), sector (0, 0).
_DEFAULTS = {
    "n": 12,
    "jh": 1.0 + 0.0j,
    "jc": 1.0 + 0.0j,
    "jz": 0.5 + 0.0j,
    "jn": 0.0 + 0.0j,
    "hop": 3,
    "sector": (0, 0),
}


def resolve_config(args) -> dict:
    resolved = dict(_DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file: {exc}")
        for key in ("n", "hop"):
            if key in file_cfg:
                resolved[key] = int(file_cfg[key])
        for key in ("jh", "jc", "jz", "jn"):
            if key in file_cfg:
                val = file_cfg[key]
                resolved[key] = complex(*val) if isinstance(val, list) else complex(val, 0)
        if "sector" in file_cfg:
            resolved["sector"] = tuple(file_cfg["sector"])
    for key in ("jh", "jc", "jz", "jn"):
        val = getattr(args, key, None)
        if val is not None:
            resolved[key] = parse_complex(val)
    if getattr(args, "n", None) is not None:
        resolved["n"] = args.n
    if getattr(args, "hop", None) is not None:
        resolved["hop"] = args.hop
    if getattr(args, "sector", None) is not None:
        parts = args.sector.split(",")
        if len(parts) != 2:
            raise UsageError(f"--sector expects M,K, got {args.sector!r}")
        try:
            resolved["sector"] = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise UsageError(f"--sector expects integers, got {args.sector!r}")
    resolved["seed"] = getattr(args, "seed", 0)
    return resolved


def chain_config(resolved: dict) -> ChainConfig:
    hops = ()
    if resolved["jn"] != 0:
        hops = ((resolved["hop"], resolved["jn"]),)
    return ChainConfig(
        n_sites=resolved["n"],
        jh=resolved["jh"],
        jc=resolved["jc"],
        jz=resolved["jz"],
        hops=hops,
    )


class RunContext:
    """Output directory + manifest for one CLI run."""

    def __init__(self, subcommand: str, resolved: dict, out_root: str):
        self.subcommand = subcommand
        self.resolved = resolved
        blob = json.dumps(_jsonable(resolved), sort_keys=True).encode()
        self.config_hash = hashlib.sha256(blob).hexdigest()[:12]
        self.out_dir = os.path.join(out_root, subcommand, self.config_hash)
        os.makedirs(self.out_dir, exist_ok=True)
        self.manifest_path = os.path.join(self.out_dir, "manifest.json")
        self.t0 = time.time()
        self.warnings: list[str] = []
        self.outputs: list[str] = []

    def path(self, name: str) -> str:
        self.outputs.append(name)
        return os.path.join(self.out_dir, name)

    def csv_header(self) -> str:
        return f"# manifest: {self.manifest_path}"

    def finish(self) -> None:
        manifest = {
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "subcommand": self.subcommand,
            "config": _jsonable(self.resolved),
            "config_hash": self.config_hash,
            "code_version": _version(),
            "outputs": self.outputs,
            "wall_time": time.time() - self.t0,
            "warnings": self.warnings,
        }
        with open(self.manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=2)


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("spin1chain")
    except PackageNotFoundError:
        return "unknown"


def _sector_hamiltonian(resolved: dict):
    cfg = chain_config(resolved)
    M, kappa = resolved["sector"]
    sec = build_sector(cfg, M, kappa)
    if sec.dim == 0:
        raise UsageError(f"sector (M={M}, k={kappa}) is empty for N={cfg.n_sites}")
    return cfg, sec, build_hamiltonian(cfg, sec)


def cmd_spectrum(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("spectrum", resolved, args.out)
    _, sec, H = _sector_hamiltonian(resolved)
    es = diagonalize(H, want_vectors=False)
    order = np.lexsort((es.values.imag, es.values.real))
    vals = es.values[order]
    with open(ctx.path("spectrum.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("re,im\n")
        for v in vals:
            fh.write(f"{v.real:.17g},{v.imag:.17g}\n")
    ctx.finish()
    print(f"sector dim {sec.dim}; spectrum written to {ctx.out_dir}")
    return 0


def cmd_rstat(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("rstat", resolved, args.out)
    _, sec, H = _sector_hamiltonian(resolved)
    if H.hermitian_flag != "hermitian":
        raise ValueError("r-statistics need a Hermitian Hamiltonian; use the csr subcommand")
    es = diagonalize(H, want_vectors=False)
    stats = r_statistic(es.values.real, central_fraction=args.central_fraction)
    if stats.dropped_degenerate:
        ctx.warnings.append(f"dropped {stats.dropped_degenerate} degenerate spacings")
    with open(ctx.path("rstat.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write(f"# mean_r = {stats.mean_r:.12g} "
                 f"(central_fraction={stats.central_fraction})\n")
        fh.write("r\n")
        for r in stats.ratios:
            fh.write(f"{r:.12g}\n")
    ctx.finish()
    print(f"mean_r = {stats.mean_r:.6f} (dim {sec.dim})")
    return 0


def cmd_csr(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("csr", resolved, args.out)
    _, sec, H = _sector_hamiltonian(resolved)
    es = diagonalize(H, want_vectors=False)
    stats = csr(es.values)
    if stats.collapsed_duplicates:
        ctx.warnings.append(f"collapsed {stats.collapsed_duplicates} duplicate eigenvalues")
    with open(ctx.path("csr.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write(f"# mean_cos_theta = {stats.mean_cos_theta:.12g} "
                 f"mean_abs_lambda = {stats.mean_abs_lambda:.12g}\n")
        fh.write("re_lambda,im_lambda,theta\n")
        for lam in stats.lambdas:
            fh.write(f"{lam.real:.12g},{lam.imag:.12g},{np.angle(lam):.12g}\n")
    ctx.finish()
    print(f"mean_cos_theta = {stats.mean_cos_theta:.6f} (dim {sec.dim})")
    return 0


def cmd_krylov(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("krylov", resolved, args.out)
    _, sec, H = _sector_hamiltonian(resolved)
    psi0 = equal_weight_initial_state(H)
    chain = bilanczos_matrix(H, psi0, m_max=args.m_max or sec.dim)
    t_grid = np.arange(0.0, args.t_max + args.dt / 2, args.dt)
    curve = krylov_complexity(chain, t_grid,
                              hermitian=H.hermitian_flag == "hermitian")
    if chain.terminated_early:
        ctx.warnings.append(f"chain terminated early at step {chain.breakdown_index}")
    if curve.ode_fallback:
        ctx.warnings.append("amplitude evolution used the ODE fallback")
    with open(ctx.path("krylov.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("t,ck_normalized,ck_raw,total_norm\n")
        for t, cn, cr, nn in zip(curve.times, curve.ck_normalized,
                                 curve.ck_raw, curve.amplitude_norms):
            fh.write(f"{t:.12g},{cn:.12g},{cr:.12g},{nn:.12g}\n")
    with open(ctx.path("lanczos_coeffs.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("n,re_a,im_a,re_b,im_b,re_c,im_c\n")
        for n in range(chain.m):
            b = chain.b[n - 1] if n >= 1 else 0.0
            c = chain.c[n - 1] if n >= 1 else 0.0
            fh.write(f"{n},{chain.a[n].real:.12g},{chain.a[n].imag:.12g},"
                     f"{complex(b).real:.12g},{complex(b).imag:.12g},"
                     f"{complex(c).real:.12g},{complex(c).imag:.12g}\n")
    ctx.finish()
    print(f"krylov chain length {chain.m} (dim {sec.dim}); curves in {ctx.out_dir}")
    return 0


def cmd_entropy(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("entropy", resolved, args.out)
    _, sec, H = _sector_hamiltonian(resolved)
    es = diagonalize(H, want_vectors=True)
    scan = entropy_scan(es, sec)
    with open(ctx.path("entropy.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write(f"# scar_threshold = {scan.threshold:.12g} cut = {scan.cut}\n")
        fh.write("index,re_E,im_E,S_A,is_scar_candidate\n")
        flags = np.zeros(len(scan.entropies), dtype=int)
        flags[scan.scar_candidates] = 1
        for i in range(len(scan.entropies)):
            fh.write(f"{i},{scan.eigenvalue_re[i]:.12g},{scan.eigenvalue_im[i]:.12g},"
                     f"{scan.entropies[i]:.12g},{flags[i]}\n")
    ctx.finish()
    print(f"{len(scan.scar_candidates)} scar candidates below "
          f"S = {scan.threshold:.4f} (dim {sec.dim})")
    return 0


def cmd_fidelity(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("fidelity", resolved, args.out)
    cfg = chain_config(resolved)
    if args.initial == "coherent":
        psi0 = coherent_state(cfg.n_sites, parse_complex(args.beta)).vector
    else:
        psi0 = neel_state(cfg.n_sites)
    t_grid = default_time_grid(args.t_max, args.dt)
    series = fidelity_series(cfg, psi0, t_grid, max_sites=max(cfg.n_sites, 10))
    with open(ctx.path("fidelity.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("t,F_literal,F_normalized,norm\n")
        for t, fl, fn, nn in zip(series.times, series.fidelity_literal,
                                 series.fidelity_normalized, series.norm):
            fh.write(f"{t:.12g},{fl:.12g},{fn:.12g},{nn:.12g}\n")
    ctx.finish()
    print(f"fidelity series ({args.initial} state) written to {ctx.out_dir}")
    return 0


def cmd_verify_tower(args) -> int:
    resolved = resolve_config(args)
    ctx = RunContext("verify-tower", resolved, args.out)
    cfg = chain_config(resolved)
    worst = 0.0
    worst_hop = 0.0
    lines = ["p,energy_re,energy_im,residual,hop_norm"]
    for p in range(2 * cfg.n_sites + 1):
        res = verify_tower(cfg, p)
        e = tower_energy(cfg, p)
        worst = max(worst, res.residual)
        worst_hop = max(worst_hop, res.hop_norm)
        lines.append(f"{p},{e.real:.12g},{e.imag:.12g},"
                     f"{res.residual:.3e},{res.hop_norm:.3e}")
    with open(ctx.path("tower.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("\n".join(lines) + "\n")
    ctx.finish()
    print(f"max residual {worst:.3e}, max hop-term norm {worst_hop:.3e} "
          f"over p = 0..{2 * cfg.n_sites}")
    return 0 if worst < 1e-8 else 2


def cmd_sweep(args) -> int:
    try:
        with open(args.spec) as fh:
            spec = SweepSpec.from_json_dict(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read sweep spec: {exc}")
    out_dir = os.path.join(args.out, "sweep", spec.config_hash())
    result = run_sweep(spec, out_dir, resume=args.resume)
    failed = int(np.sum(result.status != "ok"))
    print(f"sweep {spec.config_hash()} complete; "
          f"{result.grid.size - failed}/{result.grid.size} cells ok -> {out_dir}")
    return 0 if failed == 0 else 2


def cmd_references(args) -> int:
    resolved = {"ensemble": args.ensemble, "samples": args.samples, "seed": args.seed}
    ctx = RunContext("references", resolved, args.out)
    rng = np.random.default_rng(args.seed)
    with open(ctx.path("constants.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("name,value\n")
        for name, value in reference_constants().items():
            fh.write(f"{name},{value}\n")
    s = np.linspace(0.0, 5.0, 501)
    with open(ctx.path("curves.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("s,poisson,wigner_goe\n")
        for x, p, w in zip(s, poisson_spacing_pdf(s), wigner_surmise_pdf(s)):
            fh.write(f"{x:.6g},{p:.12g},{w:.12g}\n")
    samplers = {
        "poisson": lambda: poisson_levels(args.samples, rng),
        "goe": lambda: goe_levels(args.samples, rng),
        "ginibre": lambda: ginibre_levels(args.samples, rng),
        "uniform": lambda: uniform_complex_levels(args.samples, rng),
    }
    levels = samplers[args.ensemble]()
    with open(ctx.path("levels.csv"), "w") as fh:
        fh.write(ctx.csv_header() + "\n")
        fh.write("re,im\n")
        for v in np.atleast_1d(levels):
            v = complex(v)
            fh.write(f"{v.real:.12g},{v.imag:.12g}\n")
    if args.ensemble in ("poisson", "goe"):
        value = r_statistic(np.real(levels)).mean_r
        label = "mean_r"
    else:
        value = csr(levels).mean_cos_theta
        label = "mean_cos_theta"
    ctx.finish()
    print(f"{args.ensemble}: {label} = {value:.4f}; reference files in {ctx.out_dir}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="spin1chain",
                     description="spin-1 chain spectral and scar diagnostics")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spectrum", help="diagonalize one sector and dump eigenvalues")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("rstat", help="mean adjacent-spacing ratio of a Hermitian sector")
    _add_common(p)
    p.add_argument("--central-fraction", type=float, default=0.8)
    p.set_defaults(func=cmd_rstat)

    p = sub.add_parser("csr", help="complex spacing ratio statistics of a sector")
    _add_common(p)
    p.set_defaults(func=cmd_csr)

    p = sub.add_parser("krylov", help="bi-Lanczos Krylov complexity of a sector")
    _add_common(p)
    p.add_argument("--t-max", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--m-max", type=int, help="chain length cap (default: sector dim)")
    p.set_defaults(func=cmd_krylov)

    p = sub.add_parser("entropy", help="entanglement entropy scan of a sector eigensystem")
    _add_common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("fidelity", help="fidelity dynamics of coherent or Neel states")
    _add_common(p)
    p.add_argument("--initial", choices=("coherent", "neel"), default="coherent")
    p.add_argument("--beta", default="1", help="coherent-state parameter (RE[,IM])")
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--dt", type=float, default=0.02)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("verify-tower", help="residuals of the exact tower states")
    _add_common(p)
    p.set_defaults(func=cmd_verify_tower)

    p = sub.add_parser("sweep", help="run a two-axis coupling sweep from a JSON spec")
    p.add_argument("--spec", required=True, help="sweep spec JSON file")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("references", help="reference ensembles, constants and curves")
    p.add_argument("--ensemble", choices=("poisson", "goe", "ginibre", "uniform"),
                   default="poisson")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_references)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "threads", None):
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
