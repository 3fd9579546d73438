"""Full-space time evolution under exp(-iHt) and fidelity time series.

Evolution is spectral and sector-blocked: the initial state is projected onto
every (M, k) block, propagated with that block's eigendecomposition, and
re-embedded.  For Hermitian couplings this is exactly unitary; for complex
couplings the norm drifts and the fidelity is reported both literally,
F(t) = |<psi_0|psi(t)>|^2, and divided by <psi(t)|psi(t)>.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .basis import ChainConfig, all_sectors, sector_embed_matrix
from .operators import build_hamiltonian

DEFAULT_MAX_SITES = 10


@dataclass
class FidelitySeries:
    times: np.ndarray
    fidelity: np.ndarray            # series selected by normalization_mode
    fidelity_literal: np.ndarray
    fidelity_normalized: np.ndarray
    norm: np.ndarray                # <psi(t)|psi(t)>
    normalization_mode: str         # 'literal' | 'normalized'


class FullSpacePropagator:
    """Per-sector eigendecompositions of exp(-iHt), reusable across times."""

    def __init__(self, cfg: ChainConfig, max_sites: int = DEFAULT_MAX_SITES,
                 noise_floor: float = 1e-12):
        if cfg.n_sites > max_sites:
            raise ValueError(
                f"full-space evolution capped at N={max_sites} "
                f"(3^{cfg.n_sites} amplitudes requested); raise max_sites to override"
            )
        self.cfg = cfg
        self.noise_floor = float(noise_floor)
        self._sectors = all_sectors(cfg)
        self._cache: dict[int, tuple] = {}

    def _block(self, sec):
        """Eigendecomposition of one sector block, computed on first use.

        Lazy per-block diagonalization: a state typically occupies only a
        few sectors, and the projection test in the callers skips the rest.
        """
        key = id(sec)
        if key in self._cache:
            return self._cache[key]
        H = build_hamiltonian(self.cfg, sec)
        dense = H.dense()
        herm = H.hermitian_flag == "hermitian"
        if herm:
            vals, vecs = np.linalg.eigh(dense)
            block = (None, vals.astype(complex), vecs, vecs.conj().T, herm)
        else:
            vals, vecs = scipy.linalg.eig(dense)
            cond = np.linalg.cond(vecs)
            if cond > 1e10:
                warnings.warn(
                    f"ill-conditioned eigenbasis in sector (M={sec.M}, k={sec.k_index}) "
                    f"(cond={cond:.2e}); using dense exponentials for this block"
                )
                block = (dense, None, None, None, herm)
            else:
                block = (None, vals, vecs, np.linalg.inv(vecs), herm)
        self._cache[key] = block
        return block

    def _coefficients(self, inv, hermitian_block, comp):
        """Eigenbasis coordinates with the spectral noise floor applied.

        Non-normal evolution amplifies rounding-level coefficients by
        e^{Im(E) t}, swamping states that exactly inhabit an invariant
        subspace (e.g. the scar tower); coefficients below
        ``noise_floor * max|c|`` are indistinguishable from projection
        round-off and are dropped on the non-Hermitian path.
        """
        w = inv @ comp
        if not hermitian_block and self.noise_floor > 0:
            w = np.where(np.abs(w) < self.noise_floor * np.abs(w).max(), 0.0, w)
        return w

    def evolve(self, psi0: np.ndarray, t: float) -> np.ndarray:
        """exp(-iHt) |psi0> as a full-space vector."""
        psi0 = self._check_state(psi0)
        out = np.zeros_like(psi0)
        for sec in self._sectors:
            E = sector_embed_matrix(sec)
            comp = E.conj().T @ psi0
            if np.linalg.norm(comp) < 1e-15:
                continue
            dense, vals, vecs, inv, herm = self._block(sec)
            if dense is not None:
                evolved = scipy.linalg.expm(-1j * dense * t) @ comp
            else:
                evolved = vecs @ (np.exp(-1j * vals * t)
                                  * self._coefficients(inv, herm, comp))
            out += E @ evolved
        return out

    def fidelity_series(self, psi0: np.ndarray, t_grid,
                        mode: str = "literal") -> FidelitySeries:
        """F(t) = |<psi_0|exp(-iHt)|psi_0>|^2 along the grid; both modes recorded.

        Non-Hermitian spectra are propagated with the fastest-growing mode
        factored out (a global e^{-gamma t} rescaling of every block), so the
        normalized fidelity stays finite even when the literal overlap and
        norm overflow; the literal series then carries inf past the overflow
        point instead of poisoning the normalized one.
        """
        if mode not in ("literal", "normalized"):
            raise ValueError(f"unknown normalization mode {mode!r}")
        psi0 = self._check_state(psi0)
        t_grid = np.asarray(t_grid, dtype=float)
        occupied = []
        gamma = 0.0  # largest Im(E) over occupied blocks: global growth rate
        for sec in self._sectors:
            E = sector_embed_matrix(sec)
            comp = E.conj().T @ psi0
            if np.linalg.norm(comp) < 1e-15:
                continue
            dense, vals, vecs, inv, herm = self._block(sec)
            if vals is not None:
                gamma = max(gamma, float(vals.imag.max()))
            else:
                gamma = max(gamma, float(scipy.linalg.eigvals(dense).imag.max()))
            occupied.append((comp, dense, vals, vecs, inv, herm))
        overlap = np.zeros(len(t_grid), dtype=complex)
        norm_sq = np.zeros(len(t_grid))
        for comp, dense, vals, vecs, inv, herm in occupied:
            if dense is not None:
                shifted = dense - 1j * gamma * np.eye(len(dense))
                for i, t in enumerate(t_grid):
                    evolved = scipy.linalg.expm(-1j * shifted * t) @ comp
                    overlap[i] += np.vdot(comp, evolved)
                    norm_sq[i] += float(np.linalg.norm(evolved) ** 2)
            else:
                w = self._coefficients(inv, herm, comp)  # eigenbasis coordinates
                u = comp.conj() @ vecs                  # <comp| V
                phases = np.exp(-1j * np.outer(vals - 1j * gamma, t_grid))
                overlap += u @ (phases * w[:, None])
                gram = vecs.conj().T @ vecs             # embedding is isometric
                dw = phases * w[:, None]
                norm_sq += np.real(np.einsum("it,ij,jt->t", dw.conj(), gram, dw))
        with np.errstate(over="ignore"):
            growth = np.exp(2.0 * gamma * t_grid)
            literal = np.abs(overlap) ** 2 * growth
            norm = norm_sq * growth
        normalized = np.abs(overlap) ** 2 / norm_sq
        return FidelitySeries(
            times=t_grid,
            fidelity=literal if mode == "literal" else normalized,
            fidelity_literal=literal,
            fidelity_normalized=normalized,
            norm=norm,
            normalization_mode=mode,
        )

    def _check_state(self, psi0: np.ndarray) -> np.ndarray:
        psi0 = np.asarray(psi0, dtype=complex)
        if psi0.shape != (self.cfg.dim_full,):
            raise ValueError("state length does not match 3^N")
        if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
            raise ValueError("initial state must be normalized")
        return psi0


def evolve(cfg: ChainConfig, psi0: np.ndarray, t: float,
           max_sites: int = DEFAULT_MAX_SITES) -> np.ndarray:
    """One-shot exp(-iHt)|psi0>; build a FullSpacePropagator for many times."""
    return FullSpacePropagator(cfg, max_sites=max_sites).evolve(psi0, t)


def fidelity_series(cfg: ChainConfig, psi0: np.ndarray, t_grid,
                    mode: str = "literal",
                    max_sites: int = DEFAULT_MAX_SITES) -> FidelitySeries:
    """Fidelity of psi0 with its time-evolved image on a time grid."""
    return FullSpacePropagator(cfg, max_sites=max_sites).fidelity_series(
        psi0, t_grid, mode=mode
    )


def default_time_grid(t_max: float = 50.0, step: float = 0.02) -> np.ndarray:
    """0..t_max inclusive; the default step resolves the 2*pi/J_z revivals."""
    n = int(round(t_max / step))
    return np.linspace(0.0, n * step, n + 1)
