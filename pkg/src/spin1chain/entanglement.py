"""Reduced density matrices, von Neumann entropy and eigenspectrum entropy scans.

The half-chain entropy of every eigenstate is the workhorse scar detector:
the exact tower states sit far below the thermal entropy band, so a robust
dip threshold (median - 3*MAD by default) flags them without any absolute
entropy scale.  Entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import SymmetrySector, sector_embed_matrix
from .spectra import EigenSystem


def reduced_density_matrix(v: np.ndarray, cut: int, normalize: bool = False) -> np.ndarray:
    """Trace out sites cut+1..N of a full-space pure state.

    Sites 1..cut form subsystem A (the low base-3 digits); the result is a
    3^cut x 3^cut Hermitian, unit-trace, PSD matrix.
    """
    v = np.asarray(v, dtype=complex)
    n_sites = round(np.log(len(v)) / np.log(3))
    if 3**n_sites != len(v):
        raise ValueError("vector length is not a power of 3")
    if not 1 <= cut < n_sites:
        raise ValueError(f"cut must be in 1..N-1, got {cut}")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-10:
        if not normalize:
            raise ValueError(f"state is not normalized (norm {nrm}); "
                             "pass normalize=True to renormalize")
        v = v / nrm
    # code = b * 3^cut + a, so rows index subsystem B and columns subsystem A
    mat = v.reshape(3 ** (n_sites - cut), 3**cut)
    return mat.T @ mat.conj()


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S = -Tr[rho ln rho]; eigenvalues below 1e-14 are dropped."""
    rho = np.asarray(rho)
    trace = np.trace(rho)
    if abs(trace - 1.0) > 1e-8:
        raise ValueError(f"density matrix trace {trace} deviates from 1")
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > 1e-14]
    return float(-(evals * np.log(evals)).sum())


def entanglement_entropy(v: np.ndarray, cut: int, normalize: bool = False) -> float:
    """Half-cut von Neumann entropy of a full-space pure state (nats)."""
    rho = reduced_density_matrix(v, cut, normalize=normalize)
    return von_neumann_entropy(rho)


@dataclass
class EntropyScan:
    """Per-eigenstate half-chain entropies of one sector eigensystem."""

    eigen_index: np.ndarray
    entropies: np.ndarray
    eigenvalue_re: np.ndarray
    eigenvalue_im: np.ndarray
    scar_candidates: np.ndarray
    threshold: float
    cut: int


def default_scar_threshold(entropies: np.ndarray) -> float:
    """Robust dip detector: median(S) - 3 * MAD."""
    med = float(np.median(entropies))
    mad = float(np.median(np.abs(entropies - med)))
    return med - 3.0 * mad


def entropy_scan(es: EigenSystem, sec: SymmetrySector, cut: int | None = None,
                 scar_threshold: float | None = None) -> EntropyScan:
    """Half-chain entropy of every (right) eigenvector of a sector eigensystem.

    Right eigenvectors are unit-normalized before the partial trace (the
    biorthogonal normalization would not give a valid density matrix for
    non-Hermitian spectra).  States with entropy below the threshold are
    flagged as scar candidates.
    """
    if es.right_vectors is None:
        raise ValueError("eigensystem has no right eigenvectors")
    if cut is None:
        cut = sec.n_sites // 2
    embed = sector_embed_matrix(sec)
    entropies = np.empty(es.dim)
    for i in range(es.dim):
        vec = es.right_vectors[:, i]
        full = embed @ (vec / np.linalg.norm(vec))
        entropies[i] = entanglement_entropy(full, cut, normalize=True)
    if scar_threshold is None:
        scar_threshold = default_scar_threshold(entropies)
    idx = np.arange(es.dim)
    return EntropyScan(
        eigen_index=idx,
        entropies=entropies,
        eigenvalue_re=es.values.real.copy(),
        eigenvalue_im=es.values.imag.copy(),
        scar_candidates=idx[entropies < scar_threshold],
        threshold=float(scar_threshold),
        cut=cut,
    )
