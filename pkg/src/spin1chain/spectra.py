"""Dense eigendecompositions and spectral statistics.

Covers the Hermitian diagnostics (ratio of adjacent level spacings, unfolded
spacing distributions) and the non-Hermitian complex spacing ratio

    lambda_j = (E_j^NN - E_j) / (E_j^NNN - E_j),

whose angular average <cos theta> separates uncorrelated complex spectra
(~0) from Ginibre-like level repulsion (~ -0.24).  Reference ensembles
(Poisson, GOE, Ginibre, uniform complex) are provided for calibration.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .operators import SectorMatrix

# Reference constants for the spacing-ratio and CSR diagnostics.
R_POISSON = 0.386
R_GOE = 0.536
R_GUE = 0.603
COS_THETA_GINIBRE = -0.24
COS_THETA_POISSON = 0.0


@dataclass
class EigenSystem:
    """Eigenvalues and (right, optionally left) eigenvectors of a sector matrix."""

    values: np.ndarray
    right_vectors: np.ndarray | None = None
    left_vectors: np.ndarray | None = None
    is_hermitian_input: bool = False

    @property
    def dim(self) -> int:
        return len(self.values)


def diagonalize(A: SectorMatrix | np.ndarray, want_left: bool = False,
                want_vectors: bool = True, hermitian: bool | None = None) -> EigenSystem:
    """Full dense eigendecomposition of a sector matrix.

    Hermitian inputs take the symmetric path (real ascending eigenvalues,
    orthonormal vectors).  The general path returns right and, on request,
    left eigenvectors rescaled so that <L_i|R_i> = 1.
    """
    if isinstance(A, SectorMatrix):
        dense = A.dense()
        if hermitian is None:
            hermitian = A.hermitian_flag == "hermitian"
    else:
        dense = np.asarray(A, dtype=complex)
        if hermitian is None:
            hermitian = bool(np.max(np.abs(dense - dense.conj().T)) < 1e-12)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(dense)):
        raise ValueError("matrix has non-finite entries")

    if hermitian:
        if want_vectors:
            vals, vecs = np.linalg.eigh(dense)
        else:
            vals, vecs = np.linalg.eigvalsh(dense), None
        return EigenSystem(values=vals.astype(complex), right_vectors=vecs,
                           left_vectors=vecs if want_left else None,
                           is_hermitian_input=True)

    if not want_vectors:
        return EigenSystem(values=scipy.linalg.eigvals(dense), is_hermitian_input=False)
    if want_left:
        vals, vl, vr = scipy.linalg.eig(dense, left=True, right=True)
        # scipy returns vl with vl^H A = w vl^H; rescale for <L_i|R_i> = 1
        overlap = np.einsum("ij,ij->j", vl.conj(), vr)
        small = np.abs(overlap) < 1e-12
        if np.any(small):
            warnings.warn(f"{small.sum()} near-defective eigenpairs; "
                          "left-vector normalization skipped for those")
            overlap[small] = 1.0
        vl = vl / overlap.conj()[None, :]
        return EigenSystem(values=vals, right_vectors=vr, left_vectors=vl)
    vals, vr = scipy.linalg.eig(dense, right=True)
    return EigenSystem(values=vals, right_vectors=vr)


@dataclass
class RStatistics:
    """Adjacent-spacing ratio statistics over the central part of a real spectrum."""

    mean_r: float
    ratios: np.ndarray
    spacing_histogram: tuple  # (bin edges, densities) of unfolded spacings
    central_fraction: float
    dropped_degenerate: int = 0


def _central_slice(n: int, central_fraction: float) -> slice:
    if not 0.0 < central_fraction <= 1.0:
        raise ValueError("central_fraction must be in (0, 1]")
    keep = max(int(round(n * central_fraction)), 1)
    start = (n - keep) // 2
    return slice(start, start + keep)


def r_statistic(values, central_fraction: float = 0.8, bins: int = 50) -> RStatistics:
    """Mean ratio of adjacent level spacings, r_i = min(s_{i-1}/s_i, s_i/s_{i-1}).

    Keeps the central fraction of the sorted spectrum; spacings below
    1e-12 * spectral width are treated as degeneracies and dropped.
    """
    E = np.sort(np.asarray(values, dtype=float))
    E = E[_central_slice(len(E), central_fraction)]
    if len(E) < 10:
        raise ValueError("need at least 10 levels after central truncation")
    spacings = np.diff(E)
    width = E[-1] - E[0]
    if width <= 0:
        raise ValueError("spectrum is fully degenerate")
    keep = spacings > 1e-12 * width
    dropped = int((~keep).sum())
    s = spacings[keep]
    if len(s) < 2:
        raise ValueError("too few distinct spacings")
    ratios = np.minimum(s[:-1], s[1:]) / np.maximum(s[:-1], s[1:])
    try:
        unfolded = unfold(values, poly_degree=min(10, max(1, len(E) // 20)),
                          central_fraction=central_fraction)
        dens, edges = np.histogram(unfolded, bins=bins, density=True)
    except ValueError:
        dens, edges = np.histogram(s / s.mean(), bins=bins, density=True)
    return RStatistics(mean_r=float(ratios.mean()), ratios=ratios,
                       spacing_histogram=(edges, dens),
                       central_fraction=central_fraction, dropped_degenerate=dropped)


def unfold(values, poly_degree: int = 10, central_fraction: float = 0.8) -> np.ndarray:
    """Unfolded nearest-neighbor spacings via a polynomial fit of the staircase.

    Fits the cumulative level count N(E) with a polynomial of the given degree
    and returns the spacings of the mapped central levels; their mean is 1 up
    to the quality of the fit.
    """
    E = np.sort(np.asarray(values, dtype=float))
    if len(E) < 50:
        raise ValueError("need at least 50 levels to unfold")
    staircase = np.arange(1, len(E) + 1, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("error", np.exceptions.RankWarning)
        try:
            fit = np.polynomial.Polynomial.fit(E, staircase, deg=poly_degree)
        except np.exceptions.RankWarning as exc:
            raise ValueError(
                f"staircase fit of degree {poly_degree} is ill-conditioned; "
                "try a lower degree"
            ) from exc
    mapped = fit(E[_central_slice(len(E), central_fraction)])
    return np.diff(mapped)


@dataclass
class CsrStatistics:
    """Complex spacing ratios and their angular/radial averages."""

    lambdas: np.ndarray
    mean_cos_theta: float
    mean_abs_lambda: float
    collapsed_duplicates: int = 0


def csr(values) -> CsrStatistics:
    """Complex spacing ratio statistics of a (generally complex) spectrum.

    Nearest and next-to-nearest neighbors are found by exhaustive Euclidean
    search; exact distance ties are broken by (real, imag) order of the
    candidate.  Eigenvalues closer than 1e-13 collapse to one representative.
    """
    E = np.asarray(values, dtype=complex)
    order = np.lexsort((E.imag, E.real))
    E = E[order]
    # collapse near-duplicates (they would make NN spacings meaningless)
    keep = np.ones(len(E), dtype=bool)
    if len(E) > 1:
        dup = np.abs(np.diff(E)) < 1e-13
        keep[1:][dup] = False
    collapsed = int((~keep).sum())
    E = E[keep]
    if len(E) < 3:
        raise ValueError("need at least 3 distinct eigenvalues")
    lambdas = np.empty(len(E), dtype=complex)
    for j in range(len(E)):
        dist = np.abs(E - E[j])
        dist[j] = np.inf
        # candidates sorted ascending by distance; stable sort on the
        # (real, imag)-ordered array breaks exact ties lexicographically
        cand = np.argpartition(dist, 2)[:3]
        cand = cand[np.argsort(dist[cand], kind="stable")]
        nn, nnn = E[cand[0]], E[cand[1]]
        lambdas[j] = (nn - E[j]) / (nnn - E[j])
    return CsrStatistics(
        lambdas=lambdas,
        mean_cos_theta=float(np.mean(np.cos(np.angle(lambdas)))),
        mean_abs_lambda=float(np.mean(np.abs(lambdas))),
        collapsed_duplicates=collapsed,
    )


# ---------------------------------------------------------------------------
# Reference ensembles and closed-form curves


def poisson_levels(n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform levels: Poissonian spacing statistics, <r> ~ 0.386."""
    return np.sort(rng.uniform(0.0, 1.0, size=n))


def goe_levels(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Spectrum of one GOE matrix (real symmetric Gaussian), <r> ~ 0.536."""
    a = rng.normal(size=(dim, dim))
    return np.linalg.eigvalsh((a + a.T) / 2.0)


def ginibre_levels(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Spectrum of one complex Ginibre matrix, <cos theta> ~ -0.24."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return np.linalg.eigvals(a / np.sqrt(2.0 * dim))


def uniform_complex_levels(n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform points in the unit square: uncorrelated complex spectrum."""
    return rng.uniform(0.0, 1.0, size=n) + 1j * rng.uniform(0.0, 1.0, size=n)


def poisson_spacing_pdf(s) -> np.ndarray:
    """P(s) = exp(-s) for uncorrelated levels (unit mean spacing)."""
    return np.exp(-np.asarray(s, dtype=float))


def wigner_surmise_pdf(s) -> np.ndarray:
    """GOE Wigner surmise P(s) = (pi/2) s exp(-pi s^2 / 4)."""
    s = np.asarray(s, dtype=float)
    return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s**2)


def reference_constants() -> dict:
    return {
        "r_poisson": R_POISSON,
        "r_goe": R_GOE,
        "r_gue": R_GUE,
        "cos_theta_ginibre": COS_THETA_GINIBRE,
        "cos_theta_poisson": COS_THETA_POISSON,
    }
