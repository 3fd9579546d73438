"""Bi-Lanczos Krylov chains and spread (Krylov) complexity.

The two-sided recursion builds biorthogonal bases {|r_n>} (from H) and
{|l_n>} (from H^dagger) with <l_m|r_n> = delta_mn and a tridiagonal projected
operator

    H_eff = tridiag(b, a, c):  H_eff[n, n] = a_n,
                               H_eff[n+1, n] = b_{n+1},
                               H_eff[n, n+1] = c_{n+1}.

Amplitudes phi(t) = exp(-i H_eff t) e_0 give the complexity
C_K(t) = sum_n n |phi_n|^2; for non-Hermitian chains the norm generalizes to
sum_n |phi_n|^2 and C_K is reported both raw and norm-divided.

Full reorthogonalization against the opposite chain is applied at every step;
on Hermitian input the recursion reduces to standard Lanczos (b_n = c_n > 0).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg

from .operators import SectorMatrix


@dataclass
class KrylovChain:
    """Coefficients and biorthogonal bases of one bi-Lanczos run."""

    a: np.ndarray               # diagonal, length m
    b: np.ndarray               # sub-diagonal b_1..b_{m-1}, length m-1
    c: np.ndarray               # super-diagonal c_1..c_{m-1}, length m-1
    right_basis: np.ndarray     # (dim, m), state-carrying chain
    left_basis: np.ndarray      # (dim, m)
    terminated_early: bool = False
    breakdown_index: int | None = None

    @property
    def m(self) -> int:
        return len(self.a)

    def effective_matrix(self) -> np.ndarray:
        h = np.diag(self.a.astype(complex))
        if self.m > 1:
            h += np.diag(self.b.astype(complex), -1)
            h += np.diag(self.c.astype(complex), 1)
        return h

    def biorthogonality_defect(self) -> float:
        g = self.left_basis.conj().T @ self.right_basis
        return float(np.max(np.abs(g - np.eye(self.m))))


def bilanczos(apply, apply_adjoint, psi0: np.ndarray, m_max: int,
              breakdown_tol: float = 1e-12) -> KrylovChain:
    """Bi-Lanczos recursion with full two-sided reorthogonalization.

    ``apply``/``apply_adjoint`` are the actions of H and H^dagger.  Stops at
    ``m_max``, at the space dimension, or when |b_{n+1} c_{n+1}| falls below
    ``breakdown_tol`` times the running coefficient scale (invariant subspace
    reached; the truncated chain is returned with ``terminated_early`` set).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    dim = len(psi0)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    nrm = np.linalg.norm(psi0)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError("initial state must be normalized")
    m_cap = min(m_max, dim)
    R = np.zeros((dim, m_cap), dtype=complex)
    L = np.zeros((dim, m_cap), dtype=complex)
    R[:, 0] = psi0 / nrm
    L[:, 0] = psi0 / nrm
    a = np.zeros(m_cap, dtype=complex)
    b = np.zeros(max(m_cap - 1, 0), dtype=complex)
    c = np.zeros(max(m_cap - 1, 0), dtype=complex)
    terminated = False
    breakdown = None
    m = m_cap
    for n in range(m_cap):
        hr = apply(R[:, n])
        a[n] = np.vdot(L[:, n], hr)
        if n + 1 >= m_cap:
            break
        rp = hr - a[n] * R[:, n]
        lp = apply_adjoint(L[:, n]) - np.conj(a[n]) * L[:, n]
        if n > 0:
            rp -= c[n - 1] * R[:, n - 1]
            lp -= np.conj(b[n - 1]) * L[:, n - 1]
        # full reorthogonalization against the opposite chain, applied twice
        for _ in range(2):
            rp -= R[:, : n + 1] @ (L[:, : n + 1].conj().T @ rp)
            lp -= L[:, : n + 1] @ (R[:, : n + 1].conj().T @ lp)
        w = np.vdot(lp, rp)
        bn = np.linalg.norm(rp)
        scale = max(1.0, np.abs(a[: n + 1]).max(),
                    np.abs(b[:n]).max() if n else 0.0)
        if bn < breakdown_tol * scale or abs(w) < (breakdown_tol * scale) ** 2:
            terminated = True
            breakdown = n + 1
            m = n + 1
            break
        cn = w / bn
        b[n] = bn
        c[n] = cn
        R[:, n + 1] = rp / bn
        L[:, n + 1] = lp / np.conj(cn)
    return KrylovChain(
        a=a[:m], b=b[: max(m - 1, 0)], c=c[: max(m - 1, 0)],
        right_basis=R[:, :m], left_basis=L[:, :m],
        terminated_early=terminated, breakdown_index=breakdown,
    )


def bilanczos_matrix(A: SectorMatrix, psi0: np.ndarray, m_max: int | None = None,
                     breakdown_tol: float = 1e-12) -> KrylovChain:
    """Convenience wrapper running :func:`bilanczos` on a sector matrix."""
    if m_max is None:
        m_max = A.dim
    adj = A.matrix.conj().T.tocsr()
    return bilanczos(lambda v: A.matrix @ v, lambda v: adj @ v, psi0, m_max,
                     breakdown_tol=breakdown_tol)


def equal_weight_initial_state(A: SectorMatrix | np.ndarray) -> np.ndarray:
    """Equal-weight superposition of the eigenvectors of the Hermitian matrix
    built from the lower-triangular part of A.

    B = L + L^dagger - diag(Re diag L) with L the inclusive lower triangle:
    the unique Hermitian matrix whose lower triangle equals L for real
    diagonals, and B = A whenever A itself is Hermitian.
    """
    dense = A.dense() if isinstance(A, SectorMatrix) else np.asarray(A, dtype=complex)
    if dense.shape == (1, 1):
        return np.ones(1, dtype=complex)
    low = np.tril(dense)
    B = low + low.conj().T - np.diag(np.real(np.diag(low)))
    _, vecs = np.linalg.eigh(B)
    state = vecs.sum(axis=1)
    return state / np.linalg.norm(state)


@dataclass
class ComplexityCurve:
    """Krylov complexity along a time grid."""

    times: np.ndarray
    ck: np.ndarray               # curve selected by normalized_flag
    ck_raw: np.ndarray           # sum_n n |phi_n|^2
    ck_normalized: np.ndarray    # raw divided by sum_n |phi_n|^2
    amplitude_norms: np.ndarray  # sum_n |phi_n|^2 per time
    normalized_flag: bool
    ode_fallback: bool = False


def evolve_amplitudes(chain: KrylovChain, t_grid, return_fallback: bool = False,
                      growth_shift: float = 0.0):
    """phi(t) = exp(-i H_eff t) e_0 for every t in the grid; shape (m, len(t)).

    Uses the eigendecomposition of the tridiagonal effective operator; falls
    back to high-order ODE stepping when the eigenbasis is near-defective
    (returned as a flag when ``return_fallback`` is set).  A nonzero
    ``growth_shift`` gamma evolves under H_eff - i*gamma, i.e. returns the
    amplitudes rescaled by e^{-gamma t}; callers use it to keep non-Hermitian
    chains (whose norm grows as e^{2 Im(E) t}) inside floating-point range.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise ValueError("t_grid must be a nonempty 1-D array")
    heff = chain.effective_matrix()
    if growth_shift:
        heff = heff - 1j * growth_shift * np.eye(chain.m)
    m = chain.m
    e0 = np.zeros(m, dtype=complex)
    e0[0] = 1.0
    if m == 1:
        phi = np.exp(-1j * heff[0, 0] * t_grid)[None, :]
        return (phi, False) if return_fallback else phi
    vals, vecs = scipy.linalg.eig(heff)
    cond = np.linalg.cond(vecs)
    if cond < 1e10:
        w = np.linalg.solve(vecs, e0)
        phi = vecs @ (np.exp(-1j * np.outer(vals, t_grid)) * w[:, None])
        return (phi, False) if return_fallback else phi
    warnings.warn(f"near-defective Krylov operator (cond={cond:.2e}); "
                  "falling back to ODE integration")
    sol = scipy.integrate.solve_ivp(
        lambda _, y: -1j * (heff @ y), (t_grid[0], t_grid[-1]), e0,
        t_eval=t_grid, method="DOP853", rtol=1e-10, atol=1e-12,
    )
    if not sol.success:
        raise RuntimeError(f"ODE fallback failed: {sol.message}")
    return (sol.y, True) if return_fallback else sol.y


def krylov_complexity(chain: KrylovChain, t_grid, normalize: bool | None = None,
                      hermitian: bool | None = None) -> ComplexityCurve:
    """C_K(t) = sum_n n |phi_n(t)|^2 along the chain.

    ``normalize`` defaults to on for non-Hermitian chains (where the total
    amplitude norm drifts) and off for Hermitian ones; both curves are
    always recorded.
    """
    if hermitian is None:
        herm_b = np.allclose(chain.b, chain.c.conj(), atol=1e-8)
        hermitian = herm_b and np.max(np.abs(chain.a.imag), initial=0.0) < 1e-8
    if normalize is None:
        normalize = not hermitian
    t_grid = np.asarray(t_grid, dtype=float)
    # factor out the fastest-growing mode so |phi|^2 stays finite; the raw
    # curve is rescaled back afterwards (and may legitimately overflow to inf)
    gamma = 0.0
    if not hermitian:
        gamma = max(0.0, float(scipy.linalg.eigvals(chain.effective_matrix()).imag.max()))
    phi, fell_back = evolve_amplitudes(chain, t_grid, return_fallback=True,
                                       growth_shift=gamma)
    weights = np.abs(phi) ** 2
    norms = weights.sum(axis=0)
    if np.any(norms <= 0.0) or not np.all(np.isfinite(norms)):
        bad = int(np.argmax(~(norms > 0.0) | ~np.isfinite(norms)))
        raise RuntimeError(f"amplitude norm vanished or overflowed at time index {bad}")
    positions = np.arange(phi.shape[0], dtype=float)
    raw_scaled = positions @ weights
    normalized = raw_scaled / norms
    with np.errstate(over="ignore"):
        growth = np.exp(2.0 * gamma * t_grid)
        raw = raw_scaled * growth
        norms_out = norms * growth
    return ComplexityCurve(
        times=t_grid,
        ck=normalized if normalize else raw,
        ck_raw=raw,
        ck_normalized=normalized,
        amplitude_norms=norms_out,
        normalized_flag=bool(normalize),
        ode_fallback=fell_back,
    )


def reconstruct_state(chain: KrylovChain, phi_t: np.ndarray) -> np.ndarray:
    """sum_n phi_n(t) |r_n> for one amplitude column; validation helper."""
    return chain.right_basis @ phi_t
