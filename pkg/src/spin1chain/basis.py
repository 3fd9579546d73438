"""Spin-1 product basis and (magnetization, momentum) symmetry sectors.

Each chain site carries a three-level spin with m in {+1, 0, -1}.  A product
state of N sites is stored as a single integer in base 3 with site 1 as the
least significant digit and the digit map

    m = +1 -> 0,   m = 0 -> 1,   m = -1 -> 2.

Total magnetization M = sum_j m_j and the one-site translation are exact
symmetries of the chain, so the Hilbert space splits into (M, k) blocks with
momentum k = 2*pi*kappa/N.  Sectors are built from canonical orbit
representatives (minimal code under all translations) and cached.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse


def encode(ms) -> int:
    """Encode site values (m_1, ..., m_N), m_j in {+1,0,-1}, into an integer code."""
    code = 0
    for j, m in enumerate(ms):
        if m not in (1, 0, -1):
            raise ValueError(f"site value must be +1, 0 or -1, got {m!r}")
        code += (1 - m) * 3**j
    return code


def decode(code: int, n_sites: int):
    """Inverse of :func:`encode`; returns the tuple (m_1, ..., m_N)."""
    if not 0 <= code < 3**n_sites:
        raise ValueError(f"code {code} out of range for {n_sites} sites")
    ms = []
    for _ in range(n_sites):
        ms.append(1 - code % 3)
        code //= 3
    return tuple(ms)


def magnetization(code: int, n_sites: int) -> int:
    """Total S^z of a product state, sum of the m_j."""
    mag = 0
    for _ in range(n_sites):
        mag += 1 - code % 3
        code //= 3
    return mag


def translate(code: int, n_sites: int) -> int:
    """One-site translation: the value at site j moves to site j+1, site N wraps to 1."""
    top = 3 ** (n_sites - 1)
    return (code % top) * 3 + code // top


@dataclass(frozen=True)
class ChainConfig:
    """Couplings and geometry of the periodic spin-1 chain.

    ``hops`` is a tuple of (distance, coupling) pairs for the long-range
    exchange terms; distances are restricted to 1..N/2-1 (even N) or
    1..(N-1)/2 (odd N), the allowed range under periodic boundaries.
    """

    n_sites: int
    jh: complex = 0.0
    jc: complex = 0.0
    jz: complex = 0.0
    hops: tuple = ()
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_sites < 3:
            raise ValueError("need at least 3 sites (chiral term spans three sites)")
        if self.boundary != "periodic":
            raise ValueError("only periodic boundaries are supported")
        n_max = (self.n_sites - 1) // 2 if self.n_sites % 2 else self.n_sites // 2 - 1
        hops = []
        for dist, coupling in self.hops:
            dist = int(dist)
            if not 1 <= dist <= n_max:
                raise ValueError(
                    f"hop distance {dist} outside allowed range 1..{n_max} for N={self.n_sites}"
                )
            hops.append((dist, complex(coupling)))
        object.__setattr__(self, "hops", tuple(hops))
        object.__setattr__(self, "jh", complex(self.jh))
        object.__setattr__(self, "jc", complex(self.jc))
        object.__setattr__(self, "jz", complex(self.jz))

    @property
    def dim_full(self) -> int:
        return 3**self.n_sites

    def is_hermitian(self) -> bool:
        """True when every coupling is real, so the Hamiltonian is Hermitian."""
        couplings = [self.jh, self.jc, self.jz] + [j for _, j in self.hops]
        return all(abs(c.imag) == 0.0 for c in couplings)


# eq=False: sectors are cached singletons (see _build_sector), identity hash
# keeps them usable as lru_cache keys despite the ndarray fields.
@dataclass(frozen=True, eq=False)
class SymmetrySector:
    """One (M, kappa) block: orbit representatives, periods and index maps.

    Immutable after construction.  ``reps`` holds the canonical (minimal-code)
    representative of each translation orbit admitted at this momentum;
    ``periods[r]`` is the orbit length R of ``reps[r]``, and a representative
    is admitted iff kappa*R = 0 (mod N).
    """

    n_sites: int
    M: int
    k_index: int
    reps: np.ndarray
    periods: np.ndarray
    dim: int
    index_of: dict = field(repr=False)

    @property
    def momentum(self) -> float:
        return 2.0 * np.pi * self.k_index / self.n_sites

    @property
    def norms(self) -> np.ndarray:
        """Norm of the unnormalized Bloch sum over the N translates of each rep."""
        return self.n_sites / np.sqrt(self.periods.astype(float))

    def to_json(self) -> str:
        return json.dumps(
            {
                "N": self.n_sites,
                "M": self.M,
                "k_index": self.k_index,
                "dim": self.dim,
                "reps": [int(r) for r in self.reps],
                "periods": [int(p) for p in self.periods],
            }
        )


def _translate_array(codes: np.ndarray, n_sites: int) -> np.ndarray:
    top = 3 ** (n_sites - 1)
    return (codes % top) * 3 + codes // top


@lru_cache(maxsize=None)
def _magnetization_codes(n_sites: int, M: int) -> np.ndarray:
    """All codes with total magnetization M, ascending (vectorized split-table scan)."""
    half = n_sites // 2
    rest = n_sites - half
    lo = np.arange(3**half, dtype=np.int64)
    mag_lo = np.zeros(3**half, dtype=np.int64)
    c = lo.copy()
    for _ in range(half):
        mag_lo += 1 - c % 3
        c //= 3
    hi = np.arange(3**rest, dtype=np.int64)
    mag_hi = np.zeros(3**rest, dtype=np.int64)
    c = hi.copy()
    for _ in range(rest):
        mag_hi += 1 - c % 3
        c //= 3
    # code = hi * 3^half + lo; ravel order of the outer sum matches that layout
    total = (mag_hi[:, None] + mag_lo[None, :]).ravel()
    return np.nonzero(total == M)[0].astype(np.int64)


@lru_cache(maxsize=None)
def _orbit_data(n_sites: int, M: int):
    """Per-code orbit minimum, shift and period for every code with magnetization M.

    Returns (codes, min_code, shift, period) where T^shift(min_code) == code
    and period is the orbit length.
    """
    codes = _magnetization_codes(n_sites, M)
    minc = codes.copy()
    # l such that T^l(code) == minc, i.e. code = T^{N-l}(minc)
    min_l = np.zeros(len(codes), dtype=np.int64)
    period = np.zeros(len(codes), dtype=np.int64)
    cur = codes.copy()
    for l in range(1, n_sites + 1):
        cur = _translate_array(cur, n_sites)
        smaller = cur < minc
        minc[smaller] = cur[smaller]
        min_l[smaller] = l
        closed = (period == 0) & (cur == codes)
        period[closed] = l
    shift = (n_sites - min_l) % n_sites
    return codes, minc, shift, period


@lru_cache(maxsize=None)
def orbit_lookup(n_sites: int, M: int) -> dict:
    """Map code -> (representative code, shift d with T^d(rep) == code)."""
    codes, minc, shift, _ = _orbit_data(n_sites, M)
    return {int(c): (int(r), int(d)) for c, r, d in zip(codes, minc, shift)}


@lru_cache(maxsize=None)
def _build_sector(n_sites: int, M: int, k_index: int) -> SymmetrySector:
    codes, minc, _, period = _orbit_data(n_sites, M)
    is_rep = codes == minc
    admissible = (k_index * period) % n_sites == 0
    keep = is_rep & admissible
    reps = codes[keep]
    periods = period[keep]
    reps.setflags(write=False)
    periods.setflags(write=False)
    index_of = {int(r): i for i, r in enumerate(reps)}
    return SymmetrySector(
        n_sites=n_sites,
        M=M,
        k_index=k_index,
        reps=reps,
        periods=periods,
        dim=len(reps),
        index_of=index_of,
    )


def build_sector(cfg: ChainConfig, M: int, k_index: int) -> SymmetrySector:
    """Build (cached) the symmetry sector with total magnetization M and momentum index k."""
    if abs(M) > cfg.n_sites:
        raise ValueError(f"|M| must be <= N, got M={M}, N={cfg.n_sites}")
    if not 0 <= k_index < cfg.n_sites:
        raise ValueError(f"k_index must be in 0..N-1, got {k_index}")
    return _build_sector(cfg.n_sites, M, k_index)


@lru_cache(maxsize=64)
def sector_embed_matrix(sec: SymmetrySector) -> scipy.sparse.csr_matrix:
    """Isometry E (3^N x dim) mapping sector coordinates to full-space amplitudes.

    Column r is the normalized Bloch state of reps[r]:
    (1/sqrt(N_r)) * sum_l exp(-i k l) T^l |rep_r>, N_r = N^2 / period_r.
    """
    N = sec.n_sites
    k = sec.momentum
    rows, cols, data = [], [], []
    cur = sec.reps.astype(np.int64)
    inv_norm = 1.0 / sec.norms
    col_idx = np.arange(sec.dim)
    for l in range(N):
        rows.append(cur.copy())
        cols.append(col_idx)
        data.append(np.exp(-1j * k * l) * inv_norm)
        cur = _translate_array(cur, N)
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.tile(col_idx, N))),
        shape=(3**N, sec.dim),
    )
    return mat.tocsr()


def embed_sector_vector(sec: SymmetrySector, v: np.ndarray) -> np.ndarray:
    """Expand a sector vector into the full 3^N space (isometric)."""
    v = np.asarray(v)
    if v.shape != (sec.dim,):
        raise ValueError(f"expected sector vector of length {sec.dim}, got shape {v.shape}")
    return sector_embed_matrix(sec) @ v.astype(complex)


def project_to_sector(sec: SymmetrySector, full: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`embed_sector_vector`: sector coordinates of a full-space vector."""
    full = np.asarray(full)
    if full.shape != (3**sec.n_sites,):
        raise ValueError("full-space vector has wrong length")
    return sector_embed_matrix(sec).conj().T @ full.astype(complex)


def all_sectors(cfg: ChainConfig):
    """All nonempty (M, kappa) sectors of the chain, in (M, kappa) order."""
    out = []
    for M in range(-cfg.n_sites, cfg.n_sites + 1):
        for kappa in range(cfg.n_sites):
            sec = build_sector(cfg, M, kappa)
            if sec.dim > 0:
                out.append(sec)
    return out
