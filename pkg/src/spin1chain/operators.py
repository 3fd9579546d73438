"""Hamiltonian terms: matrix-free action on product states and sector-blocked assembly.

The chain Hamiltonian is

    H = J_h * H_heis + J_c * H_chiral + J_z * H_zeeman + sum_n J_n * H_hop(n)

with the Heisenberg exchange S_j . S_{j+1}, the chiral three-spin term
S_j . (S_{j+1} x S_{j+2}), the uniform Zeeman field sum_j S_j^z, and the
long-range exchange i * sum_j (S_j^+ S_{j+n}^- - S_j^- S_{j+n}^+).  All four
are Hermitian operators; non-Hermiticity enters only through complex couplings.

Terms act on product states through small local scatter tables derived from
the spin-1 ladder algebra (S^-|m> = sqrt(2)|m-1> etc.), so no operator is ever
stored in the full 3^N space unless explicitly requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse

from .basis import ChainConfig, SymmetrySector, orbit_lookup

_SQRT2 = np.sqrt(2.0)

# Single-site spin-1 matrices indexed [digit_out, digit_in]; digit 0 is m=+1.
SZ1 = np.diag([1.0, 0.0, -1.0]).astype(complex)
SP1 = np.zeros((3, 3), dtype=complex)
SP1[0, 1] = SP1[1, 2] = _SQRT2
SM1 = np.zeros((3, 3), dtype=complex)
SM1[1, 0] = SM1[2, 1] = _SQRT2
SX1 = (SP1 + SM1) / 2.0
SY1 = (SP1 - SM1) / 2.0j

_AXIS = (SX1, SY1, SZ1)
_LEVI = (
    (0, 1, 2, 1.0),
    (1, 2, 0, 1.0),
    (2, 0, 1, 1.0),
    (0, 2, 1, -1.0),
    (1, 0, 2, -1.0),
    (2, 1, 0, -1.0),
)


@dataclass(frozen=True)
class TermKind:
    """One of the four Hamiltonian terms; ``hop`` carries its distance n."""

    name: str
    n: int | None = None

    def __post_init__(self):
        if self.name not in ("heisenberg", "chiral", "zeeman", "hop"):
            raise ValueError(f"unknown term {self.name!r}")
        if (self.name == "hop") != (self.n is not None):
            raise ValueError("hop terms (and only hop terms) require a distance n")


HEISENBERG = TermKind("heisenberg")
CHIRAL = TermKind("chiral")
ZEEMAN = TermKind("zeeman")


def hop(n: int) -> TermKind:
    return TermKind("hop", int(n))


def _local_scatter(mats) -> dict:
    """Scatter table of a product of single-site matrices on adjacent slots.

    Key: input digit tuple.  Value: list of (output digit tuple, amplitude).
    """
    table = {}
    n_slots = len(mats)
    for key in np.ndindex(*(3,) * n_slots):
        out = {}
        entries = [(key, 1.0 + 0.0j)]
        for slot, mat in enumerate(mats):
            nxt = []
            for digits, amp in entries:
                d = digits[slot]
                for dp in range(3):
                    a = mat[dp, d]
                    if a != 0:
                        nd = digits[:slot] + (dp,) + digits[slot + 1 :]
                        nxt.append((nd, amp * a))
            entries = nxt
        for digits, amp in entries:
            out[digits] = out.get(digits, 0.0j) + amp
        table[key] = [(d, a) for d, a in out.items() if abs(a) > 1e-14]
    return table


def _merge_tables(tables) -> dict:
    merged = {}
    for table in tables:
        for key, entries in table.items():
            acc = merged.setdefault(key, {})
            for digits, amp in entries:
                acc[digits] = acc.get(digits, 0.0j) + amp
    return {
        key: [(d, a) for d, a in acc.items() if abs(a) > 1e-14]
        for key, acc in merged.items()
    }


@lru_cache(maxsize=None)
def _bond_table(kind_name: str) -> dict:
    """Two- or three-site scatter table for one summand of each term."""
    if kind_name == "heisenberg":
        # S_j . S_{j+1} = Sz Sz + (S+ S- + S- S+)/2
        return _merge_tables(
            [
                _local_scatter((SZ1, SZ1)),
                _local_scatter((SP1 / _SQRT2, SM1 / _SQRT2)),
                _local_scatter((SM1 / _SQRT2, SP1 / _SQRT2)),
            ]
        )
    if kind_name == "chiral":
        # S_j . (S_{j+1} x S_{j+2}) expanded over the Levi-Civita symbol,
        # with S^x, S^y written in ladder form.
        tables = []
        for a, b, c, sign in _LEVI:
            table = _local_scatter((_AXIS[a], _AXIS[b], _AXIS[c]))
            tables.append(
                {k: [(d, sign * amp) for d, amp in v] for k, v in table.items()}
            )
        return _merge_tables(tables)
    if kind_name == "hop":
        # i (S_j^+ S_{j+n}^- - S_j^- S_{j+n}^+); Hermitian despite the i.
        plus_minus = _local_scatter((SP1, SM1))
        minus_plus = _local_scatter((SM1, SP1))
        merged = _merge_tables(
            [
                {k: [(d, 1j * a) for d, a in v] for k, v in plus_minus.items()},
                {k: [(d, -1j * a) for d, a in v] for k, v in minus_plus.items()},
            ]
        )
        return merged
    raise ValueError(kind_name)


def apply_term(kind: TermKind, cfg: ChainConfig, code: int):
    """Scatter of one (coupling-free) Hamiltonian term on a product state.

    Returns a list of (target code, amplitude) pairs; the magnetization of
    every target equals that of the source.
    """
    N = cfg.n_sites
    digits = []
    c = code
    for _ in range(N):
        digits.append(c % 3)
        c //= 3
    pow3 = [3**j for j in range(N)]

    if kind.name == "zeeman":
        m = sum(1 - d for d in digits)
        return [(code, complex(m))] if m != 0 else []

    acc: dict[int, complex] = {}
    if kind.name == "heisenberg":
        table = _bond_table("heisenberg")
        sites = [(j, (j + 1) % N) for j in range(N)]
    elif kind.name == "hop":
        table = _bond_table("hop")
        sites = [(j, (j + kind.n) % N) for j in range(N)]
    elif kind.name == "chiral":
        table = _bond_table("chiral")
        sites = [(j, (j + 1) % N, (j + 2) % N) for j in range(N)]
    else:
        raise ValueError(f"unknown term {kind!r}")

    for group in sites:
        key = tuple(digits[s] for s in group)
        for new_digits, amp in table[key]:
            target = code
            for s, dn, dold in zip(group, new_digits, key):
                target += (dn - dold) * pow3[s]
            acc[target] = acc.get(target, 0.0j) + amp
    return [(t, a) for t, a in acc.items() if abs(a) > 1e-14]


# eq=False for the same reason as SymmetrySector: identity hash, cached instances.
@dataclass(frozen=True, eq=False)
class SectorMatrix:
    """A Hamiltonian (or single term) restricted to one symmetry sector."""

    sector: SymmetrySector
    matrix: scipy.sparse.csr_matrix
    hermitian_flag: str  # 'hermitian' | 'non-hermitian' | 'unknown'

    @property
    def dim(self) -> int:
        return self.sector.dim

    def dense(self) -> np.ndarray:
        return np.asarray(self.matrix.todense())

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got {v.shape}")
        return self.matrix @ v

    def matvec_adjoint(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got {v.shape}")
        return self.matrix.conj().T @ v

    def export_triplets(self, path) -> None:
        """Write the sparse entries as 'row col re im' lines for external cross-checks."""
        coo = self.matrix.tocoo()
        with open(path, "w") as fh:
            fh.write(f"# sector N={self.sector.n_sites} M={self.sector.M} "
                     f"k={self.sector.k_index} dim={self.dim}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                fh.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")


def _hermiticity_defect(mat: scipy.sparse.csr_matrix) -> float:
    diff = mat - mat.conj().T
    return 0.0 if diff.nnz == 0 else float(np.abs(diff.data).max())


def _assemble(kind: TermKind, sec: SymmetrySector) -> scipy.sparse.csr_matrix:
    N = sec.n_sites
    cfg = ChainConfig(n_sites=N)  # geometry only; couplings are applied later
    if kind.name == "hop":
        cfg = ChainConfig(n_sites=N, hops=((kind.n, 1.0),))
    lookup = orbit_lookup(N, sec.M)
    k = sec.momentum
    phases = np.exp(1j * k * np.arange(N))
    sqrt_period = np.sqrt(sec.periods.astype(float))
    rows, cols, data = [], [], []
    index_of = sec.index_of
    for a, rep in enumerate(sec.reps):
        ra = sqrt_period[a]
        for target, amp in apply_term(kind, cfg, int(rep)):
            rep_b, shift = lookup[target]
            b = index_of.get(rep_b)
            if b is None:
                continue  # orbit incompatible with this momentum
            rows.append(b)
            cols.append(a)
            data.append(amp * phases[shift] * (ra / sqrt_period[b]))
    mat = scipy.sparse.coo_matrix(
        (np.asarray(data, dtype=complex), (rows, cols)),
        shape=(sec.dim, sec.dim),
    ).tocsr()
    mat.sum_duplicates()
    return mat


@lru_cache(maxsize=None)
def _term_matrix_cached(kind: TermKind, n_sites: int, M: int, k_index: int) -> SectorMatrix:
    sec = _sector(n_sites, M, k_index)
    mat = _assemble(kind, sec)
    flag = "hermitian" if _hermiticity_defect(mat) < 1e-12 else "non-hermitian"
    return SectorMatrix(sector=sec, matrix=mat, hermitian_flag=flag)


def _sector(n_sites: int, M: int, k_index: int) -> SymmetrySector:
    from .basis import _build_sector

    return _build_sector(n_sites, M, k_index)


def build_sector_matrix(kind: TermKind, cfg: ChainConfig, sec: SymmetrySector) -> SectorMatrix:
    """Pure term matrix (coupling not applied) in the Bloch basis of the sector.

    Cached per (term, sector), so coupling sweeps re-combine cached blocks.
    """
    if sec.n_sites != cfg.n_sites:
        raise ValueError("sector was built for a different chain length")
    if kind.name == "hop":
        # n-range validation against the chain geometry
        ChainConfig(n_sites=cfg.n_sites, hops=((kind.n, 0.0),))
    return _term_matrix_cached(kind, sec.n_sites, sec.M, sec.k_index)


def build_hamiltonian(cfg: ChainConfig, sec: SymmetrySector) -> SectorMatrix:
    """Full sector Hamiltonian: coupling-weighted sum of the cached term blocks."""
    if sec.n_sites != cfg.n_sites:
        raise ValueError("sector was built for a different chain length")
    mat = scipy.sparse.csr_matrix((sec.dim, sec.dim), dtype=complex)
    for coupling, kind in [(cfg.jh, HEISENBERG), (cfg.jc, CHIRAL), (cfg.jz, ZEEMAN)]:
        if coupling != 0:
            mat = mat + coupling * build_sector_matrix(kind, cfg, sec).matrix
    for dist, coupling in cfg.hops:
        if coupling != 0:
            mat = mat + coupling * build_sector_matrix(hop(dist), cfg, sec).matrix
    if cfg.is_hermitian() and _hermiticity_defect(mat) < 1e-10 * max(1.0, _matrix_scale(mat)):
        flag = "hermitian"
    else:
        flag = "non-hermitian"
    return SectorMatrix(sector=sec, matrix=mat, hermitian_flag=flag)


def _matrix_scale(mat) -> float:
    return 0.0 if mat.nnz == 0 else float(np.abs(mat.data).max())


def build_full_term(kind: TermKind, cfg: ChainConfig) -> scipy.sparse.csr_matrix:
    """Term matrix in the unsymmetrized 3^N product basis (small N only)."""
    dim = cfg.dim_full
    rows, cols, data = [], [], []
    for code in range(dim):
        for target, amp in apply_term(kind, cfg, code):
            rows.append(target)
            cols.append(code)
            data.append(amp)
    return scipy.sparse.coo_matrix(
        (np.asarray(data, dtype=complex), (rows, cols)), shape=(dim, dim)
    ).tocsr()


def build_full_hamiltonian(cfg: ChainConfig) -> scipy.sparse.csr_matrix:
    """Full-space Hamiltonian with couplings applied (oracle-scale N only)."""
    mat = scipy.sparse.csr_matrix((cfg.dim_full, cfg.dim_full), dtype=complex)
    for coupling, kind in [(cfg.jh, HEISENBERG), (cfg.jc, CHIRAL), (cfg.jz, ZEEMAN)]:
        if coupling != 0:
            mat = mat + coupling * build_full_term(kind, cfg)
    for dist, coupling in cfg.hops:
        if coupling != 0:
            mat = mat + coupling * build_full_term(hop(dist), cfg)
    return mat


def apply_full_term(kind: TermKind, cfg: ChainConfig, vec: np.ndarray) -> np.ndarray:
    """Matrix-free action of a term on a full-space vector."""
    out = np.zeros_like(vec, dtype=complex)
    for code in np.nonzero(vec)[0]:
        amp0 = vec[code]
        for target, amp in apply_term(kind, cfg, int(code)):
            out[target] += amp0 * amp
    return out
