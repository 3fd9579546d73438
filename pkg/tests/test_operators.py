import numpy as np
import pytest
import scipy.linalg

from spin1chain.basis import (
    ChainConfig,
    all_sectors,
    build_sector,
    encode,
    magnetization,
    sector_embed_matrix,
)
from spin1chain.operators import (
    CHIRAL,
    HEISENBERG,
    SM1,
    SP1,
    SX1,
    SY1,
    SZ1,
    ZEEMAN,
    apply_full_term,
    apply_term,
    build_full_hamiltonian,
    build_full_term,
    build_hamiltonian,
    build_sector_matrix,
    hop,
)


def test_single_site_algebra():
    # spin-1 commutation [Sx, Sy] = i Sz and ladder normalization sqrt(2)
    assert np.allclose(SX1 @ SY1 - SY1 @ SX1, 1j * SZ1)
    assert np.allclose(SP1, SX1 + 1j * SY1)
    assert np.allclose(SM1.conj().T, SP1)
    assert np.allclose(np.diag(SZ1), [1, 0, -1])
    assert SP1[0, 1] == pytest.approx(np.sqrt(2))


def _kron_chain(mats, n_sites, sites):
    """Full-space operator with mats[i] on sites[i] (site 1 = least significant)."""
    ops = [np.eye(3)] * n_sites
    for mat, s in zip(mats, sites):
        ops[s] = mat
    out = np.array([[1.0 + 0j]])
    for j in reversed(range(n_sites)):  # highest site = leftmost kron factor
        out = np.kron(out, ops[j])
    return out


def _dense_term_oracle(kind, n):
    """Independent dense construction of each term from Kronecker products."""
    dim = 3**n
    H = np.zeros((dim, dim), dtype=complex)
    if kind.name == "heisenberg":
        for j in range(n):
            k = (j + 1) % n
            for a in (SX1, SY1, SZ1):
                H += _kron_chain([a, a], n, [j, k])
    elif kind.name == "zeeman":
        for j in range(n):
            H += _kron_chain([SZ1], n, [j])
    elif kind.name == "chiral":
        axes = (SX1, SY1, SZ1)
        eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
               (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
        for j in range(n):
            k, l = (j + 1) % n, (j + 2) % n
            for (a, b, c), sign in eps.items():
                H += sign * _kron_chain([axes[a], axes[b], axes[c]], n, [j, k, l])
    elif kind.name == "hop":
        for j in range(n):
            k = (j + kind.n) % n
            H += 1j * (_kron_chain([SP1, SM1], n, [j, k])
                       - _kron_chain([SM1, SP1], n, [j, k]))
    return H


@pytest.mark.parametrize("kind", [HEISENBERG, CHIRAL, ZEEMAN, hop(1), hop(2)])
def test_full_term_against_kron_oracle(kind):
    n = 5
    cfg = ChainConfig(n, hops=((kind.n, 1.0),) if kind.name == "hop" else ())
    built = build_full_term(kind, cfg).toarray()
    oracle = _dense_term_oracle(kind, n)
    assert np.max(np.abs(built - oracle)) < 1e-12


@pytest.mark.parametrize("kind", [HEISENBERG, CHIRAL, ZEEMAN, hop(2)])
def test_terms_are_hermitian_and_conserve_m(kind):
    n = 5
    cfg = ChainConfig(n, hops=((2, 1.0),))
    mat = build_full_term(kind, cfg)
    assert np.max(np.abs((mat - mat.conj().T).toarray())) < 1e-12
    for code in (0, 17, 100):
        for target, _ in apply_term(kind, cfg, code):
            assert magnetization(target, n) == magnetization(code, n)


def test_terms_commute_with_translation():
    from spin1chain.basis import translate

    n = 5
    cfg = ChainConfig(n, hops=((2, 1.0),))
    dim = 3**n
    P = np.zeros((dim, dim))
    for code in range(dim):
        P[translate(code, n), code] = 1.0
    for kind in (HEISENBERG, CHIRAL, ZEEMAN, hop(2)):
        mat = build_full_term(kind, cfg).toarray()
        assert np.max(np.abs(P @ mat - mat @ P)) < 1e-12


def test_zeeman_on_neel_is_zero():
    cfg = ChainConfig(8)
    code = encode([1, -1] * 4)
    assert apply_term(ZEEMAN, cfg, code) == []


def test_sector_matrix_matches_projected_full_term():
    cfg = ChainConfig(5, hops=((2, 1.0),))
    for kind in (HEISENBERG, CHIRAL, hop(2)):
        full = build_full_term(kind, cfg).toarray()
        for M, kappa in ((0, 0), (1, 2), (2, 4)):
            sec = build_sector(cfg, M, kappa)
            if sec.dim == 0:
                continue
            E = sector_embed_matrix(sec).toarray()
            projected = E.conj().T @ full @ E
            block = build_sector_matrix(kind, cfg, sec).dense()
            assert np.max(np.abs(projected - block)) < 1e-12


def test_sector_spectra_union_matches_full_spectrum():
    # complex couplings, N=4: non-Hermitian block-diagonalization consistency
    cfg = ChainConfig(4, jh=1.0, jc=0.3 + 0.4j, jz=0.5, hops=((1, 0.1j),))
    full_vals = np.sort_complex(scipy.linalg.eigvals(build_full_hamiltonian(cfg).toarray()))
    sector_vals = []
    for sec in all_sectors(cfg):
        H = build_hamiltonian(cfg, sec)
        sector_vals.append(scipy.linalg.eigvals(H.dense()))
    sector_vals = np.sort_complex(np.concatenate(sector_vals))
    assert len(sector_vals) == 3**4
    assert np.max(np.abs(sector_vals - full_vals)) < 1e-9


def test_hermitian_flag_tracks_couplings():
    cfg = ChainConfig(5, jh=1, jc=1, jz=0.5)
    sec = build_sector(cfg, 0, 0)
    assert build_hamiltonian(cfg, sec).hermitian_flag == "hermitian"
    cfg2 = ChainConfig(5, jh=1, jc=1j, jz=0.5)
    assert build_hamiltonian(cfg2, sec).hermitian_flag == "non-hermitian"


def test_matvec_and_adjoint():
    cfg = ChainConfig(5, jh=1, jc=1j, jz=0.5)
    sec = build_sector(cfg, 0, 1)
    H = build_hamiltonian(cfg, sec)
    rng = np.random.default_rng(3)
    v = rng.normal(size=sec.dim) + 1j * rng.normal(size=sec.dim)
    w = rng.normal(size=sec.dim) + 1j * rng.normal(size=sec.dim)
    # <w|Hv> == <H^dagger w|v>
    assert np.vdot(w, H.matvec(v)) == pytest.approx(np.vdot(H.matvec_adjoint(w), v))


def test_export_triplets_roundtrip(tmp_path):
    cfg = ChainConfig(4, jh=1, jz=0.5)
    sec = build_sector(cfg, 0, 0)
    H = build_hamiltonian(cfg, sec)
    path = tmp_path / "triplets.txt"
    H.export_triplets(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0].startswith("#")
    rebuilt = np.zeros((sec.dim, sec.dim), dtype=complex)
    for line in lines[1:]:
        r, c, re, im = line.split()
        rebuilt[int(r), int(c)] = float(re) + 1j * float(im)
    assert np.max(np.abs(rebuilt - H.dense())) < 1e-15


def test_apply_full_term_matches_matrix():
    cfg = ChainConfig(4, hops=((1, 1.0),))
    rng = np.random.default_rng(4)
    v = rng.normal(size=3**4) + 1j * rng.normal(size=3**4)
    for kind in (HEISENBERG, CHIRAL, hop(1)):
        direct = build_full_term(kind, cfg) @ v
        assert np.allclose(apply_full_term(kind, cfg, v), direct)


def test_sector_mismatch_rejected():
    cfg = ChainConfig(5)
    sec = build_sector(ChainConfig(6), 0, 0)
    with pytest.raises(ValueError):
        build_hamiltonian(cfg, sec)
