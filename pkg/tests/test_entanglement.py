import numpy as np
import pytest

from spin1chain.basis import ChainConfig, build_sector
from spin1chain.entanglement import (
    default_scar_threshold,
    entanglement_entropy,
    entropy_scan,
    reduced_density_matrix,
    von_neumann_entropy,
)
from spin1chain.operators import build_hamiltonian
from spin1chain.spectra import diagonalize
from spin1chain.states import tower_energy, tower_state


def test_product_state_zero_entropy():
    n = 4
    v = np.zeros(3**n, dtype=complex)
    v[17] = 1.0
    for cut in range(1, n):
        assert entanglement_entropy(v, cut) == pytest.approx(0.0, abs=1e-12)


def test_bell_pair_ln2():
    # (|+1,+1> + |-1,-1>)/sqrt(2) across a 1|1 cut
    from spin1chain.basis import encode

    v = np.zeros(9, dtype=complex)
    v[encode([1, 1])] = 1 / np.sqrt(2)
    v[encode([-1, -1])] = 1 / np.sqrt(2)
    assert entanglement_entropy(v, 1) == pytest.approx(np.log(2))


def test_maximally_entangled_ln_d():
    # sum_m |m>|m> / sqrt(3): S = ln 3 across the 1|1 cut
    v = np.zeros(9, dtype=complex)
    for d in range(3):
        v[d * 3 + d] = 1 / np.sqrt(3)
    assert entanglement_entropy(v, 1) == pytest.approx(np.log(3))


def test_density_matrix_properties():
    rng = np.random.default_rng(0)
    n = 5
    v = rng.normal(size=3**n) + 1j * rng.normal(size=3**n)
    v /= np.linalg.norm(v)
    rho = reduced_density_matrix(v, 2)
    assert rho.shape == (9, 9)
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-14
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() > -1e-14


def test_schmidt_symmetry():
    # S_A(cut) = S_B(N - cut): entropy of complementary subsystems agrees
    rng = np.random.default_rng(1)
    n = 6
    v = rng.normal(size=3**n) + 1j * rng.normal(size=3**n)
    v /= np.linalg.norm(v)
    for cut in range(1, n):
        sa = entanglement_entropy(v, cut)
        # complement: digit-reverse the state so sites cut+1..N become 1..N-cut
        digits = np.array([(np.arange(3**n) // 3**j) % 3 for j in range(n)])
        reversed_codes = sum(digits[n - 1 - j] * 3**j for j in range(n))
        w = np.zeros_like(v)
        w[reversed_codes] = v
        sb = entanglement_entropy(w, n - cut)
        assert abs(sa - sb) < 1e-10


def test_entropy_normalization_handling():
    v = np.zeros(27, dtype=complex)
    v[0] = 2.0
    with pytest.raises(ValueError):
        entanglement_entropy(v, 1)
    assert entanglement_entropy(v, 1, normalize=True) == pytest.approx(0.0, abs=1e-12)


def test_von_neumann_rejects_bad_trace():
    with pytest.raises(ValueError):
        von_neumann_entropy(np.eye(3))


def test_default_scar_threshold():
    s = np.array([1.0, 2.0, 2.1, 2.2, 2.3, 2.4, 2.5])
    med = np.median(s)
    mad = np.median(np.abs(s - med))
    assert default_scar_threshold(s) == pytest.approx(med - 3 * mad)


def test_entropy_scan_flags_tower_state():
    cfg = ChainConfig(8, jh=1, jc=1, jz=0.5, hops=((3, 0.2),))
    sec = build_sector(cfg, 0, 0)
    H = build_hamiltonian(cfg, sec)
    es = diagonalize(H)
    scan = entropy_scan(es, sec)
    assert scan.cut == 4
    assert len(scan.entropies) == sec.dim
    # the eigenstate matching the p = 8 tower energy has dip entropy
    target = tower_energy(cfg, 8).real
    idx = int(np.argmin(np.abs(es.values.real - target)))
    assert abs(es.values[idx].real - target) < 1e-8
    assert scan.entropies[idx] < scan.threshold
    assert idx in scan.scar_candidates


def test_entropy_scan_requires_vectors():
    cfg = ChainConfig(6, jh=1, jz=0.5)
    sec = build_sector(cfg, 0, 0)
    es = diagonalize(build_hamiltonian(cfg, sec), want_vectors=False)
    with pytest.raises(ValueError):
        entropy_scan(es, sec)
