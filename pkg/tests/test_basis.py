import numpy as np
import pytest

from spin1chain.basis import (
    ChainConfig,
    all_sectors,
    build_sector,
    decode,
    embed_sector_vector,
    encode,
    magnetization,
    orbit_lookup,
    project_to_sector,
    sector_embed_matrix,
    translate,
)


def test_encode_decode_roundtrip():
    for n in (3, 5):
        for code in range(3**n):
            assert encode(decode(code, n)) == code


def test_encode_digit_map():
    # m=+1 -> digit 0, site 1 least significant
    assert encode([1, 1, 1]) == 0
    assert encode([-1, 1, 1]) == 2
    assert encode([0, 1, 1]) == 1
    assert encode([1, 1, -1]) == 18


def test_encode_rejects_bad_value():
    with pytest.raises(ValueError):
        encode([1, 2, 0])


def test_magnetization_matches_decode():
    n = 6
    rng = np.random.default_rng(0)
    for code in rng.integers(0, 3**n, size=50):
        assert magnetization(int(code), n) == sum(decode(int(code), n))


def test_translate_moves_site_values():
    n = 5
    ms = (1, 0, -1, 1, 0)
    shifted = decode(translate(encode(ms), n), n)
    # value at site j moves to site j+1
    assert shifted == (0, 1, 0, -1, 1)


def test_translate_order_n():
    n = 6
    code = encode([1, -1, 0, 0, 1, -1])
    cur = code
    for _ in range(n):
        cur = translate(cur, n)
    assert cur == code


def test_translate_preserves_magnetization():
    n = 7
    rng = np.random.default_rng(1)
    for code in rng.integers(0, 3**n, size=30):
        assert magnetization(translate(int(code), n), n) == magnetization(int(code), n)


def test_config_validation():
    with pytest.raises(ValueError):
        ChainConfig(n_sites=2)
    with pytest.raises(ValueError):
        ChainConfig(n_sites=8, hops=((4, 0.1),))  # max distance is 3 at N=8
    with pytest.raises(ValueError):
        ChainConfig(n_sites=9, hops=((5, 0.1),))  # max distance is 4 at N=9
    ChainConfig(n_sites=8, hops=((3, 0.1),))
    ChainConfig(n_sites=9, hops=((4, 0.1),))
    with pytest.raises(ValueError):
        ChainConfig(n_sites=6, boundary="open")


def test_config_hermiticity():
    assert ChainConfig(6, jh=1, jc=0.5, jz=0.2).is_hermitian()
    assert not ChainConfig(6, jh=1, jc=1j).is_hermitian()
    assert not ChainConfig(6, hops=((2, 0.1j),)).is_hermitian()


def test_sector_dimensions_sum_to_full_space():
    cfg = ChainConfig(6)
    total = sum(sec.dim for sec in all_sectors(cfg))
    assert total == 3**6


def test_sector_m0_k0_small():
    # independent count: orbits of M=0 states admissible at k=0 (all orbits)
    cfg = ChainConfig(4)
    sec = build_sector(cfg, 0, 0)
    codes = [c for c in range(3**4) if magnetization(c, 4) == 0]
    orbits = set()
    for c in codes:
        orbit = [c]
        cur = c
        for _ in range(3):
            cur = translate(cur, 4)
            orbit.append(cur)
        orbits.add(min(orbit))
    assert sec.dim == len(orbits)
    assert set(int(r) for r in sec.reps) == orbits


def test_sector_momentum_admissibility():
    # a period-R orbit appears at momentum kappa iff kappa*R = 0 mod N
    cfg = ChainConfig(6)
    uniform = encode([0] * 6)  # period 1
    for kappa in range(6):
        sec = build_sector(cfg, 0, kappa)
        assert (uniform in sec.index_of) == (kappa == 0)


def test_orbit_lookup_consistency():
    n, M = 6, 1
    lookup = orbit_lookup(n, M)
    for code, (rep, shift) in list(lookup.items())[:200]:
        cur = rep
        for _ in range(shift):
            cur = translate(cur, n)
        assert cur == code
        assert rep <= code


def test_embed_matrix_is_isometry():
    cfg = ChainConfig(6)
    for kappa in (0, 1, 3):
        sec = build_sector(cfg, 0, kappa)
        E = sector_embed_matrix(sec)
        gram = (E.conj().T @ E).toarray()
        assert np.max(np.abs(gram - np.eye(sec.dim))) < 1e-12


def test_embed_project_roundtrip():
    cfg = ChainConfig(5)
    sec = build_sector(cfg, 1, 2)
    rng = np.random.default_rng(2)
    v = rng.normal(size=sec.dim) + 1j * rng.normal(size=sec.dim)
    assert np.allclose(project_to_sector(sec, embed_sector_vector(sec, v)), v)


def test_embedded_states_have_right_momentum():
    # T |bloch> = e^{ik} |bloch> with this sign convention
    cfg = ChainConfig(6)
    sec = build_sector(cfg, 2, 2)
    E = sector_embed_matrix(sec).toarray()
    v = E[:, 0]
    translated = np.zeros_like(v)
    for code in np.nonzero(v)[0]:
        translated[translate(int(code), 6)] = v[code]
    assert np.allclose(translated, np.exp(1j * sec.momentum) * v, atol=1e-12)


def test_sector_json_export():
    import json

    cfg = ChainConfig(6)
    sec = build_sector(cfg, 0, 1)
    data = json.loads(sec.to_json())
    assert data["N"] == 6 and data["M"] == 0 and data["k_index"] == 1
    assert data["dim"] == sec.dim == len(data["reps"]) == len(data["periods"])


def test_build_sector_argument_checks():
    cfg = ChainConfig(5)
    with pytest.raises(ValueError):
        build_sector(cfg, 6, 0)
    with pytest.raises(ValueError):
        build_sector(cfg, 0, 5)
