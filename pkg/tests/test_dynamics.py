import numpy as np
import pytest
import scipy.sparse.linalg

from spin1chain.basis import ChainConfig
from spin1chain.dynamics import (
    FullSpacePropagator,
    default_time_grid,
    evolve,
    fidelity_series,
)
from spin1chain.operators import build_full_hamiltonian
from spin1chain.states import coherent_state, neel_state, polarized_state


def test_evolve_t0_is_identity():
    cfg = ChainConfig(4, jh=1, jc=1j, jz=0.5)
    rng = np.random.default_rng(0)
    v = rng.normal(size=81) + 1j * rng.normal(size=81)
    v /= np.linalg.norm(v)
    assert np.allclose(evolve(cfg, v, 0.0), v, atol=1e-12)


def test_zeeman_only_product_state_phase():
    # diagonal H: product state picks up e^{-i Jz M t}, fidelity stays 1
    cfg = ChainConfig(4, jz=0.7)
    v = polarized_state(4)  # M = 4
    out = evolve(cfg, v, 2.0)
    assert np.allclose(out, np.exp(-1j * 0.7 * 4 * 2.0) * v)
    series = fidelity_series(cfg, v, np.linspace(0, 5, 11))
    assert np.allclose(series.fidelity_literal, 1.0, atol=1e-12)


def test_evolution_matches_full_space_oracle():
    cfg = ChainConfig(5, jh=1, jc=0.4 + 0.3j, jz=0.5, hops=((2, 0.2j),))
    H = build_full_hamiltonian(cfg)
    rng = np.random.default_rng(1)
    v = rng.normal(size=3**5) + 1j * rng.normal(size=3**5)
    v /= np.linalg.norm(v)
    for t in (0.5, 2.0):
        direct = scipy.sparse.linalg.expm_multiply(-1j * H * t, v)
        ours = evolve(cfg, v, t)
        assert np.linalg.norm(direct - ours) < 1e-9 * np.linalg.norm(direct)


def test_hermitian_norm_conservation():
    cfg = ChainConfig(6, jh=1, jc=1, jz=0.5, hops=((2, 0.2),))
    v = neel_state(6)
    series = fidelity_series(cfg, v, np.linspace(0, 100, 21))
    assert np.allclose(series.norm, 1.0, atol=1e-10)
    assert series.fidelity_literal[0] == pytest.approx(1.0, abs=1e-12)


def test_coherent_state_revival_period():
    cfg = ChainConfig(6, jh=1, jc=1, jz=0.5, hops=((2, 0.2),))
    psi0 = coherent_state(6, 1.0).vector
    t = np.array([0.0, 2 * np.pi, 4 * np.pi])
    series = fidelity_series(cfg, psi0, t)
    assert series.fidelity_literal[2] == pytest.approx(1.0, abs=1e-10)
    assert series.fidelity_literal[1] < 0.1  # half-period: no revival


def test_non_hermitian_revival_and_normalized_mode():
    # tower energies stay real for complex J_c, J_n: exact revival persists
    cfg = ChainConfig(6, jh=1, jc=1j, jz=0.5, hops=((2, 0.2j),))
    psi0 = coherent_state(6, 1.0).vector
    series = fidelity_series(cfg, psi0, np.array([0.0, 4 * np.pi]), mode="normalized")
    assert series.normalization_mode == "normalized"
    assert series.fidelity_normalized[1] == pytest.approx(1.0, abs=1e-8)
    assert series.fidelity_literal[1] == pytest.approx(1.0, abs=1e-8)


def test_normalized_mode_divides_by_norm():
    cfg = ChainConfig(4, jh=1, jc=1j, jz=0.5)
    rng = np.random.default_rng(2)
    v = rng.normal(size=81) + 1j * rng.normal(size=81)
    v /= np.linalg.norm(v)
    t = np.linspace(0, 3, 7)
    series = fidelity_series(cfg, v, t)
    finite = np.isfinite(series.norm)
    assert np.allclose(series.fidelity_normalized[finite],
                       (series.fidelity_literal / series.norm)[finite],
                       rtol=1e-10)


def test_size_cap_and_state_checks():
    cfg = ChainConfig(11)
    with pytest.raises(ValueError):
        FullSpacePropagator(cfg)
    cfg4 = ChainConfig(4)
    with pytest.raises(ValueError):
        evolve(cfg4, np.ones(81, dtype=complex), 1.0)  # not normalized
    with pytest.raises(ValueError):
        evolve(cfg4, np.zeros(80, dtype=complex), 1.0)  # wrong length
    with pytest.raises(ValueError):
        fidelity_series(cfg4, polarized_state(4), [0.0], mode="bogus")


def test_default_time_grid():
    grid = default_time_grid(50.0, 0.02)
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(50.0)
    assert np.allclose(np.diff(grid), 0.02)
