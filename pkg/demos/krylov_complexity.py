"""Krylov complexity of operator spreading along the bi-Lanczos chain.

Starting from the equal-weight superposition of eigenstates in the
(M=0, k=0) sector, the complexity C_K(t) = sum_n n |phi_n(t)|^2
saturates near dim/2 for chaotic chains and stays suppressed for the
integrable point.  Non-Hermitian chains use the normalized curve
(amplitude norm grows as e^{2 Im(E) t}).
"""

import numpy as np

from spin1chain.basis import ChainConfig, build_sector
from spin1chain.krylov import bilanczos_matrix, equal_weight_initial_state, krylov_complexity
from spin1chain.operators import build_hamiltonian

N = 8
t = np.linspace(0.0, 200.0, 201)

cases = [
    (0.0, "integrable (J_n = 0)"),
    (0.2, "chaotic (J_n = 0.2)"),
    (0.2j, "non-Hermitian (J_n = 0.2i)"),
]
for jn, label in cases:
    cfg = ChainConfig(N, jh=1.0, jc=1.0, jz=0.5, hops=((3, jn),))
    sec = build_sector(cfg, 0, 0)
    H = build_hamiltonian(cfg, sec)
    chain = bilanczos_matrix(H, equal_weight_initial_state(H))
    curve = krylov_complexity(chain, t)
    late = curve.ck[t >= 100.0]
    print(f"{label:28s} dim={sec.dim:4d} chain m={chain.m:4d} "
          f"peak C_K={curve.ck.max():8.2f} at t={t[np.argmax(curve.ck)]:6.1f}  "
          f"late average={late.mean():8.2f}"
          f"{'  (normalized)' if curve.normalized_flag else ''}")
