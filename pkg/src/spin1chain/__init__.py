"""Exact diagonalization toolkit for a spin-1 chain with chiral and long-range
exchange terms: symmetry-sector construction, spectral statistics (Hermitian
and non-Hermitian), exact scar towers, bi-Lanczos Krylov complexity,
entanglement scans, fidelity dynamics and parameter sweeps.
"""

from .basis import (
    ChainConfig,
    SymmetrySector,
    all_sectors,
    build_sector,
    decode,
    embed_sector_vector,
    encode,
    magnetization,
    project_to_sector,
    sector_embed_matrix,
    translate,
)
from .dynamics import (
    FidelitySeries,
    FullSpacePropagator,
    default_time_grid,
    evolve,
    fidelity_series,
)
from .entanglement import (
    EntropyScan,
    default_scar_threshold,
    entanglement_entropy,
    entropy_scan,
    reduced_density_matrix,
    von_neumann_entropy,
)
from .krylov import (
    ComplexityCurve,
    KrylovChain,
    bilanczos,
    bilanczos_matrix,
    equal_weight_initial_state,
    evolve_amplitudes,
    krylov_complexity,
)
from .operators import (
    CHIRAL,
    HEISENBERG,
    ZEEMAN,
    SectorMatrix,
    TermKind,
    apply_term,
    build_full_hamiltonian,
    build_full_term,
    build_hamiltonian,
    build_sector_matrix,
    hop,
)
from .spectra import (
    COS_THETA_GINIBRE,
    COS_THETA_POISSON,
    R_GOE,
    R_GUE,
    R_POISSON,
    CsrStatistics,
    EigenSystem,
    RStatistics,
    csr,
    diagonalize,
    ginibre_levels,
    goe_levels,
    poisson_levels,
    poisson_spacing_pdf,
    r_statistic,
    reference_constants,
    unfold,
    uniform_complex_levels,
    wigner_surmise_pdf,
)
from .states import (
    CoherentState,
    TowerResidual,
    TowerState,
    apply_total_lowering,
    coherent_state,
    neel_state,
    polarized_state,
    tower_energy,
    tower_norm,
    tower_state,
    verify_tower,
)
from .sweeps import SweepResult, SweepSpec, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
