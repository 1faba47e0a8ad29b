"""lxebkit: exact reference values, anticoncentration scores and Monte
Carlo benchmarks for photonic sampling experiments."""

from .errors import FeasibilityError
from .refval import (
    RefReport,
    ac_asymptote,
    ac_bs,
    ac_bs_bound,
    ac_gbs,
    ac_sbs,
    certification_bound,
    hunter_jones_ratio,
    lxe_ref_bs,
    lxe_ref_bs_lossy,
    lxe_ref_gbs_uniform,
    lxe_ref_general,
    lxe_ref_sbs,
    outcome_count,
)
from .sampler import (
    EstimateReport,
    bs_probability,
    enumerate_outcomes,
    exact_lxe,
    haar_unitary,
    lxeb_experiment,
    permanent,
)
from .schur import (
    build_projector_matrix,
    build_swap_matrix,
    c_coeff,
    dim_irrep,
    second_moment_outcome,
    trace_P_collisionfree,
    trace_P_uniform,
    trace_S_fock,
    trace_S_uniform,
)
from .states import (
    ModeState,
    ProductState,
    apply_uniform_loss,
    coherent_mode,
    fock_mode,
    parse_state_spec,
    squeezed_mode,
    vacuum_mode,
)
from .swapexp import (
    SwapTable,
    TruncPoly,
    avg_purity_volume_exponent,
    n_particle_norm,
    renyi2,
    swap_expectation,
    swap_table,
)

__version__ = "0.1.0"
