"""Superdense coding capacities over covariant noisy quantum channels."""

from sdc.linalg import (
    DensityMatrix,
    Spectrum,
    binary_entropy,
    hermitian_eig,
    kron,
    partial_trace,
    permute_subsystems,
    random_density_matrix,
    random_unitary,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from sdc.states import bell_state, bell_diagonal, ghz_state, k_copies, werner_state
from sdc.channels import (
    ChannelSequence,
    KrausChannel,
    PauliChannel,
    QUBIT_PAULI_KEYS,
    correlate_pairwise,
    correlated_channel,
    depolarising_probs,
    fully_correlated_channel,
    independent_channel,
    multiparty_correlated_probs,
    one_sided,
    quasiclassical_channel,
    quasiclassical_probs,
    twirl,
    verify_covariance,
    weyl_keys,
    weyl_op,
    weyl_product_ops,
)
from sdc.capacity import (
    CapacityReport,
    EncodingEnsemble,
    c_fully_correlated_bell_diagonal,
    c_fully_correlated_werner,
    c_ghz_fully,
    c_kcopy_bell_correlated,
    c_kcopy_bell_diagonal_fully,
    c_kcopy_depolarising,
    c_noiseless,
    c_one_sided_pauli_bell,
    c_one_sided_pauli_werner,
    c_quasiclassical_werner,
    c_two_sided_depolarising,
    capacity_via_min_entropy,
    classical_capacity_dep_qubit,
    holevo_chi,
    holevo_chi_relative_entropy,
    optimal_ensemble,
    transferred_info_fully_gamma,
    transferred_info_quasiclassical_gamma,
    werner_entropy,
)
from sdc.optimize import (
    OptResult,
    crossover_eta_tilde,
    crossover_mu_tilde,
    crossover_p_range,
    depolarising_transition_threshold,
    min_output_entropy_cptp,
    min_output_entropy_unitary,
    sweep,
    unitary_from_generator,
)

__version__ = "0.1.0"
