"""Simulator for a post-selected CNOT gate in a six-waveguide quantum walk.

The package is organized in four layers. `walk` builds tight-binding
Hamiltonians and evolves them into unitaries. `interference` adds
two-photon statistics with partial distinguishability. `gate` extracts
the post-selected logical gate, its phases, and entangled outputs.
`design` inverts dispersion tables to turn a coupling target into
waveguide widths and gaps. The `service` subpackage and `cli` module
expose the same operations over HTTP and the command line.
"""

from .design import (
    DEFAULT_DECOUPLE_GAP_UM,
    DispersionTable,
    GeometrySpec,
    SweepResult,
    beta_from_width,
    default_table_path,
    default_tables,
    gap_from_kappa,
    hamiltonian_from_geometry,
    kappa_from_gap,
    load_table,
    perturbation_sweep,
    synthesize_geometry,
    width_from_beta,
)
from .errors import DomainError, InputError, WalkgateError
from .gate import (
    CNOT_IMAGE,
    LOGICAL_STATES,
    BellOutput,
    CountSample,
    LogicalEncoding,
    LogicalTransferMatrix,
    QubitStatePrep,
    encoding_scores,
    entangled_output,
    fidelity,
    find_encoding,
    logical_phases,
    logical_transfer_matrix,
    postselection_success,
    prepare_control_superposition,
    sample_counts,
)
from .interference import (
    OutcomeDistribution,
    SourceModel,
    TwoPhotonInput,
    coincidence_prob,
    hom_scan,
    mutual_coherence,
    two_photon_amplitude,
    two_photon_distribution,
    unordered_pairs,
)
from .walk import (
    CNOT_HOP,
    CNOT_SITE,
    Hamiltonian,
    Trajectory,
    WalkUnitary,
    build_hamiltonian,
    cnot_hamiltonian_time,
    dense_hamiltonian,
    single_photon_output,
    trajectory,
    unitary,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "WalkgateError",
    "InputError",
    "DomainError",
    "Hamiltonian",
    "WalkUnitary",
    "Trajectory",
    "CNOT_SITE",
    "CNOT_HOP",
    "build_hamiltonian",
    "cnot_hamiltonian_time",
    "dense_hamiltonian",
    "unitary",
    "trajectory",
    "single_photon_output",
    "SourceModel",
    "TwoPhotonInput",
    "OutcomeDistribution",
    "unordered_pairs",
    "two_photon_amplitude",
    "coincidence_prob",
    "mutual_coherence",
    "two_photon_distribution",
    "hom_scan",
    "LOGICAL_STATES",
    "CNOT_IMAGE",
    "LogicalEncoding",
    "LogicalTransferMatrix",
    "BellOutput",
    "CountSample",
    "QubitStatePrep",
    "encoding_scores",
    "find_encoding",
    "logical_transfer_matrix",
    "postselection_success",
    "logical_phases",
    "fidelity",
    "prepare_control_superposition",
    "entangled_output",
    "sample_counts",
    "DispersionTable",
    "GeometrySpec",
    "SweepResult",
    "DEFAULT_DECOUPLE_GAP_UM",
    "load_table",
    "default_table_path",
    "default_tables",
    "beta_from_width",
    "kappa_from_gap",
    "width_from_beta",
    "gap_from_kappa",
    "synthesize_geometry",
    "hamiltonian_from_geometry",
    "perturbation_sweep",
]
