"""Simulator for two-qubit tunable-coupler superconducting circuits.

Computes static ZZ crosstalk exactly (dense diagonalization of the
four-mode circuit Hamiltonian) and in closed form (fourth-order
dispersive theory), locates zero-crosstalk coupler biases, simulates
randomized benchmarking under crosstalk and decoherence, and models the
parametric half-swap gate including readout correction, process
tomography, and coupler-temperature effects.
"""

__version__ = "0.1.0"

from .channels import (
    DensityMatrix,
    GateLabel,
    NoiseParams,
    RBMode,
    RBResult,
    apply_decoherence,
    apply_gate,
    apply_zz,
    clifford_group,
    rb_step,
    run_rb,
)
from .coupler import (
    FluxPoint,
    ModulationDrive,
    ZeroZetaRoot,
    default_operating_point,
    effective_drive_strength,
    find_zero_zeta,
    flux_of_omega_minus,
    flux_slope,
    modulation_amplitude_for,
    omega_minus_of_flux,
)
from .devices import (
    bundled_device,
    interference_configs,
    load_device,
    resolve_device,
)
from .errors import (
    ChannelInvariantError,
    DeviceFileError,
    HybridizationError,
    PoleError,
    RBFitError,
    ReadoutCorrectionError,
)
from .figures import run_figure_recipe
from .hilbert import (
    DEFAULT_DIMS,
    DeviceParams,
    HilbertSpace,
    Mode,
    ModeSpec,
    Operator,
    annihilation,
    build_hamiltonian,
    creation,
    number,
    total_number,
)
from .perturbation import (
    DetuningSet,
    IswapStrengths,
    detunings,
    effective_exchange_populations,
    exchange_J,
    exchange_J_slope,
    iswap_derivative_ratio,
    iswap_strengths,
    straddling_ok,
    zeta_perturbative,
    zeta_perturbative_terms,
)
from .spectrum import (
    LabeledSpectrum,
    convergence_check,
    diagonalize,
    label_states,
    zeta_exact,
    zeta_exact_details,
)
from .tomography import (
    PauliTransferMatrix,
    ReadoutCalibration,
    SQRT_ISWAP,
    ThermalGateModel,
    concurrence,
    correct_readout,
    gate_fidelity,
    nonphysical_error,
    process_tomography_inputs,
    project_physical,
    ptm_from_channel,
    ptm_of_unitary,
    state_fidelity,
    thermal_iswap_fidelity,
    thermal_population,
    unitary_root,
)
