"""Thermal entanglement witnesses for Heisenberg spin-S dimers.

J is in kelvin (J/k_B) with J < 0 antiferromagnetic. Spins may be given as
strings ("5/2"), floats (2.5) or SpinValue instances.
"""

from ._core import (
    DimerModel,
    DimensionMismatch,
    EmptyDataset,
    Error,
    InvalidArgument,
    MOLAR_CURIE_CONSTANT,
    MU_B_OVER_K_B,
    NonConvergence,
    NonHermitianInput,
    NonMonotonicTemperature,
    NonPositiveTemperature,
    ParseError,
    SingularJacobian,
    SpinValue,
    UnitMismatch,
    ZeroExchange,
    boltzmann_series,
    critical_coefficient,
    dimer_hamiltonian,
    dimer_levels,
    eigendecompose,
    entanglement_temperature,
    f_closed,
    f_numeric,
    fit,
    ground_state,
    negativity,
    run_validation,
    spin_operators,
    susceptibility,
    reference_ground_state,
    temperature_grid,
    thermal_density_matrix,
    witness,
    witness_curve,
    witness_vs_negativity_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
