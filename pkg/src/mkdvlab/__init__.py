"""Pseudospectral simulation and verification lab for the fifth-order mKdV
equation on the 2*pi torus: conserved Hamiltonians, gauge renormalization,
resonance combinatorics, short-time weighted norms, and the explicit
high-frequency growth counterexample."""

__version__ = "0.1.0"

from .equations import (
    EquationParams,
    RenormalizedTerms,
    check_constraints,
    derive_gauge_params,
    dispersion_mu,
    rhs_fifth_kdv,
    rhs_physical,
    rhs_renormalized,
    rhs_third_order,
)
from .integrate import StepControl, Trajectory, evolve, nonlinear_product
from .invariants import (
    HamiltonianReport,
    ModifiedEnergyParams,
    drift_report,
    es_energy,
    hamiltonian_h0,
    hamiltonian_h1,
    hamiltonian_h2,
    modified_energy_ek,
)
from .resonance import (
    ResonanceQuintuple,
    ResonanceTriple,
    enumerate_n3,
    enumerate_n5,
    phi_cubic,
    resonance_g,
    resonance_h,
)
from .spectral import (
    CutoffFamily,
    GridSpec,
    SpectralField,
    analyze,
    chi,
    eval_chi_psi,
    project_pk,
    psi,
    sobolev_norm,
    synthesize,
)
from .transforms import gauge_forward, gauge_inverse, miura, miura_residual

__all__ = [
    "CutoffFamily",
    "EquationParams",
    "GridSpec",
    "HamiltonianReport",
    "ModifiedEnergyParams",
    "RenormalizedTerms",
    "ResonanceQuintuple",
    "ResonanceTriple",
    "SpectralField",
    "StepControl",
    "Trajectory",
    "analyze",
    "check_constraints",
    "chi",
    "derive_gauge_params",
    "dispersion_mu",
    "drift_report",
    "enumerate_n3",
    "enumerate_n5",
    "es_energy",
    "eval_chi_psi",
    "evolve",
    "gauge_forward",
    "gauge_inverse",
    "hamiltonian_h0",
    "hamiltonian_h1",
    "hamiltonian_h2",
    "miura",
    "miura_residual",
    "modified_energy_ek",
    "nonlinear_product",
    "phi_cubic",
    "project_pk",
    "psi",
    "resonance_g",
    "resonance_h",
    "rhs_fifth_kdv",
    "rhs_physical",
    "rhs_renormalized",
    "rhs_third_order",
    "sobolev_norm",
    "synthesize",
    "__version__",
]
