//! Time-dependent weak values of pre- and post-selected finite-dimensional
//! systems, PT / anti-PT classification of the resulting weak interaction
//! Hamiltonians, and von Neumann pointer translations and moments.

pub mod error;
pub mod pointer;
pub mod pps;
pub mod quadrature;
pub mod quantum;
pub mod symmetry;
pub mod tolerances;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use pps::{
    default_fd_step, evolve_pps, weak_energy, weak_energy_series, weak_value, weak_value_central_difference,
    weak_value_derivative, weak_value_derivative_series, weak_value_of, weak_value_series, PpsScenario, TimeGrid,
    WeakValueSeries,
};
pub use quantum::{evolve, expectation, hermitian_deviation, inner, sandwich, Observable, StateVector};
pub use symmetry::{
    classify, even_odd_decompose, is_anti_pt_symmetric, is_pt_symmetric, pt_transform, CoefficientSeries,
    SymmetryReport, Vanishing, Verdict,
};
