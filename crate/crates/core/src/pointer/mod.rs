//! The measuring pointer: coupling profiles, weak translations, grid
//! wavefunctions, first-order moment predictions and the exact post-selected
//! von Neumann oracle.

pub mod coupling;
pub mod oracle;
pub mod predict;
mod spectral;
pub mod state;
pub mod translation;

pub use coupling::{align_grid_for_boxcar, CouplingKind, CouplingProfile, Picture};
pub use oracle::{apply_weak_hamiltonian, exact_pointer, weak_approx_pointer, ExactPointer};
pub use predict::{moment_functionals, predict_mean, predict_variance, MomentFunctionals, PointerObservable};
pub use state::{gaussian_pointer, pointer_moments, GaussianPointer, PointerGrid, PointerMomentReport, PointerState};
pub use translation::{closed_form_translation, pointer_translation, Illustration};
