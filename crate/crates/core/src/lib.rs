//! Gaussian steady states of linearized cavity optomechanics.
//!
//! The crate covers single-mode and two-mode Gaussian state analysis,
//! quantum Langevin drift/diffusion builders with a Lyapunov steady-state
//! solver, frequency-domain spectra, and analytic cooling limits.

pub mod closed_form;
pub mod error;
pub mod gaussian;
pub mod langevin;
pub mod linalg;
pub mod optimize;
pub mod params;
pub mod quadrature;
pub mod spectral;
pub mod warning;

pub use closed_form::{
    backaction_1d, backaction_2d, rwa_optimum, strong_coupling, weak_coupling, Backaction1DResult,
    Backaction2DResult, RwaOptimum, StrongCouplingResult, WeakCouplingResult,
};
pub use error::{Error, Result};
pub use gaussian::{
    decompose_1d, occupation_and_purity_1d, purity_2d_general, purity_2d_reduced, wavefunction, Cov1D,
    Cov2D, Decomposition1D, Summary2D,
};
pub use langevin::{
    build_1d, build_2d, build_rwa, stability, steady_covariance, CovarianceMatrix, LinearSystem, NoiseMode,
};
pub use params::{
    bright_dark, cooperativity, BrightDark, Coupling, SystemParams1D, SystemParams2D, SystemParamsRWA,
};
pub use spectral::{integrate_moments, position_psd, residue_moments, FreqGrid, SpectralMoments};
pub use warning::Warning;
