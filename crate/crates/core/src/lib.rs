//! Simulator for dissipative population transfer in a driven three-level
//! lambda system.
//!
//! Two lower levels couple to a common excited level through a Gaussian
//! pump/Stokes pulse pair. Population transfer runs either through the dark
//! state (counterintuitive pulse order) or through the lower bright state
//! (intuitive order, nonzero detuning). Dissipation is modeled two ways:
//!
//! * a microscopic master equation whose jump operators live in the
//!   instantaneous dressed basis, derived from a bosonic bath coupled to
//!   both optical transitions with a flat spectral density, valid at zero
//!   and finite temperature (a single mean occupation number `N`);
//! * a phenomenological model of spontaneous emission from the bare excited
//!   level toward the two lower levels.
//!
//! The crate is generic over the floating-point scalar via `num-traits`;
//! the `*64` aliases below are what most users want. Sweeps and file output
//! are `f64` only.

pub mod dissipator;
pub mod drive;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod io;
pub mod mat;
pub mod scalar;
pub mod state;
pub mod testkit;

pub use error::{Error, Result};

/// 3x3 complex matrix over `f64`.
pub type CMat3f64 = mat::CMat3<f64>;
/// 3x3 complex matrix over `f32`.
pub type CMat3f32 = mat::CMat3<f32>;
/// Ket over `f64`.
pub type KetVector64 = mat::CVec3<f64>;
/// Density matrix over `f64`.
pub type DensityMatrix64 = state::DensityMatrix<f64>;
/// Density matrix over `f32`.
pub type DensityMatrix32 = state::DensityMatrix<f32>;
/// Pulse schedule over `f64`.
pub type PulseSchedule64 = drive::PulseSchedule<f64>;
/// Dressed frame over `f64`.
pub type DressedFrame64 = drive::DressedFrame<f64>;
/// Bath model over `f64`.
pub type BathModel64 = dissipator::BathModel<f64>;
/// Lindblad term over `f64`.
pub type LindbladTerm64 = dissipator::LindbladTerm<f64>;
/// Integrator configuration over `f64`.
pub type IntegratorConfig64 = integrator::IntegratorConfig<f64>;
/// Model selection over `f64`.
pub type ModelSpec64 = integrator::ModelSpec<f64>;
