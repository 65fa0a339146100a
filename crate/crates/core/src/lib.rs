//! Steady-state fiber orientation tensors for homogeneous flows.
//!
//! The second-order orientation tensor of a fiber suspension evolves by a
//! moment-tensor equation whose right-hand side depends on a fourth-order
//! closure approximation. This crate finds steady (preferred) orientation
//! states by Newton-Raphson iteration on the five independent tensor
//! components, using exact analytic Jacobians for every supported evolution
//! model and closure, and cross-checks them against a fixed-step RK4
//! transient reference and a finite-difference derivative harness.
//!
//! Modules follow the pipeline:
//!
//! * [`tensor`] - orientation-tensor algebra (contracted indexing, the
//!   trace-constrained derivative basis, symmetrization, contractions,
//!   invariants).
//! * [`spectral`] - descending-ordered eigendecomposition of symmetric 3x3
//!   matrices and analytic eigenvalue/eigenvector sensitivities.
//! * [`closure`] - all fourth-order closure approximations with exact
//!   directional derivatives.
//! * [`model`] - orientation evolution models (rates and 5x5 Jacobians),
//!   spatial diffusion tensors, the Jeffery vector model, regime classifier.
//! * [`flow`] - homogeneous flow presets and initial-guess catalog.
//! * [`solver`] - the Newton steady-state solver and the RK4 reference
//!   integrator.
//! * [`validate`] - finite-difference Jacobian oracle, error metrics, and
//!   the table-reproduction sweep engine.

pub mod closure;
mod error;
pub mod flow;
pub mod model;
pub mod solver;
pub mod spectral;
pub mod tensor;
pub mod validate;

pub use error::{Error, Result};

/// Symmetric second-order tensors and velocity gradients.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// Unit orientation vectors.
pub type Vec3 = nalgebra::Vector3<f64>;
/// The five independent components (a11, a12, a13, a22, a23).
pub type Indep5 = nalgebra::SVector<f64, 5>;
/// Jacobians of the contracted residual.
pub type Mat5 = nalgebra::SMatrix<f64, 5, 5>;
