//! Pseudo-spectral solver for the two-dimensional Kuramoto-Sivashinsky
//! equation on the periodic torus `[-pi, pi)^2`, in vector form
//! `u_t + (eta(u) . grad) u + lambda Lap u + Lap^2 u = 0` and scalar form
//! `phi_t + 1/2 (eta(grad phi) . grad) phi + lambda Lap phi + Lap^2 phi = 0`,
//! where `eta` is either the identity (plain KSE) or one of three bounded
//! "calming" functions parameterised by `epsilon`.
//!
//! Layout:
//! - [`spectral`]: grid, transforms, derivatives, dealiasing.
//! - [`field`]: physical and spectral field containers.
//! - [`norms`]: L2, L-infinity and Sobolev norms.
//! - [`calming`]: the calming functions and their bounds.
//! - [`dynamics`]: linear symbol and dealiased nonlinear terms.
//! - [`timestepper`]: integrating-factor RK4 and the run driver.
//! - [`experiments`]: configs, initial data, error studies, file formats.

pub mod calming;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod field;
pub mod norms;
pub mod spectral;
pub mod timestepper;

pub use calming::{Calming, CalmingKind, DefectBound};
pub use dynamics::{EquationForm, LinearSymbol, Model};
pub use error::{Error, Result};
pub use field::{Field, Shape, Spectrum};
pub use spectral::{Axis, Grid};
pub use timestepper::{IfRk4, Trajectory};
