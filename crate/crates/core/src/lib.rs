//! Aharonov-Casher holonomy of a spin-1/2 particle on a ring threaded by a
//! tilted line charge.
//!
//! The crate integrates the SU(2) path-ordered exponential of the induced
//! vector potential around the ring, extracts the phase and rotation axis of
//! the resulting holonomy, continues the phase along parameter sweeps, and
//! solves the spin-orbit-free ring Hamiltonian under the twisted boundary
//! condition that the holonomy imposes.
//!
//! ```
//! use ac_holonomy::{field::AcConfig, holonomy::{propagate, IntegratorSpec}, phase::extract_phase};
//!
//! let u = propagate(&AcConfig::new(0.5, 0.0), &IntegratorSpec::default()).unwrap();
//! let r = extract_phase(&u);
//! assert!((r.phi_ac_principal - std::f64::consts::PI).abs() < 1e-12);
//! ```

pub mod error;
pub mod field;
pub mod holonomy;
pub mod manifest;
pub mod output;
pub mod phase;
pub mod selfcheck;
pub mod spectrum;
pub mod su2;

pub use error::{AcError, Result};
pub use field::{AcConfig, CylindricalVec3};
pub use holonomy::{IntegratorSpec, Method};
pub use phase::{AcPhaseResult, SweepParameter, SweepResult};
pub use su2::{Generator3, Su2};
