//! Lower bounds and exact solutions for minimum-error discrimination of
//! quantum states.
//!
//! - [`matrix`]: dense complex matrices, a Jacobi Hermitian eigensolver and
//!   the spectral functions built on it;
//! - [`ensemble`], [`io`]: validated states, priors and measurements, and their file format;
//! - [`bounds`]: the Helstrom limit and the lower bounds `L0..L6`;
//! - [`exact`]: exact solvers for two states, commuting states and the
//!   structured family, plus the optimality certificate;
//! - [`compare`]: seeded randomized sweeps over the bounds;
//! - [`catalog`]: reference instances with closed-form answers.

pub mod bounds;
pub mod catalog;
pub mod compare;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod io;
pub mod json;
pub mod matrix;
pub mod random;

pub use bounds::{all_bounds, Bound, BoundReport};
pub use ensemble::{Ensemble, Povm, PovmKind, StructuredEnsemble};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Tolerances};
