//! Relative-entropy quantum coherence for finite-dimensional multipartite systems.
//!
//! The crate is organised around a dense complex linear-algebra core ([`qmat`])
//! and four analysis layers built on it:
//!
//! - [`measures`]: relative entropy of coherence, l1 coherence, basis-free
//!   coherence (minimised over local unitaries), relative-entropy discord
//!   (minimised over product bases) and the coherence/discord/entanglement
//!   hierarchy.
//! - [`channels`]: incoherent Kraus-operator validation, structure counting and
//!   enumeration, channel application and monotonicity harnesses.
//! - [`gates`]: optimal coherence creation by one-side, two-side and Cartan
//!   kernel two-qubit gates, numerical oracles and coherent power.
//! - [`multiparty`]: tripartite additivity, the strong-subadditivity
//!   decomposition and saturating-state constructions.
//!
//! All entropies are in bits, with `0 log 0 = 0`. Subsystems are ordered
//! row-major: the leftmost label is the most significant digit of a basis
//! index.

pub mod basis;
pub mod channels;
pub mod error;
pub mod gates;
pub mod measures;
pub mod multiparty;
pub mod optim;
pub mod param;
pub mod qmat;
pub mod tol;

pub use basis::LocalBasisAssignment;
pub use error::{Error, Result};
pub use measures::MeasureReport;
pub use optim::OptimizerConfig;
pub use qmat::{CMatrix, CVector, DensityMatrix, PureState, SubsystemShape, UnitaryMatrix};

pub use num_complex::Complex64;
