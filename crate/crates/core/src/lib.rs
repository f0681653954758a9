//! Regular n-gon rotating equilibria of the planar n-body problem with a
//! logarithmic pair interaction.
//!
//! The crate builds the equilibria ([`model`]), reduces their linearization
//! mode by mode over the n-th roots of unity ([`spectral`]), classifies
//! linear stability both numerically and from closed-form mass-ratio bounds
//! ([`stability`]), and cross-checks the reduction against the dense
//! linearization ([`linmat`]) and the full nonlinear flow ([`dynamics`]).
//!
//! All quantities are dimensionless: the central mass and the pair coupling
//! are scaled to one, ring bodies carry the mass ratio `mu`, and the ring
//! radius defaults to one.

// negated float comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linmat;
pub mod model;
pub mod spectral;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use model::{BodySet, RingParams};
pub use spectral::{DeltaPlacement, ModeFactor, ModeIndex};
pub use stability::{MuBounds, StabilityVerdict, Status};
