//! Finite truncations of distributionally irregular entire and harmonic
//! functions, together with numerical certificates for the growth
//! envelopes, density-one index sets, Cesaro-average bounds,
//! antiderivative norm bounds, and orbit behaviour that characterize
//! them.
//!
//! Layout:
//! - [`series`]: truncated Taylor series, D/S operators, circle norms
//! - [`harmonic`]: exact harmonic polynomial algebra on R^N
//! - [`density`]: index sets and exact finite-horizon densities
//! - [`construct`]: block parameters, weight schedules, witnesses
//! - [`verify`]: reproducible certificates
//! - [`io`]: lossless JSON artifact formats

pub mod construct;
pub mod density;
pub mod envelope;
pub mod error;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod rational;
pub mod series;
pub mod verify;

pub use envelope::{GrowthEnvelope, ScaleFn};
pub use error::{Error, Result};
