//! Toric vector bundles through their Klyachko filtrations.
//!
//! A [`ToricBundle`] is a smooth complete [`Fan`] together with one decreasing
//! filtration of `E = Q^r` per ray. From that data the crate computes the
//! parliament of polytopes, global sections, positivity (global generation,
//! jet separation, ampleness, nefness), splitting types on invariant curves,
//! and per-character Čech cohomology.
//!
//! All linear algebra is exact. The core is generic over the scalar field
//! (see [`scalar::Field`]); the aliases below fix it to arbitrary-precision
//! rationals.
//!
//! ```
//! use toric_parliament::{examples, positivity};
//!
//! let t = examples::tangent_projective(2);
//! let report = positivity::analyze(&t, &[1]).unwrap();
//! assert!(report.globally_generated && report.very_ample && report.ample);
//! ```

pub mod cohomology;
pub mod error;
pub mod exactlin;
pub mod examples;
pub mod fan;
pub mod format;
pub mod klyachko;
pub mod matroid;
pub mod parliament;
pub mod positivity;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod svg;

pub use error::{Error, Result};
pub use fan::{Fan, Wall};
pub use klyachko::{ConeSplitting, Filtration, FiltrationStep, ToricBundle};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// Rationals with `i128` parts, for callers that prefer machine arithmetic.
pub type SmallRational = num_rational::Ratio<i128>;

pub type QSubspace = exactlin::Subspace<Rational>;
pub type QBundle = klyachko::ToricBundle<Rational>;
pub type QGroundSet = matroid::GroundSet<Rational>;
