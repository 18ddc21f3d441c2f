//! Weyl-group combinatorics, cellular (co)homology and tau-functions for the
//! compactified isospectral varieties of nilpotent Toda lattices.
//!
//! The modules build on each other in order: [`lie`] supplies root data and
//! coset tables, [`sign`] the action on sign vectors, [`incidence`] the
//! boundary coefficients, [`complex`] the homology. [`poly`], [`tau`] and
//! [`divisor`] are the symbolic side, [`toda`] the numeric flow, and
//! [`verify`] runs the reference checks used by the CLI.

pub mod complex;
pub mod divisor;
pub mod error;
pub mod incidence;
pub mod lie;
pub mod poly;
pub mod sign;
pub mod tau;
pub mod toda;
pub mod verify;

pub use complex::{AbelianGroup, ChainComplex, Coefficients};
pub use divisor::UniPoly;
pub use error::{Error, Result};
pub use incidence::{Graph, IncidenceTable};
pub use lie::{root_datum, CartanType, Family, RootDatum, SubsetJ, WeylElement};
pub use poly::Poly;
pub use sign::{Sign, SignVector, SignedCell};
pub use tau::TauSystem;
pub use toda::{TodaState, Trajectory};
