//! Finite-scale checking of restriction categories, partial-map categories
//! and their presheaf constructions.
//!
//! Everything operates on explicitly enumerated finite categories
//! ([`fincat::FinCat`]); every law is checked exhaustively and reported as a
//! [`report::CheckReport`].

pub mod cocheck;
pub mod equiv;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod format;
pub mod mcat;
pub mod presheaf;
pub mod report;
pub mod restriction;
pub mod rpsh;
pub mod splitting;

pub use error::{Error, Result};
