//! Nilpotent quotients `G_c(m, n)` of Baumslag-Solitar groups, Reidemeister
//! numbers of their automorphisms and the R-infinity nilpotency degree.

pub mod abelian;
pub mod cli;
pub mod degree;
pub mod error;
pub mod gcgroup;
pub mod intlinalg;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};
