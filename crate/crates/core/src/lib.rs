//! Weighted multiplicities and weighted orders of quotient and terminal
//! threefold singularities under weighted blow-ups, exact freeness threshold
//! checks for adjoint linear systems, and intersection numbers on weighted
//! projective spaces.

pub mod catalog;
pub mod divisor;
pub mod enclosure;
pub mod error;
pub mod freeness;
pub mod lattice;
pub mod rational;
pub mod suite;
pub mod wps;

pub use error::{Error, Result};
pub use rational::Rat;
