//! Numerical harmonic analysis for the rational Dunkl operator on the real line.

pub mod cli;
pub mod dunkl;
pub mod error;
pub mod hardy;
pub mod poisson;
pub mod quadrature;
pub mod special;
pub mod translation;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
