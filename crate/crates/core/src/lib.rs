//! Dirichlet series counting dihedral extensions of Q with a given quadratic resolvent.

pub mod arith;
pub mod cli;
pub mod cubic_oracle;
pub mod dirichlet;
pub mod error;
pub mod quadfield;
pub mod special_case;
pub mod splitting;

pub use error::{Error, Result};
