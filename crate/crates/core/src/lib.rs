//! Exact-arithmetic toolkit for sweep orderings ("lineups") of finite point
//! configurations: recursive cone subdivision over a symmetry-reduced test
//! cone, LP certification of facet rays, H-representation assembly, and
//! independent brute-force cross-checks.
//!
//! All geometry runs over arbitrary-precision rationals; there is no floating
//! point anywhere in the computational path.

pub mod bits;
pub mod cone;
pub mod config;
pub mod engine;
pub mod error;
pub mod hypercube;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod poset;
pub mod ranking;
pub mod rational;
pub mod tableaux;

pub use error::{Error, Result};
pub use rational::Rational;
