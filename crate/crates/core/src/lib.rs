//! Hamiltonian structures of kinetic theory at desk scale.
//!
//! Exact symmetric-polynomial observables and their Lie algebras, the `n`-particle and
//! unbounded hierarchy brackets, Dirac, grid and factorized states, Lie-Poisson brackets
//! of expectation functionals, and the Newton, Liouville, BBGKY and Vlasov dynamics that
//! the Poisson morphisms connect.

pub mod dynamics;
pub mod error;
pub mod hierarchy;
pub mod lie_poisson;
pub mod linalg;
pub mod observables;
pub mod random;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
