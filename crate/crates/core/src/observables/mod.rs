//! Exact arithmetic, differentiation, symmetrization and Poisson brackets for
//! polynomial observables on k-particle phase space.

mod configuration;
mod monomial;
mod parse;
mod poly;
mod sym;

pub use configuration::Configuration;
pub use monomial::{monomials_up_to, Monomial};
pub use parse::{max_particle_index, parse_poly};
pub use poly::{var_index, Kind, Poly};
pub use sym::{
    lie_bracket_gk, poisson_bracket_standard, sym_canonicalize, sym_canonicalize_with_cap, symmetric_basis, symmetrize,
    SymObservable, DEFAULT_DEGREE_CAP,
};
