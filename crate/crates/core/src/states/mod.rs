//! Compactly supported states: Dirac sums, periodic 1-D grids and factorized tensor
//! powers, with pairings, marginals and the structure maps between state spaces.

mod dirac;
mod factorized;
mod grid;
mod hierarchy;

pub use dirac::{iota_em, iota_lio, Atom, DiracState};
pub use factorized::{Base, FactorizedState, GRID_NESTED_CAP};
pub use grid::GridState1D;
pub use hierarchy::{iota_factorize, iota_mar, StateHierarchy};
