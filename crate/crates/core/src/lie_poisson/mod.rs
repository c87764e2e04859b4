//! Functionals generated by expectations, their Gâteaux derivatives and Lie-Poisson
//! brackets, the kinetic-theory energies, weak Hamiltonian vector fields, and checks
//! that the structure maps are Poisson.

mod bracket;
mod functional;
mod hamiltonians;
mod morphism;
mod vector_field;

pub use bracket::{bracket_functional, generator_bracket, lie_poisson_bracket, Algebra};
pub use functional::{gateaux_derivative, Derivative, Functional};
pub use hamiltonians::{
    check_pair_potential, ham_bbgky, ham_lio, ham_vl, ham_vlh, hamiltonian_lio, hamiltonian_new,
    hamiltonian_new_observable, kinetic, kinetic_expectation, pair_potential, pair_sum, potential_at_zero, w_bbgky,
    w_vlh,
};
pub use morphism::{
    eval_pullback_em, morphism_check, morphism_sides, pullback_em, pullback_factorize, pullback_lio, pullback_mar,
    pullback_mar_values, MorphismInput, MorphismSides, StructureMap,
};
pub use vector_field::{
    bbgky_case_fields, bbgky_field, ham_vf_weak, liouville_field, vf_contract, vlh_case_fields, vlh_field, WeakField,
    WeakTerm,
};
