//! Time evolution: velocity-Verlet particle dynamics, a semi-Lagrangian 1-D Vlasov solver,
//! weak-form residuals of the kinetic equations, and the mean-field comparison.

mod compiled;
mod meanfield;
mod nbody;
mod potential;
mod residual;
mod vlasov;

pub use compiled::CompiledPoly;
pub use meanfield::{
    meanfield_experiment, median, panel, replica_rng, sample_from_grid, MeanFieldRow, MeanFieldSpec, MeanFieldTable,
    NORMALIZATION_TOLERANCE, PANEL,
};
pub use nbody::{
    accelerations, nbody_final, nbody_integrate, nbody_integrate_every, newton_energy, reverse_velocities,
    total_momentum, Trajectory,
};
pub use potential::Potential;
pub use residual::{weak_residual, Equation, StatePath};
pub use vlasov::{
    force_field, vlasov_solve_1d, vlasov_solve_1d_every, vlasov_step, VlasovRun, VELOCITY_TAIL_TOLERANCE,
};
