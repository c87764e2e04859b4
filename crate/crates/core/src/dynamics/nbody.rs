use std::fmt::Write as _;

use rayon::prelude::*;

use super::Potential;
use crate::error::{Error, Result};
use crate::observables::Configuration;

/// Particle count above which force evaluation is split across threads.
const PARALLEL_THRESHOLD: usize = 64;

/// Configurations on a uniform time grid `t_0 + i·dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub integrator: &'static str,
    pub states: Vec<Configuration<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn last(&self) -> &Configuration<f64> {
        self.states.last().expect("trajectory has at least the initial state")
    }

    /// Index of the grid point at time `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let s = (t - self.t0) / self.dt;
        let i = s.round();
        if i < 0.0 || (s - i).abs() > 1e-6 || i as usize >= self.states.len() {
            return None;
        }
        Some(i as usize)
    }

    pub fn at(&self, t: f64) -> Result<&Configuration<f64>> {
        self.index_of(t).map(|i| &self.states[i]).ok_or(Error::MissingTime(t))
    }

    /// Columns `t,particle,x1..xd,v1..vd`, one row per particle per stored step.
    pub fn to_csv(&self) -> String {
        let d = self.states.first().map_or(1, Configuration::d);
        let mut s = String::from("t,particle");
        for c in 1..=d {
            write!(s, ",x{c}").unwrap();
        }
        for c in 1..=d {
            write!(s, ",v{c}").unwrap();
        }
        s.push('\n');
        for (i, z) in self.states.iter().enumerate() {
            for (p, pt) in z.points().iter().enumerate() {
                write!(s, "{:?},{}", self.time(i), p + 1).unwrap();
                for c in pt {
                    write!(s, ",{c:?}").unwrap();
                }
                s.push('\n');
            }
        }
        s
    }
}

fn acceleration_of(i: usize, points: &[Vec<f64>], potential: &Potential, d: usize) -> Vec<f64> {
    let n = points.len() as f64;
    let mut acc = vec![0.0; d];
    let mut diff = vec![0.0; d];
    let mut grad = vec![0.0; d];
    for pj in points {
        for c in 0..d {
            diff[c] = points[i][c] - pj[c];
        }
        potential.gradient(&diff, &mut grad);
        for c in 0..d {
            acc[c] -= 2.0 / n * grad[c];
        }
    }
    acc
}

/// `a_i = -(2/N) Σ_j ∇W(x_i - x_j)`, the `j = i` term vanishing because `∇W(0) = 0`.
pub fn accelerations(z: &Configuration<f64>, potential: &Potential) -> Vec<Vec<f64>> {
    let d = z.d();
    let points = z.points();
    if potential.is_zero() {
        return vec![vec![0.0; d]; points.len()];
    }
    if points.len() >= PARALLEL_THRESHOLD {
        (0..points.len()).into_par_iter().map(|i| acceleration_of(i, points, potential, d)).collect()
    } else {
        (0..points.len()).map(|i| acceleration_of(i, points, potential, d)).collect()
    }
}

fn check_finite(z: &Configuration<f64>) -> Result<()> {
    for (i, p) in z.points().iter().enumerate() {
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i + 1));
        }
    }
    Ok(())
}

fn verlet_step(z: &mut Configuration<f64>, acc: &mut Vec<Vec<f64>>, potential: &Potential, dt: f64) -> Result<()> {
    let d = z.d();
    for (p, a) in z.points_mut().iter_mut().zip(acc.iter()) {
        for c in 0..d {
            p[d + c] += 0.5 * dt * a[c];
            p[c] += dt * p[d + c];
        }
    }
    *acc = accelerations(z, potential);
    for (p, a) in z.points_mut().iter_mut().zip(acc.iter()) {
        for c in 0..d {
            p[d + c] += 0.5 * dt * a[c];
        }
    }
    check_finite(z)
}

fn check_inputs(z0: &Configuration<f64>, potential: &Potential, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    if z0.d() != potential.d() {
        return Err(Error::DimensionMismatch(z0.d(), potential.d()));
    }
    check_finite(z0)
}

/// Velocity-Verlet trajectory of Newton's equations with all `steps + 1` states stored.
pub fn nbody_integrate(z0: &Configuration<f64>, potential: &Potential, dt: f64, steps: usize) -> Result<Trajectory> {
    nbody_integrate_every(z0, potential, dt, steps, 1)
}

/// As [`nbody_integrate`], storing every `stride`-th state (the time grid step becomes
/// `stride · dt`).
pub fn nbody_integrate_every(
    z0: &Configuration<f64>,
    potential: &Potential,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    check_inputs(z0, potential, dt)?;
    if stride == 0 || !steps.is_multiple_of(stride) {
        return Err(Error::Invalid(format!("stride {stride} must divide the step count {steps}")));
    }
    let mut z = z0.clone();
    let mut acc = accelerations(&z, potential);
    let mut states = Vec::with_capacity(steps / stride + 1);
    states.push(z.clone());
    for step in 1..=steps {
        verlet_step(&mut z, &mut acc, potential, dt)?;
        if step % stride == 0 {
            states.push(z.clone());
        }
    }
    Ok(Trajectory { t0: 0.0, dt: dt * stride as f64, integrator: "velocity-verlet", states })
}

/// Final configuration only.
pub fn nbody_final(
    z0: &Configuration<f64>,
    potential: &Potential,
    dt: f64,
    steps: usize,
) -> Result<Configuration<f64>> {
    check_inputs(z0, potential, dt)?;
    let mut z = z0.clone();
    let mut acc = accelerations(&z, potential);
    for _ in 0..steps {
        verlet_step(&mut z, &mut acc, potential, dt)?;
    }
    Ok(z)
}

/// Flips every velocity.
pub fn reverse_velocities(z: &Configuration<f64>) -> Configuration<f64> {
    let d = z.d();
    let mut out = z.clone();
    for p in out.points_mut() {
        for c in 0..d {
            p[d + c] = -p[d + c];
        }
    }
    out
}

/// Rescaled Newton energy `(1/N)(½Σ|v_i|² + (1/N)Σ_{i≠j} W(x_i - x_j) + W(0))` in floating point.
pub fn newton_energy(z: &Configuration<f64>, potential: &Potential) -> f64 {
    let d = z.d();
    let n = z.n() as f64;
    let pts = z.points();
    let kinetic: f64 = pts.iter().map(|p| 0.5 * p[d..].iter().map(|v| v * v).sum::<f64>()).sum();
    let mut interaction = 0.0;
    let mut diff = vec![0.0; d];
    for (i, pi) in pts.iter().enumerate() {
        for (j, pj) in pts.iter().enumerate() {
            if i != j {
                for c in 0..d {
                    diff[c] = pi[c] - pj[c];
                }
                interaction += potential.eval(&diff);
            }
        }
    }
    (kinetic + interaction / n + potential.eval(&vec![0.0; d])) / n
}

/// `Σ_i v_i`.
pub fn total_momentum(z: &Configuration<f64>) -> Vec<f64> {
    let d = z.d();
    let mut p = vec![0.0; d];
    for pt in z.points() {
        for c in 0..d {
            p[c] += pt[d + c];
        }
    }
    p
}
