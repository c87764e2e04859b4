//! Experiment setups shared by the dynamics tests and the acceptance suite.
#![allow(dead_code)]

use hamiltonian_hierarchy::dynamics::*;
use hamiltonian_hierarchy::observables::{parse_poly, sym_canonicalize, Configuration, SymObservable};
use hamiltonian_hierarchy::states::GridState1D;

pub const FD_STEPS: [f64; 3] = [0.1, 0.05, 0.025];
pub const MEANFIELD_N: [usize; 3] = [64, 256, 1024];

pub fn sym(s: &str, k: usize, d: usize) -> SymObservable {
    sym_canonicalize(&parse_poly(s, k, d).unwrap()).unwrap()
}

/// `log2` of successive ratios: the observed order when each step halves the previous one.
pub fn slopes(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[0].abs() / w[1].abs()).log2()).collect()
}

pub fn min_slope(values: &[f64]) -> f64 {
    slopes(values).into_iter().fold(f64::INFINITY, f64::min)
}

/// A deterministic spread of `n` one-dimensional particles.
pub fn spread_configuration(n: usize) -> Configuration<f64> {
    let pts = (0..n)
        .map(|i| {
            let s = i as f64;
            vec![(s * 1.7).sin() * 2.0 + 0.1 * s, (s * 0.9).cos()]
        })
        .collect();
    Configuration::new(1, pts).unwrap()
}

pub fn gaussian_blob(l: f64, vmax: f64, nx: usize, nv: usize) -> GridState1D {
    let c = l / 2.0;
    GridState1D::from_fn(l, vmax, nx, nv, |x, v| (-(x - c).powi(2) / 2.0 - v * v / 2.0).exp())
        .unwrap()
        .normalized()
        .unwrap()
}

/// Period of the relative coordinate of two particles in `W(x) = x²`, measured between
/// two downward zero crossings.
pub fn harmonic_period(dt: f64) -> f64 {
    let w = Potential::polynomial(parse_poly("x1_1^2", 1, 1).unwrap()).unwrap();
    let z0 = Configuration::new(1, vec![vec![0.5, 0.0], vec![-0.5, 0.0]]).unwrap();
    let steps = (1.5 * std::f64::consts::PI / dt).ceil() as usize;
    let traj = nbody_integrate(&z0, &w, dt, steps).unwrap();
    let rel: Vec<f64> = traj.states.iter().map(|z| z.x(0)[0] - z.x(1)[0]).collect();
    let mut crossings = Vec::new();
    for i in 1..rel.len() {
        if rel[i - 1] > 0.0 && rel[i] <= 0.0 {
            let frac = rel[i - 1] / (rel[i - 1] - rel[i]);
            crossings.push(traj.time(i - 1) + frac * dt);
        }
    }
    crossings[1] - crossings[0]
}

/// Largest energy deviation along a Verlet trajectory of eight particles in a Gaussian
/// potential up to `t = 2`.
pub fn energy_drift(dt: f64) -> f64 {
    let z = spread_configuration(8);
    let w = Potential::gaussian(1, 1.0, 1.0).unwrap();
    let e0 = newton_energy(&z, &w);
    let traj = nbody_integrate(&z, &w, dt, (2.0 / dt).round() as usize).unwrap();
    traj.states.iter().map(|s| (newton_energy(s, &w) - e0).abs()).fold(0.0, f64::max)
}

/// Weak residuals along one Verlet trajectory (`dt = 1e-4`), one per finite-difference step.
pub fn particle_residuals(eq: Equation, n: usize, f: &SymObservable) -> Vec<f64> {
    let w = Potential::gaussian(1, 1.0, 1.0).unwrap();
    let traj = nbody_integrate(&spread_configuration(n), &w, 1e-4, 3000).unwrap();
    FD_STEPS.iter().map(|&h| weak_residual(eq, StatePath::Particles(&traj), f, &w, 0.2, h).unwrap()).collect()
}

pub fn vlh_test_observable() -> SymObservable {
    sym("x1_1*v2_1 + v1_1*v2_1 + x1_1^2*x2_1", 2, 1)
}

/// Level-2 Vlasov-hierarchy residual of the factorized grid solution at `n × n` cells.
pub fn vlh_grid_residual(n: usize) -> (f64, bool) {
    let w = Potential::gaussian(1, 0.5, 1.0).unwrap();
    let g0 = gaussian_blob(10.0, 5.0, n, n);
    let dt = 0.4 * g0.dx() / 5.0;
    let steps = (0.5 / dt).round() as usize;
    let run = vlasov_solve_1d(&g0, &w, dt, steps).unwrap();
    let r = weak_residual(Equation::Vlh(2), StatePath::Grid(&run), &vlh_test_observable(), &w, 0.25, dt).unwrap();
    (r.abs(), run.valid)
}

/// The mean-field setting: unit Gaussian blob centred in a box wide enough that nothing
/// wraps or leaves the velocity window by `T = 1`, and a repulsive Gaussian interaction.
pub fn meanfield_setup(seed: u64) -> (GridState1D, Potential, MeanFieldSpec) {
    let g0 = gaussian_blob(16.0, 6.0, 128, 128);
    let w = Potential::gaussian(1, 1.0, 1.0).unwrap();
    let spec = MeanFieldSpec { n_list: MEANFIELD_N.to_vec(), t_final: 1.0, dt: 0.05, seed, replicas: 20 };
    (g0, w, spec)
}

/// Checks a `W = 0` mean-field table against free streaming of `g0`: the replica mean
/// lies within 4 standard errors of the analytic value, and the grid value within 1e-2
/// relative. Returns a description of the first failure.
pub fn free_streaming_check(g0: &GridState1D, table: &MeanFieldTable, t: f64) -> Result<(), String> {
    let flows: [(&str, fn(f64, f64) -> f64); 5] = [
        ("x1_1", |x, _| x),
        ("v1_1", |_, v| v),
        ("x1_1^2", |x, _| x * x),
        ("v1_1^2", |_, v| v * v),
        ("x1_1*v1_1", |x, v| x * v),
    ];
    for (name, phi) in flows {
        let mean = g0.pair_fn(|x, v| phi(x + t * v, v));
        let var = g0.pair_fn(|x, v| phi(x + t * v, v).powi(2)) - mean * mean;
        for &n in &table.rows.iter().map(|r| r.n).collect::<std::collections::BTreeSet<_>>() {
            let rows: Vec<_> = table.rows.iter().filter(|r| r.n == n && r.observable == name).collect();
            let avg = rows.iter().map(|r| r.empirical).sum::<f64>() / rows.len() as f64;
            let se = (var.max(0.0) / (n * rows.len()) as f64).sqrt();
            if (avg - mean).abs() > 4.0 * se.max(1e-12) {
                return Err(format!("{name} N={n}: replica mean {avg} vs analytic {mean} (se {se})"));
            }
            let grid = rows[0].grid;
            if (grid - mean).abs() > 1e-2 * mean.abs().max(1.0) {
                return Err(format!("{name}: grid {grid} vs analytic {mean}"));
            }
        }
    }
    Ok(())
}
