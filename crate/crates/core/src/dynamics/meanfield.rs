use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::nbody::nbody_final;
use super::vlasov::vlasov_solve_1d_every;
use super::Potential;
use crate::error::{Error, Result};
use crate::observables::{parse_poly, sym_canonicalize, Configuration, SymObservable};
use crate::states::{iota_em, GridState1D};

/// Relative mass tolerance for treating a grid as a probability density.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Observable panel compared between particles and grid: `x, v, x², v², xv`.
pub const PANEL: [&str; 5] = ["x1_1", "v1_1", "x1_1^2", "v1_1^2", "x1_1*v1_1"];

pub fn panel() -> Vec<(String, SymObservable)> {
    PANEL
        .iter()
        .map(|s| {
            let f = sym_canonicalize(&parse_poly(s, 1, 1).expect("panel parses")).expect("panel symmetric");
            (s.to_string(), f)
        })
        .collect()
}

/// Draws `n` i.i.d. points from a normalized grid density: a cell by inverse CDF on the
/// flattened grid, then a uniform point inside the cell.
pub fn sample_from_grid<R: Rng>(grid: &GridState1D, n: usize, rng: &mut R) -> Result<Configuration<f64>> {
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let mass = grid.mass();
    if !(mass > 0.0) {
        return Err(Error::Invalid("cannot sample from a grid with zero mass".into()));
    }
    if (mass - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Invalid(format!("grid density has mass {mass}, expected 1")));
    }
    if grid.values().iter().any(|&v| v < 0.0) {
        return Err(Error::Invalid("grid density has negative values".into()));
    }
    let mut cdf = Vec::with_capacity(grid.values().len());
    let mut acc = 0.0;
    for &v in grid.values() {
        acc += v;
        cdf.push(acc);
    }
    let (dx, dv, nv) = (grid.dx(), grid.dv(), grid.nv());
    let points = (0..n)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            let cell = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            let (i, j) = (cell / nv, cell % nv);
            let x = (i as f64 + rng.gen::<f64>()) * dx;
            let v = -grid.vmax() + (j as f64 + rng.gen::<f64>()) * dv;
            vec![x, v]
        })
        .collect();
    Configuration::new(1, points)
}

/// Deterministic generator for replica `replica` of a run seeded with `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// Settings of a mean-field comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanFieldSpec {
    pub n_list: Vec<usize>,
    pub t_final: f64,
    pub dt: f64,
    pub seed: u64,
    pub replicas: usize,
}

/// One row: `(N, seed, observable, empirical_value, grid_value, abs_error)`; `seed` is the
/// base seed and `replica` the generator stream.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanFieldRow {
    pub n: usize,
    pub seed: u64,
    pub replica: u64,
    pub observable: String,
    pub empirical: f64,
    pub grid: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanFieldTable {
    pub rows: Vec<MeanFieldRow>,
    pub grid_valid: bool,
    pub warnings: Vec<String>,
}

impl MeanFieldTable {
    /// Median absolute error over replicas for each `N` and observable.
    pub fn median_errors(&self, n: usize, observable: &str) -> f64 {
        let mut errs: Vec<f64> =
            self.rows.iter().filter(|r| r.n == n && r.observable == observable).map(|r| r.abs_error).collect();
        median(&mut errs)
    }

    /// Median over replicas of the panel-averaged error, for each `N`.
    pub fn median_panel_error(&self, n: usize) -> f64 {
        let mut per_replica: std::collections::BTreeMap<u64, (f64, usize)> = Default::default();
        for r in self.rows.iter().filter(|r| r.n == n) {
            let e = per_replica.entry(r.replica).or_insert((0.0, 0));
            e.0 += r.abs_error;
            e.1 += 1;
        }
        let mut v: Vec<f64> = per_replica.values().map(|(s, c)| s / *c as f64).collect();
        median(&mut v)
    }

    /// Columns `N,seed,observable,empirical_value,grid_value,abs_error`, seed written as
    /// `base:replica`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,seed,observable,empirical_value,grid_value,abs_error\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{}:{},{},{:?},{:?},{:?}",
                r.n, r.seed, r.replica, r.observable, r.empirical, r.grid, r.abs_error
            )
            .unwrap();
        }
        s
    }
}

pub fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Samples `N` particles from `γ0` for each `N` and replica, runs Newton's equations to
/// `T`, and compares panel expectations of the empirical measure with the grid solution.
pub fn meanfield_experiment(g0: &GridState1D, potential: &Potential, spec: &MeanFieldSpec) -> Result<MeanFieldTable> {
    if spec.n_list.is_empty() || spec.replicas == 0 {
        return Err(Error::Invalid("mean-field experiment needs at least one N and one replica".into()));
    }
    let steps = (spec.t_final / spec.dt).round() as usize;
    if steps == 0 || ((steps as f64) * spec.dt - spec.t_final).abs() > 1e-9 * spec.t_final.max(1.0) {
        return Err(Error::Invalid(format!("T = {} is not a positive multiple of dt = {}", spec.t_final, spec.dt)));
    }
    let run = vlasov_solve_1d_every(g0, potential, spec.dt, steps, steps)?;
    let g_t = run.last();
    let panel = panel();
    let grid_values: Vec<f64> = panel.iter().map(|(_, f)| g_t.pair(f)).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..spec.replicas).flat_map(|r| spec.n_list.iter().map(move |&n| (r, n))).collect();
    let results: Vec<Result<Vec<MeanFieldRow>>> = jobs
        .par_iter()
        .map(|&(r, n)| {
            let mut rng = replica_rng(spec.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15), r as u64);
            let z0 = sample_from_grid(g0, n, &mut rng)?;
            let z_t = nbody_final(&z0, potential, spec.dt, steps)?;
            let em = iota_em(&z_t)?;
            panel
                .iter()
                .zip(&grid_values)
                .map(|((name, f), &grid)| {
                    let empirical = em.pair(f)?;
                    Ok(MeanFieldRow {
                        n,
                        seed: spec.seed,
                        replica: r as u64,
                        observable: name.clone(),
                        empirical,
                        grid,
                        abs_error: (empirical - grid).abs(),
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by_key(|r| (r.n, r.replica));
    Ok(MeanFieldTable { rows, grid_valid: run.valid, warnings: run.warnings })
}
