//! Numerical experiments behind `nbody`, `vlasov1d`, `meanfield` and `limits`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hamiltonian_hierarchy::dynamics::{
    meanfield_experiment, nbody_integrate_every, vlasov_solve_1d_every, MeanFieldSpec, MeanFieldTable, Potential, PANEL,
};
use hamiltonian_hierarchy::hierarchy::{bracket_ginf, bracket_gn, max_coefficient_gap};
use hamiltonian_hierarchy::observables::Configuration;
use hamiltonian_hierarchy::random::{random_hierarchy_upto, Shape};
use hamiltonian_hierarchy::scalar::{rational_to_f64, Rational};
use hamiltonian_hierarchy::states::GridState1D;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::CliError;

fn compute(e: hamiltonian_hierarchy::Error) -> CliError {
    CliError::Compute(e.to_string())
}

/// Step count for `t_final / dt`, which must be a whole number of steps.
fn step_count(t_final: f64, dt: f64) -> Result<usize, CliError> {
    let steps = (t_final / dt).round();
    if steps < 1.0 || (steps * dt - t_final).abs() > 1e-9 * t_final.max(1.0) {
        return Err(CliError::Config(format!("t_final = {t_final} is not a positive multiple of dt = {dt}")));
    }
    Ok(steps as usize)
}

fn stride(cfg: &RunConfig, steps: usize) -> Result<usize, CliError> {
    let every = cfg.get_range("every", steps.max(1), 1, steps.max(1))?;
    if steps % every != 0 {
        return Err(CliError::Config(format!("`every` = {every} must divide the step count {steps}")));
    }
    Ok(every)
}

pub const NBODY_KEYS: &[&str] =
    &["seed", "n", "d", "dt", "steps", "every", "potential", "amplitude", "width", "position_scale", "velocity_scale"];

pub struct NbodySettings {
    n: usize,
    d: usize,
    dt: f64,
    steps: usize,
    every: usize,
    potential: Potential,
    position_scale: f64,
    velocity_scale: f64,
}

impl NbodySettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.check_keys(NBODY_KEYS)?;
        let d = cfg.get_range("d", 1, 1, 3)?;
        let steps = cfg.get_range("steps", 100, 1, 10_000_000)?;
        Ok(NbodySettings {
            n: cfg.get_range("n", 8, 1, 100_000)?,
            d,
            dt: cfg.get_positive("dt", 0.01)?,
            steps,
            every: stride(cfg, steps)?,
            potential: cfg.potential(d)?,
            position_scale: cfg.get_positive("position_scale", 1.0)?,
            velocity_scale: cfg.get_positive("velocity_scale", 1.0)?,
        })
    }
}

/// Trajectory CSV of `n` particles with positions and velocities uniform in
/// `[-scale, scale]` per coordinate.
pub fn nbody(s: &NbodySettings, seed: u64) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..s.n)
        .map(|_| {
            let mut p: Vec<f64> = (0..s.d).map(|_| rng.gen_range(-s.position_scale..=s.position_scale)).collect();
            p.extend((0..s.d).map(|_| rng.gen_range(-s.velocity_scale..=s.velocity_scale)));
            p
        })
        .collect();
    let z0 = Configuration::new(s.d, points).map_err(compute)?;
    let traj = nbody_integrate_every(&z0, &s.potential, s.dt, s.steps, s.every).map_err(compute)?;
    Ok(traj.to_csv())
}

const GRID_KEYS: &[&str] = &["l", "vmax", "nx", "nv", "x0", "sigma_x", "sigma_v", "potential", "amplitude", "width"];

struct GridSettings {
    g0: GridState1D,
    potential: Potential,
}

/// Normalized Gaussian blob `exp(-(x-x0)²/2σx² - v²/2σv²)` on the configured grid.
fn grid_settings(cfg: &RunConfig, defaults: (f64, f64, usize)) -> Result<GridSettings, CliError> {
    let (l_default, v_default, n_default) = defaults;
    let l = cfg.get_positive("l", l_default)?;
    let vmax = cfg.get_positive("vmax", v_default)?;
    let nx = cfg.get_range("nx", n_default, 4, 4096)?;
    let nv = cfg.get_range("nv", n_default, 4, 4096)?;
    let x0: f64 = cfg.get("x0", l / 2.0)?;
    if !(0.0..=l).contains(&x0) {
        return Err(CliError::Config(format!("`x0` = {x0} must lie in [0, {l}]")));
    }
    let (sx, sv) = (cfg.get_positive("sigma_x", 1.0)?, cfg.get_positive("sigma_v", 1.0)?);
    let potential = cfg.potential(1)?;
    let g0 = GridState1D::from_fn(l, vmax, nx, nv, |x, v| {
        (-(x - x0).powi(2) / (2.0 * sx * sx) - v * v / (2.0 * sv * sv)).exp()
    })
    .and_then(|g| g.normalized())
    .map_err(|e| CliError::Config(format!("initial density: {e}")))?;
    Ok(GridSettings { g0, potential })
}

pub fn vlasov_keys() -> Vec<&'static str> {
    [GRID_KEYS, &["seed", "dt", "steps", "every"]].concat()
}

pub struct VlasovSettings {
    grid: GridSettings,
    dt: f64,
    steps: usize,
    every: usize,
}

impl VlasovSettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.check_keys(&vlasov_keys())?;
        let steps = cfg.get_range("steps", 100, 1, 10_000_000)?;
        Ok(VlasovSettings {
            grid: grid_settings(cfg, (10.0, 8.0, 64))?,
            dt: cfg.get_positive("dt", 0.01)?,
            steps,
            every: stride(cfg, steps)?,
        })
    }
}

/// Moments per stored step, with solver warnings and the validity flag returned alongside.
pub fn vlasov1d(s: &VlasovSettings) -> Result<(String, Vec<String>), CliError> {
    let run = vlasov_solve_1d_every(&s.grid.g0, &s.grid.potential, s.dt, s.steps, s.every).map_err(compute)?;
    let mut csv = String::from("t,mass,x_mean,v_mean,x2_mean,v2_mean,xv_mean\n");
    for (i, g) in run.states.iter().enumerate() {
        let m = g.mass();
        let mom = |px, pv| g.moment(px, pv, None) / m;
        writeln!(
            csv,
            "{:?},{m:?},{:?},{:?},{:?},{:?},{:?}",
            run.time(i),
            mom(1, 0),
            mom(0, 1),
            mom(2, 0),
            mom(0, 2),
            mom(1, 1)
        )
        .unwrap();
    }
    let mut warnings = run.warnings.clone();
    if !run.valid {
        warnings.push("run flagged invalid".into());
    }
    Ok((csv, warnings))
}

pub fn meanfield_keys() -> Vec<&'static str> {
    [GRID_KEYS, &["seed", "dt", "t_final", "n_list", "replicas"]].concat()
}

pub struct MeanFieldSettings {
    grid: GridSettings,
    dt: f64,
    t_final: f64,
    n_list: Vec<usize>,
    replicas: usize,
}

impl MeanFieldSettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.check_keys(&meanfield_keys())?;
        let dt = cfg.get_positive("dt", 0.05)?;
        let t_final = cfg.get_positive("t_final", 1.0)?;
        step_count(t_final, dt)?;
        let n_list = cfg.get_list::<usize>("n_list", &[64, 256, 1024])?;
        if n_list.is_empty() || n_list.iter().any(|&n| n == 0 || n > 1_000_000) {
            return Err(CliError::Config("`n_list` entries must lie in 1..=1000000".into()));
        }
        Ok(MeanFieldSettings {
            grid: grid_settings(cfg, (16.0, 6.0, 128))?,
            dt,
            t_final,
            n_list,
            replicas: cfg.get_range("replicas", 20, 1, 10_000)?,
        })
    }

    pub fn n_list(&self) -> &[usize] {
        &self.n_list
    }
}

pub fn meanfield(s: &MeanFieldSettings, seed: u64) -> Result<MeanFieldTable, CliError> {
    let spec = MeanFieldSpec { n_list: s.n_list.clone(), t_final: s.t_final, dt: s.dt, seed, replicas: s.replicas };
    meanfield_experiment(&s.grid.g0, &s.grid.potential, &spec).map_err(compute)
}

/// Median errors per `N`, pooled and per observable, for the run summary.
pub fn meanfield_summary(table: &MeanFieldTable, n_list: &[usize]) -> String {
    let mut s = String::from("N,median_panel_error");
    for name in PANEL {
        write!(s, ",{name}").unwrap();
    }
    s.push('\n');
    for &n in n_list {
        write!(s, "{n},{:?}", table.median_panel_error(n)).unwrap();
        for name in PANEL {
            write!(s, ",{:?}", table.median_errors(n, name)).unwrap();
        }
        s.push('\n');
    }
    s
}

pub const LIMITS_KEYS: &[&str] = &["seed", "pairs", "n_list", "max_level", "degree", "d"];

pub struct LimitsSettings {
    pairs: usize,
    n_list: Vec<usize>,
    max_level: usize,
    d: usize,
    shape: Shape,
}

impl LimitsSettings {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        cfg.check_keys(LIMITS_KEYS)?;
        let max_level = cfg.get_range("max_level", 2, 1, 3)?;
        let n_list = cfg.get_list::<usize>("n_list", &[100, 200, 400, 800])?;
        if n_list.is_empty() || n_list.iter().any(|&n| n < max_level) || n_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!(
                "`n_list` must be increasing with entries >= max_level = {max_level}"
            )));
        }
        let degree = cfg.get_range("degree", 3, 1, 4)?;
        Ok(LimitsSettings {
            pairs: cfg.get_range("pairs", 10, 1, 10_000)?,
            n_list,
            max_level,
            d: cfg.get_range("d", 1, 1, 2)?,
            shape: Shape { degree: degree as u32, ..Shape::default() },
        })
    }
}

/// Largest coefficient gap between the `N`-particle and unbounded brackets over the random
/// pairs, per `N` and level, with the ratio to the previous `N`.
pub fn limits(s: &LimitsSettings, seed: u64) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(s.pairs);
    for _ in 0..s.pairs {
        let f = random_hierarchy_upto(&mut rng, s.d, s.max_level, None, &s.shape).map_err(compute)?;
        let g = random_hierarchy_upto(&mut rng, s.d, s.max_level, None, &s.shape).map_err(compute)?;
        let limit = bracket_ginf(&f, &g).map_err(compute)?;
        pairs.push((f, g, limit));
    }
    let mut csv = String::from("N,k,max_gap,ratio\n");
    let mut previous: BTreeMap<usize, Rational> = BTreeMap::new();
    for &n in &s.n_list {
        let mut worst: BTreeMap<usize, Rational> = BTreeMap::new();
        for (f, g, limit) in &pairs {
            let gaps = max_coefficient_gap(&bracket_gn(f, g, n).map_err(compute)?, limit).map_err(compute)?;
            for (k, gap) in gaps {
                let entry = worst.entry(k).or_default();
                if gap > *entry {
                    *entry = gap;
                }
            }
        }
        for (k, gap) in &worst {
            let ratio = match previous.get(k) {
                Some(p) if *gap != Rational::default() => format!("{:?}", rational_to_f64(&(p / gap))),
                _ => String::new(),
            };
            writeln!(csv, "{n},{k},{:?},{ratio}", rational_to_f64(gap)).unwrap();
        }
        previous = worst;
    }
    Ok(csv)
}
