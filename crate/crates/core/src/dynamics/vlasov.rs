use super::Potential;
use crate::error::{Error, Result};
use crate::states::GridState1D;

/// Fraction of mass allowed beyond `0.8 V` before a run is flagged invalid.
pub const VELOCITY_TAIL_TOLERANCE: f64 = 1e-4;

/// Grid states at `t_0 + i·dt` with per-run diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct VlasovRun {
    pub t0: f64,
    pub dt: f64,
    pub states: Vec<GridState1D>,
    pub masses: Vec<f64>,
    pub warnings: Vec<String>,
    pub valid: bool,
}

impl VlasovRun {
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn last(&self) -> &GridState1D {
        self.states.last().expect("run has at least the initial state")
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        let s = (t - self.t0) / self.dt;
        let i = s.round();
        if i < 0.0 || (s - i).abs() > 1e-6 || i as usize >= self.states.len() {
            return None;
        }
        Some(i as usize)
    }

    pub fn at(&self, t: f64) -> Result<&GridState1D> {
        self.index_of(t).map(|i| &self.states[i]).ok_or(Error::MissingTime(t))
    }

    /// Largest relative mass change between consecutive stored states.
    pub fn max_relative_mass_change(&self) -> f64 {
        self.masses.windows(2).map(|w| ((w[1] - w[0]) / w[0]).abs()).fold(0.0, f64::max)
    }

    /// Columns `t,mass` per stored state.
    pub fn mass_csv(&self) -> String {
        let mut s = String::from("t,mass\n");
        for (i, m) in self.masses.iter().enumerate() {
            s.push_str(&format!("{:?},{m:?}\n", self.time(i)));
        }
        s
    }
}

/// `(∇W ∗ ρ)(x_i) = Σ_m W'(x_i - x_m) ρ_m dx` with minimal-image distances on the torus.
pub fn force_field(grid: &GridState1D, potential: &Potential) -> Vec<f64> {
    let nx = grid.nx();
    if potential.is_zero() {
        return vec![0.0; nx];
    }
    let (l, dx) = (grid.l(), grid.dx());
    let rho = grid.density();
    let mut kernel = vec![0.0; nx];
    let mut g = [0.0];
    for (s, k) in kernel.iter_mut().enumerate() {
        // The two images at distance exactly L/2 cancel because W' is odd.
        if 2 * s == nx {
            continue;
        }
        let r = if 2 * s > nx { s as f64 * dx - l } else { s as f64 * dx };
        potential.gradient(&[r], &mut g);
        *k = g[0];
    }
    (0..nx).map(|i| (0..nx).map(|m| kernel[(i + nx - m) % nx] * rho[m]).sum::<f64>() * dx).collect()
}

/// Shifts each velocity row by `v_j · tau` in `x` with periodic linear interpolation.
fn advect_x(grid: &GridState1D, tau: f64) -> Vec<f64> {
    let (nx, nv, dx) = (grid.nx(), grid.nv(), grid.dx());
    let src = grid.values();
    let mut out = vec![0.0; nx * nv];
    for j in 0..nv {
        let shift = grid.v_center(j) * tau / dx;
        let whole = shift.floor();
        let frac = shift - whole;
        let whole = whole as i64;
        for i in 0..nx {
            let a = (i as i64 - whole).rem_euclid(nx as i64) as usize;
            let b = (i as i64 - whole - 1).rem_euclid(nx as i64) as usize;
            out[i * nv + j] = (1.0 - frac) * src[a * nv + j] + frac * src[b * nv + j];
        }
    }
    out
}

/// Shifts each position column by `a_i · tau` in `v`, treating values outside `[-V, V]` as zero.
fn advect_v(grid: &GridState1D, accel: &[f64], tau: f64) -> Vec<f64> {
    let (nx, nv, dv) = (grid.nx(), grid.nv(), grid.dv());
    let src = grid.values();
    let mut out = vec![0.0; nx * nv];
    for i in 0..nx {
        let shift = accel[i] * tau / dv;
        let whole = shift.floor();
        let frac = shift - whole;
        let whole = whole as i64;
        let at = |j: i64| if (0..nv as i64).contains(&j) { src[i * nv + j as usize] } else { 0.0 };
        for j in 0..nv {
            let jj = j as i64 - whole;
            out[i * nv + j] = (1.0 - frac) * at(jj) + frac * at(jj - 1);
        }
    }
    out
}

fn velocity_tail(grid: &GridState1D) -> f64 {
    let total: f64 = grid.values().iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let cut = 0.8 * grid.vmax();
    let mut tail = 0.0;
    for i in 0..grid.nx() {
        for j in 0..grid.nv() {
            if grid.v_center(j).abs() > cut {
                tail += grid.value(i, j);
            }
        }
    }
    tail / total
}

fn rebuild(grid: &GridState1D, values: Vec<f64>) -> Result<GridState1D> {
    if let Some(p) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(p));
    }
    GridState1D::new(grid.l(), grid.vmax(), grid.nx(), grid.nv(), values)
}

/// One Strang step: half `x`-advection, full `v`-advection under `-2 (∇W ∗ ρ)`, half
/// `x`-advection.
pub fn vlasov_step(grid: &GridState1D, potential: &Potential, dt: f64) -> Result<GridState1D> {
    let half = rebuild(grid, advect_x(grid, 0.5 * dt))?;
    let accel: Vec<f64> = force_field(&half, potential).into_iter().map(|e| -2.0 * e).collect();
    let kicked = rebuild(&half, advect_v(&half, &accel, dt))?;
    rebuild(&kicked, advect_x(&kicked, 0.5 * dt))
}

/// Strang-split semi-Lagrangian solution, storing every step.
pub fn vlasov_solve_1d(g0: &GridState1D, potential: &Potential, dt: f64, steps: usize) -> Result<VlasovRun> {
    vlasov_solve_1d_every(g0, potential, dt, steps, 1)
}

/// As [`vlasov_solve_1d`], storing every `stride`-th state.
pub fn vlasov_solve_1d_every(
    g0: &GridState1D,
    potential: &Potential,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<VlasovRun> {
    if potential.d() != 1 {
        return Err(Error::DimensionMismatch(potential.d(), 1));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    if stride == 0 || !steps.is_multiple_of(stride) {
        return Err(Error::Invalid(format!("stride {stride} must divide the step count {steps}")));
    }
    let mut warnings = Vec::new();
    if g0.vmax() * dt > g0.dx() {
        warnings.push(format!("V·dt = {} exceeds dx = {}", g0.vmax() * dt, g0.dx()));
    }
    let fmax = 2.0 * force_field(g0, potential).iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if fmax * dt > g0.dv() {
        warnings.push(format!("F_max·dt = {} exceeds dv = {}", fmax * dt, g0.dv()));
    }
    let mut valid = true;
    let mut g = g0.clone();
    let mut states = vec![g.clone()];
    let mut masses = vec![g.mass()];
    let mut tail_flagged = false;
    for step in 1..=steps {
        g = vlasov_step(&g, potential, dt)?;
        if !tail_flagged && velocity_tail(&g) > VELOCITY_TAIL_TOLERANCE {
            warnings.push(format!("mass beyond 0.8·V exceeds {VELOCITY_TAIL_TOLERANCE} at step {step}"));
            valid = false;
            tail_flagged = true;
        }
        if step % stride == 0 {
            masses.push(g.mass());
            states.push(g.clone());
        }
    }
    if velocity_tail(g0) > VELOCITY_TAIL_TOLERANCE {
        warnings.push("initial mass beyond 0.8·V exceeds tolerance".into());
        valid = false;
    }
    Ok(VlasovRun { t0: 0.0, dt: dt * stride as f64, states, masses, warnings, valid })
}
