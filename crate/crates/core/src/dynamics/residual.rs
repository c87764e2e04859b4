use super::compiled::CompiledPoly;
use super::nbody::{accelerations, Trajectory};
use super::vlasov::{force_field, VlasovRun};
use super::Potential;
use crate::error::{Error, Result};
use crate::hierarchy::ordered_tuples;
use crate::observables::{Configuration, Kind, SymObservable};
use crate::states::GridState1D;

/// Which evolution equation a path is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    Vlasov,
    Bbgky(usize),
    Vlh(usize),
    Liouville,
}

/// A time-indexed family of states.
#[derive(Clone, Copy, Debug)]
pub enum StatePath<'a> {
    /// An `N`-body trajectory, viewed through the empirical measure (Vlasov), the marginals
    /// of the symmetrized `N`-particle state (BBGKY), or that state itself (Liouville).
    Particles(&'a Trajectory),
    /// A grid solution, viewed through its tensor powers.
    Grid(&'a VlasovRun),
}

/// First derivatives of a level-`k` observable in float form.
struct Derivatives {
    f: CompiledPoly,
    dx: Vec<Vec<CompiledPoly>>,
    dv: Vec<Vec<CompiledPoly>>,
}

impl Derivatives {
    fn new(f: &SymObservable) -> Result<Self> {
        let (k, d) = (f.k(), f.d());
        let mut dx = Vec::with_capacity(k);
        let mut dv = Vec::with_capacity(k);
        for a in 0..k {
            let mut xs = Vec::with_capacity(d);
            let mut vs = Vec::with_capacity(d);
            for c in 0..d {
                xs.push(CompiledPoly::new(&f.poly().partial(a, Kind::Position, c)?));
                vs.push(CompiledPoly::new(&f.poly().partial(a, Kind::Velocity, c)?));
            }
            dx.push(xs);
            dv.push(vs);
        }
        Ok(Derivatives { f: CompiledPoly::new(f.poly()), dx, dv })
    }
}

fn level_of(eq: Equation, n: usize) -> usize {
    match eq {
        Equation::Vlasov => 1,
        Equation::Bbgky(k) | Equation::Vlh(k) => k,
        Equation::Liouville => n,
    }
}

fn tuple_points<'a>(z: &'a Configuration<f64>, tuple: &[usize]) -> Vec<&'a [f64]> {
    tuple.iter().map(|&i| z.points()[i].as_slice()).collect()
}

/// `⟨f, γ^{(k)}⟩` for the marginal of the symmetrized state of `z`: the average of `f`
/// over ordered `k`-tuples of distinct particles.
fn particle_pairing(der: &Derivatives, z: &Configuration<f64>, tuples: &[Vec<usize>]) -> f64 {
    tuples.iter().map(|t| der.f.eval(&tuple_points(z, t))).sum::<f64>() / tuples.len() as f64
}

fn particle_rhs(
    der: &Derivatives,
    z: &Configuration<f64>,
    potential: &Potential,
    tuples: &[Vec<usize>],
    outer: &[Vec<usize>],
    eq: Equation,
) -> f64 {
    let (d, n) = (z.d(), z.n());
    let k = der.dx.len();
    let nf = n as f64;
    let mut diff = vec![0.0; d];
    let mut grad = vec![0.0; d];
    match eq {
        Equation::Vlasov | Equation::Liouville => {
            // Full accelerations: the empirical-measure and the N-particle weak forms coincide
            // with the characteristic derivative.
            let acc = accelerations(z, potential);
            let mut total = 0.0;
            for t in tuples {
                let pts = tuple_points(z, t);
                for a in 0..k {
                    for c in 0..d {
                        total += pts[a][d + c] * der.dx[a][c].eval(&pts) + acc[t[a]][c] * der.dv[a][c].eval(&pts);
                    }
                }
            }
            total / tuples.len() as f64
        }
        Equation::Bbgky(_) => {
            let mut inner = 0.0;
            for t in tuples {
                let pts = tuple_points(z, t);
                for a in 0..k {
                    for c in 0..d {
                        inner += pts[a][d + c] * der.dx[a][c].eval(&pts);
                    }
                    for b in 0..k {
                        for c in 0..d {
                            diff[c] = pts[a][c] - pts[b][c];
                        }
                        potential.gradient(&diff, &mut grad);
                        for c in 0..d {
                            inner -= 2.0 / nf * grad[c] * der.dv[a][c].eval(&pts);
                        }
                    }
                }
            }
            inner /= tuples.len() as f64;
            let mut coupling = 0.0;
            if !outer.is_empty() {
                for t in outer {
                    let pts = tuple_points(z, t);
                    let head = &pts[..k];
                    for a in 0..k {
                        for c in 0..d {
                            diff[c] = pts[a][c] - pts[k][c];
                        }
                        potential.gradient(&diff, &mut grad);
                        for c in 0..d {
                            coupling += grad[c] * der.dv[a][c].eval(head);
                        }
                    }
                }
                coupling *= 2.0 * (nf - k as f64) / nf / outer.len() as f64;
            }
            inner - coupling
        }
        Equation::Vlh(_) => unreachable!("rejected before evaluation"),
    }
}

fn particle_residual(
    eq: Equation,
    traj: &Trajectory,
    f: &SymObservable,
    potential: &Potential,
    t: f64,
    dt_fd: f64,
) -> Result<f64> {
    let z = traj.at(t)?;
    let (plus, minus) = (traj.at(t + dt_fd)?, traj.at(t - dt_fd)?);
    let n = z.n();
    if matches!(eq, Equation::Vlh(_)) {
        return Err(Error::Invalid("the Vlasov hierarchy is tested on grid paths".into()));
    }
    let k = level_of(eq, n);
    if k == 0 || k > n {
        return Err(Error::LevelOutOfRange { level: k, bound: n });
    }
    if f.k() != k {
        return Err(Error::ParticleMismatch(f.k(), k));
    }
    if f.d() != z.d() || potential.d() != z.d() {
        return Err(Error::DimensionMismatch(f.d(), z.d()));
    }
    let der = Derivatives::new(f)?;
    let tuples = if k == n && eq == Equation::Liouville { vec![(0..n).collect()] } else { ordered_tuples(n, k) };
    let outer = if matches!(eq, Equation::Bbgky(_)) && k < n { ordered_tuples(n, k + 1) } else { Vec::new() };
    let derivative = (particle_pairing(&der, plus, &tuples) - particle_pairing(&der, minus, &tuples)) / (2.0 * dt_fd);
    Ok(derivative - particle_rhs(&der, z, potential, &tuples, &outer, eq))
}

/// `Π_p ∫ x^{a_p} v^{b_p} w_p(x) γ`, the weight applied to particle `weighted` only.
fn factorized_moment(grid: &GridState1D, exps: &[u8], weighted: Option<(usize, &[f64])>) -> f64 {
    exps.chunks(2)
        .enumerate()
        .map(|(p, e)| {
            let w = weighted.and_then(|(q, w)| (q == p).then_some(w));
            grid.moment(e[0], e[1], w)
        })
        .product()
}

fn grid_pairing(poly: &CompiledPoly, grid: &GridState1D) -> f64 {
    poly.monomials().map(|(c, e)| c * factorized_moment(grid, &e, None)).sum()
}

fn grid_rhs(der: &Derivatives, grid: &GridState1D, potential: &Potential) -> f64 {
    let field = force_field(grid, potential);
    let mut total = 0.0;
    for a in 0..der.dx.len() {
        for (c, e) in der.dx[a][0].monomials() {
            let mut e = e;
            e[2 * a + 1] += 1;
            total += c * factorized_moment(grid, &e, None);
        }
        for (c, e) in der.dv[a][0].monomials() {
            total -= 2.0 * c * factorized_moment(grid, &e, Some((a, &field)));
        }
    }
    total
}

fn grid_residual(
    eq: Equation,
    run: &VlasovRun,
    f: &SymObservable,
    potential: &Potential,
    t: f64,
    dt_fd: f64,
) -> Result<f64> {
    let k = match eq {
        Equation::Vlasov => 1,
        Equation::Vlh(k) => k,
        _ => return Err(Error::Invalid("grid paths are tested against the Vlasov equation or hierarchy".into())),
    };
    if f.k() != k {
        return Err(Error::ParticleMismatch(f.k(), k));
    }
    if f.d() != 1 || potential.d() != 1 {
        return Err(Error::DimensionMismatch(f.d(), 1));
    }
    let g = run.at(t)?;
    let (plus, minus) = (run.at(t + dt_fd)?, run.at(t - dt_fd)?);
    let der = Derivatives::new(f)?;
    let derivative = (grid_pairing(&der.f, plus) - grid_pairing(&der.f, minus)) / (2.0 * dt_fd);
    Ok(derivative - grid_rhs(&der, g, potential))
}

/// Central difference of `t ↦ ⟨f, γ^{(k),t}⟩` minus the weak right-hand side of `eq`.
pub fn weak_residual(
    eq: Equation,
    path: StatePath<'_>,
    f: &SymObservable,
    potential: &Potential,
    t: f64,
    dt_fd: f64,
) -> Result<f64> {
    if !(dt_fd > 0.0) {
        return Err(Error::Invalid(format!("finite-difference step must be positive, got {dt_fd}")));
    }
    match path {
        StatePath::Particles(traj) => particle_residual(eq, traj, f, potential, t, dt_fd),
        StatePath::Grid(run) => grid_residual(eq, run, f, potential, t, dt_fd),
    }
}
