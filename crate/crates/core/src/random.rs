//! Seeded generators of random exact test data: polynomials, hierarchies, configurations,
//! Dirac states and functionals.

use num::traits::Zero;
use rand::Rng;

use crate::error::Result;
use crate::hierarchy::ObservableHierarchy;
use crate::lie_poisson::Functional;
use crate::observables::{sym_canonicalize, Configuration, Monomial, Poly, SymObservable};
use crate::scalar::{rat, Rational};
use crate::states::DiracState;

/// Size limits for generated data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub degree: u32,
    pub terms: usize,
    pub max_numerator: i64,
    pub max_denominator: i64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { degree: 3, terms: 3, max_numerator: 5, max_denominator: 3 }
    }
}

/// A nonzero rational with bounded numerator and denominator.
pub fn random_rational<R: Rng>(rng: &mut R, shape: &Shape) -> Rational {
    loop {
        let n = rng.gen_range(-shape.max_numerator..=shape.max_numerator);
        if n != 0 {
            return rat(n, rng.gen_range(1..=shape.max_denominator));
        }
    }
}

/// A rational in `[-bound, bound]` with denominators up to `shape.max_denominator`.
pub fn random_coordinate<R: Rng>(rng: &mut R, shape: &Shape) -> Rational {
    let den = rng.gen_range(1..=shape.max_denominator);
    rat(rng.gen_range(-shape.max_numerator * den..=shape.max_numerator * den), den)
}

/// A random monomial on `nvars` variables of total degree at most `degree`.
pub fn random_monomial<R: Rng>(rng: &mut R, nvars: usize, degree: u32) -> Monomial {
    let target = rng.gen_range(0..=degree);
    let mut exps = vec![0u8; nvars];
    for _ in 0..target {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(&exps)
}

/// A raw polynomial on `k` particles with up to `shape.terms` random terms.
pub fn random_poly<R: Rng>(rng: &mut R, k: usize, d: usize, shape: &Shape) -> Poly {
    let mut p = Poly::zero(k, d);
    for _ in 0..shape.terms {
        let m = random_monomial(rng, 2 * d * k, shape.degree);
        p.add_term(m, random_rational(rng, shape));
    }
    p
}

/// A symmetric observable, resampled until nonzero.
pub fn random_sym<R: Rng>(rng: &mut R, k: usize, d: usize, shape: &Shape) -> Result<SymObservable> {
    loop {
        let f = sym_canonicalize(&random_poly(rng, k, d, shape))?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

/// A hierarchy with a random observable on each listed level.
pub fn random_hierarchy<R: Rng>(
    rng: &mut R,
    d: usize,
    levels: &[usize],
    bound: Option<usize>,
    shape: &Shape,
) -> Result<ObservableHierarchy> {
    let mut h = ObservableHierarchy::new(d, bound);
    for &k in levels {
        h.insert(random_sym(rng, k, d, shape)?)?;
    }
    Ok(h)
}

/// A hierarchy supported on a random nonempty subset of `1..=max_level`.
pub fn random_hierarchy_upto<R: Rng>(
    rng: &mut R,
    d: usize,
    max_level: usize,
    bound: Option<usize>,
    shape: &Shape,
) -> Result<ObservableHierarchy> {
    loop {
        let levels: Vec<usize> = (1..=max_level).filter(|_| rng.gen_bool(0.6)).collect();
        if !levels.is_empty() {
            return random_hierarchy(rng, d, &levels, bound, shape);
        }
    }
}

/// `n` random phase points with rational coordinates.
pub fn random_configuration<R: Rng>(rng: &mut R, n: usize, d: usize, shape: &Shape) -> Result<Configuration<Rational>> {
    let points = (0..n).map(|_| (0..2 * d).map(|_| random_coordinate(rng, shape)).collect()).collect();
    Configuration::new(d, points)
}

/// A Dirac state on `k`-particle phase space with `atoms` atoms and positive weights
/// summing to one.
pub fn random_dirac<R: Rng>(
    rng: &mut R,
    k: usize,
    d: usize,
    atoms: usize,
    shape: &Shape,
) -> Result<DiracState<Rational>> {
    let raw: Vec<i64> = (0..atoms).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    let mut state = DiracState::new(k, d);
    for w in raw {
        let points = (0..k).map(|_| (0..2 * d).map(|_| random_coordinate(rng, shape)).collect()).collect();
        state.push(rat(w, total), points)?;
    }
    Ok(state)
}

/// An element of the generated algebra: a constant plus a few terms, each a random
/// rational times one or two expectations of random hierarchies on levels `levels`.
pub fn random_functional<R: Rng>(
    rng: &mut R,
    d: usize,
    levels: &[usize],
    bound: Option<usize>,
    shape: &Shape,
) -> Result<Functional> {
    let mut terms = Vec::new();
    let c = random_rational(rng, shape);
    if !c.is_zero() && rng.gen_bool(0.5) {
        terms.push(Functional::Constant(c));
    }
    let nterms = rng.gen_range(1..=2);
    for _ in 0..nterms {
        let factors = rng.gen_range(1..=2);
        let mut product = vec![Functional::Constant(random_rational(rng, shape))];
        for _ in 0..factors {
            let pick: Vec<usize> = levels.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
            let pick = if pick.is_empty() { vec![levels[rng.gen_range(0..levels.len())]] } else { pick };
            product.push(Functional::Expectation(random_hierarchy(rng, d, &pick, bound, shape)?));
        }
        terms.push(Functional::Product(product));
    }
    Ok(Functional::Sum(terms))
}
