use num::traits::{One, Signed};

use super::bracket::{lie_poisson_bracket, Algebra};
use super::functional::Functional;
use crate::error::{Error, Result};
use crate::hierarchy::{epsilon_embed, iota_epsilon};
use crate::observables::{sym_canonicalize, Configuration, Monomial, Poly};
use crate::scalar::{Rational, Scalar};
use crate::states::{iota_em, iota_factorize, iota_lio, iota_mar, DiracState, StateHierarchy};

/// The structure maps whose Poisson property is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureMap {
    /// Configurations to one-particle states via the empirical measure.
    Em,
    /// Configurations to symmetrized `N`-particle states.
    Lio,
    /// `N`-particle states to their marginal hierarchies.
    Mar,
    /// One-particle states to their tensor-power hierarchies.
    Factorize,
}

impl StructureMap {
    pub const ALL: [StructureMap; 4] =
        [StructureMap::Em, StructureMap::Lio, StructureMap::Mar, StructureMap::Factorize];

    pub fn name(self) -> &'static str {
        match self {
            StructureMap::Em => "iota_em",
            StructureMap::Lio => "iota_lio",
            StructureMap::Mar => "iota_mar",
            StructureMap::Factorize => "iota_factorize",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        StructureMap::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// A point of the domain of a structure map.
#[derive(Clone, Debug, PartialEq)]
pub enum MorphismInput {
    Configuration(Configuration<Rational>),
    State(DiracState<Rational>),
}

/// Domain and codomain brackets of one morphism check.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismSides {
    pub domain: Rational,
    pub codomain: Rational,
}

impl MorphismSides {
    pub fn residual(&self) -> Rational {
        (&self.domain - &self.codomain).abs()
    }
}

/// Polynomial on `n` particles representing `F ∘ ι_EM` (`leaf_level = 1`) or `F ∘ ι_Lio`
/// (`leaf_level = n`).
fn pullback_polynomial(f: &Functional, n: usize, d: usize, leaf_level: usize) -> Result<Poly> {
    Ok(match f {
        Functional::Constant(c) => Poly::constant(n, d, c.clone()),
        Functional::Expectation(h) => {
            let mut acc = Poly::zero(n, d);
            for (&k, hk) in h.levels() {
                if k != leaf_level {
                    return Err(Error::LevelOutOfRange { level: k, bound: leaf_level });
                }
                if hk.d() != d {
                    return Err(Error::DimensionMismatch(hk.d(), d));
                }
                acc = &acc + epsilon_embed(hk, n)?.poly();
            }
            acc
        }
        Functional::Sum(ts) => {
            let mut acc = Poly::zero(n, d);
            for t in ts {
                acc = &acc + &pullback_polynomial(t, n, d, leaf_level)?;
            }
            acc
        }
        Functional::Product(ts) => {
            let mut acc = Poly::constant(n, d, Rational::one());
            for t in ts {
                acc = &acc * &pullback_polynomial(t, n, d, leaf_level)?;
            }
            acc
        }
    })
}

/// `F ∘ ι_EM` as a polynomial in the configuration of `n` particles.
pub fn pullback_em(f: &Functional, n: usize, d: usize) -> Result<Poly> {
    pullback_polynomial(f, n, d, 1)
}

/// `F ∘ ι_Lio` as a polynomial in the configuration of `n` particles.
pub fn pullback_lio(f: &Functional, n: usize, d: usize) -> Result<Poly> {
    pullback_polynomial(f, n, d, n)
}

/// `F ∘ ι_mar` as a functional on `n`-particle states: each expectation of a hierarchy
/// becomes the expectation of its `n`-particle representative.
pub fn pullback_mar(f: &Functional, n: usize) -> Result<Functional> {
    f.map_expectations(&|h| Functional::expectation_of(iota_epsilon(h, n)?, None))
}

/// `F ∘ ι` as a functional on one-particle states: every level-`k` monomial splits into
/// a product of one-particle moments, a constant block becoming the mass.
pub fn pullback_factorize(f: &Functional) -> Result<Functional> {
    f.map_expectations(&|h| {
        let d = h.d();
        let block = 2 * d;
        let mut terms = Vec::new();
        for fk in h.levels().values() {
            for (m, c) in fk.poly().terms() {
                let mut factors = vec![Functional::Constant(c.clone())];
                for p in 0..fk.k() {
                    let exps = &m.exponents()[p * block..(p + 1) * block];
                    let one = Poly::from_terms(1, d, [(Monomial::from_exponents(exps), Rational::one())])?;
                    factors.push(Functional::expectation_of(sym_canonicalize(&one)?, None)?);
                }
                terms.push(Functional::Product(factors));
            }
        }
        Ok(Functional::Sum(terms))
    })
}

/// `N · {p, q}(z)`, the rescaled canonical bracket on `N`-particle phase space.
fn rescaled_bracket(p: &Poly, q: &Poly, z: &Configuration<Rational>) -> Result<Rational> {
    let n = z.n();
    let value: Rational = p.poisson_bracket(q)?.eval(z.points())?;
    Ok(value * Rational::from_integer(n.into()))
}

/// Evaluates `{map*F, map*G}_domain(input)` and `{F, G}_codomain(map(input))`.
pub fn morphism_sides(
    map: StructureMap,
    f: &Functional,
    g: &Functional,
    input: &MorphismInput,
) -> Result<MorphismSides> {
    match (map, input) {
        (StructureMap::Em, MorphismInput::Configuration(z)) => {
            let (n, d) = (z.n(), z.d());
            let domain = rescaled_bracket(&pullback_em(f, n, d)?, &pullback_em(g, n, d)?, z)?;
            let gamma = StateHierarchy::single(iota_em(z)?);
            let codomain = lie_poisson_bracket(f, g, &gamma, Algebra::Level(1))?;
            Ok(MorphismSides { domain, codomain })
        }
        (StructureMap::Lio, MorphismInput::Configuration(z)) => {
            let (n, d) = (z.n(), z.d());
            let domain = rescaled_bracket(&pullback_lio(f, n, d)?, &pullback_lio(g, n, d)?, z)?;
            let gamma = StateHierarchy::single(iota_lio(z));
            let codomain = lie_poisson_bracket(f, g, &gamma, Algebra::Level(n))?;
            Ok(MorphismSides { domain, codomain })
        }
        (StructureMap::Mar, MorphismInput::State(gamma)) => {
            let n = gamma.k();
            let single = StateHierarchy::single(gamma.clone());
            let domain = lie_poisson_bracket(&pullback_mar(f, n)?, &pullback_mar(g, n)?, &single, Algebra::Level(n))?;
            let codomain = lie_poisson_bracket(f, g, &iota_mar(gamma)?, Algebra::Bounded(n))?;
            Ok(MorphismSides { domain, codomain })
        }
        (StructureMap::Factorize, MorphismInput::State(gamma)) => {
            if gamma.k() != 1 {
                return Err(Error::ParticleMismatch(gamma.k(), 1));
            }
            let single = StateHierarchy::single(gamma.clone());
            let domain =
                lie_poisson_bracket(&pullback_factorize(f)?, &pullback_factorize(g)?, &single, Algebra::Level(1))?;
            let codomain = lie_poisson_bracket(f, g, &iota_factorize(gamma)?, Algebra::Unbounded)?;
            Ok(MorphismSides { domain, codomain })
        }
        (map, _) => Err(Error::Invalid(format!("input kind does not match the domain of {}", map.name()))),
    }
}

/// `|{map*F, map*G}_domain(input) - {F, G}_codomain(map(input))|`.
pub fn morphism_check(map: StructureMap, f: &Functional, g: &Functional, input: &MorphismInput) -> Result<Rational> {
    Ok(morphism_sides(map, f, g, input)?.residual())
}

/// `F ∘ ι_EM` evaluated at a configuration, through the polynomial pullback.
pub fn eval_pullback_em<S: Scalar>(f: &Functional, z: &Configuration<S>) -> Result<S> {
    pullback_em(f, z.n(), z.d())?.eval(z.points())
}

/// Marginal-side check helper: `F(ι_mar γ)` against `(ι_mar* F)(γ)`.
pub fn pullback_mar_values<S: Scalar>(f: &Functional, gamma: &DiracState<S>) -> Result<(S, S)> {
    let pulled = pullback_mar(f, gamma.k())?.eval(&StateHierarchy::single(gamma.clone()))?;
    let direct = f.eval(&iota_mar(gamma)?)?;
    Ok((pulled, direct))
}
