use std::collections::HashMap;

use super::functional::Functional;
use crate::error::{Error, Result};
use crate::hierarchy::{bracket_ginf, bracket_gn, ObservableHierarchy};
use crate::observables::lie_bracket_gk;
use crate::scalar::Scalar;
use crate::states::StateHierarchy;

/// Which Lie algebra the generators of a functional live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// Symmetric observables on exactly `k` particles.
    Level(usize),
    /// Hierarchies supported on levels `1..=n`.
    Bounded(usize),
    /// Finitely supported hierarchies without bound.
    Unbounded,
}

/// Lie bracket of two generators in the chosen algebra.
pub fn generator_bracket(
    algebra: Algebra,
    f: &ObservableHierarchy,
    g: &ObservableHierarchy,
) -> Result<ObservableHierarchy> {
    match algebra {
        Algebra::Level(k) => {
            for h in [f, g] {
                if let Some((&level, _)) = h.levels().iter().find(|(&l, _)| l != k) {
                    return Err(Error::LevelOutOfRange { level, bound: k });
                }
            }
            match (f.get(k), g.get(k)) {
                (Some(a), Some(b)) => ObservableHierarchy::single(lie_bracket_gk(a, b)?, None),
                _ => Ok(ObservableHierarchy::new(f.d(), None)),
            }
        }
        Algebra::Bounded(n) => bracket_gn(f, g, n),
        Algebra::Unbounded => bracket_ginf(f, g),
    }
}

/// `{F, G}(Γ) = ⟨[dF[Γ], dG[Γ]], Γ⟩`.
pub fn lie_poisson_bracket<S: Scalar>(
    f: &Functional,
    g: &Functional,
    gamma: &StateHierarchy<S>,
    algebra: Algebra,
) -> Result<S> {
    let df = f.gateaux_terms(gamma)?;
    let dg = g.gateaux_terms(gamma)?;
    let mut cache: HashMap<(usize, usize), S> = HashMap::new();
    let mut acc = S::zero();
    for (a, (wa, fa)) in df.iter().enumerate() {
        for (b, (wb, gb)) in dg.iter().enumerate() {
            let paired = match cache.get(&(a, b)) {
                Some(v) => v.clone(),
                None => {
                    let v = gamma.pair_hierarchy(&generator_bracket(algebra, fa, gb)?)?;
                    cache.insert((a, b), v.clone());
                    v
                }
            };
            acc = acc + wa.clone() * wb.clone() * paired;
        }
    }
    Ok(acc)
}

/// The bracket of two functionals as a functional in the same generated algebra.
pub fn bracket_functional(f: &Functional, g: &Functional, algebra: Algebra) -> Result<Functional> {
    let mut terms = Vec::new();
    for (ca, fa) in f.derivative_terms() {
        for (cb, gb) in g.derivative_terms() {
            let h = generator_bracket(algebra, &fa, &gb)?;
            if h.is_zero() {
                continue;
            }
            terms.push(Functional::Product(vec![ca.clone(), cb, Functional::Expectation(h)]));
        }
    }
    Ok(Functional::Sum(terms))
}
