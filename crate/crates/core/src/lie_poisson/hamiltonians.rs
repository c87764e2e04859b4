use num::traits::{One, Zero};

use super::functional::Functional;
use crate::error::{Error, Result};
use crate::hierarchy::ObservableHierarchy;
use crate::observables::{sym_canonicalize, Configuration, Kind, Monomial, Poly, SymObservable};
use crate::scalar::{binomial, int, rat, Rational, Scalar};
use crate::states::DiracState;

/// Checks that `w` is a velocity-free, even, one-particle polynomial.
pub fn check_pair_potential(w: &Poly) -> Result<()> {
    if w.k() != 1 {
        return Err(Error::ParticleMismatch(w.k(), 1));
    }
    let d = w.d();
    for m in w.terms().keys() {
        if m.exponents()[d..].iter().any(|&e| e != 0) {
            return Err(Error::Invalid("potential must not depend on velocity".into()));
        }
        if m.degree() % 2 != 0 {
            return Err(Error::Invalid("potential must be even".into()));
        }
    }
    Ok(())
}

/// `W(0)`.
pub fn potential_at_zero(w: &Poly) -> Rational {
    w.constant_term()
}

/// `W(x_i - x_j)` on `n` particles (0-based indices).
pub fn pair_potential(w: &Poly, n: usize, i: usize, j: usize) -> Result<Poly> {
    check_pair_potential(w)?;
    let d = w.d();
    let mut acc = Poly::zero(n, d);
    for (m, c) in w.terms() {
        let mut t = Poly::constant(n, d, c.clone());
        for (comp, &e) in m.exponents()[..d].iter().enumerate() {
            if e == 0 {
                continue;
            }
            let diff = &Poly::variable(n, d, i, Kind::Position, comp) - &Poly::variable(n, d, j, Kind::Position, comp);
            t = &t * &diff.pow(e as u32);
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// `½ Σ_i |v_i|²` on `n` particles.
pub fn kinetic(n: usize, d: usize) -> Poly {
    let mut acc = Poly::zero(n, d);
    for i in 0..n {
        for c in 0..d {
            acc = &acc + &Poly::variable(n, d, i, Kind::Velocity, c).pow(2);
        }
    }
    acc.scale(&rat(1, 2))
}

/// `Σ_{i≠j} W(x_i - x_j)` on `n` particles.
pub fn pair_sum(w: &Poly, n: usize) -> Result<Poly> {
    let mut acc = Poly::zero(n, w.d());
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = &acc + &pair_potential(w, n, i, j)?;
            }
        }
    }
    Ok(acc)
}

/// Rescaled Newton energy `(1/N)(H_N + W(0))` with
/// `H_N = ½Σ|v_i|² + (1/N)Σ_{i≠j} W(x_i - x_j)`, as an `N`-particle observable.
pub fn hamiltonian_new_observable(w: &Poly, n: usize) -> Result<SymObservable> {
    let inv = rat(1, n as i64);
    let h = &kinetic(n, w.d()) + &pair_sum(w, n)?.scale(&inv);
    let h = &h + &Poly::constant(n, w.d(), potential_at_zero(w));
    sym_canonicalize(&h.scale(&inv))
}

/// Rescaled Newton energy of a configuration.
pub fn hamiltonian_new<S: Scalar>(z: &Configuration<S>, w: &Poly) -> Result<S> {
    if z.d() != w.d() {
        return Err(Error::DimensionMismatch(z.d(), w.d()));
    }
    hamiltonian_new_observable(w, z.n())?.evaluate(z.points())
}

fn one_particle_kinetic(d: usize) -> Result<SymObservable> {
    sym_canonicalize(&kinetic(1, d))
}

/// `(½|v|², ((N-1)/N) W(x1-x2) + W(0)/N, 0, ..)`; for `N = 1` the constant folds into level one.
pub fn w_bbgky(w: &Poly, n: usize) -> Result<ObservableHierarchy> {
    let d = w.d();
    let mut h = ObservableHierarchy::new(d, Some(n));
    let w0 = potential_at_zero(w);
    if n == 1 {
        let top = &kinetic(1, d) + &Poly::constant(1, d, w0);
        h.insert(sym_canonicalize(&top)?)?;
        return Ok(h);
    }
    h.insert(one_particle_kinetic(d)?)?;
    let nn = n as i64;
    let two = &pair_potential(w, 2, 0, 1)?.scale(&rat(nn - 1, nn)) + &Poly::constant(2, d, w0 / int(nn));
    h.insert(sym_canonicalize(&two)?)?;
    Ok(h)
}

/// `(½|v|², W(x1-x2), 0, ..)`.
pub fn w_vlh(w: &Poly) -> Result<ObservableHierarchy> {
    let d = w.d();
    let mut h = ObservableHierarchy::new(d, None);
    h.insert(one_particle_kinetic(d)?)?;
    h.insert(sym_canonicalize(&pair_potential(w, 2, 0, 1)?)?)?;
    Ok(h)
}

/// Liouville energy on `N`-particle states: the expectation of the rescaled Newton energy.
pub fn ham_lio(w: &Poly, n: usize) -> Result<Functional> {
    Functional::expectation_of(hamiltonian_new_observable(w, n)?, Some(n))
}

pub fn ham_bbgky(w: &Poly, n: usize) -> Result<Functional> {
    Ok(Functional::Expectation(w_bbgky(w, n)?))
}

pub fn ham_vlh(w: &Poly) -> Result<Functional> {
    Ok(Functional::Expectation(w_vlh(w)?))
}

/// Vlasov energy `⟨½|v|², γ⟩ + ⟨W(x1-x2), γ⊗γ⟩` on one-particle states, with the
/// interaction written as a sum of products of one-particle expectations by expanding
/// each `(x^c - y^c)^e` binomially.
pub fn ham_vl(w: &Poly) -> Result<Functional> {
    check_pair_potential(w)?;
    let d = w.d();
    let mut terms = vec![Functional::expectation_of(one_particle_kinetic(d)?, None)?];
    for (m, c) in w.terms() {
        let exps = &m.exponents()[..d];
        // Iterate over all splittings a_c + b_c = e_c of each component.
        let mut split = vec![0u8; d];
        loop {
            let mut coef = c.clone();
            let mut left = vec![0u8; 2 * d];
            let mut right = vec![0u8; 2 * d];
            for comp in 0..d {
                let (e, a) = (exps[comp], split[comp]);
                coef *= Rational::from_integer(binomial(e as usize, a as usize));
                if (e - a) % 2 == 1 {
                    coef = -coef;
                }
                left[comp] = a;
                right[comp] = e - a;
            }
            let mono = |ex: &[u8]| -> Result<Functional> {
                let p = Poly::from_terms(1, d, [(Monomial::from_exponents(ex), Rational::one())])?;
                Functional::expectation_of(sym_canonicalize(&p)?, None)
            };
            if !coef.is_zero() {
                terms.push(Functional::Product(vec![Functional::Constant(coef), mono(&left)?, mono(&right)?]));
            }
            let mut comp = 0;
            loop {
                if comp == d {
                    break;
                }
                if split[comp] < exps[comp] {
                    split[comp] += 1;
                    break;
                }
                split[comp] = 0;
                comp += 1;
            }
            if comp == d {
                break;
            }
        }
    }
    Ok(Functional::Sum(terms))
}

/// `ℋ_Lio(γ)` for a level-`N` Dirac state.
pub fn hamiltonian_lio<S: Scalar>(gamma: &DiracState<S>, w: &Poly) -> Result<S> {
    gamma.pair(&hamiltonian_new_observable(w, gamma.k())?)
}

/// `⟨½|v|², γ⟩` for a one-particle state.
pub fn kinetic_expectation<S: Scalar>(gamma: &DiracState<S>) -> Result<S> {
    gamma.pair(&one_particle_kinetic(gamma.d())?)
}
