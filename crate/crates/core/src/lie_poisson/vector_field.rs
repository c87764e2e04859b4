use std::collections::BTreeMap;

use num::traits::One;

use super::bracket::Algebra;
use super::functional::Functional;
use super::hamiltonians::{hamiltonian_new_observable, kinetic, pair_potential, w_bbgky, w_vlh};
use crate::error::{Error, Result};
use crate::hierarchy::{bracket_coefficient, ordered_tuples, r_min, target_level};
use crate::observables::{var_index, Kind, Poly, SymObservable};
use crate::scalar::{binomial, int, rat, Rational, Scalar};
use crate::states::StateHierarchy;

/// One contribution `φ ↦ weight · ⟨{φ ⊗ 1, generator}, γ^{(level)}⟩` to a weak vector field.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakTerm<S> {
    pub level: usize,
    pub weight: S,
    pub generator: Poly,
}

/// A Hamiltonian vector field held through its pairings: for each level `ℓ`, the linear
/// map `φ ↦ ⟨φ, X^{(ℓ)}⟩` on `ℓ`-particle observables.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakField<S> {
    d: usize,
    levels: BTreeMap<usize, Vec<WeakTerm<S>>>,
}

impl<S: Scalar> WeakField<S> {
    pub fn new(d: usize) -> Self {
        WeakField { d, levels: BTreeMap::new() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn levels(&self) -> &BTreeMap<usize, Vec<WeakTerm<S>>> {
        &self.levels
    }

    pub fn terms(&self, l: usize) -> &[WeakTerm<S>] {
        self.levels.get(&l).map_or(&[], Vec::as_slice)
    }

    /// Adds a term acting on level-`l` test observables.
    pub fn push(&mut self, l: usize, term: WeakTerm<S>) -> Result<()> {
        if term.generator.d() != self.d {
            return Err(Error::DimensionMismatch(term.generator.d(), self.d));
        }
        if term.generator.k() != term.level || term.level < l {
            return Err(Error::LevelOutOfRange { level: l, bound: term.level });
        }
        self.levels.entry(l).or_default().push(term);
        Ok(())
    }

    /// `⟨φ, X^{(φ.k)}⟩` evaluated against `Γ`.
    pub fn pair(&self, phi: &SymObservable, gamma: &StateHierarchy<S>) -> Result<S> {
        if phi.d() != self.d {
            return Err(Error::DimensionMismatch(phi.d(), self.d));
        }
        let mut acc = S::zero();
        for term in self.terms(phi.k()) {
            let lifted = phi.poly().pad_to(term.level)?;
            let bracket = lifted.poisson_bracket(&term.generator)?;
            if bracket.is_zero() {
                continue;
            }
            acc = acc + term.weight.clone() * gamma.pair_raw(&bracket)?;
        }
        Ok(acc)
    }

    /// `Σ_ℓ ⟨h^{(ℓ)}, X^{(ℓ)}⟩` for a hierarchy of test observables.
    pub fn pair_hierarchy(&self, h: &crate::hierarchy::ObservableHierarchy, gamma: &StateHierarchy<S>) -> Result<S> {
        let mut acc = S::zero();
        for hl in h.levels().values() {
            acc = acc + self.pair(hl, gamma)?;
        }
        Ok(acc)
    }
}

impl WeakField<Rational> {
    /// Per target level, the derivatives of `Σ weight · generator` in every variable of
    /// particles `0..l`: the data that determines the level-`l` action.
    pub fn reduced(&self, l: usize) -> BTreeMap<usize, Vec<Poly>> {
        let mut combined: BTreeMap<usize, Poly> = BTreeMap::new();
        for term in self.terms(l) {
            let scaled = term.generator.scale(&term.weight);
            let entry = combined.entry(term.level).or_insert_with(|| Poly::zero(term.level, self.d));
            *entry = &*entry + &scaled;
        }
        let mut out = BTreeMap::new();
        for (k, h) in combined {
            let mut derivs = Vec::with_capacity(2 * self.d * l);
            for p in 0..l {
                for kind in [Kind::Position, Kind::Velocity] {
                    for c in 0..self.d {
                        derivs.push(h.derivative(var_index(self.d, p, kind, c)));
                    }
                }
            }
            if derivs.iter().any(|q| !q.is_zero()) {
                out.insert(k, derivs);
            }
        }
        out
    }

    /// Whether two fields act identically on level-`l` test observables.
    pub fn equivalent(&self, other: &WeakField<Rational>, l: usize) -> bool {
        self.reduced(l) == other.reduced(l)
    }
}

/// `Σ_{a ∈ P_r^ℓ} g_{(a, ℓ, .., ℓ+j-r-1)}` on `k` particles (0-based slots).
fn spread_generator(g: &SymObservable, l: usize, r: usize, k: usize) -> Result<Poly> {
    let j = g.k();
    let tail: Vec<usize> = (l..l + j - r).collect();
    let mut acc = Poly::zero(k, g.d());
    for a in ordered_tuples(l, r) {
        let slots: Vec<usize> = a.into_iter().chain(tail.iter().copied()).collect();
        acc = &acc + &g.poly().embed(&slots, k)?;
    }
    Ok(acc)
}

/// Weak Hamiltonian vector field of `G` at `Γ` on levels `1..=top` (or the single level of
/// a `Level` algebra), characterized by `Σ_ℓ ⟨dF[Γ]^{(ℓ)}, X^{(ℓ)}⟩ = {F, G}(Γ)`.
pub fn ham_vf_weak<S: Scalar>(
    g: &Functional,
    gamma: &StateHierarchy<S>,
    algebra: Algebra,
    top: usize,
) -> Result<WeakField<S>> {
    let dg = g.gateaux_terms(gamma)?;
    let d = gamma
        .d()
        .or_else(|| g.generators().first().map(|h| h.d()))
        .ok_or_else(|| Error::Invalid("cannot infer dimension".into()))?;
    let mut field = WeakField::new(d);
    let levels: Vec<usize> = match algebra {
        Algebra::Level(k) => vec![k],
        Algebra::Bounded(n) => (1..=top.min(n)).collect(),
        Algebra::Unbounded => (1..=top).collect(),
    };
    for &l in &levels {
        for (w, h) in &dg {
            for (&j, gj) in h.levels() {
                match algebra {
                    Algebra::Level(k) => {
                        if j != k {
                            return Err(Error::LevelOutOfRange { level: j, bound: k });
                        }
                        let weight = w.clone() * S::from_i64(k as i64);
                        field.push(l, WeakTerm { level: k, weight, generator: gj.poly().clone() })?;
                    }
                    Algebra::Bounded(n) => {
                        if j > n {
                            return Err(Error::LevelOutOfRange { level: j, bound: n });
                        }
                        let k = target_level(l, j, n);
                        for r in r_min(l, j, n)..=l.min(j) {
                            let c = bracket_coefficient(l, j, n, r)? * Rational::from_integer(binomial(j, r));
                            let generator = spread_generator(gj, l, r, k)?;
                            let weight = w.clone() * S::from_rational(&c);
                            field.push(l, WeakTerm { level: k, weight, generator })?;
                        }
                    }
                    Algebra::Unbounded => {
                        let k = l + j - 1;
                        let generator = spread_generator(gj, l, 1, k)?;
                        let weight = w.clone() * S::from_i64(j as i64);
                        field.push(l, WeakTerm { level: k, weight, generator })?;
                    }
                }
            }
        }
    }
    Ok(field)
}

/// Both sides of the vector-field contract: `(Σ_ℓ ⟨dF[Γ]^{(ℓ)}, X_G(Γ)^{(ℓ)}⟩, {F, G}(Γ))`.
pub fn vf_contract<S: Scalar>(
    f: &Functional,
    g: &Functional,
    gamma: &StateHierarchy<S>,
    algebra: Algebra,
) -> Result<(S, S)> {
    let top = match algebra {
        Algebra::Level(k) | Algebra::Bounded(k) => k,
        Algebra::Unbounded => f.max_level().unwrap_or(1),
    };
    let field = ham_vf_weak(g, gamma, algebra, top)?;
    let mut paired = S::zero();
    for (w, h) in f.gateaux_terms(gamma)? {
        paired = paired + w * field.pair_hierarchy(&h, gamma)?;
    }
    let bracket = super::bracket::lie_poisson_bracket(f, g, gamma, algebra)?;
    Ok((paired, bracket))
}

/// `Σ_{a<l} W(x_a - x_l)` on `l + 1` particles.
fn collision_sum(w: &Poly, l: usize) -> Result<Poly> {
    let mut acc = Poly::zero(l + 1, w.d());
    for a in 0..l {
        acc = &acc + &pair_potential(w, l + 1, a, l)?;
    }
    Ok(acc)
}

/// `Σ_{i≠j<l} W(x_i - x_j)` on `k ≥ l` particles.
fn internal_sum(w: &Poly, l: usize, k: usize) -> Result<Poly> {
    let mut acc = Poly::zero(k, w.d());
    for i in 0..l {
        for j in 0..l {
            if i != j {
                acc = &acc + &pair_potential(w, k, i, j)?;
            }
        }
    }
    Ok(acc)
}

/// The BBGKY field written out case by case (`ℓ = 1`, `2 ≤ ℓ ≤ N-1`, `ℓ = N`).
pub fn bbgky_case_fields(w: &Poly, n: usize) -> Result<WeakField<Rational>> {
    let d = w.d();
    let nn = n as i64;
    let mut field = WeakField::new(d);
    for l in 1..=n {
        if l == n {
            let h = &kinetic(n, d) + &internal_sum(w, n, n)?.scale(&rat(1, nn));
            field.push(l, WeakTerm { level: n, weight: Rational::one(), generator: h })?;
            continue;
        }
        field.push(l, WeakTerm { level: l, weight: Rational::one(), generator: kinetic(l, d) })?;
        let coupling = rat(2 * (nn - l as i64), nn);
        field.push(l, WeakTerm { level: l + 1, weight: coupling, generator: collision_sum(w, l)? })?;
        if l >= 2 {
            let h = internal_sum(w, l, l + 1)?;
            field.push(l, WeakTerm { level: l + 1, weight: rat(1, nn), generator: h })?;
        }
    }
    Ok(field)
}

/// The Vlasov-hierarchy field written out: free transport at level `ℓ` plus the factor-2
/// collision term against level `ℓ + 1`.
pub fn vlh_case_fields(w: &Poly, top: usize) -> Result<WeakField<Rational>> {
    let d = w.d();
    let mut field = WeakField::new(d);
    for l in 1..=top {
        field.push(l, WeakTerm { level: l, weight: Rational::one(), generator: kinetic(l, d) })?;
        field.push(l, WeakTerm { level: l + 1, weight: int(2), generator: collision_sum(w, l)? })?;
    }
    Ok(field)
}

/// Liouville field on `N`-particle states: `N · {φ, ℋ_New}`.
pub fn liouville_field(w: &Poly, n: usize) -> Result<WeakField<Rational>> {
    let mut field = WeakField::new(w.d());
    let h = hamiltonian_new_observable(w, n)?.into_poly();
    field.push(n, WeakTerm { level: n, weight: int(n as i64), generator: h })?;
    Ok(field)
}

/// Hierarchy field of the BBGKY energy generated from the bracket formula.
pub fn bbgky_field<S: Scalar>(w: &Poly, n: usize, gamma: &StateHierarchy<S>) -> Result<WeakField<S>> {
    ham_vf_weak(&Functional::Expectation(w_bbgky(w, n)?), gamma, Algebra::Bounded(n), n)
}

/// Hierarchy field of the Vlasov-hierarchy energy generated from the bracket formula.
pub fn vlh_field<S: Scalar>(w: &Poly, gamma: &StateHierarchy<S>, top: usize) -> Result<WeakField<S>> {
    ham_vf_weak(&Functional::Expectation(w_vlh(w)?), gamma, Algebra::Unbounded, top)
}
