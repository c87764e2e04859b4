use std::collections::BTreeMap;

use num::traits::Zero;

use super::coefficient::{bracket_coefficient, r_min, target_level};
use super::embedding::{epsilon_embed, epsilon_invert};
use super::wedge::wedge_r;
use super::ObservableHierarchy;
use crate::error::{Error, Result};
use crate::observables::{lie_bracket_gk, sym_canonicalize, SymObservable};
use crate::scalar::Rational;

/// Signature of a contraction-weight rule `(ℓ, j, n, r) -> C`.
pub type CoefficientRule = dyn Fn(usize, usize, usize, usize) -> Result<Rational> + Sync;

/// The unique level-`min(ℓ+j-1, n)` observable whose embedding is the `n`-particle bracket
/// of the embeddings of `f` and `g`.
pub fn filtration_h(f: &SymObservable, g: &SymObservable, n: usize) -> Result<SymObservable> {
    filtration_h_with(f, g, n, &bracket_coefficient)
}

pub fn filtration_h_with(
    f: &SymObservable,
    g: &SymObservable,
    n: usize,
    coefficient: &CoefficientRule,
) -> Result<SymObservable> {
    let (l, j) = (f.k(), g.k());
    if f.d() != g.d() {
        return Err(Error::DimensionMismatch(f.d(), g.d()));
    }
    for level in [l, j] {
        if level == 0 || level > n {
            return Err(Error::LevelOutOfRange { level, bound: n });
        }
    }
    let k = target_level(l, j, n);
    let mut acc = SymObservable::zero(k, f.d());
    for r in r_min(l, j, n)..=l.min(j) {
        let c = coefficient(l, j, n, r)?;
        if c.is_zero() {
            continue;
        }
        let w = sym_canonicalize(&wedge_r(f, g, r)?)?;
        acc = &acc + &epsilon_embed(&w, k)?.scale(&c);
    }
    Ok(acc)
}

fn check_support(f: &ObservableHierarchy, n: usize) -> Result<()> {
    match f.max_level() {
        Some(top) if top > n => Err(Error::LevelOutOfRange { level: top, bound: n }),
        _ => Ok(()),
    }
}

/// Explicit `n`-particle hierarchy bracket.
pub fn bracket_gn(f: &ObservableHierarchy, g: &ObservableHierarchy, n: usize) -> Result<ObservableHierarchy> {
    bracket_gn_with(f, g, n, &bracket_coefficient)
}

/// Explicit hierarchy bracket with a caller-supplied contraction weight.
pub fn bracket_gn_with(
    f: &ObservableHierarchy,
    g: &ObservableHierarchy,
    n: usize,
    coefficient: &CoefficientRule,
) -> Result<ObservableHierarchy> {
    if f.d() != g.d() {
        return Err(Error::DimensionMismatch(f.d(), g.d()));
    }
    check_support(f, n)?;
    check_support(g, n)?;
    let mut out = ObservableHierarchy::new(f.d(), Some(n));
    for fl in f.levels().values() {
        for gj in g.levels().values() {
            out.insert(filtration_h_with(fl, gj, n, coefficient)?)?;
        }
    }
    Ok(out)
}

/// Reference bracket: pull the `n`-particle bracket of embedded levels back through the
/// inverse embedding, one `(ℓ, j)` pair at a time.
pub fn bracket_gn_definitional(
    f: &ObservableHierarchy,
    g: &ObservableHierarchy,
    n: usize,
) -> Result<ObservableHierarchy> {
    if f.d() != g.d() {
        return Err(Error::DimensionMismatch(f.d(), g.d()));
    }
    check_support(f, n)?;
    check_support(g, n)?;
    let mut out = ObservableHierarchy::new(f.d(), Some(n));
    for (&l, fl) in f.levels() {
        for (&j, gj) in g.levels() {
            let top = lie_bracket_gk(&epsilon_embed(fl, n)?, &epsilon_embed(gj, n)?)?;
            out.insert(epsilon_invert(&top, target_level(l, j, n))?)?;
        }
    }
    Ok(out)
}

/// Unbounded hierarchy bracket: level `ℓ+j-1` receives `Sym(f ∧_1 g)`.
pub fn bracket_ginf(f: &ObservableHierarchy, g: &ObservableHierarchy) -> Result<ObservableHierarchy> {
    if f.d() != g.d() {
        return Err(Error::DimensionMismatch(f.d(), g.d()));
    }
    let mut out = ObservableHierarchy::new(f.d(), None);
    for fl in f.levels().values() {
        for gj in g.levels().values() {
            out.insert(sym_canonicalize(&wedge_r(fl, gj, 1)?)?)?;
        }
    }
    Ok(out)
}

/// Groups the pairs `(ℓ, j)` with `1 <= ℓ, j <= top` by the level they feed at `n` particles.
pub fn level_partition(n: usize, top: usize) -> BTreeMap<usize, Vec<(usize, usize)>> {
    let mut out: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for l in 1..=top.min(n) {
        for j in 1..=top.min(n) {
            out.entry(target_level(l, j, n)).or_default().push((l, j));
        }
    }
    out
}

/// Largest absolute coefficient difference, level by level, between two hierarchies.
pub fn max_coefficient_gap(a: &ObservableHierarchy, b: &ObservableHierarchy) -> Result<BTreeMap<usize, Rational>> {
    let diff = a.sub(b)?;
    let mut out = BTreeMap::new();
    for (&k, f) in diff.levels() {
        let m = f.poly().terms().values().map(|c| if c < &Rational::zero() { -c.clone() } else { c.clone() }).max();
        out.insert(k, m.unwrap_or_else(Rational::zero));
    }
    Ok(out)
}
