use std::collections::BTreeMap;

use num::traits::Zero;

use crate::error::{Error, Result};
use crate::linalg;
use crate::observables::{symmetric_basis, symmetrize, Monomial, Poly, SymObservable};
use crate::scalar::{binomial, falling_factorial, Rational};

use super::ObservableHierarchy;

fn check_levels(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::LevelOutOfRange { level: k, bound: n });
    }
    Ok(())
}

/// Embeds a `k`-particle observable into `n`-particle space by averaging over ordered
/// `k`-tuples; computed as `Sym_n(f ⊗ 1)`.
pub fn epsilon_embed(f: &SymObservable, n: usize) -> Result<SymObservable> {
    check_levels(f.k(), n)?;
    if f.k() == n {
        return Ok(f.clone());
    }
    Ok(SymObservable::from_symmetric_unchecked(symmetrize(&f.poly().pad_to(n)?)))
}

/// Same embedding via the unordered `k`-subsets, `C(n,k)^{-1} Σ_S f(z_S)`; valid for symmetric `f`.
pub fn epsilon_embed_subsets(f: &SymObservable, n: usize) -> Result<SymObservable> {
    let k = f.k();
    check_levels(k, n)?;
    let mut acc = Poly::zero(n, f.d());
    for subset in subsets(n, k) {
        acc = &acc + &f.poly().embed(&subset, n)?;
    }
    let w = Rational::new(1.into(), binomial(n, k));
    Ok(SymObservable::from_symmetric_unchecked(acc.scale(&w)))
}

/// Literal definition on a raw polynomial: average of `p` over all ordered distinct tuples.
pub fn epsilon_embed_tuples(p: &Poly, n: usize) -> Result<Poly> {
    let k = p.k();
    check_levels(k, n)?;
    let mut acc = Poly::zero(n, p.d());
    for tuple in ordered_tuples(n, k) {
        acc = &acc + &p.embed(&tuple, n)?;
    }
    Ok(acc.scale(&Rational::new(1.into(), falling_factorial(n, k))))
}

/// Increasing `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Ordered `k`-tuples of distinct elements of `0..n`.
pub fn ordered_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, k, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Solves `ε_{k,n}(f) = g` for symmetric `f` on `k` particles, where `n = g.k()`.
///
/// The unknowns are the coefficients of the `k`-particle orbit sums whose padded orbits
/// occur in `g`; an inconsistent system yields [`Error::NotInImage`].
pub fn epsilon_invert(g: &SymObservable, k: usize) -> Result<SymObservable> {
    let n = g.k();
    check_levels(k, n)?;
    let block = 2 * g.d();
    let rows: Vec<(Monomial, Rational)> = g.orbit_coefficients().into_iter().collect();
    let mut columns: Vec<Monomial> = Vec::new();
    let mut column_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    for (rep, _) in &rows {
        if rep.nonzero_blocks(block) <= k {
            let short = Monomial::from_exponents(&rep.exponents()[..k * block]);
            column_of.entry(short.clone()).or_insert_with(|| {
                columns.push(short);
                columns.len() - 1
            });
        }
    }
    // Column m is the orbit sum S_k(m); its image is (|orb_k m| / |orb_n m|) S_n(m ⊗ 1).
    let mut a = vec![vec![Rational::zero(); columns.len()]; rows.len()];
    for (i, (rep, _)) in rows.iter().enumerate() {
        if rep.nonzero_blocks(block) <= k {
            let short = Monomial::from_exponents(&rep.exponents()[..k * block]);
            let c = column_of[&short];
            a[i][c] = Rational::new((short.orbit_size(block) as u64).into(), (rep.orbit_size(block) as u64).into());
        }
    }
    let b: Vec<Rational> = rows.iter().map(|(_, c)| c.clone()).collect();
    let x = linalg::solve(&a, &b).ok_or(Error::NotInImage { k, n })?;
    let mut terms = BTreeMap::new();
    for (m, c) in columns.iter().zip(x) {
        if c.is_zero() {
            continue;
        }
        for img in m.orbit(block) {
            terms.insert(img, c.clone());
        }
    }
    let p = Poly::from_terms(k, g.d(), terms)?;
    Ok(SymObservable::from_symmetric_unchecked(p))
}

/// Checks `ε_{a,n} = ε_{b,n} ∘ ε_{a,b}` on `f`.
pub fn epsilon_compose_check(a: usize, b: usize, n: usize, f: &SymObservable) -> Result<bool> {
    if !(1 <= a && a <= b && b <= n) {
        return Err(Error::Invalid(format!("require 1 <= a <= b <= n, got a={a}, b={b}, n={n}")));
    }
    if f.k() != a {
        return Err(Error::ParticleMismatch(f.k(), a));
    }
    let direct = epsilon_embed(f, n)?;
    let staged = epsilon_embed(&epsilon_embed(f, b)?, n)?;
    Ok(direct == staged)
}

/// Rank of `ε_{k,n}` on symmetric polynomials of degree at most `degree`, with the
/// dimension of that space. Injectivity means the two agree.
pub fn embedding_rank(k: usize, n: usize, d: usize, degree: u32) -> Result<(usize, usize)> {
    check_levels(k, n)?;
    let basis = symmetric_basis(k, d, degree);
    let images: Vec<BTreeMap<Monomial, Rational>> =
        basis.iter().map(|f| epsilon_embed(f, n).map(|e| e.orbit_coefficients())).collect::<Result<_>>()?;
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for img in &images {
        for m in img.keys() {
            let next = row_index.len();
            row_index.entry(m.clone()).or_insert(next);
        }
    }
    let mut rows = vec![vec![Rational::zero(); basis.len()]; row_index.len()];
    for (c, img) in images.iter().enumerate() {
        for (m, v) in img {
            rows[row_index[m]][c] = v.clone();
        }
    }
    Ok((linalg::rank(&rows), basis.len()))
}

/// `ι_ε(F) = Σ_k ε_{k,n}(f^{(k)})`, the `n`-particle observable represented by a hierarchy.
pub fn iota_epsilon(f: &ObservableHierarchy, n: usize) -> Result<SymObservable> {
    let mut acc = SymObservable::zero(n, f.d());
    for (&k, fk) in f.levels() {
        check_levels(k, n)?;
        acc = &acc + &epsilon_embed(fk, n)?;
    }
    Ok(acc)
}

/// Convenience: `|P_k^n|` as a rational.
pub fn tuple_count(n: usize, k: usize) -> Rational {
    Rational::from_integer(falling_factorial(n, k))
}
