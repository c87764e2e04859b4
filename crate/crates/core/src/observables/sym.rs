use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::Zero;

use super::monomial::Monomial;
use super::poly::{Kind, Poly};
use crate::error::{Error, Result};
use crate::scalar::{int, Rational, Scalar};

pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// Exact polynomial observable on `(R^{2d})^k`, invariant under relabeling particles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymObservable(Poly);

/// `(1/k!) Σ_π p∘π`, computed orbit by orbit.
pub fn symmetrize(p: &Poly) -> Poly {
    let block = p.block();
    let mut orbit_sums: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (m, c) in p.terms() {
        *orbit_sums.entry(m.canonical(block)).or_insert_with(Rational::zero) += c;
    }
    let mut terms = BTreeMap::new();
    for (rep, s) in orbit_sums {
        if s.is_zero() {
            continue;
        }
        let images = rep.orbit(block);
        let c = s / int(images.len() as i64);
        for img in images {
            terms.insert(img, c.clone());
        }
    }
    Poly::from_map_unchecked(p.k(), p.d(), terms)
}

/// Canonical symmetrization of a raw polynomial, subject to the default degree cap.
pub fn sym_canonicalize(raw: &Poly) -> Result<SymObservable> {
    sym_canonicalize_with_cap(raw, DEFAULT_DEGREE_CAP)
}

pub fn sym_canonicalize_with_cap(raw: &Poly, cap: u32) -> Result<SymObservable> {
    check_degree(raw, cap)?;
    Ok(SymObservable(symmetrize(raw)))
}

fn check_degree(p: &Poly, cap: u32) -> Result<()> {
    let degree = p.degree();
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    Ok(())
}

/// Standard Poisson bracket of two symmetric observables on the same phase space.
pub fn poisson_bracket_standard(f: &SymObservable, g: &SymObservable) -> Result<SymObservable> {
    let b = f.0.poisson_bracket(&g.0)?;
    check_degree(&b, DEFAULT_DEGREE_CAP)?;
    Ok(SymObservable(b))
}

/// `[f, g]_k = k {f, g}`.
pub fn lie_bracket_gk(f: &SymObservable, g: &SymObservable) -> Result<SymObservable> {
    let b = poisson_bracket_standard(f, g)?;
    let k = int(f.k() as i64);
    Ok(b.scale(&k))
}

/// Orbit sums of all relabeling orbits of degree at most `degree`: a basis of the
/// symmetric polynomials of bounded degree.
pub fn symmetric_basis(k: usize, d: usize, degree: u32) -> Vec<SymObservable> {
    let block = 2 * d;
    let mut reps: Vec<Monomial> =
        super::monomial::monomials_up_to(block * k, degree).into_iter().filter(|m| m.canonical(block) == *m).collect();
    reps.sort();
    reps.into_iter()
        .map(|rep| {
            let terms = rep.orbit(block).into_iter().map(|m| (m, int(1))).collect();
            SymObservable(Poly::from_map_unchecked(k, d, terms))
        })
        .collect()
}

impl SymObservable {
    pub fn zero(k: usize, d: usize) -> Self {
        SymObservable(Poly::zero(k, d))
    }

    pub fn constant(k: usize, d: usize, c: Rational) -> Self {
        SymObservable(Poly::constant(k, d, c))
    }

    /// Wraps a polynomial after verifying it is already symmetric.
    pub fn try_from_symmetric(p: Poly) -> Result<Self> {
        if p.is_symmetric() {
            Ok(SymObservable(p))
        } else {
            Err(Error::Invalid("polynomial is not symmetric under particle relabeling".into()))
        }
    }

    /// Caller guarantees symmetry; used for results of symmetry-preserving operations.
    pub(crate) fn from_symmetric_unchecked(p: Poly) -> Self {
        debug_assert!(p.k() > 3 || p.is_symmetric());
        SymObservable(p)
    }

    pub fn k(&self) -> usize {
        self.0.k()
    }

    pub fn d(&self) -> usize {
        self.0.d()
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> SymObservable {
        SymObservable(self.0.scale(c))
    }

    pub fn evaluate<S: Scalar, P: AsRef<[S]>>(&self, points: &[P]) -> Result<S> {
        self.0.eval(points)
    }

    /// Partial derivative in coordinate `c` of particle `i`, both 1-based.
    pub fn partial_derivative(&self, i: usize, c: usize, kind: Kind) -> Result<Poly> {
        if i == 0 || c == 0 {
            return Err(Error::IndexOutOfRange("indices are 1-based".into()));
        }
        self.0.partial(i - 1, kind, c - 1)
    }

    /// `f_(j_1..j_k)`: the observable read on the particles named by a 1-based tuple.
    pub fn extend_to_tuple(&self, tuple: &[usize], n: usize) -> Result<Poly> {
        if tuple.contains(&0) {
            return Err(Error::IndexOutOfRange("tuple entries are 1-based".into()));
        }
        let slots: Vec<usize> = tuple.iter().map(|j| j - 1).collect();
        self.0.embed(&slots, n)
    }

    /// The canonical representatives of the orbits present, with their common coefficient.
    pub fn orbit_coefficients(&self) -> BTreeMap<Monomial, Rational> {
        let block = self.0.block();
        let mut out = BTreeMap::new();
        for (m, c) in self.0.terms() {
            out.entry(m.canonical(block)).or_insert_with(|| c.clone());
        }
        out
    }
}

impl Add for &SymObservable {
    type Output = SymObservable;
    fn add(self, rhs: &SymObservable) -> SymObservable {
        SymObservable(&self.0 + &rhs.0)
    }
}

impl Sub for &SymObservable {
    type Output = SymObservable;
    fn sub(self, rhs: &SymObservable) -> SymObservable {
        SymObservable(&self.0 - &rhs.0)
    }
}

impl Mul for &SymObservable {
    type Output = SymObservable;
    fn mul(self, rhs: &SymObservable) -> SymObservable {
        SymObservable(&self.0 * &rhs.0)
    }
}

impl Neg for &SymObservable {
    type Output = SymObservable;
    fn neg(self) -> SymObservable {
        SymObservable(-&self.0)
    }
}

impl std::fmt::Display for SymObservable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(k: usize, p: usize) -> Poly {
        Poly::variable(k, 1, p, Kind::Position, 0)
    }
    fn v(k: usize, p: usize) -> Poly {
        Poly::variable(k, 1, p, Kind::Velocity, 0)
    }

    #[test]
    fn sym2_of_cross_term() {
        let s = sym_canonicalize(&(&x(2, 0) * &v(2, 1))).unwrap();
        let expected = (&(&x(2, 0) * &v(2, 1)) + &(&x(2, 1) * &v(2, 0))).scale(&rat(1, 2));
        assert_eq!(s.poly(), &expected);
    }

    #[test]
    fn sym1_is_identity() {
        let p = v(1, 0).pow(2);
        assert_eq!(sym_canonicalize(&p).unwrap().poly(), &p);
    }

    #[test]
    fn sym3_of_square_matches_permutation_average() {
        // Oracle: average over all 3! relabelings, built without orbit machinery.
        let p = x(3, 0).pow(2);
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut acc = Poly::zero(3, 1);
        for perm in perms {
            acc = &acc + &p.embed(&perm, 3).unwrap();
        }
        let oracle = acc.scale(&rat(1, 6));
        let s = sym_canonicalize(&p).unwrap();
        assert_eq!(s.poly(), &oracle);
        let expected = (&(&x(3, 0).pow(2) + &x(3, 1).pow(2)) + &x(3, 2).pow(2)).scale(&rat(1, 3));
        assert_eq!(s.poly(), &expected);
    }

    #[test]
    fn antisymmetric_part_dies() {
        let s = sym_canonicalize(&(&x(2, 0) - &x(2, 1))).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn gk_bracket_scales_by_k() {
        let f = sym_canonicalize(&(&x(2, 0) + &x(2, 1))).unwrap();
        let g = sym_canonicalize(&(&v(2, 0) + &v(2, 1))).unwrap();
        assert_eq!(lie_bracket_gk(&f, &g).unwrap(), SymObservable::constant(2, 1, int(4)));
        assert_eq!(poisson_bracket_standard(&f, &g).unwrap(), SymObservable::constant(2, 1, int(2)));
    }

    #[test]
    fn extend_to_tuple_relabels() {
        let f = sym_canonicalize(&x(1, 0)).unwrap();
        assert_eq!(f.extend_to_tuple(&[2], 3).unwrap(), x(3, 1));
        let g = sym_canonicalize(&(&x(2, 0) * &v(2, 1))).unwrap();
        let e = g.extend_to_tuple(&[3, 1], 3).unwrap();
        let expected = (&(&x(3, 2) * &v(3, 0)) + &(&x(3, 0) * &v(3, 2))).scale(&rat(1, 2));
        assert_eq!(e, expected);
        assert!(g.extend_to_tuple(&[1, 1], 3).is_err());
    }

    #[test]
    fn partial_of_symmetrized_square() {
        let s = sym_canonicalize(&x(2, 0).pow(2)).unwrap();
        assert_eq!(s.partial_derivative(1, 1, Kind::Position).unwrap(), x(2, 0));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let p = x(1, 0).pow(9);
        assert_eq!(sym_canonicalize(&p), Err(Error::DegreeCap { degree: 9, cap: 8 }));
        assert!(sym_canonicalize_with_cap(&p, 10).is_ok());
    }
}
