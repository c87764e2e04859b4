use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Signed, Zero};

use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Coordinate kind inside a particle block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Position,
    Velocity,
}

/// Flat variable index of coordinate `c` (0-based) of particle `p` (0-based).
pub fn var_index(d: usize, p: usize, kind: Kind, c: usize) -> usize {
    p * 2 * d + if kind == Kind::Velocity { d } else { 0 } + c
}

/// Exact polynomial on `(R^{2d})^k` with rational coefficients; not necessarily symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    k: usize,
    d: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(k: usize, d: usize) -> Self {
        assert!(d >= 1, "dimension must be positive");
        Poly { k, d, terms: BTreeMap::new() }
    }

    pub fn constant(k: usize, d: usize, c: Rational) -> Self {
        let mut p = Self::zero(k, d);
        p.add_term(Monomial::one(2 * d * k), c);
        p
    }

    /// The coordinate variable of particle `p` (0-based), component `c` (0-based).
    pub fn variable(k: usize, d: usize, p: usize, kind: Kind, c: usize) -> Self {
        assert!(p < k && c < d, "variable index out of range");
        let mut q = Self::zero(k, d);
        q.add_term(Monomial::variable(2 * d * k, var_index(d, p, kind, c)), Rational::one());
        q
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(k: usize, d: usize, terms: I) -> Result<Self> {
        let mut p = Self::zero(k, d);
        for (m, c) in terms {
            if m.nvars() != 2 * d * k {
                return Err(Error::Arity { expected: 2 * d * k, got: m.nvars() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn from_map_unchecked(k: usize, d: usize, terms: BTreeMap<Monomial, Rational>) -> Self {
        Poly { k, d, terms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nvars(&self) -> usize {
        2 * self.d * self.k
    }

    pub fn block(&self) -> usize {
        2 * self.d
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars()))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn same_shape(&self, other: &Poly) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        if self.k != other.k {
            return Err(Error::ParticleMismatch(self.k, other.k));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.k, self.d);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Poly { k: self.k, d: self.d, terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.k, self.d, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in flat variable `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.k, self.d);
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(var) {
                out.add_term(dm, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Partial derivative in coordinate `c` of particle `p`, both 0-based.
    pub fn partial(&self, p: usize, kind: Kind, c: usize) -> Result<Poly> {
        if p >= self.k {
            return Err(Error::IndexOutOfRange(format!("particle {} of {}", p + 1, self.k)));
        }
        if c >= self.d {
            return Err(Error::IndexOutOfRange(format!("coordinate {} of {}", c + 1, self.d)));
        }
        Ok(self.derivative(var_index(self.d, p, kind, c)))
    }

    /// Relabels particle `p` to slot `slots[p]` (0-based, distinct) in an `n`-particle space.
    pub fn embed(&self, slots: &[usize], n: usize) -> Result<Poly> {
        if slots.len() != self.k {
            return Err(Error::Arity { expected: self.k, got: slots.len() });
        }
        let mut seen = vec![false; n];
        for &s in slots {
            if s >= n {
                return Err(Error::IndexOutOfRange(format!("slot {} of {}", s + 1, n)));
            }
            if seen[s] {
                return Err(Error::RepeatedIndex(s + 1));
            }
            seen[s] = true;
        }
        let block = self.block();
        let terms = self.terms.iter().map(|(m, c)| (m.relabel(block, slots, n), c.clone())).collect();
        Ok(Poly { k: n, d: self.d, terms })
    }

    /// Pads with `n - k` spectator particles, i.e. `p ⊗ 1`.
    pub fn pad_to(&self, n: usize) -> Result<Poly> {
        if n < self.k {
            return Err(Error::LevelOutOfRange { level: self.k, bound: n });
        }
        let block = self.block();
        let terms = self.terms.iter().map(|(m, c)| (m.pad(block, n - self.k), c.clone())).collect();
        Ok(Poly { k: n, d: self.d, terms })
    }

    /// Evaluates at `k` phase points, each laid out as `[x^1..x^d, v^1..v^d]`.
    pub fn eval<S: Scalar, P: AsRef<[S]>>(&self, points: &[P]) -> Result<S> {
        if points.len() != self.k {
            return Err(Error::Arity { expected: self.k, got: points.len() });
        }
        for pt in points {
            if pt.as_ref().len() != 2 * self.d {
                return Err(Error::DimensionMismatch(pt.as_ref().len() / 2, self.d));
            }
        }
        let block = self.block();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = &points[i / block].as_ref()[i % block];
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Standard Poisson bracket on `(R^{2d})^k`.
    pub fn poisson_bracket(&self, other: &Poly) -> Result<Poly> {
        self.same_shape(other)?;
        let mut out = Poly::zero(self.k, self.d);
        for p in 0..self.k {
            for c in 0..self.d {
                let xi = var_index(self.d, p, Kind::Position, c);
                let vi = var_index(self.d, p, Kind::Velocity, c);
                let fx = self.derivative(xi);
                let gv = other.derivative(vi);
                if !fx.is_zero() && !gv.is_zero() {
                    out = &out + &(&fx * &gv);
                }
                let fv = self.derivative(vi);
                let gx = other.derivative(xi);
                if !fv.is_zero() && !gx.is_zero() {
                    out = &out - &(&fv * &gx);
                }
            }
        }
        Ok(out)
    }

    /// Whether the coefficient map is invariant under relabeling particle blocks.
    pub fn is_symmetric(&self) -> bool {
        let block = self.block();
        self.terms.iter().all(|(m, c)| m.orbit(block).iter().all(|img| self.terms.get(img) == Some(c)))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.same_shape(rhs).expect("polynomial shape mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.same_shape(rhs).expect("polynomial shape mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.same_shape(rhs).expect("polynomial shape mismatch");
        let mut out = Poly::zero(self.k, self.d);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Poly { k: self.k, d: self.d, terms }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, d: usize) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        let p = i / (2 * d) + 1;
        let r = i % (2 * d);
        let (name, c) = if r < d { ('x', r + 1) } else { ('v', r - d + 1) };
        write!(f, "{name}{p}_{c}")?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Renders in the textual polynomial syntax, highest grlex term first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m, self.d)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn x(k: usize, p: usize) -> Poly {
        Poly::variable(k, 1, p, Kind::Position, 0)
    }
    fn v(k: usize, p: usize) -> Poly {
        Poly::variable(k, 1, p, Kind::Velocity, 0)
    }

    #[test]
    fn canonical_pair_brackets_to_one() {
        let b = x(1, 0).poisson_bracket(&v(1, 0)).unwrap();
        assert_eq!(b, Poly::constant(1, 1, int(1)));
    }

    #[test]
    fn kinetic_energy_bracket() {
        let ke = v(1, 0).pow(2).scale(&rat(1, 2));
        let b = ke.poisson_bracket(&x(1, 0)).unwrap();
        assert_eq!(b, -&v(1, 0));
    }

    #[test]
    fn derivative_examples() {
        let xv = &x(1, 0) * &v(1, 0);
        assert_eq!(xv.partial(0, Kind::Position, 0).unwrap(), v(1, 0));
        assert!(x(1, 0).pow(2).partial(0, Kind::Velocity, 0).unwrap().is_zero());
        assert!(xv.partial(1, Kind::Position, 0).is_err());
    }

    #[test]
    fn embed_rejects_repeats() {
        assert_eq!(x(1, 0).embed(&[0], 3).unwrap(), x(3, 0));
        assert_eq!(Poly::zero(2, 1).embed(&[0, 0], 3), Err(Error::RepeatedIndex(1)));
    }

    #[test]
    fn eval_square_distance() {
        let diff = &x(2, 0) - &x(2, 1);
        let sq = &diff * &diff;
        let val: Rational = sq.eval(&[vec![int(0), int(0)], vec![int(3), int(0)]]).unwrap();
        assert_eq!(val, int(9));
    }

    #[test]
    fn display_uses_input_syntax() {
        let p = &(&x(2, 0) * &v(2, 1)).scale(&rat(1, 2)) - &Poly::constant(2, 1, int(3));
        assert_eq!(p.to_string(), "1/2*x1_1*v2_1 - 3");
    }
}
