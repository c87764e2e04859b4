use crate::observables::Poly;
use crate::scalar::rational_to_f64;

/// A polynomial lowered to floating point for repeated evaluation in time loops.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPoly {
    k: usize,
    block: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly) -> Self {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let vars =
                    m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as i32)).collect();
                (rational_to_f64(c), vars)
            })
            .collect();
        CompiledPoly { k: p.k(), block: p.block(), terms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at `k` phase points given as slices `[x^1..x^d, v^1..v^d]`.
    pub fn eval(&self, points: &[&[f64]]) -> f64 {
        debug_assert_eq!(points.len(), self.k);
        self.terms
            .iter()
            .map(|(c, vars)| vars.iter().fold(*c, |acc, &(i, e)| acc * points[i / self.block][i % self.block].powi(e)))
            .sum()
    }

    /// Terms as `(coefficient, exponents)` over the flat variable list.
    pub fn monomials(&self) -> impl Iterator<Item = (f64, Vec<u8>)> + '_ {
        let nvars = self.k * self.block;
        self.terms.iter().map(move |(c, vars)| {
            let mut exps = vec![0u8; nvars];
            for &(i, e) in vars {
                exps[i] = e as u8;
            }
            (*c, exps)
        })
    }
}
