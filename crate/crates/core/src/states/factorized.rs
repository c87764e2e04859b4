use std::collections::HashMap;

use super::{DiracState, GridState1D};
use crate::error::{Error, Result};
use crate::observables::SymObservable;
use crate::scalar::Scalar;

/// Largest level for which nested grid quadrature is allowed.
pub const GRID_NESTED_CAP: usize = 3;

/// One-particle state underlying a factorized hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub enum Base<S> {
    Dirac(DiracState<S>),
    Grid(GridState1D),
}

/// The tensor-power hierarchy `(γ^{⊗k})_{k≥1}` of a one-particle state, held lazily.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizedState<S> {
    base: Base<S>,
}

impl<S: Scalar> FactorizedState<S> {
    pub fn dirac(gamma: DiracState<S>) -> Result<Self> {
        if gamma.k() != 1 {
            return Err(Error::ParticleMismatch(gamma.k(), 1));
        }
        Ok(FactorizedState { base: Base::Dirac(gamma) })
    }

    pub fn grid(gamma: GridState1D) -> Self {
        FactorizedState { base: Base::Grid(gamma) }
    }

    pub fn base(&self) -> &Base<S> {
        &self.base
    }

    pub fn d(&self) -> usize {
        match &self.base {
            Base::Dirac(g) => g.d(),
            Base::Grid(_) => 1,
        }
    }

    pub fn mass(&self) -> S {
        match &self.base {
            Base::Dirac(g) => g.total_weight(),
            Base::Grid(g) => S::from_f64(g.mass()),
        }
    }

    /// `⟨Π_c x^{a_c} v^{b_c}, γ⟩` for one particle block of exponents.
    pub fn block_moment(&self, block: &[u8]) -> S {
        match &self.base {
            Base::Dirac(g) => {
                let mut acc = S::zero();
                for a in g.atoms() {
                    let mut t = a.weight.clone();
                    for (c, &e) in a.points[0].iter().zip(block) {
                        for _ in 0..e {
                            t = t * c.clone();
                        }
                    }
                    acc = acc + t;
                }
                acc
            }
            Base::Grid(g) => S::from_f64(g.moment(block[0], block[1], None)),
        }
    }

    fn check(&self, f: &SymObservable) -> Result<()> {
        if f.d() != self.d() {
            return Err(Error::DimensionMismatch(f.d(), self.d()));
        }
        Ok(())
    }

    /// `⟨f, γ^{⊗k}⟩` by expanding each monomial into per-particle moments.
    pub fn pair_level(&self, f: &SymObservable) -> Result<S> {
        self.check(f)?;
        let block = 2 * f.d();
        let mut cache: HashMap<Vec<u8>, S> = HashMap::new();
        let mut acc = S::zero();
        for (m, c) in f.poly().terms() {
            let mut t = S::from_rational(c);
            for p in 0..f.k() {
                let b = m.block(p, block);
                let mom = cache.entry(b.to_vec()).or_insert_with(|| self.block_moment(b)).clone();
                t = t * mom;
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// `⟨f, γ^{⊗k}⟩` by k-fold summation over atoms or grid cells.
    pub fn pair_level_nested(&self, f: &SymObservable) -> Result<S> {
        self.check(f)?;
        let k = f.k();
        match &self.base {
            Base::Dirac(g) => {
                let atoms = g.atoms();
                let mut acc = S::zero();
                let mut idx = vec![0usize; k];
                if atoms.is_empty() {
                    return Ok(acc);
                }
                loop {
                    let w = idx.iter().fold(S::one(), |w, &i| w * atoms[i].weight.clone());
                    let pts: Vec<&Vec<S>> = idx.iter().map(|&i| &atoms[i].points[0]).collect();
                    acc = acc + w * f.evaluate(&pts)?;
                    if !advance(&mut idx, atoms.len()) {
                        break;
                    }
                }
                Ok(acc)
            }
            Base::Grid(g) => {
                if k > GRID_NESTED_CAP {
                    return Err(Error::ResourceCap(format!(
                        "nested grid quadrature is limited to level {GRID_NESTED_CAP}, requested {k}"
                    )));
                }
                let cell = g.dx() * g.dv();
                let cells: Vec<(f64, [f64; 2])> = (0..g.nx())
                    .flat_map(|i| (0..g.nv()).map(move |j| (i, j)))
                    .map(|(i, j)| (g.value(i, j) * cell, [g.x_center(i), g.v_center(j)]))
                    .collect();
                let mut acc = 0.0;
                let mut idx = vec![0usize; k];
                loop {
                    let w: f64 = idx.iter().map(|&i| cells[i].0).product();
                    if w != 0.0 {
                        let pts: Vec<&[f64]> = idx.iter().map(|&i| &cells[i].1[..]).collect();
                        acc += w * f.poly().eval::<f64, _>(&pts)?;
                    }
                    if !advance(&mut idx, cells.len()) {
                        break;
                    }
                }
                Ok(S::from_f64(acc))
            }
        }
    }
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in idx.iter_mut().rev() {
        *i += 1;
        if *i < base {
            return true;
        }
        *i = 0;
    }
    false
}
