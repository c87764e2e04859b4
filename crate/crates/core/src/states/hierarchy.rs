use std::collections::BTreeMap;

use super::{DiracState, FactorizedState};
use crate::error::{Error, Result};
use crate::hierarchy::ObservableHierarchy;
use crate::observables::{symmetrize, Poly, SymObservable};
use crate::scalar::Scalar;

/// A state hierarchy `(γ^{(k)})_k`: explicit Dirac levels or a factorized tensor-power view.
#[derive(Clone, Debug, PartialEq)]
pub enum StateHierarchy<S> {
    Levels(BTreeMap<usize, DiracState<S>>),
    Factorized(FactorizedState<S>),
}

impl<S: Scalar> StateHierarchy<S> {
    pub fn from_levels(states: Vec<DiracState<S>>) -> Result<Self> {
        let mut levels = BTreeMap::new();
        for s in states {
            if levels.insert(s.k(), s).is_some() {
                return Err(Error::Invalid("duplicate level in state hierarchy".into()));
            }
        }
        Ok(StateHierarchy::Levels(levels))
    }

    /// A single state viewed as a one-level hierarchy.
    pub fn single(gamma: DiracState<S>) -> Self {
        StateHierarchy::Levels(BTreeMap::from([(gamma.k(), gamma)]))
    }

    pub fn level(&self, k: usize) -> Option<&DiracState<S>> {
        match self {
            StateHierarchy::Levels(l) => l.get(&k),
            StateHierarchy::Factorized(_) => None,
        }
    }

    /// Highest stored level; `None` for the unbounded factorized view.
    pub fn max_level(&self) -> Option<usize> {
        match self {
            StateHierarchy::Levels(l) => l.keys().next_back().copied(),
            StateHierarchy::Factorized(_) => None,
        }
    }

    pub fn d(&self) -> Option<usize> {
        match self {
            StateHierarchy::Levels(l) => l.values().next().map(DiracState::d),
            StateHierarchy::Factorized(f) => Some(f.d()),
        }
    }

    /// `⟨f, γ^{(f.k)}⟩`.
    pub fn pair_level(&self, f: &SymObservable) -> Result<S> {
        match self {
            StateHierarchy::Levels(l) => l.get(&f.k()).ok_or(Error::MissingLevel(f.k()))?.pair(f),
            StateHierarchy::Factorized(fs) => fs.pair_level(f),
        }
    }

    pub fn pair_raw(&self, p: &Poly) -> Result<S> {
        self.pair_level(&SymObservable::from_symmetric_unchecked(symmetrize(p)))
    }

    /// `Σ_k ⟨f^{(k)}, γ^{(k)}⟩`.
    pub fn pair_hierarchy(&self, f: &ObservableHierarchy) -> Result<S> {
        let mut acc = S::zero();
        for fk in f.levels().values() {
            acc = acc + self.pair_level(fk)?;
        }
        Ok(acc)
    }
}

/// Marginal hierarchy `(γ^{(1)}, .., γ^{(N)})` of a level-`N` state.
pub fn iota_mar<S: Scalar>(gamma: &DiracState<S>) -> Result<StateHierarchy<S>> {
    let states = (1..=gamma.k()).map(|k| gamma.marginal(k)).collect::<Result<Vec<_>>>()?;
    StateHierarchy::from_levels(states)
}

/// Tensor-power hierarchy of a one-particle Dirac state.
pub fn iota_factorize<S: Scalar>(gamma: &DiracState<S>) -> Result<StateHierarchy<S>> {
    Ok(StateHierarchy::Factorized(FactorizedState::dirac(gamma.clone())?))
}
