use std::collections::BTreeMap;

use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{parse_poly, sym_canonicalize, SymObservable};
use crate::scalar::Rational;

/// Finitely supported sequence of symmetric observables, one per particle level.
///
/// `bound = Some(n)` marks an element of the `n`-particle algebra; `None` an element of the
/// unbounded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservableHierarchy {
    d: usize,
    levels: BTreeMap<usize, SymObservable>,
    bound: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct HierarchyJson {
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<usize>,
    levels: BTreeMap<String, String>,
}

impl ObservableHierarchy {
    pub fn new(d: usize, bound: Option<usize>) -> Self {
        ObservableHierarchy { d, levels: BTreeMap::new(), bound }
    }

    /// Single-level hierarchy.
    pub fn single(f: SymObservable, bound: Option<usize>) -> Result<Self> {
        let mut h = Self::new(f.d(), bound);
        h.insert(f)?;
        Ok(h)
    }

    pub fn from_levels<I: IntoIterator<Item = SymObservable>>(
        d: usize,
        bound: Option<usize>,
        levels: I,
    ) -> Result<Self> {
        let mut h = Self::new(d, bound);
        for f in levels {
            h.insert(f)?;
        }
        Ok(h)
    }

    /// Adds `f` into level `f.k()`.
    pub fn insert(&mut self, f: SymObservable) -> Result<()> {
        if f.d() != self.d {
            return Err(Error::DimensionMismatch(f.d(), self.d));
        }
        let k = f.k();
        if k == 0 {
            return Err(Error::LevelOutOfRange { level: 0, bound: self.bound.unwrap_or(usize::MAX) });
        }
        if let Some(n) = self.bound {
            if k > n {
                return Err(Error::LevelOutOfRange { level: k, bound: n });
            }
        }
        let sum = match self.levels.remove(&k) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.levels.insert(k, sum);
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn with_bound(mut self, bound: Option<usize>) -> Result<Self> {
        if let (Some(n), Some(top)) = (bound, self.max_level()) {
            if top > n {
                return Err(Error::LevelOutOfRange { level: top, bound: n });
            }
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn levels(&self) -> &BTreeMap<usize, SymObservable> {
        &self.levels
    }

    pub fn get(&self, k: usize) -> Option<&SymObservable> {
        self.levels.get(&k)
    }

    pub fn level_or_zero(&self, k: usize) -> SymObservable {
        self.levels.get(&k).cloned().unwrap_or_else(|| SymObservable::zero(k, self.d))
    }

    pub fn max_level(&self) -> Option<usize> {
        self.levels.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.levels.values().map(SymObservable::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new(self.d, self.bound);
        }
        let levels = self.levels.iter().map(|(&k, f)| (k, f.scale(c))).collect();
        ObservableHierarchy { d: self.d, levels, bound: self.bound }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        let bound = match (self.bound, other.bound) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let mut out = ObservableHierarchy { d: self.d, levels: self.levels.clone(), bound };
        for f in other.levels.values() {
            out.insert(f.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn to_json(&self) -> String {
        let dto = HierarchyJson {
            d: self.d,
            bound: self.bound,
            levels: self.levels.iter().map(|(k, f)| (k.to_string(), f.to_string())).collect(),
        };
        serde_json::to_string(&dto).expect("hierarchy serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("valid json")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }

    /// Parses `{ "d": .., "levels": { "k": "<polynomial>" } }`; level polynomials are symmetrized.
    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let dto: HierarchyJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut h = Self::new(dto.d, dto.bound);
        for (k, text) in dto.levels {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad level key `{k}`")))?;
            let p = parse_poly(&text, k, dto.d)?;
            h.insert(sym_canonicalize(&p)?)?;
        }
        Ok(h)
    }
}
