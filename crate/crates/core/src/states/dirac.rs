use crate::error::{Error, Result};
use crate::hierarchy::subsets;
use crate::observables::{symmetrize, Configuration, Poly, SymObservable};
use crate::scalar::{binomial, JsonScalar, Rational, Scalar};

/// One weighted point of `(R^{2d})^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom<S> {
    pub weight: S,
    pub points: Vec<Vec<S>>,
}

/// Finite weighted sum of Dirac masses on `k`-particle phase space.
///
/// Pairings are always taken against symmetric observables, so each atom stands for the
/// symmetrization of its point over particle relabelings.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracState<S> {
    k: usize,
    d: usize,
    atoms: Vec<Atom<S>>,
}

impl<S: Scalar> DiracState<S> {
    pub fn new(k: usize, d: usize) -> Self {
        DiracState { k, d, atoms: Vec::new() }
    }

    pub fn from_atoms(k: usize, d: usize, atoms: Vec<Atom<S>>) -> Result<Self> {
        let mut s = Self::new(k, d);
        for a in atoms {
            s.push(a.weight, a.points)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, weight: S, points: Vec<Vec<S>>) -> Result<()> {
        if points.len() != self.k {
            return Err(Error::Arity { expected: self.k, got: points.len() });
        }
        for p in &points {
            if p.len() != 2 * self.d {
                return Err(Error::DimensionMismatch(p.len() / 2, self.d));
            }
        }
        if !weight.to_f64().is_finite() || points.iter().flatten().any(|c| !c.to_f64().is_finite()) {
            return Err(Error::Invalid("non-finite atom".into()));
        }
        self.atoms.push(Atom { weight, points });
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn total_weight(&self) -> S {
        self.atoms.iter().fold(S::zero(), |acc, a| acc + a.weight.clone())
    }

    /// Whether the weights sum to one (exactly in exact mode, to 1e-12 otherwise).
    pub fn is_probability(&self) -> bool {
        let t = self.total_weight();
        if S::is_exact() {
            t == S::one()
        } else {
            (t.to_f64() - 1.0).abs() <= 1e-12
        }
    }

    /// `Σ_m w_m f(point_m)`.
    pub fn pair(&self, f: &SymObservable) -> Result<S> {
        if f.k() != self.k {
            return Err(Error::ParticleMismatch(f.k(), self.k));
        }
        if f.d() != self.d {
            return Err(Error::DimensionMismatch(f.d(), self.d));
        }
        let mut acc = S::zero();
        for a in &self.atoms {
            acc = acc + a.weight.clone() * f.evaluate(&a.points)?;
        }
        Ok(acc)
    }

    /// Pairs a raw polynomial through its symmetrization.
    pub fn pair_raw(&self, p: &Poly) -> Result<S> {
        self.pair(&SymObservable::from_symmetric_unchecked(symmetrize(p)))
    }

    /// Level-`k` marginal: every atom spreads its weight evenly over its `k`-subsets.
    pub fn marginal(&self, k: usize) -> Result<DiracState<S>> {
        if k == 0 || k > self.k {
            return Err(Error::LevelOutOfRange { level: k, bound: self.k });
        }
        if k == self.k {
            return Ok(self.clone());
        }
        let share = S::from_rational(&Rational::new(1.into(), binomial(self.k, k)));
        let sets = subsets(self.k, k);
        let mut out = DiracState::new(k, self.d);
        for a in &self.atoms {
            let w = a.weight.clone() * share.clone();
            for s in &sets {
                out.atoms.push(Atom { weight: w.clone(), points: s.iter().map(|&i| a.points[i].clone()).collect() });
            }
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> DiracState<f64> {
        DiracState {
            k: self.k,
            d: self.d,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    weight: a.weight.to_f64(),
                    points: a.points.iter().map(|p| p.iter().map(S::to_f64).collect()).collect(),
                })
                .collect(),
        }
    }
}

impl<S: JsonScalar> DiracState<S> {
    /// `{ "k": .., "d": .., "atoms": [ { "weight": w, "points": [[..], ..] } ] }`.
    pub fn to_json(&self) -> String {
        let atoms: Vec<serde_json::Value> = self
            .atoms
            .iter()
            .map(|a| {
                serde_json::json!({
                    "weight": a.weight.to_json(),
                    "points": a.points.iter().map(|p| p.iter().map(JsonScalar::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "k": self.k, "d": self.d, "atoms": atoms }).to_string()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let bad = |what: &str| Error::Parse(format!("dirac state: bad or missing `{what}`"));
        let k = v["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
        let d = v["d"].as_u64().ok_or_else(|| bad("d"))? as usize;
        let mut out = Self::new(k, d);
        for a in v["atoms"].as_array().ok_or_else(|| bad("atoms"))? {
            let weight = S::from_json(&a["weight"]).ok_or_else(|| bad("weight"))?;
            let points = a["points"]
                .as_array()
                .ok_or_else(|| bad("points"))?
                .iter()
                .map(|p| {
                    p.as_array()
                        .ok_or_else(|| bad("points"))?
                        .iter()
                        .map(|c| S::from_json(c).ok_or_else(|| bad("coordinate")))
                        .collect::<Result<Vec<S>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(weight, points)?;
        }
        Ok(out)
    }
}

/// Empirical measure `(1/N) Σ δ_{z_i}` on one-particle phase space.
pub fn iota_em<S: Scalar>(z: &Configuration<S>) -> Result<DiracState<S>> {
    let n = z.n();
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    let w = S::one() / S::from_i64(n as i64);
    let mut out = DiracState::new(1, z.d());
    for p in z.points() {
        out.push(w.clone(), vec![p.clone()])?;
    }
    Ok(out)
}

/// Symmetric Liouville state of a configuration, held as a single atom.
pub fn iota_lio<S: Scalar>(z: &Configuration<S>) -> DiracState<S> {
    DiracState { k: z.n(), d: z.d(), atoms: vec![Atom { weight: S::one(), points: z.points().to_vec() }] }
}
