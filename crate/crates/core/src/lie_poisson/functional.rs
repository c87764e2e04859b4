use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hierarchy::ObservableHierarchy;
use crate::observables::SymObservable;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::states::StateHierarchy;

/// Element of the algebra generated by expectations and constants.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    Constant(Rational),
    /// `Γ ↦ Σ_k ⟨f^{(k)}, γ^{(k)}⟩`.
    Expectation(ObservableHierarchy),
    Sum(Vec<Functional>),
    Product(Vec<Functional>),
}

/// First-order variation as a linear combination of generator hierarchies.
pub type Derivative<S> = Vec<(S, ObservableHierarchy)>;

impl Functional {
    pub fn constant(c: Rational) -> Self {
        Functional::Constant(c)
    }

    pub fn expectation(f: ObservableHierarchy) -> Self {
        Functional::Expectation(f)
    }

    /// Expectation of a single observable placed at its own level.
    pub fn expectation_of(f: SymObservable, bound: Option<usize>) -> Result<Self> {
        Ok(Functional::Expectation(ObservableHierarchy::single(f, bound)?))
    }

    pub fn sum(terms: Vec<Functional>) -> Self {
        Functional::Sum(terms)
    }

    pub fn product(factors: Vec<Functional>) -> Self {
        Functional::Product(factors)
    }

    pub fn scaled(self, c: Rational) -> Self {
        Functional::Product(vec![Functional::Constant(c), self])
    }

    pub fn eval<S: Scalar>(&self, gamma: &StateHierarchy<S>) -> Result<S> {
        match self {
            Functional::Constant(c) => Ok(S::from_rational(c)),
            Functional::Expectation(f) => gamma.pair_hierarchy(f),
            Functional::Sum(ts) => ts.iter().try_fold(S::zero(), |acc, t| Ok(acc + t.eval(gamma)?)),
            Functional::Product(fs) => fs.iter().try_fold(S::one(), |acc, t| Ok(acc * t.eval(gamma)?)),
        }
    }

    /// Symbolic first variation: pairs of (coefficient functional, generator).
    pub fn derivative_terms(&self) -> Vec<(Functional, ObservableHierarchy)> {
        match self {
            Functional::Constant(_) => Vec::new(),
            Functional::Expectation(f) => vec![(Functional::Constant(Rational::one()), f.clone())],
            Functional::Sum(ts) => ts.iter().flat_map(Functional::derivative_terms).collect(),
            Functional::Product(fs) => {
                let mut out = Vec::new();
                for (i, fi) in fs.iter().enumerate() {
                    for (c, h) in fi.derivative_terms() {
                        let mut others: Vec<Functional> =
                            fs.iter().enumerate().filter(|&(q, _)| q != i).map(|(_, f)| f.clone()).collect();
                        if c != Functional::Constant(Rational::one()) {
                            others.push(c);
                        }
                        let coef = match others.len() {
                            0 => Functional::Constant(Rational::one()),
                            1 => others.pop().expect("one factor"),
                            _ => Functional::Product(others),
                        };
                        out.push((coef, h));
                    }
                }
                out
            }
        }
    }

    /// First variation at `Γ`, by the Leibniz rule over products.
    pub fn gateaux_terms<S: Scalar>(&self, gamma: &StateHierarchy<S>) -> Result<Derivative<S>> {
        self.derivative_terms().into_iter().map(|(c, h)| Ok((c.eval(gamma)?, h))).collect()
    }

    /// Every generator hierarchy appearing in an expectation leaf.
    pub fn generators(&self) -> Vec<&ObservableHierarchy> {
        match self {
            Functional::Constant(_) => Vec::new(),
            Functional::Expectation(f) => vec![f],
            Functional::Sum(ts) | Functional::Product(ts) => ts.iter().flat_map(Functional::generators).collect(),
        }
    }

    /// Highest generator level, if any.
    pub fn max_level(&self) -> Option<usize> {
        self.generators().iter().filter_map(|h| h.max_level()).max()
    }

    /// Rebuilds the tree with each expectation leaf replaced.
    pub fn map_expectations(&self, f: &dyn Fn(&ObservableHierarchy) -> Result<Functional>) -> Result<Functional> {
        Ok(match self {
            Functional::Constant(c) => Functional::Constant(c.clone()),
            Functional::Expectation(h) => f(h)?,
            Functional::Sum(ts) => Functional::Sum(ts.iter().map(|t| t.map_expectations(f)).collect::<Result<_>>()?),
            Functional::Product(ts) => {
                Functional::Product(ts.iter().map(|t| t.map_expectations(f)).collect::<Result<_>>()?)
            }
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            Functional::Constant(c) => serde_json::json!({ "constant": c.to_string() }),
            Functional::Expectation(h) => serde_json::json!({ "expectation": h.to_json_value() }),
            Functional::Sum(ts) => {
                serde_json::json!({ "sum": ts.iter().map(Functional::to_json_value).collect::<Vec<_>>() })
            }
            Functional::Product(ts) => {
                serde_json::json!({ "product": ts.iter().map(Functional::to_json_value).collect::<Vec<_>>() })
            }
        }
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| Error::Parse("functional node must be an object with exactly one key".into()))?;
        let (key, body) = obj.iter().next().expect("one entry");
        let children = || -> Result<Vec<Functional>> {
            body.as_array()
                .ok_or_else(|| Error::Parse(format!("`{key}` expects an array")))?
                .iter()
                .map(Functional::from_json_value)
                .collect()
        };
        match key.as_str() {
            "constant" => {
                let c = match body {
                    serde_json::Value::String(s) => parse_rational(s),
                    serde_json::Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())),
                    _ => None,
                };
                Ok(Functional::Constant(c.ok_or_else(|| Error::Parse("bad constant".into()))?))
            }
            "expectation" => Ok(Functional::Expectation(ObservableHierarchy::from_json_value(body)?)),
            "sum" => Ok(Functional::Sum(children()?)),
            "product" => Ok(Functional::Product(children()?)),
            other => Err(Error::Parse(format!("unknown functional node `{other}`"))),
        }
    }
}

/// Exact first variation collapsed to a single hierarchy.
pub fn gateaux_derivative(f: &Functional, gamma: &StateHierarchy<Rational>) -> Result<ObservableHierarchy> {
    let terms = f.gateaux_terms(gamma)?;
    let d = gamma.d().or_else(|| f.generators().first().map(|h| h.d())).unwrap_or(1);
    let mut acc = ObservableHierarchy::new(d, None);
    for (w, h) in terms {
        if !w.is_zero() {
            acc = acc.add(&h.scale(&w).with_bound(None)?)?;
        }
    }
    Ok(acc)
}
