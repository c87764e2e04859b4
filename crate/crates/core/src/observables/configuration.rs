use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An `N`-body phase point: `N` points laid out as `[x^1..x^d, v^1..v^d]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<S> {
    d: usize,
    points: Vec<Vec<S>>,
}

impl<S: Scalar> Configuration<S> {
    pub fn new(d: usize, points: Vec<Vec<S>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        if d == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        for p in &points {
            if p.len() != 2 * d {
                return Err(Error::DimensionMismatch(p.len() / 2, d));
            }
        }
        Ok(Configuration { d, points })
    }

    /// Builds from separate position and velocity lists.
    pub fn from_xv(d: usize, xs: &[Vec<S>], vs: &[Vec<S>]) -> Result<Self> {
        if xs.len() != vs.len() {
            return Err(Error::Arity { expected: xs.len(), got: vs.len() });
        }
        let points = xs.iter().zip(vs).map(|(x, v)| x.iter().chain(v.iter()).cloned().collect()).collect();
        Self::new(d, points)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn points_mut(&mut self) -> &mut [Vec<S>] {
        &mut self.points
    }

    pub fn x(&self, i: usize) -> &[S] {
        &self.points[i][..self.d]
    }

    pub fn v(&self, i: usize) -> &[S] {
        &self.points[i][self.d..]
    }

    pub fn to_f64(&self) -> Configuration<f64> {
        Configuration { d: self.d, points: self.points.iter().map(|p| p.iter().map(S::to_f64).collect()).collect() }
    }
}
