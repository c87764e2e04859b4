use crate::error::{Error, Result};
use crate::lie_poisson::check_pair_potential;
use crate::observables::Poly;
use crate::scalar::rational_to_f64;

/// Even pair potential `W` on `R^d` with gradient, using `∇W(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Zero {
        d: usize,
    },
    /// Even polynomial in the position block of a one-particle observable.
    Polynomial {
        poly: Poly,
        terms: Vec<(f64, Vec<i32>)>,
    },
    /// `a · exp(-|x|² / (2 σ²))`.
    Gaussian {
        d: usize,
        amplitude: f64,
        width: f64,
    },
}

impl Potential {
    pub fn zero(d: usize) -> Self {
        Potential::Zero { d }
    }

    pub fn polynomial(poly: Poly) -> Result<Self> {
        check_pair_potential(&poly)?;
        let d = poly.d();
        let terms = poly
            .terms()
            .iter()
            .map(|(m, c)| (rational_to_f64(c), m.exponents()[..d].iter().map(|&e| e as i32).collect()))
            .collect();
        Ok(Potential::Polynomial { poly, terms })
    }

    pub fn gaussian(d: usize, amplitude: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && amplitude.is_finite()) {
            return Err(Error::Invalid(format!(
                "gaussian potential needs finite amplitude and width > 0, got {amplitude}, {width}"
            )));
        }
        Ok(Potential::Gaussian { d, amplitude, width })
    }

    pub fn d(&self) -> usize {
        match self {
            Potential::Zero { d } | Potential::Gaussian { d, .. } => *d,
            Potential::Polynomial { poly, .. } => poly.d(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Potential::Zero { .. })
    }

    /// The exact polynomial, when there is one.
    pub fn as_poly(&self) -> Option<Poly> {
        match self {
            Potential::Zero { d } => Some(Poly::zero(1, *d)),
            Potential::Polynomial { poly, .. } => Some(poly.clone()),
            Potential::Gaussian { .. } => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Potential::Zero { .. } => 0.0,
            Potential::Polynomial { terms, .. } => {
                terms.iter().map(|(c, e)| x.iter().zip(e).fold(*c, |acc, (xi, &ei)| acc * xi.powi(ei))).sum()
            }
            Potential::Gaussian { amplitude, width, .. } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                amplitude * (-r2 / (2.0 * width * width)).exp()
            }
        }
    }

    /// Writes `∇W(x)` into `out`; zero at the origin by convention.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        if x.iter().all(|&v| v == 0.0) {
            return;
        }
        match self {
            Potential::Zero { .. } => {}
            Potential::Polynomial { terms, .. } => {
                for (c, e) in terms {
                    for (a, o) in out.iter_mut().enumerate() {
                        if e[a] == 0 {
                            continue;
                        }
                        let mut t = c * e[a] as f64;
                        for (b, (&xb, &eb)) in x.iter().zip(e).enumerate() {
                            let p = if a == b { eb - 1 } else { eb };
                            t *= xb.powi(p);
                        }
                        *o += t;
                    }
                }
            }
            Potential::Gaussian { amplitude, width, .. } => {
                let s2 = width * width;
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let scale = -amplitude / s2 * (-r2 / (2.0 * s2)).exp();
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = scale * xi;
                }
            }
        }
    }
}
