use num::bigint::BigInt;
use num::traits::One;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Lowest contraction order contributing to the pair `(ℓ, j)` at `n` particles.
pub fn r_min(l: usize, j: usize, n: usize) -> usize {
    1.max((l + j).saturating_sub(n))
}

/// Level receiving the `(ℓ, j)` contribution: `min(ℓ + j - 1, n)`.
pub fn target_level(l: usize, j: usize, n: usize) -> usize {
    (l + j - 1).min(n)
}

/// Combinatorial weight of the order-`r` contraction between levels `ℓ` and `j` at `n` particles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketCoefficient {
    pub l: usize,
    pub j: usize,
    pub n: usize,
    pub r: usize,
    pub value: Rational,
}

impl BracketCoefficient {
    pub fn new(l: usize, j: usize, n: usize, r: usize) -> Result<Self> {
        Ok(BracketCoefficient { l, j, n, r, value: bracket_coefficient(l, j, n, r)? })
    }
}

/// `(n-ℓ)!(n-j)! / ((n-1)!(n-ℓ-j+r)!)`, evaluated as a ratio of short products.
pub fn bracket_coefficient(l: usize, j: usize, n: usize, r: usize) -> Result<Rational> {
    if l == 0 || j == 0 || l > n || j > n {
        return Err(Error::LevelOutOfRange { level: l.max(j), bound: n });
    }
    let lo = r_min(l, j, n);
    let hi = l.min(j);
    if r < lo || r > hi {
        return Err(Error::IndexOutOfRange(format!("contraction order {r} outside [{lo}, {hi}]")));
    }
    // (n-j)!/(n-ℓ-j+r)! has ℓ-r factors; (n-1)!/(n-ℓ)! has ℓ-1 factors.
    let num: BigInt = ((n + r + 1 - l - j)..=(n - j)).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    let den: BigInt = ((n + 1 - l)..n).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    Ok(Rational::new(num, den))
}
