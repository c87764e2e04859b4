use crate::error::{Error, Result};
use crate::observables::{var_index, Kind, Poly, SymObservable};
use crate::scalar::{binomial, factorial, Rational};

/// Sum over the first `r` particles of `∇_x a · ∇_v b`.
fn contract(a: &Poly, b: &Poly, r: usize) -> Poly {
    let d = a.d();
    let mut acc = Poly::zero(a.k(), d);
    for i in 0..r {
        for c in 0..d {
            let ax = a.derivative(var_index(d, i, Kind::Position, c));
            if ax.is_zero() {
                continue;
            }
            let bv = b.derivative(var_index(d, i, Kind::Velocity, c));
            if bv.is_zero() {
                continue;
            }
            acc = &acc + &(&ax * &bv);
        }
    }
    acc
}

/// Order-`r` wedge contraction of an `ℓ`-particle and a `j`-particle observable, a raw
/// polynomial on `ℓ + j - r` particles.
///
/// The first `r` particles are shared; `f` additionally occupies particles `r+1..ℓ` in the
/// first term and `j+1..ℓ+j-r` in the second, with `g` placed complementarily. Empty
/// ranges are simply absent.
pub fn wedge_r(f: &SymObservable, g: &SymObservable, r: usize) -> Result<Poly> {
    let (l, j) = (f.k(), g.k());
    if f.d() != g.d() {
        return Err(Error::DimensionMismatch(f.d(), g.d()));
    }
    if r == 0 || r > l.min(j) {
        return Err(Error::IndexOutOfRange(format!("contraction order {r} outside [1, {}]", l.min(j))));
    }
    let n = l + j - r;
    let shared: Vec<usize> = (0..r).collect();

    let f_first: Vec<usize> = (0..l).collect();
    let g_first: Vec<usize> = shared.iter().copied().chain(l..n).collect();
    let g_second: Vec<usize> = (0..j).collect();
    let f_second: Vec<usize> = shared.iter().copied().chain(j..n).collect();

    let t1 = contract(&f.poly().embed(&f_first, n)?, &g.poly().embed(&g_first, n)?, r);
    let t2 = contract(&g.poly().embed(&g_second, n)?, &f.poly().embed(&f_second, n)?, r);
    let prefactor = Rational::from_integer(binomial(l, r) * binomial(j, r) * factorial(r));
    Ok((&t1 - &t2).scale(&prefactor))
}
