use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::observables::{Monomial, SymObservable};
use crate::scalar::rational_to_f64;

/// Phase-space density on `[0, L) × [-V, V]`, periodic in `x`, cell-centered values stored
/// row-major with `x` as the row index.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState1D {
    l: f64,
    vmax: f64,
    nx: usize,
    nv: usize,
    values: Vec<f64>,
}

impl GridState1D {
    pub fn new(l: f64, vmax: f64, nx: usize, nv: usize, values: Vec<f64>) -> Result<Self> {
        if !(l > 0.0 && vmax > 0.0 && l.is_finite() && vmax.is_finite()) {
            return Err(Error::Invalid(format!("grid extents must be positive, got L={l}, V={vmax}")));
        }
        if nx == 0 || nv == 0 {
            return Err(Error::Invalid("grid resolution must be positive".into()));
        }
        if values.len() != nx * nv {
            return Err(Error::Arity { expected: nx * nv, got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(0));
        }
        Ok(GridState1D { l, vmax, nx, nv, values })
    }

    pub fn from_fn(l: f64, vmax: f64, nx: usize, nv: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let dx = l / nx as f64;
        let dv = 2.0 * vmax / nv as f64;
        let mut values = Vec::with_capacity(nx * nv);
        for i in 0..nx {
            for j in 0..nv {
                values.push(f((i as f64 + 0.5) * dx, -vmax + (j as f64 + 0.5) * dv));
            }
        }
        Self::new(l, vmax, nx, nv, values)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn vmax(&self) -> f64 {
        self.vmax
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn dx(&self) -> f64 {
        self.l / self.nx as f64
    }

    pub fn dv(&self) -> f64 {
        2.0 * self.vmax / self.nv as f64
    }

    pub fn x_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn v_center(&self, j: usize) -> f64 {
        -self.vmax + (j as f64 + 0.5) * self.dv()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nv + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dx() * self.dv()
    }

    /// `ρ(x_i) = Σ_j γ_ij dv`.
    pub fn density(&self) -> Vec<f64> {
        let dv = self.dv();
        self.values.chunks(self.nv).map(|row| row.iter().sum::<f64>() * dv).collect()
    }

    /// Copy rescaled to unit mass.
    pub fn normalized(&self) -> Result<Self> {
        let m = self.mass();
        if !(m > 0.0) {
            return Err(Error::Invalid("cannot normalize a state with non-positive mass".into()));
        }
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v /= m);
        Ok(out)
    }

    /// Midpoint quadrature of `φ(x, v) γ(x, v)`.
    pub fn pair_fn(&self, phi: impl Fn(f64, f64) -> f64) -> f64 {
        let (dx, dv) = (self.dx(), self.dv());
        let mut acc = 0.0;
        for i in 0..self.nx {
            let x = self.x_center(i);
            let mut row = 0.0;
            for j in 0..self.nv {
                row += phi(x, self.v_center(j)) * self.value(i, j);
            }
            acc += row;
        }
        acc * dx * dv
    }

    /// `∫ x^a v^b w(x) γ`, with an optional cell weight `w` over the `x` grid.
    pub fn moment(&self, px: u8, pv: u8, weight: Option<&[f64]>) -> f64 {
        let (dx, dv) = (self.dx(), self.dv());
        let vpow: Vec<f64> = (0..self.nv).map(|j| self.v_center(j).powi(pv as i32)).collect();
        let mut acc = 0.0;
        for i in 0..self.nx {
            let row: f64 = self.values[i * self.nv..(i + 1) * self.nv].iter().zip(&vpow).map(|(g, p)| g * p).sum();
            let w = weight.map_or(1.0, |w| w[i]);
            acc += self.x_center(i).powi(px as i32) * w * row;
        }
        acc * dx * dv
    }

    /// Pairing with a one-particle observable in `d = 1`.
    pub fn pair(&self, f: &SymObservable) -> Result<f64> {
        if f.k() != 1 {
            return Err(Error::ParticleMismatch(f.k(), 1));
        }
        if f.d() != 1 {
            return Err(Error::DimensionMismatch(f.d(), 1));
        }
        Ok(f.poly().terms().iter().map(|(m, c)| rational_to_f64(c) * self.monomial_moment(m)).sum())
    }

    fn monomial_moment(&self, m: &Monomial) -> f64 {
        let e = m.exponents();
        self.moment(e[0], e[1], None)
    }

    /// Header `L,V,Nx,Nv`, one line with those values, then one row of `Nv` values per `x` cell.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("L,V,Nx,Nv\n");
        writeln!(s, "{},{},{},{}", self.l, self.vmax, self.nx, self.nv).unwrap();
        for row in self.values.chunks(self.nv) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |m: &str| Error::Parse(format!("grid csv: {m}"));
        if lines.next().map(str::trim) != Some("L,V,Nx,Nv") {
            return Err(bad("missing header `L,V,Nx,Nv`"));
        }
        let head: Vec<&str> = lines.next().ok_or_else(|| bad("missing extents"))?.split(',').collect();
        if head.len() != 4 {
            return Err(bad("extent line needs four fields"));
        }
        let l: f64 = head[0].trim().parse().map_err(|_| bad("L"))?;
        let vmax: f64 = head[1].trim().parse().map_err(|_| bad("V"))?;
        let nx: usize = head[2].trim().parse().map_err(|_| bad("Nx"))?;
        let nv: usize = head[3].trim().parse().map_err(|_| bad("Nv"))?;
        let mut values = Vec::with_capacity(nx * nv);
        for line in lines {
            for f in line.split(',') {
                values.push(f.trim().parse::<f64>().map_err(|_| bad("value"))?);
            }
        }
        Self::new(l, vmax, nx, nv, values)
    }
}
