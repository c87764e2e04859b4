use smallvec::SmallVec;

pub type Exponents = SmallVec<[u8; 24]>;

/// Exponent vector over the flattened variable list, ordered graded-lexicographically.
///
/// Field order matters: the derived `Ord` compares total degree first, then exponents
/// lexicographically from the first variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Exponents,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        Monomial { degree: exps.iter().map(|&e| e as u32).sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[var] = 1;
        m.degree = 1;
        m
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Exponents = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { degree: self.degree + other.degree, exps }
    }

    /// `∂m/∂var = factor · m'`, or `None` when the variable is absent.
    pub fn derivative(&self, var: usize) -> Option<(u8, Monomial)> {
        let e = self.exps[var];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[var] = e - 1;
        Some((e, Monomial { degree: self.degree - 1, exps }))
    }

    /// Exponents of particle block `p` when blocks have width `block`.
    pub fn block(&self, p: usize, block: usize) -> &[u8] {
        &self.exps[p * block..(p + 1) * block]
    }

    pub fn nonzero_blocks(&self, block: usize) -> usize {
        self.exps.chunks(block).filter(|b| b.iter().any(|&e| e != 0)).count()
    }

    /// Places block `p` of `self` into block `slots[p]` of a monomial with `n` blocks.
    pub fn relabel(&self, block: usize, slots: &[usize], n: usize) -> Monomial {
        let mut exps: Exponents = SmallVec::from_elem(0, n * block);
        for (p, &s) in slots.iter().enumerate() {
            exps[s * block..(s + 1) * block].copy_from_slice(self.block(p, block));
        }
        Monomial { degree: self.degree, exps }
    }

    /// Pads with `extra` empty particle blocks on the right.
    pub fn pad(&self, block: usize, extra: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat_n(0, extra * block));
        Monomial { degree: self.degree, exps }
    }

    /// Canonical representative of the particle-relabeling orbit: blocks sorted descending.
    pub fn canonical(&self, block: usize) -> Monomial {
        let mut blocks: Vec<&[u8]> = self.exps.chunks(block).collect();
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        let exps: Exponents = blocks.concat().into_iter().collect();
        Monomial { degree: self.degree, exps }
    }

    /// All distinct monomials obtained by permuting particle blocks.
    pub fn orbit(&self, block: usize) -> Vec<Monomial> {
        let mut blocks: Vec<&[u8]> = self.exps.chunks(block).collect();
        blocks.sort_unstable();
        let mut out = Vec::new();
        loop {
            let exps: Exponents = blocks.iter().flat_map(|b| b.iter().copied()).collect();
            out.push(Monomial { degree: self.degree, exps });
            if !next_permutation(&mut blocks) {
                break;
            }
        }
        out
    }

    /// Size of the relabeling orbit: `k! / Π multiplicity!`.
    pub fn orbit_size(&self, block: usize) -> u128 {
        let mut blocks: Vec<&[u8]> = self.exps.chunks(block).collect();
        blocks.sort_unstable();
        let k = blocks.len() as u128;
        let mut size: u128 = (1..=k).product();
        let mut run = 1u128;
        for w in blocks.windows(2) {
            if w[0] == w[1] {
                run += 1;
                size /= run;
            } else {
                run = 1;
            }
        }
        size
    }
}

/// Advances to the next lexicographic permutation; returns false after the last one.
fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// All monomials in `nvars` variables of total degree at most `degree`, in grlex order.
pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u8; nvars];
    rec(0, degree, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::from_exponents(&[0, 2]);
        let b = Monomial::from_exponents(&[1, 0]);
        let c = Monomial::from_exponents(&[0, 1]);
        assert!(a > b);
        assert!(b > c);
    }

    #[test]
    fn orbit_counts_distinct_arrangements() {
        let m = Monomial::from_exponents(&[2, 0, 0, 0, 0, 0]);
        assert_eq!(m.orbit(2).len(), 3);
        assert_eq!(m.orbit_size(2), 3);
        let m = Monomial::from_exponents(&[1, 0, 0, 1, 1, 1]);
        assert_eq!(m.orbit(2).len(), 6);
        assert_eq!(m.orbit_size(2), 6);
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let m = Monomial::from_exponents(&[0, 1, 2, 0, 0, 0]);
        let c = m.canonical(2);
        for img in m.orbit(2) {
            assert_eq!(img.canonical(2), c);
        }
        assert_eq!(c.exponents(), &[2, 0, 0, 1, 0, 0]);
    }
}
