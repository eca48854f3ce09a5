//! Independent oracles: the classical Hochschild complexes written out
//! directly from structure constants, and dense elimination mod p.
#![allow(dead_code)]

use hochschild::algebra::{CommutativeAlgebra, SymmetricBimodule};
use hochschild::field::Gf;

pub type Dense = Vec<Vec<u64>>;

fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for s in (0..len).rev() {
        out[s] = index % base;
        index /= base;
    }
    out
}

fn undigits(ds: &[usize], base: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * base + x)
}

pub struct Classical {
    pub p: u64,
    pub ad: usize,
    pub md: usize,
    /// `mul[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mul: Vec<Vec<Vec<u64>>>,
    /// `act[i][j][k]`: coefficient of `m_k` in `e_i m_j`.
    pub act: Vec<Vec<Vec<u64>>>,
}

impl Classical {
    pub fn new(alg: &CommutativeAlgebra<Gf>, module: &SymmetricBimodule<Gf>) -> Self {
        let (ad, md) = (alg.dim(), module.dim());
        let mul = (0..ad)
            .map(|i| (0..ad).map(|j| (0..ad).map(|k| *alg.constant(i, j, k) as u64).collect()).collect())
            .collect();
        let act = (0..ad)
            .map(|i| (0..md).map(|j| (0..md).map(|k| *module.constant(i, j, k) as u64).collect()).collect())
            .collect();
        Classical { p: alg.field().modulus() as u64, ad, md, mul, act }
    }

    fn neg(&self, x: u64) -> u64 {
        (self.p - x % self.p) % self.p
    }

    fn signed(&self, i: usize, x: u64) -> u64 {
        if i % 2 == 0 {
            x % self.p
        } else {
            self.neg(x)
        }
    }

    pub fn chain_dim(&self, n: usize) -> usize {
        self.md * self.ad.pow(n as u32)
    }

    /// `b : M ⊗ A^{⊗n} → M ⊗ A^{⊗(n−1)}`, rows indexed by the target.
    pub fn boundary(&self, n: usize) -> Dense {
        let (ad, md, p) = (self.ad, self.md, self.p);
        let rows = self.chain_dim(n - 1);
        let tensors_below = ad.pow(n as u32 - 1);
        let mut out = vec![vec![0u64; self.chain_dim(n)]; rows];
        for col in 0..self.chain_dim(n) {
            let k = col / ad.pow(n as u32);
            let a = digits(col % ad.pow(n as u32), ad, n);
            let mut add = |row: usize, v: u64| out[row][col] = (out[row][col] + v) % p;
            // m·a_1 ⊗ a_2 ⊗ … ⊗ a_n
            for k2 in 0..md {
                let c = self.act[a[0]][k][k2];
                if c != 0 {
                    add(k2 * tensors_below + undigits(&a[1..], ad), c);
                }
            }
            for i in 1..n {
                for c in 0..ad {
                    let v = self.mul[a[i - 1]][a[i]][c];
                    if v != 0 {
                        let mut merged = a[..i - 1].to_vec();
                        merged.push(c);
                        merged.extend_from_slice(&a[i + 1..]);
                        add(k * tensors_below + undigits(&merged, ad), self.signed(i, v));
                    }
                }
            }
            // (−1)^n a_n·m ⊗ a_1 ⊗ … ⊗ a_{n−1}
            for k2 in 0..md {
                let c = self.act[a[n - 1]][k][k2];
                if c != 0 {
                    add(k2 * tensors_below + undigits(&a[..n - 1], ad), self.signed(n, c));
                }
            }
        }
        out
    }

    /// `δ : Hom(A^{⊗n}, M) → Hom(A^{⊗(n+1)}, M)` in the basis `f_{(k,t)}`,
    /// `f_{(k,t)}(e_s) = δ_{st} m_k`, indexed `k·ad^n + t`.
    pub fn coboundary(&self, n: usize) -> Dense {
        let (ad, md, p) = (self.ad, self.md, self.p);
        let above = ad.pow(n as u32 + 1);
        let below = ad.pow(n as u32);
        let mut out = vec![vec![0u64; md * below]; md * above];
        for s in 0..above {
            let a = digits(s, ad, n + 1);
            // Value of δf at e_s is a combination of f evaluated at tensors
            // of length n, each possibly acted on by an algebra element.
            let mut terms: Vec<(usize, Option<usize>, u64)> = Vec::new();
            terms.push((undigits(&a[1..], ad), Some(a[0]), 1));
            for i in 1..=n {
                for c in 0..ad {
                    let v = self.mul[a[i - 1]][a[i]][c];
                    if v != 0 {
                        let mut merged = a[..i - 1].to_vec();
                        merged.push(c);
                        merged.extend_from_slice(&a[i + 1..]);
                        terms.push((undigits(&merged, ad), None, self.signed(i, v)));
                    }
                }
            }
            terms.push((undigits(&a[..n], ad), Some(a[n]), self.signed(n + 1, 1)));
            for (t, acting, coeff) in terms {
                for k in 0..md {
                    let col = k * below + t;
                    match acting {
                        None => {
                            let row = k * above + s;
                            out[row][col] = (out[row][col] + coeff) % p;
                        }
                        Some(e) => {
                            for k2 in 0..md {
                                let c = self.act[e][k][k2];
                                if c != 0 {
                                    let row = k2 * above + s;
                                    out[row][col] = (out[row][col] + coeff * c) % p;
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn dense_rank(m: &Dense, p: u64) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let inv = |x: u64| {
        let (mut base, mut e, mut acc) = (x % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] % p != 0) else { continue };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in 0..cols {
                    a[r][j] = (a[r][j] + p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology dimensions `0..n_max` (exclusive of the top) of the classical
/// Hochschild complex.
pub fn classical_homology(c: &Classical, top: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (1..=top).map(|n| dense_rank(&c.boundary(n), c.p)).collect();
    (0..top)
        .map(|n| {
            let out = if n == 0 { 0 } else { ranks[n - 1] };
            c.chain_dim(n) - out - ranks[n]
        })
        .collect()
}

/// Cohomology dimensions in degrees `0..top`.
pub fn classical_cohomology(c: &Classical, top: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..top).map(|n| dense_rank(&c.coboundary(n), c.p)).collect();
    (0..top)
        .map(|n| {
            let inn = if n == 0 { 0 } else { ranks[n - 1] };
            c.chain_dim(n) - ranks[n] - inn
        })
        .collect()
}

pub fn to_u64(dense: Vec<Vec<u32>>) -> Dense {
    dense.into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()
}
