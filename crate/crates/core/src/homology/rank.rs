//! Exact rank of sparse matrices.
//!
//! The matrix is first split into the connected components of its
//! row/column incidence graph (boundary matrices of monomial algebras fall
//! apart into many small blocks). Each block is reduced by Markowitz-style
//! elimination: the lightest remaining vector is taken as pivot, pivoting on
//! its entry whose key is shared by the fewest other vectors. Once the
//! remaining submatrix is denser than [`DENSE_THRESHOLD`] it is finished by
//! dense elimination.
//!
//! Over GF(p) all arithmetic is modular. Over the rationals each column is
//! cleared of denominators and elimination is fraction-free: a row update is
//! `r_c·s − s_c·r` followed by division by the content, so entries stay
//! integral and small.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::SparseMatrix;
use crate::field::{Gf, Rationals};

/// Fill-in density above which the remaining block is handled densely.
pub const DENSE_THRESHOLD: f64 = 0.25;

/// Blocks smaller than this many cells never switch to the dense path.
const DENSE_MIN_CELLS: usize = 64;

type SparseVec<E> = Vec<(u32, E)>;

trait Scalar: Sync {
    type E: Clone + Send + Sync;

    fn is_zero(&self, a: &Self::E) -> bool;

    /// Eliminates key `c` from `s` using the pivot vector `r`; `s_c` and
    /// `r_c` are the entries of `s` and `r` at `c`.
    fn eliminate(&self, s: &[(u32, Self::E)], s_c: &Self::E, r: &[(u32, Self::E)], r_c: &Self::E)
        -> SparseVec<Self::E>;

    /// Rank of a dense list of vectors of equal length.
    fn dense_rank(&self, vectors: Vec<Vec<Self::E>>, width: usize) -> usize;

    fn zero(&self) -> Self::E;
}

struct ModP {
    p: u64,
}

impl ModP {
    fn inv(&self, a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a % self.p, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for ModP {
    type E = u32;

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn zero(&self) -> u32 {
        0
    }

    fn eliminate(&self, s: &[(u32, u32)], s_c: &u32, r: &[(u32, u32)], r_c: &u32) -> SparseVec<u32> {
        let p = self.p;
        // s − f·r with f = s_c / r_c; store −f to add.
        let f = *s_c as u64 * self.inv(*r_c as u64) % p;
        let nf = (p - f) % p;
        let mut out = Vec::with_capacity(s.len() + r.len());
        let (mut i, mut j) = (0, 0);
        while i < s.len() || j < r.len() {
            let ki = s.get(i).map_or(u32::MAX, |e| e.0);
            let kj = r.get(j).map_or(u32::MAX, |e| e.0);
            if ki < kj {
                out.push(s[i]);
                i += 1;
            } else if kj < ki {
                let v = (r[j].1 as u64 * nf % p) as u32;
                if v != 0 {
                    out.push((kj, v));
                }
                j += 1;
            } else {
                let v = ((s[i].1 as u64 + r[j].1 as u64 * nf) % p) as u32;
                if v != 0 {
                    out.push((ki, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn dense_rank(&self, vectors: Vec<Vec<u32>>, width: usize) -> usize {
        let p = self.p;
        let mut pivots: Vec<Option<Vec<u64>>> = vec![None; width];
        let mut rank = 0;
        for v in vectors {
            if rank == width {
                break;
            }
            let mut v: Vec<u64> = v.into_iter().map(u64::from).collect();
            for pos in 0..width {
                if v[pos] == 0 {
                    continue;
                }
                match &pivots[pos] {
                    Some(piv) => {
                        let f = p - v[pos];
                        for k in pos..width {
                            if piv[k] != 0 {
                                v[k] = (v[k] + f * piv[k]) % p;
                            }
                        }
                    }
                    None => {
                        let inv = self.inv(v[pos]);
                        for x in v[pos..].iter_mut() {
                            *x = *x * inv % p;
                        }
                        pivots[pos] = Some(v);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

struct FractionFree;

fn content_reduce(v: &mut [(u32, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for (_, x) in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

impl Scalar for FractionFree {
    type E = BigInt;

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn eliminate(&self, s: &[(u32, BigInt)], s_c: &BigInt, r: &[(u32, BigInt)], r_c: &BigInt)
        -> SparseVec<BigInt> {
        let g = s_c.gcd(r_c);
        let (ms, mr) = (r_c / &g, s_c / &g);
        let mut out = Vec::with_capacity(s.len() + r.len());
        let (mut i, mut j) = (0, 0);
        while i < s.len() || j < r.len() {
            let ki = s.get(i).map_or(u32::MAX, |e| e.0);
            let kj = r.get(j).map_or(u32::MAX, |e| e.0);
            let (k, v) = if ki < kj {
                i += 1;
                (ki, &ms * &s[i - 1].1)
            } else if kj < ki {
                j += 1;
                (kj, -(&mr * &r[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (ki, &ms * &s[i - 1].1 - &mr * &r[j - 1].1)
            };
            if !v.is_zero() {
                out.push((k, v));
            }
        }
        content_reduce(&mut out);
        out
    }

    fn dense_rank(&self, vectors: Vec<Vec<BigInt>>, width: usize) -> usize {
        let mut rows = vectors;
        let mut rank = 0;
        for col in 0..width {
            let Some(pr) = (rank..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by_key(|&r| rows[r][col].abs())
            else {
                continue;
            };
            rows.swap(rank, pr);
            let pivot = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let g = row[col].gcd(&pivot[col]);
                let (ms, mr) = (&pivot[col] / &g, &row[col] / &g);
                let mut content = BigInt::zero();
                for k in col..width {
                    row[k] = &ms * &row[k] - &mr * &pivot[k];
                    content = content.gcd(&row[k]);
                }
                if !content.is_zero() && !content.is_one() {
                    for x in row[col..].iter_mut() {
                        *x = &*x / &content;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let up = parent[parent[x as usize] as usize];
        parent[x as usize] = up;
        x = up;
    }
    x
}

/// Splits vectors into connected components by shared keys, relabelling
/// keys to be contiguous within each block.
fn components<E: Clone>(vectors: Vec<SparseVec<E>>, width: usize) -> Vec<(Vec<SparseVec<E>>, usize)> {
    let mut parent: Vec<u32> = (0..width as u32).collect();
    for v in &vectors {
        if let Some(&(first, _)) = v.first() {
            for (k, _) in &v[1..] {
                let a = find(&mut parent, first);
                let b = find(&mut parent, *k);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
    }
    let mut block_of_root = vec![u32::MAX; width];
    let mut local_key = vec![0u32; width];
    let mut blocks: Vec<(Vec<SparseVec<E>>, usize)> = Vec::new();
    for k in 0..width as u32 {
        let root = find(&mut parent, k) as usize;
        if block_of_root[root] == u32::MAX {
            block_of_root[root] = blocks.len() as u32;
            blocks.push((Vec::new(), 0));
        }
        let b = &mut blocks[block_of_root[root] as usize];
        local_key[k as usize] = b.1 as u32;
        b.1 += 1;
    }
    for v in vectors {
        let Some(&(first, _)) = v.first() else { continue };
        let root = find(&mut parent, first) as usize;
        let b = &mut blocks[block_of_root[root] as usize];
        b.0.push(v.into_iter().map(|(k, e)| (local_key[k as usize], e)).collect());
    }
    blocks.retain(|(vs, _)| !vs.is_empty());
    blocks
}

fn block_rank<S: Scalar>(s: &S, vectors: Vec<SparseVec<S::E>>, width: usize) -> usize {
    let n = vectors.len();
    let mut rows: Vec<Option<SparseVec<S::E>>> = Vec::with_capacity(n);
    let mut col_count = vec![0u32; width];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); width];
    let mut heap = BinaryHeap::with_capacity(n);
    let mut total_nnz = 0usize;
    for (r, v) in vectors.into_iter().enumerate() {
        for (k, _) in &v {
            col_count[*k as usize] += 1;
            col_rows[*k as usize].push(r as u32);
        }
        total_nnz += v.len();
        heap.push(Reverse((v.len(), r as u32)));
        rows.push(Some(v));
    }
    let mut active_rows = n;
    let mut active_cols = col_count.iter().filter(|&&c| c > 0).count();
    let mut rank = 0;

    while let Some(Reverse((w, r))) = heap.pop() {
        let r = r as usize;
        match &rows[r] {
            Some(v) if v.len() == w => {}
            _ => continue,
        }
        let cells = active_rows * active_cols;
        if cells >= DENSE_MIN_CELLS && total_nnz as f64 > DENSE_THRESHOLD * cells as f64 {
            heap.push(Reverse((w, r as u32)));
            break;
        }
        let pivot = rows[r].take().unwrap();
        active_rows -= 1;
        if pivot.is_empty() {
            continue;
        }
        total_nnz -= pivot.len();
        for (k, _) in &pivot {
            col_count[*k as usize] -= 1;
            if col_count[*k as usize] == 0 {
                active_cols -= 1;
            }
        }
        let (pc, _) = pivot
            .iter()
            .enumerate()
            .min_by_key(|(_, (k, _))| (col_count[*k as usize], *k))
            .unwrap();
        let (c, r_c) = pivot[pc].clone();
        rank += 1;

        let touching = std::mem::take(&mut col_rows[c as usize]);
        for srow in touching {
            let si = srow as usize;
            let Some(old) = rows[si].as_ref() else { continue };
            let Ok(pos) = old.binary_search_by_key(&c, |e| e.0) else { continue };
            let s_c = old[pos].1.clone();
            let new = s.eliminate(old, &s_c, &pivot, &r_c);
            // Update column bookkeeping by walking old and new together.
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < new.len() {
                let ki = old.get(i).map_or(u32::MAX, |e| e.0);
                let kj = new.get(j).map_or(u32::MAX, |e| e.0);
                if ki < kj {
                    col_count[ki as usize] -= 1;
                    if col_count[ki as usize] == 0 {
                        active_cols -= 1;
                    }
                    i += 1;
                } else if kj < ki {
                    if col_count[kj as usize] == 0 {
                        active_cols += 1;
                    }
                    col_count[kj as usize] += 1;
                    col_rows[kj as usize].push(srow);
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
            total_nnz = total_nnz + new.len() - old.len();
            heap.push(Reverse((new.len(), srow)));
            rows[si] = Some(new);
        }
    }

    // Dense finish on whatever is left.
    let mut key_map = vec![u32::MAX; width];
    let mut dense_width = 0usize;
    for (k, &cnt) in col_count.iter().enumerate() {
        if cnt > 0 {
            key_map[k] = dense_width as u32;
            dense_width += 1;
        }
    }
    let remaining: Vec<Vec<S::E>> = rows
        .into_iter()
        .flatten()
        .filter(|v| !v.is_empty())
        .map(|v| {
            let mut d = vec![s.zero(); dense_width];
            for (k, e) in v {
                d[key_map[k as usize] as usize] = e;
            }
            d
        })
        .collect();
    if !remaining.is_empty() {
        // Keep the vectors as the shorter side so the incremental echelon
        // form stays small.
        let remaining = if remaining.len() < dense_width {
            transpose_dense(s, remaining, dense_width)
        } else {
            remaining
        };
        let w = remaining[0].len();
        rank += s.dense_rank(remaining, w);
    }
    rank
}

fn transpose_dense<S: Scalar>(s: &S, m: Vec<Vec<S::E>>, width: usize) -> Vec<Vec<S::E>> {
    let mut out = vec![vec![s.zero(); m.len()]; width];
    for (r, row) in m.into_iter().enumerate() {
        for (c, e) in row.into_iter().enumerate() {
            if !s.is_zero(&e) {
                out[c][r] = e;
            }
        }
    }
    out
}

fn rank_of_vectors<S: Scalar>(s: &S, vectors: Vec<SparseVec<S::E>>, width: usize) -> usize {
    let blocks = components(vectors, width);
    blocks.into_par_iter().map(|(vs, w)| block_rank(s, vs, w)).sum()
}

/// Rank of a matrix over GF(p).
pub fn rank_mod_p(m: &SparseMatrix<Gf>, p: u32) -> usize {
    let vectors = m.columns().to_vec();
    rank_of_vectors(&ModP { p: p as u64 }, vectors, m.rows())
}

/// Rank of a matrix over the rationals.
pub fn rank_rational(m: &SparseMatrix<Rationals>) -> usize {
    let vectors: Vec<SparseVec<BigInt>> = m
        .columns()
        .iter()
        .map(|col| {
            let l = col.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let mut out: SparseVec<BigInt> =
                col.iter().map(|(r, v)| (*r, v.numer() * (&l / v.denom()))).collect();
            content_reduce(&mut out);
            out
        })
        .collect();
    rank_of_vectors(&FractionFree, vectors, m.rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Ring};
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent dense Gaussian elimination over GF(p) on a row-major copy.
    fn dense_oracle(f: &Gf, m: &SparseMatrix<Gf>) -> usize {
        let mut a = m.to_dense(f);
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(pr) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, pr);
            let inv = f.inv(&a[rank][c]).unwrap();
            for r in 0..rows {
                if r != rank && a[r][c] != 0 {
                    let factor = f.mul(&a[r][c], &inv);
                    for k in 0..cols {
                        let t = f.mul(&factor, &a[rank][k]);
                        a[r][k] = f.sub(&a[r][k], &t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn random_sparse(f: &Gf, rows: usize, cols: usize, density: f64, seed: u64) -> SparseMatrix<Gf> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trip = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    trip.push((r, c, f.random_nonzero(&mut rng)));
                }
            }
        }
        SparseMatrix::from_triplets(f, rows, cols, trip).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let f = Gf::default();
        assert_eq!(f.rank(&SparseMatrix::identity(&f, 5)), 5);
        assert_eq!(f.rank(&SparseMatrix::zeros(5, 7)), 0);
        assert_eq!(Rationals.rank(&SparseMatrix::identity(&Rationals, 5)), 5);
    }

    #[test]
    fn random_20x30_against_dense_oracle() {
        let f = Gf::default();
        for seed in 0..40 {
            let density = [0.05, 0.1, 0.3, 0.6][seed as usize % 4];
            let m = random_sparse(&f, 20, 30, density, seed);
            assert_eq!(f.rank(&m), dense_oracle(&f, &m), "seed {seed}");
        }
    }

    #[test]
    fn low_rank_products() {
        let f = Gf::new(7).unwrap();
        for seed in 0..20 {
            let a = random_sparse(&f, 40, 4, 0.5, seed);
            let b = random_sparse(&f, 4, 50, 0.5, seed + 100);
            let ab = a.mul(&f, &b).unwrap();
            assert!(f.rank(&ab) <= 4);
            assert_eq!(f.rank(&ab), dense_oracle(&f, &ab));
        }
    }

    fn integer_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..5], r * c))
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(seed in 0u64..10_000) {
            let f = Gf::new(5).unwrap();
            let m = random_sparse(&f, 12, 9, 0.3, seed);
            prop_assert_eq!(f.rank(&m), f.rank(&m.transpose()));
        }

        #[test]
        fn modular_rank_bounded_by_rational_rank((r, c, entries) in integer_matrix()) {
            let q = Rationals;
            let gf = Gf::new(3).unwrap();
            let trip_q = entries.iter().enumerate().map(|(k, &v)| (k / c, k % c, q.from_i64(v)));
            let trip_p = entries.iter().enumerate().map(|(k, &v)| (k / c, k % c, gf.from_i64(v)));
            let mq = SparseMatrix::from_triplets(&q, r, c, trip_q).unwrap();
            let mp = SparseMatrix::from_triplets(&gf, r, c, trip_p).unwrap();
            prop_assert!(gf.rank(&mp) <= q.rank(&mq));
        }

        #[test]
        fn rational_rank_ignores_column_scaling((r, c, entries) in integer_matrix(), den in 1i64..7) {
            let q = Rationals;
            let scale = BigRational::new(1.into(), den.into());
            let plain = SparseMatrix::from_triplets(&q, r, c,
                entries.iter().enumerate().map(|(k, &v)| (k / c, k % c, q.from_i64(v)))).unwrap();
            let scaled = SparseMatrix::from_triplets(&q, r, c,
                entries.iter().enumerate().map(|(k, &v)| (k / c, k % c, q.mul(&q.from_i64(v), &scale)))).unwrap();
            prop_assert_eq!(q.rank(&plain), q.rank(&scaled));
            prop_assert_eq!(q.rank(&plain), q.rank(&plain.transpose()));
        }
    }
}
