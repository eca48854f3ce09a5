//! `ℬ^d(A)` over a field.
//!
//! `B_n` has dimension `dim(A)^{C(n+d+1,d)}`, far too large to store in a
//! basis, but faces, degeneracies and the action of `A_n` all send pure
//! tensors to pure tensors. Elements are therefore kept as sums of pure
//! tensors whose entries are algebra elements, and only expanded in a basis
//! when two of them are compared.

use std::collections::HashMap;

use rand::Rng;

use super::hypercube::{LevelGeometry, InteriorBijection};
use crate::algebra::CommutativeAlgebra;
use crate::error::{Error, Result};
use crate::field::{sign, Field};

/// Default limit on the number of basis terms produced when expanding.
pub const EXPANSION_LIMIT: usize = 1 << 21;

/// A pure tensor: one algebra element (dense coordinates) per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureBar<E> {
    pub level: usize,
    pub entries: Vec<Vec<E>>,
}

/// A sum of scaled pure tensors in `B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarVector<E> {
    pub level: usize,
    pub terms: Vec<(E, PureBar<E>)>,
}

impl<E: Clone> BarVector<E> {
    pub fn zero(level: usize) -> Self {
        BarVector { level, terms: Vec::new() }
    }

    pub fn pure(one: E, p: PureBar<E>) -> Self {
        BarVector { level: p.level, terms: vec![(one, p)] }
    }
}

/// Position tables for levels `0..=max_level` and the algebra they carry.
#[derive(Clone, Debug)]
pub struct ConcreteBar<F: Field> {
    d: usize,
    alg: CommutativeAlgebra<F>,
    levels: Vec<LevelGeometry>,
    /// `merges[n][i]`: position map of `δ_i` from level `n` to `n−1`.
    merges: Vec<Vec<Vec<u32>>>,
    /// `inserts[n][i]`: position map of `σ_i` from level `n` to `n+1`.
    inserts: Vec<Vec<Vec<u32>>>,
    shifts: Vec<Vec<u32>>,
    augmentation_shift: Vec<u32>,
    limit: usize,
}

impl<F: Field> ConcreteBar<F> {
    /// Tables for levels up to `max_level`; degeneracies are available from
    /// levels below `max_level`.
    pub fn new(d: usize, alg: CommutativeAlgebra<F>, max_level: usize) -> Result<Self> {
        Self::with_bijection(d, alg, max_level, InteriorBijection::Natural)
    }

    pub fn with_bijection(
        d: usize,
        alg: CommutativeAlgebra<F>,
        max_level: usize,
        bijection: InteriorBijection,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::argument("d must be at least 1"));
        }
        let levels: Vec<LevelGeometry> = (0..=max_level).map(|n| LevelGeometry::new(d, n, bijection)).collect();
        let merges = (0..=max_level)
            .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| levels[n].merge_table(i, &levels[n - 1])).collect() })
            .collect();
        let inserts = (0..=max_level)
            .map(|n| if n == max_level { Vec::new() } else { (0..=n).map(|i| levels[n].insert_table(i, &levels[n + 1])).collect() })
            .collect();
        let shifts = (0..max_level).map(|n| levels[n].shift_table(&levels[n + 1])).collect();
        let augmentation_shift = LevelGeometry::augmentation(d).shift_table(&levels[0]);
        Ok(ConcreteBar { d, alg, levels, merges, inserts, shifts, augmentation_shift, limit: EXPANSION_LIMIT })
    }

    pub fn with_expansion_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn algebra(&self) -> &CommutativeAlgebra<F> {
        &self.alg
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn geometry(&self, n: usize) -> Result<&LevelGeometry> {
        self.levels.get(n).ok_or_else(|| Error::argument(format!("level {n} exceeds the prepared range")))
    }

    fn level_check(&self, n: usize, need_above: bool) -> Result<()> {
        if n > self.max_level() || (need_above && n == self.max_level()) {
            return Err(Error::argument(format!(
                "level {n} is outside the prepared range 0..={}",
                self.max_level()
            )));
        }
        Ok(())
    }

    pub fn unit_pure(&self, n: usize) -> PureBar<F::Elem> {
        PureBar { level: n, entries: vec![self.alg.unit().to_vec(); self.levels[n].len()] }
    }

    pub fn unit(&self, n: usize) -> BarVector<F::Elem> {
        BarVector::pure(self.field().one(), self.unit_pure(n))
    }

    fn pure_face(&self, i: usize, p: &PureBar<F::Elem>) -> PureBar<F::Elem> {
        let n = p.level;
        let table = &self.merges[n][i];
        let mut out: Vec<Option<Vec<F::Elem>>> = vec![None; self.levels[n - 1].len()];
        for (k, e) in p.entries.iter().enumerate() {
            let t = table[k] as usize;
            out[t] = Some(match out[t].take() {
                None => e.clone(),
                Some(acc) => self.alg.mul(&acc, e),
            });
        }
        PureBar { level: n - 1, entries: out.into_iter().map(|e| e.expect("μ_i is onto")).collect() }
    }

    fn pure_transport(&self, table: &[u32], level: usize, p: &PureBar<F::Elem>) -> PureBar<F::Elem> {
        let mut out = self.unit_pure(level);
        for (k, e) in p.entries.iter().enumerate() {
            out.entries[table[k] as usize] = e.clone();
        }
        out
    }

    /// `δ_i` on a pure tensor of level `n ≥ 1`.
    pub fn face_pure(&self, i: usize, p: &PureBar<F::Elem>) -> Result<PureBar<F::Elem>> {
        let n = p.level;
        self.level_check(n, false)?;
        if n == 0 || i > n {
            return Err(Error::argument(format!("δ_{i} is not defined on B_{n}")));
        }
        Ok(self.pure_face(i, p))
    }

    /// `σ_i` on a pure tensor.
    pub fn degeneracy_pure(&self, i: usize, p: &PureBar<F::Elem>) -> Result<PureBar<F::Elem>> {
        let n = p.level;
        self.level_check(n, true)?;
        if i > n {
            return Err(Error::argument(format!("σ_{i} is not defined on B_{n}")));
        }
        Ok(self.pure_transport(&self.inserts[n][i], n + 1, p))
    }

    /// `σ_{−1}` on a pure tensor.
    pub fn sigma_minus_one_pure(&self, p: &PureBar<F::Elem>) -> Result<PureBar<F::Elem>> {
        self.level_check(p.level, true)?;
        Ok(self.pure_transport(&self.shifts[p.level], p.level + 1, p))
    }

    fn map_terms(
        &self,
        x: &BarVector<F::Elem>,
        level: usize,
        f: impl Fn(&PureBar<F::Elem>) -> Result<PureBar<F::Elem>>,
    ) -> Result<BarVector<F::Elem>> {
        let terms = x.terms.iter().map(|(c, p)| Ok((c.clone(), f(p)?))).collect::<Result<_>>()?;
        Ok(BarVector { level, terms })
    }

    pub fn face(&self, i: usize, x: &BarVector<F::Elem>) -> Result<BarVector<F::Elem>> {
        if x.level == 0 {
            return Err(Error::argument(format!("δ_{i} is not defined on B_0")));
        }
        self.map_terms(x, x.level - 1, |p| self.face_pure(i, p))
    }

    pub fn degeneracy(&self, i: usize, x: &BarVector<F::Elem>) -> Result<BarVector<F::Elem>> {
        self.map_terms(x, x.level + 1, |p| self.degeneracy_pure(i, p))
    }

    pub fn sigma_minus_one(&self, x: &BarVector<F::Elem>) -> Result<BarVector<F::Elem>> {
        self.map_terms(x, x.level + 1, |p| self.sigma_minus_one_pure(p))
    }

    /// `σ_{−1} : A → B_0`, placing `a` at `(1, …, 1)`.
    pub fn sigma_minus_one_from_augmentation(&self, a: &[F::Elem]) -> PureBar<F::Elem> {
        let p = PureBar { level: 0, entries: vec![a.to_vec()] };
        let mut out = self.unit_pure(0);
        out.entries[self.augmentation_shift[0] as usize] = p.entries[0].clone();
        out
    }

    /// The augmentation `B_0 → A`, the product of all entries.
    pub fn augmentation(&self, x: &BarVector<F::Elem>) -> Result<Vec<F::Elem>> {
        if x.level != 0 {
            return Err(Error::argument(format!("the augmentation is defined on B_0, not B_{}", x.level)));
        }
        let f = self.field();
        let mut out = vec![f.zero(); self.alg.dim()];
        for (c, p) in &x.terms {
            let prod = p.entries.iter().fold(self.alg.unit().to_vec(), |acc, e| self.alg.mul(&acc, e));
            for (o, v) in out.iter_mut().zip(prod) {
                *o = f.add(o, &f.mul(c, &v));
            }
        }
        Ok(out)
    }

    /// Entrywise product with a pure tensor.
    pub fn mul_pure(&self, p: &PureBar<F::Elem>, x: &BarVector<F::Elem>) -> Result<BarVector<F::Elem>> {
        if p.level != x.level {
            return Err(Error::argument(format!("cannot multiply levels {} and {}", p.level, x.level)));
        }
        self.map_terms(x, x.level, |q| {
            let entries = q.entries.iter().zip(&p.entries).map(|(a, b)| self.alg.mul(a, b)).collect();
            Ok(PureBar { level: q.level, entries })
        })
    }

    pub fn add(&self, x: &BarVector<F::Elem>, y: &BarVector<F::Elem>) -> BarVector<F::Elem> {
        let mut out = x.clone();
        out.terms.extend(y.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: &F::Elem, x: &BarVector<F::Elem>) -> BarVector<F::Elem> {
        let f = self.field();
        BarVector { level: x.level, terms: x.terms.iter().map(|(a, p)| (f.mul(c, a), p.clone())).collect() }
    }

    pub fn sub(&self, x: &BarVector<F::Elem>, y: &BarVector<F::Elem>) -> BarVector<F::Elem> {
        let minus = self.field().neg(&self.field().one());
        self.add(x, &self.scale(&minus, y))
    }

    /// Coordinates in the basis of `A^{⊗positions}`, keyed by the basis
    /// index at each position.
    pub fn expand(&self, x: &BarVector<F::Elem>) -> Result<HashMap<Vec<u16>, F::Elem>> {
        let f = self.field();
        let mut out: HashMap<Vec<u16>, F::Elem> = HashMap::new();
        for (c, p) in &x.terms {
            let supports: Vec<Vec<(u16, &F::Elem)>> = p
                .entries
                .iter()
                .map(|e| e.iter().enumerate().filter(|(_, v)| !f.is_zero(v)).map(|(k, v)| (k as u16, v)).collect())
                .collect();
            let size = supports.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()).filter(|&t| t <= self.limit));
            let Some(size) = size else {
                return Err(Error::SizeCap { degree: x.level, dim: "pure tensor expansion".into(), cap: self.limit });
            };
            if size == 0 || f.is_zero(c) {
                continue;
            }
            let mut idx = vec![0usize; supports.len()];
            'odometer: loop {
                let mut coeff = c.clone();
                let mut key = Vec::with_capacity(idx.len());
                for (s, &k) in supports.iter().zip(&idx) {
                    coeff = f.mul(&coeff, s[k].1);
                    key.push(s[k].0);
                }
                let e = out.entry(key).or_insert_with(|| f.zero());
                *e = f.add(e, &coeff);
                let mut t = idx.len();
                loop {
                    if t == 0 {
                        break 'odometer;
                    }
                    t -= 1;
                    idx[t] += 1;
                    if idx[t] < supports[t].len() {
                        continue 'odometer;
                    }
                    idx[t] = 0;
                }
            }
        }
        out.retain(|_, v| !f.is_zero(v));
        Ok(out)
    }

    /// Exact equality, by expanding the difference.
    pub fn same(&self, x: &BarVector<F::Elem>, y: &BarVector<F::Elem>) -> Result<bool> {
        if x.level != y.level {
            return Ok(false);
        }
        if x == y {
            return Ok(true);
        }
        Ok(self.expand(&self.sub(x, y))?.is_empty())
    }

    /// `∂σ_{−1} + σ_{−1}∂ = id` at `x`, with `∂ = ε` on `B_0`.
    pub fn contraction_holds(&self, x: &BarVector<F::Elem>) -> Result<bool> {
        let f = self.field();
        let n = x.level;
        let sx = self.sigma_minus_one(x)?;
        let mut total = BarVector::zero(n);
        for i in 0..=n + 1 {
            total = self.add(&total, &self.scale(&sign(f, i), &self.face(i, &sx)?));
        }
        if n == 0 {
            let back = BarVector::pure(f.one(), self.sigma_minus_one_from_augmentation(&self.augmentation(x)?));
            total = self.add(&total, &back);
        } else {
            let mut dx = BarVector::zero(n - 1);
            for i in 0..=n {
                dx = self.add(&dx, &self.scale(&sign(f, i), &self.face(i, x)?));
            }
            total = self.add(&total, &self.sigma_minus_one(&dx)?);
        }
        self.same(&total, x)
    }

    /// A pure tensor with a random basis vector at each position, except at
    /// `dense` random positions which get random algebra elements.
    pub fn random_pure<R: Rng + ?Sized>(&self, n: usize, dense: usize, rng: &mut R) -> PureBar<F::Elem> {
        let len = self.levels[n].len();
        let mut entries: Vec<Vec<F::Elem>> =
            (0..len).map(|_| self.alg.basis_vector(rng.gen_range(0..self.alg.dim()))).collect();
        for _ in 0..dense.min(len) {
            let k = rng.gen_range(0..len);
            entries[k] = self.alg.random_element(rng);
        }
        PureBar { level: n, entries }
    }

    /// Like [`random_pure`](Self::random_pure) with units off the boundary,
    /// so the result lies in `A_n`.
    pub fn random_boundary_pure<R: Rng + ?Sized>(&self, n: usize, dense: usize, rng: &mut R) -> PureBar<F::Elem> {
        let mut p = self.random_pure(n, dense, rng);
        for &k in self.levels[n].slots() {
            p.entries[k as usize] = self.alg.unit().to_vec();
        }
        p
    }

    /// A pure tensor with the given entries and units elsewhere.
    pub fn pure_from_entries(&self, n: usize, entries: &[(Vec<u8>, Vec<F::Elem>)]) -> Result<PureBar<F::Elem>> {
        self.level_check(n, false)?;
        let geom = &self.levels[n];
        let mut out = self.unit_pure(n);
        for (pos, e) in entries {
            let k = geom
                .index_of(pos)
                .ok_or_else(|| Error::argument(format!("{pos:?} is not a position of B_{n}")))?;
            out.entries[k] = self.alg.mul(&out.entries[k], e);
        }
        Ok(out)
    }
}
