//! `ℬ^d(A)` and `𝒜^d(A)` on formal symbols.
//!
//! A formal tensor stores a monomial at each position; absent positions hold
//! the unit. Faces multiply the entries of each fiber of `μ_i`, degeneracies
//! transport entries along `ν_i` and fill the new slab with units.

use std::collections::BTreeMap;
use std::fmt;

use super::hypercube::{
    insert_position, interior_position, is_boundary, is_position, merge_position, positions, shift_position,
    InteriorBijection, LevelGeometry, Position,
};
use crate::error::{Error, Result};
use crate::formal::{FormalMonomial, FormalPure};
use crate::sphere::{binomial, monotone_tuples};

/// A pure tensor in `B_n = A^{⊗C(n+d+1,d)}` with formal entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalTensor {
    d: usize,
    level: usize,
    entries: BTreeMap<Position, FormalMonomial>,
}

fn position_string(p: &[u8]) -> String {
    let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

impl FormalTensor {
    pub fn unit(d: usize, level: usize) -> Self {
        FormalTensor { d, level, entries: BTreeMap::new() }
    }

    /// Entries at repeated positions are multiplied together.
    pub fn new(
        d: usize,
        level: usize,
        entries: impl IntoIterator<Item = (Position, FormalMonomial)>,
    ) -> Result<Self> {
        let mut t = Self::unit(d, level);
        for (p, m) in entries {
            if !is_position(d, level, &p) {
                return Err(Error::argument(format!(
                    "{} is not a position of B_{level} for d = {d}",
                    position_string(&p)
                )));
            }
            t.multiply_at(p, &m);
        }
        Ok(t)
    }

    /// A distinct symbol `prefix(j_1,…,j_d)` at every position.
    pub fn generic(d: usize, level: usize, prefix: &str) -> Self {
        let entries = positions(d, level)
            .into_iter()
            .map(|p| {
                let name = format!("{prefix}{}", position_string(&p));
                (p, FormalMonomial::symbol(name))
            })
            .collect();
        FormalTensor { d, level, entries }
    }

    fn multiply_at(&mut self, p: Position, m: &FormalMonomial) {
        if m.is_unit() {
            return;
        }
        self.entries.entry(p).or_default().mul_assign(m);
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn entry(&self, p: &[u8]) -> FormalMonomial {
        self.entries.get(p).cloned().unwrap_or_default()
    }

    /// Non-unit entries.
    pub fn entries(&self) -> &BTreeMap<Position, FormalMonomial> {
        &self.entries
    }

    /// Product of all entries.
    pub fn total(&self) -> FormalMonomial {
        FormalMonomial::product(self.entries.values())
    }

    pub fn is_supported_on_boundary(&self) -> bool {
        self.entries.keys().all(|p| is_boundary(self.level, p))
    }

    /// Entrywise product.
    pub fn mul(&self, other: &FormalTensor) -> Result<FormalTensor> {
        if self.d != other.d || self.level != other.level {
            return Err(Error::argument(format!(
                "cannot multiply tensors of (d, level) ({}, {}) and ({}, {})",
                self.d, self.level, other.d, other.level
            )));
        }
        let mut out = self.clone();
        for (p, m) in &other.entries {
            out.multiply_at(p.clone(), m);
        }
        Ok(out)
    }

    /// The entries of a `d = 3` tensor drawn as one matrix per value of the
    /// third coordinate, rows indexed by the first and columns by the second.
    pub fn layers(&self) -> Vec<Vec<Vec<FormalMonomial>>> {
        assert_eq!(self.d, 3, "layers are drawn for d = 3 only");
        let top = self.level + 1;
        (0..=top)
            .map(|k| {
                (0..=k)
                    .map(|r| (r..=k).map(|c| self.entry(&[r as u8, c as u8, k as u8])).collect())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for FormalTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.entries.iter().map(|(p, m)| format!("{m}@{}", position_string(p))).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn check_face(t: &FormalTensor, i: usize) -> Result<()> {
    if t.level == 0 || i > t.level {
        return Err(Error::argument(format!("δ_{i} is not defined on B_{}", t.level)));
    }
    Ok(())
}

fn check_degeneracy(t: &FormalTensor, i: usize) -> Result<()> {
    if i > t.level {
        return Err(Error::argument(format!("σ_{i} is not defined on B_{}", t.level)));
    }
    Ok(())
}

/// `δ_i : B_n → B_{n−1}`.
pub fn delta_b(t: &FormalTensor, i: usize) -> Result<FormalTensor> {
    check_face(t, i)?;
    let mut out = FormalTensor::unit(t.d, t.level - 1);
    for (p, m) in &t.entries {
        out.multiply_at(merge_position(i, p), m);
    }
    Ok(out)
}

/// `δ_i` with the merge skipped in the first fiber that has more than one
/// element: the factor at the smallest position of that fiber is dropped.
pub fn delta_b_skip_merge(t: &FormalTensor, i: usize) -> Result<FormalTensor> {
    check_face(t, i)?;
    let mut seen: BTreeMap<Position, usize> = BTreeMap::new();
    for p in positions(t.d, t.level) {
        *seen.entry(merge_position(i, &p)).or_default() += 1;
    }
    let victim = positions(t.d, t.level).into_iter().find(|p| seen[&merge_position(i, p)] > 1);
    let mut out = FormalTensor::unit(t.d, t.level - 1);
    for (p, m) in &t.entries {
        if Some(p) == victim.as_ref() {
            continue;
        }
        out.multiply_at(merge_position(i, p), m);
    }
    Ok(out)
}

/// `σ_i : B_n → B_{n+1}`.
pub fn sigma_b(t: &FormalTensor, i: usize) -> Result<FormalTensor> {
    check_degeneracy(t, i)?;
    let entries = t.entries.iter().map(|(p, m)| (insert_position(i, p), m.clone())).collect();
    Ok(FormalTensor { d: t.d, level: t.level + 1, entries })
}

/// The extra degeneracy `σ_{−1} : B_n → B_{n+1}`, shifting every coordinate
/// up by one.
pub fn sigma_minus_one(t: &FormalTensor) -> FormalTensor {
    let entries = t.entries.iter().map(|(p, m)| (shift_position(p), m.clone())).collect();
    FormalTensor { d: t.d, level: t.level + 1, entries }
}

/// `σ_{−1} : B_{−1} = A → B_0`, placing `a` at `(1, …, 1)`.
pub fn sigma_minus_one_from_augmentation(d: usize, a: &FormalMonomial) -> FormalTensor {
    let mut t = FormalTensor::unit(d, 0);
    t.multiply_at(vec![1; d], a);
    t
}

/// The augmentation `B_0 → A`, the product of all entries.
pub fn augmentation(t: &FormalTensor) -> Result<FormalMonomial> {
    if t.level != 0 {
        return Err(Error::argument(format!("the augmentation is defined on B_0, not B_{}", t.level)));
    }
    Ok(t.total())
}

/// A formal tensor in `A_n`, supported on boundary positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalBoundaryTensor {
    inner: FormalTensor,
}

impl FormalBoundaryTensor {
    pub fn new(t: FormalTensor) -> Result<Self> {
        if let Some(p) = t.entries.keys().find(|p| !is_boundary(t.level, p)) {
            return Err(Error::argument(format!(
                "{} is an interior position of B_{}",
                position_string(p),
                t.level
            )));
        }
        Ok(FormalBoundaryTensor { inner: t })
    }

    /// A distinct symbol at every boundary position.
    pub fn generic(d: usize, level: usize, prefix: &str) -> Self {
        let mut t = FormalTensor::generic(d, level, prefix);
        t.entries.retain(|p, _| is_boundary(level, p));
        FormalBoundaryTensor { inner: t }
    }

    pub fn as_tensor(&self) -> &FormalTensor {
        &self.inner
    }

    pub fn into_tensor(self) -> FormalTensor {
        self.inner
    }

    pub fn level(&self) -> usize {
        self.inner.level
    }
}

impl fmt::Display for FormalBoundaryTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// `δ_i : A_n → A_{n−1}`, the restriction of `δ_i` on `B_n`.
pub fn delta_a(t: &FormalBoundaryTensor, i: usize) -> Result<FormalBoundaryTensor> {
    Ok(FormalBoundaryTensor { inner: delta_b(&t.inner, i)? })
}

/// `σ_i : A_n → A_{n+1}`.
pub fn sigma_a(t: &FormalBoundaryTensor, i: usize) -> Result<FormalBoundaryTensor> {
    Ok(FormalBoundaryTensor { inner: sigma_b(&t.inner, i)? })
}

/// `α · b`, by entrywise multiplication.
pub fn act_a_on_b(alpha: &FormalBoundaryTensor, b: &FormalTensor) -> Result<FormalTensor> {
    alpha.inner.mul(b)
}

/// `m · α = m ∏ α`.
pub fn act_a_on_m(m: &FormalMonomial, alpha: &FormalBoundaryTensor) -> FormalMonomial {
    m.mul(&alpha.inner.total())
}

/// A pure tensor `m ⊗ b` in `M ⊗_{A_n} B_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalTensorOverAn {
    pub module: FormalMonomial,
    pub tensor: FormalTensor,
}

impl FormalTensorOverAn {
    pub fn new(module: FormalMonomial, tensor: FormalTensor) -> Self {
        FormalTensorOverAn { module, tensor }
    }

    pub fn level(&self) -> usize {
        self.tensor.level
    }

    /// Moves every boundary entry across the tensor sign into the module slot.
    pub fn canonical(&self) -> FormalTensorOverAn {
        let n = self.tensor.level;
        let mut module = self.module.clone();
        let mut tensor = FormalTensor::unit(self.tensor.d, n);
        for (p, m) in &self.tensor.entries {
            if is_boundary(n, p) {
                module.mul_assign(m);
            } else {
                tensor.entries.insert(p.clone(), m.clone());
            }
        }
        FormalTensorOverAn { module, tensor }
    }

    pub fn is_canonical(&self) -> bool {
        self.tensor.entries.keys().all(|p| !is_boundary(self.tensor.level, p))
    }

    /// `D_i = δ_i^M ⊗ δ_i^B`, canonicalized.
    pub fn face(&self, i: usize) -> Result<FormalTensorOverAn> {
        Ok(FormalTensorOverAn { module: self.module.clone(), tensor: delta_b(&self.tensor, i)? }.canonical())
    }

    /// `S_i = σ_i^M ⊗ σ_i^B`, canonicalized.
    pub fn degeneracy(&self, i: usize) -> Result<FormalTensorOverAn> {
        Ok(FormalTensorOverAn { module: self.module.clone(), tensor: sigma_b(&self.tensor, i)? }.canonical())
    }

    /// `φ_n : M ⊗_{A_n} B_n → M ⊗ A^{⊗C(n,d)}`.
    pub fn phi(&self) -> FormalPure {
        self.phi_with(InteriorBijection::Natural)
    }

    pub fn phi_with(&self, bijection: InteriorBijection) -> FormalPure {
        let c = self.canonical();
        let geom = LevelGeometry::new(c.tensor.d, c.tensor.level, bijection);
        let mut out = vec![c.module];
        out.extend(geom.slots().iter().map(|&k| c.tensor.entry(geom.position(k as usize))));
        out
    }
}

impl fmt::Display for FormalTensorOverAn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.module, self.tensor)
    }
}

/// `φ_n^{-1}`: the module entry stays in front, slot `k` goes to the interior
/// position of cell `k`, and the boundary carries units.
pub fn phi_inv(d: usize, n: usize, x: &FormalPure) -> Result<FormalTensorOverAn> {
    phi_inv_with(d, n, x, InteriorBijection::Natural)
}

pub fn phi_inv_with(d: usize, n: usize, x: &FormalPure, bijection: InteriorBijection) -> Result<FormalTensorOverAn> {
    let arity = binomial(n, d);
    if x.len() != arity + 1 {
        return Err(Error::argument(format!(
            "expected 1 + {arity} slots at level {n} for d = {d}, got {}",
            x.len()
        )));
    }
    let geom = LevelGeometry::new(d, n, bijection);
    let mut tensor = FormalTensor::unit(d, n);
    for (slot, &k) in geom.slots().iter().enumerate() {
        tensor.multiply_at(geom.position(k as usize).clone(), &x[slot + 1]);
    }
    Ok(FormalTensorOverAn { module: x[0].clone(), tensor })
}

/// The lift of `m ⊗ a_1 ⊗ …` with single-character slot words, for quick
/// construction in examples.
pub fn lift_words(d: usize, n: usize, words: &[&str]) -> Result<FormalTensorOverAn> {
    let x: FormalPure = words.iter().map(|w| FormalMonomial::from_chars(w)).collect();
    phi_inv(d, n, &x)
}

/// Interior positions in cell order, as `(cell tuple, position)` pairs.
pub fn interior_layout(d: usize, n: usize) -> Vec<(Vec<usize>, Position)> {
    if n < d {
        return Vec::new();
    }
    monotone_tuples(d, 1, n - d + 1).into_iter().map(|t| { let p = interior_position(&t); (t, p) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::face_star_formal;

    fn mono(w: &str) -> FormalMonomial {
        FormalMonomial::from_chars(w)
    }

    #[test]
    fn faces_merge_fibers() {
        let t = FormalTensor::new(1, 2, [(vec![1], mono("a")), (vec![2], mono("b")), (vec![3], mono("c"))]).unwrap();
        let d1 = delta_b(&t, 1).unwrap();
        assert_eq!(d1.entry(&[1]), mono("ab"));
        assert_eq!(d1.entry(&[2]), mono("c"));
        let s0 = sigma_b(&t, 0).unwrap();
        assert_eq!(s0.entry(&[1]), FormalMonomial::unit());
        assert_eq!(s0.entry(&[2]), mono("a"));
        assert!(delta_b(&t, 3).is_err());
        assert!(delta_b(&FormalTensor::unit(1, 0), 0).is_err());
    }

    #[test]
    fn boundary_tensors_reject_interior_entries() {
        let t = FormalTensor::new(2, 2, [(vec![1, 2], mono("a"))]).unwrap();
        assert!(FormalBoundaryTensor::new(t).is_err());
        let t = FormalTensor::new(2, 2, [(vec![1, 1], mono("a"))]).unwrap();
        assert!(FormalBoundaryTensor::new(t).is_ok());
        assert!(FormalTensor::new(2, 2, [(vec![2, 1], mono("a"))]).is_err());
    }

    #[test]
    fn canonical_form_is_idempotent_and_moves_boundary() {
        let t = FormalTensor::generic(2, 3, "x");
        let x = FormalTensorOverAn::new(mono("m"), t);
        let c = x.canonical();
        assert_eq!(c.canonical(), c);
        assert!(c.is_canonical());
        assert_eq!(c.tensor.entries().len(), binomial(3, 2));
        assert_eq!(c.module.degree(), 1 + super::super::hypercube::boundary_count(2, 3));
    }

    #[test]
    fn tensor_faces_match_sphere_faces() {
        for d in 1..=3 {
            for n in d.max(1)..=5 {
                let mut x: FormalPure = vec![mono("m")];
                x.extend((0..binomial(n, d)).map(|k| FormalMonomial::symbol(format!("a{k}"))));
                let lifted = phi_inv(d, n, &x).unwrap();
                assert_eq!(lifted.phi(), x);
                for i in 0..=n {
                    let got = lifted.face(i).unwrap().phi();
                    assert_eq!(got, face_star_formal(d, n, i, &x).unwrap(), "d={d} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn shifted_bijection_breaks_faces() {
        let (d, n) = (2, 4);
        let mut x: FormalPure = vec![mono("m")];
        x.extend((0..binomial(n, d)).map(|k| FormalMonomial::symbol(format!("a{k}"))));
        let lifted = phi_inv_with(d, n, &x, InteriorBijection::Shifted).unwrap();
        let bad = (0..=n).any(|i| {
            lifted.face(i).unwrap().phi_with(InteriorBijection::Shifted) != face_star_formal(d, n, i, &x).unwrap()
        });
        assert!(bad);
    }
}
