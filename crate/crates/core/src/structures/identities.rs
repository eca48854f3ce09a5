//! Simplicial identities, checked on spanning sets.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formal::{
    delta_a, delta_b, delta_b_skip_merge, phi_inv, sigma_a, sigma_b, FormalBoundaryTensor, FormalTensor,
    FormalTensorOverAn,
};
use super::hypercube::positions;
use crate::error::Result;
use crate::field::Field;
use crate::formal::{FormalMonomial, FormalPure};
use crate::sphere::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityFamily {
    /// `δ_i δ_j = δ_{j−1} δ_i` for `i < j`.
    FaceFace,
    /// `σ_i σ_j = σ_{j+1} σ_i` for `i ≤ j`.
    DegeneracyDegeneracy,
    /// `δ_i σ_j = σ_{j−1} δ_i` for `i < j`.
    FaceDegeneracyBelow,
    /// `δ_i σ_j = id` for `i ∈ {j, j+1}`.
    FaceDegeneracyIdentity,
    /// `δ_i σ_j = σ_j δ_{i−1}` for `i > j+1`.
    FaceDegeneracyAbove,
}

impl fmt::Display for IdentityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IdentityFamily::FaceFace => "δ_i δ_j = δ_{j-1} δ_i",
            IdentityFamily::DegeneracyDegeneracy => "σ_i σ_j = σ_{j+1} σ_i",
            IdentityFamily::FaceDegeneracyBelow => "δ_i σ_j = σ_{j-1} δ_i",
            IdentityFamily::FaceDegeneracyIdentity => "δ_i σ_j = id",
            IdentityFamily::FaceDegeneracyAbove => "δ_i σ_j = σ_j δ_{i-1}",
        };
        write!(f, "{s}")
    }
}

/// A failing identity instance; `n` is the level of the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IdentityViolation {
    pub family: IdentityFamily,
    pub i: usize,
    pub j: usize,
    pub n: usize,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails for i={}, j={} on level {}", self.family, self.i, self.j, self.n)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    /// Number of `(identity, element)` pairs compared.
    pub checked: usize,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: IdentityReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "all identities hold ({} comparisons)", self.checked);
        }
        writeln!(f, "{} violation(s) in {} comparisons:", self.violations.len(), self.checked)?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Levels, faces and degeneracies, with a way to compare elements.
pub trait SimplicialObject {
    type Elem;

    /// `δ_i` on level `n`, for `n ≥ 1` and `i ≤ n`.
    fn face(&self, n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem>;

    /// `σ_i` on level `n`, for `i ≤ n`.
    fn degeneracy(&self, n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem>;

    /// Elements of level `n` on which the identities are tested. A spanning
    /// set makes the check a proof for linear maps.
    fn spanning_set(&self, n: usize) -> Result<Vec<Self::Elem>>;

    /// Equality of elements of level `n`.
    fn same(&self, n: usize, x: &Self::Elem, y: &Self::Elem) -> Result<bool>;
}

struct Recorder {
    report: IdentityReport,
}

impl Recorder {
    fn record(&mut self, ok: bool, family: IdentityFamily, i: usize, j: usize, n: usize) {
        self.report.checked += 1;
        let v = IdentityViolation { family, i, j, n };
        if !ok && !self.report.violations.contains(&v) {
            self.report.violations.push(v);
        }
    }
}

/// Checks all five families on every level `n ≤ n_max`.
pub fn check_simplicial_identities<S: SimplicialObject>(obj: &S, n_max: usize) -> Result<IdentityReport> {
    use IdentityFamily::*;
    let mut rec = Recorder { report: IdentityReport::default() };
    for n in 0..=n_max {
        let elems = obj.spanning_set(n)?;
        for x in &elems {
            if n >= 2 {
                let faces: Vec<S::Elem> = (0..=n).map(|j| obj.face(n, j, x)).collect::<Result<_>>()?;
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = obj.face(n - 1, i, &faces[j])?;
                        let rhs = obj.face(n - 1, j - 1, &faces[i])?;
                        rec.record(obj.same(n - 2, &lhs, &rhs)?, FaceFace, i, j, n);
                    }
                }
            }
            let degs: Vec<S::Elem> = (0..=n).map(|j| obj.degeneracy(n, j, x)).collect::<Result<_>>()?;
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = obj.degeneracy(n + 1, i, &degs[j])?;
                    let rhs = obj.degeneracy(n + 1, j + 1, &degs[i])?;
                    rec.record(obj.same(n + 2, &lhs, &rhs)?, DegeneracyDegeneracy, i, j, n);
                }
            }
            let faces: Vec<S::Elem> =
                if n >= 1 { (0..=n).map(|i| obj.face(n, i, x)).collect::<Result<_>>()? } else { Vec::new() };
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = obj.face(n + 1, i, &degs[j])?;
                    if i < j {
                        let rhs = obj.degeneracy(n - 1, j - 1, &faces[i])?;
                        rec.record(obj.same(n, &lhs, &rhs)?, FaceDegeneracyBelow, i, j, n);
                    } else if i == j || i == j + 1 {
                        rec.record(obj.same(n, &lhs, x)?, FaceDegeneracyIdentity, i, j, n);
                    } else {
                        let rhs = obj.degeneracy(n - 1, j, &faces[i - 1])?;
                        rec.record(obj.same(n, &lhs, &rhs)?, FaceDegeneracyAbove, i, j, n);
                    }
                }
            }
        }
    }
    Ok(rec.report)
}

/// Cofaces and codegeneracies with a way to compare elements.
pub trait CosimplicialObject {
    type Elem;

    /// `δ^i` from level `n` to `n+1`, for `i ≤ n+1`.
    fn coface(&self, n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem>;

    /// `σ^i` from level `n` to `n−1`, for `n ≥ 1` and `i ≤ n−1`.
    fn codegeneracy(&self, n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem>;

    fn spanning_set(&self, n: usize) -> Result<Vec<Self::Elem>>;

    fn same(&self, n: usize, x: &Self::Elem, y: &Self::Elem) -> Result<bool>;
}

/// The dual identities `δ^j δ^i = δ^i δ^{j−1}` (`i < j`),
/// `σ^j σ^i = σ^i σ^{j+1}` (`i ≤ j`) and the mixed ones, reported under the
/// family of the identity they dualize.
pub fn check_cosimplicial_identities<S: CosimplicialObject>(obj: &S, n_max: usize) -> Result<IdentityReport> {
    use IdentityFamily::*;
    let mut rec = Recorder { report: IdentityReport::default() };
    for n in 0..=n_max {
        for x in &obj.spanning_set(n)? {
            for j in 1..=n + 2 {
                for i in 0..j {
                    let lhs = obj.coface(n + 1, j, &obj.coface(n, i, x)?)?;
                    let rhs = obj.coface(n + 1, i, &obj.coface(n, j - 1, x)?)?;
                    rec.record(obj.same(n + 2, &lhs, &rhs)?, FaceFace, i, j, n);
                }
            }
            if n >= 2 {
                for j in 0..=n - 2 {
                    for i in 0..=j {
                        let lhs = obj.codegeneracy(n - 1, j, &obj.codegeneracy(n, i, x)?)?;
                        let rhs = obj.codegeneracy(n - 1, i, &obj.codegeneracy(n, j + 1, x)?)?;
                        rec.record(obj.same(n - 2, &lhs, &rhs)?, DegeneracyDegeneracy, i, j, n);
                    }
                }
            }
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = obj.codegeneracy(n + 1, j, &obj.coface(n, i, x)?)?;
                    if i < j {
                        let rhs = obj.coface(n - 1, i, &obj.codegeneracy(n, j - 1, x)?)?;
                        rec.record(obj.same(n, &lhs, &rhs)?, FaceDegeneracyBelow, i, j, n);
                    } else if i == j || i == j + 1 {
                        rec.record(obj.same(n, &lhs, x)?, FaceDegeneracyIdentity, i, j, n);
                    } else if n >= 1 {
                        let rhs = obj.coface(n - 1, i - 1, &obj.codegeneracy(n, j, x)?)?;
                        rec.record(obj.same(n, &lhs, &rhs)?, FaceDegeneracyAbove, i, j, n);
                    }
                }
            }
        }
    }
    Ok(rec.report)
}

/// `ℬ^d(A)` on formal tensors.
#[derive(Clone, Debug)]
pub struct FormalBar {
    pub d: usize,
    /// Use [`delta_b_skip_merge`] for the faces.
    pub skip_merge: bool,
    /// Extra random tensors added to each spanning set.
    pub random_samples: usize,
    pub seed: u64,
}

impl FormalBar {
    pub fn new(d: usize) -> Self {
        FormalBar { d, skip_merge: false, random_samples: 2, seed: 0 }
    }

    pub fn corrupted(d: usize) -> Self {
        FormalBar { skip_merge: true, ..Self::new(d) }
    }
}

fn random_formal(d: usize, n: usize, rng: &mut ChaCha8Rng) -> FormalTensor {
    let names = ["a", "b", "c", "e"];
    let mut entries = Vec::new();
    for p in positions(d, n) {
        if rng.gen_bool(0.5) {
            let k = rng.gen_range(1..=2);
            let m = FormalMonomial::from_symbols((0..k).map(|_| names[rng.gen_range(0..names.len())]));
            entries.push((p, m));
        }
    }
    FormalTensor::new(d, n, entries).expect("generated positions are valid")
}

impl SimplicialObject for FormalBar {
    type Elem = FormalTensor;

    fn face(&self, _n: usize, i: usize, x: &FormalTensor) -> Result<FormalTensor> {
        if self.skip_merge {
            delta_b_skip_merge(x, i)
        } else {
            delta_b(x, i)
        }
    }

    fn degeneracy(&self, _n: usize, i: usize, x: &FormalTensor) -> Result<FormalTensor> {
        sigma_b(x, i)
    }

    fn spanning_set(&self, n: usize) -> Result<Vec<FormalTensor>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (n as u64) << 8);
        let mut out = vec![FormalTensor::generic(self.d, n, "x")];
        out.extend((0..self.random_samples).map(|_| random_formal(self.d, n, &mut rng)));
        Ok(out)
    }

    fn same(&self, _n: usize, x: &FormalTensor, y: &FormalTensor) -> Result<bool> {
        Ok(x == y)
    }
}

/// `𝒜^d(A)` on formal boundary tensors.
#[derive(Clone, Debug)]
pub struct FormalBoundary {
    pub d: usize,
}

impl SimplicialObject for FormalBoundary {
    type Elem = FormalBoundaryTensor;

    fn face(&self, _n: usize, i: usize, x: &FormalBoundaryTensor) -> Result<FormalBoundaryTensor> {
        delta_a(x, i)
    }

    fn degeneracy(&self, _n: usize, i: usize, x: &FormalBoundaryTensor) -> Result<FormalBoundaryTensor> {
        sigma_a(x, i)
    }

    fn spanning_set(&self, n: usize) -> Result<Vec<FormalBoundaryTensor>> {
        Ok(vec![FormalBoundaryTensor::generic(self.d, n, "α")])
    }

    fn same(&self, _n: usize, x: &FormalBoundaryTensor, y: &FormalBoundaryTensor) -> Result<bool> {
        Ok(x == y)
    }
}

/// `M ⊗_{𝒜^d} ℬ^d` on formal tensors in canonical form.
#[derive(Clone, Debug)]
pub struct FormalTensorProduct {
    pub d: usize,
}

impl SimplicialObject for FormalTensorProduct {
    type Elem = FormalTensorOverAn;

    fn face(&self, _n: usize, i: usize, x: &FormalTensorOverAn) -> Result<FormalTensorOverAn> {
        x.face(i)
    }

    fn degeneracy(&self, _n: usize, i: usize, x: &FormalTensorOverAn) -> Result<FormalTensorOverAn> {
        x.degeneracy(i)
    }

    fn spanning_set(&self, n: usize) -> Result<Vec<FormalTensorOverAn>> {
        let mut x: FormalPure = vec![FormalMonomial::symbol("m")];
        x.extend((0..binomial(n, self.d)).map(|k| FormalMonomial::symbol(format!("a{k}"))));
        Ok(vec![phi_inv(self.d, n, &x)?])
    }

    fn same(&self, _n: usize, x: &FormalTensorOverAn, y: &FormalTensorOverAn) -> Result<bool> {
        Ok(x.canonical() == y.canonical())
    }
}

/// A vector space with every face and degeneracy the identity: `ℳ^d(M)` as
/// a simplicial object and `𝒩_d(M)` as a cosimplicial one.
#[derive(Clone, Debug)]
pub struct Constant<F: Field> {
    pub field: F,
    pub dim: usize,
}

impl<F: Field> Constant<F> {
    fn basis(&self) -> Vec<Vec<F::Elem>> {
        (0..self.dim)
            .map(|k| (0..self.dim).map(|t| if t == k { self.field.one() } else { self.field.zero() }).collect())
            .collect()
    }
}

impl<F: Field> SimplicialObject for Constant<F> {
    type Elem = Vec<F::Elem>;

    fn face(&self, _n: usize, _i: usize, x: &Vec<F::Elem>) -> Result<Vec<F::Elem>> {
        Ok(x.clone())
    }

    fn degeneracy(&self, _n: usize, _i: usize, x: &Vec<F::Elem>) -> Result<Vec<F::Elem>> {
        Ok(x.clone())
    }

    fn spanning_set(&self, _n: usize) -> Result<Vec<Vec<F::Elem>>> {
        Ok(self.basis())
    }

    fn same(&self, _n: usize, x: &Vec<F::Elem>, y: &Vec<F::Elem>) -> Result<bool> {
        Ok(x == y)
    }
}

impl<F: Field> CosimplicialObject for Constant<F> {
    type Elem = Vec<F::Elem>;

    fn coface(&self, _n: usize, _i: usize, x: &Vec<F::Elem>) -> Result<Vec<F::Elem>> {
        Ok(x.clone())
    }

    fn codegeneracy(&self, _n: usize, _i: usize, x: &Vec<F::Elem>) -> Result<Vec<F::Elem>> {
        Ok(x.clone())
    }

    fn spanning_set(&self, _n: usize) -> Result<Vec<Vec<F::Elem>>> {
        Ok(self.basis())
    }

    fn same(&self, _n: usize, x: &Vec<F::Elem>, y: &Vec<F::Elem>) -> Result<bool> {
        Ok(x == y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;

    #[test]
    fn formal_structures_are_simplicial() {
        for d in 1..=3 {
            let n_max = if d == 3 { 4 } else { 5 };
            let r = check_simplicial_identities(&FormalBar::new(d), n_max).unwrap();
            assert!(r.is_empty(), "B^{d}: {r}");
            let r = check_simplicial_identities(&FormalBoundary { d }, n_max).unwrap();
            assert!(r.is_empty(), "A^{d}: {r}");
            let r = check_simplicial_identities(&FormalTensorProduct { d }, n_max).unwrap();
            assert!(r.is_empty(), "M⊗B^{d}: {r}");
        }
    }

    #[test]
    fn skipped_merge_is_detected() {
        for d in 1..=3 {
            let r = check_simplicial_identities(&FormalBar::corrupted(d), 3).unwrap();
            assert!(!r.is_empty());
        }
    }

    #[test]
    fn constant_objects() {
        let c = Constant { field: Gf::default(), dim: 3 };
        assert!(check_simplicial_identities(&c, 4).unwrap().is_empty());
        assert!(check_cosimplicial_identities(&c, 4).unwrap().is_empty());
    }
}
