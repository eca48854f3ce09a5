//! Presimplicial morphisms and homotopies of simplicial left modules over
//! `𝒜^d(A)`, and their effect on the tensor product with `ℳ^d(M)` and on
//! `Hom` into `𝒩_d(M)`.
//!
//! A presimplicial homotopy `h : f ∼ g` between morphisms `B → C` is a family
//! `h_j : B_n → C_{n+1}`, `0 ≤ j ≤ n`, with
//!
//! * `δ_i h_j = h_{j−1} δ_i` for `i < j`,
//! * `δ_i h_i = δ_i h_{i−1}` for `0 < i ≤ n`,
//! * `δ_i h_j = h_j δ_{i−1}` for `i > j+1`,
//! * `δ_0 h_0 = f` and `δ_{n+1} h_n = g`,
//! * `h_i(a·b) = σ_i(a)·h_i(b)` for `a ∈ A_n`.
//!
//! With `H = Σ (−1)^i h_i` this gives `∂H + H∂ = f − g`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::SymmetricBimodule;
use crate::error::{Error, Result};
use crate::field::{sign, Field, Integers};
use crate::formal::FormalMonomial;
use crate::homology::{cohomology_dims, homology_dims, ChainComplex, SparseMatrix};
use crate::lincomb::LinComb;
use crate::loday::{capped_basis, TensorElement};
use crate::sphere::arity;
use crate::structures::bar::{BarVector, ConcreteBar, PureBar};
use crate::structures::formal::{delta_b, sigma_b, FormalTensor};
use crate::structures::hypercube::{is_boundary, positions, Position};
use crate::structures::tensor::{ConcreteTensorProduct, TensorOverAn};

/// A simplicial left module over `𝒜^d(A)` whose elements can be multiplied
/// entrywise by pure tensors of `B_n`; elements of `A_n` are the pure
/// tensors supported on boundary positions.
pub trait SimplicialLeftModule: Send + Sync {
    type Elem: Clone + Send + Sync + 'static;
    type Pure: Clone + Send + Sync + 'static;
    type Entry: Clone + Send + Sync + 'static;

    fn d(&self) -> usize;
    fn face(&self, n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem>;
    fn degeneracy(&self, n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem>;
    /// `σ_i` on a pure tensor, which restricts to `σ_i^A` on `A_n`.
    fn pure_degeneracy(&self, n: usize, i: usize, p: &Self::Pure) -> Result<Self::Pure>;
    fn act(&self, n: usize, p: &Self::Pure, x: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn same(&self, n: usize, x: &Self::Elem, y: &Self::Elem) -> Result<bool>;
    fn samples(&self, n: usize, seed: u64) -> Vec<Self::Elem>;
    fn algebra_samples(&self, n: usize, seed: u64) -> Vec<Self::Pure>;
    fn entry_mul(&self, a: &Self::Entry, b: &Self::Entry) -> Self::Entry;
    /// A pure tensor with the given entries and units elsewhere.
    fn pure_from_entries(&self, n: usize, entries: &[(Position, Self::Entry)]) -> Result<Self::Pure>;
}

/// `ℬ^d(A)` on integer combinations of formal tensors.
#[derive(Clone, Debug)]
pub struct FormalBarModule {
    pub d: usize,
}

pub type FormalElement = LinComb<FormalTensor, i64>;

impl FormalBarModule {
    pub fn pure(&self, t: FormalTensor) -> FormalElement {
        LinComb::basis(&Integers, t)
    }
}

impl SimplicialLeftModule for FormalBarModule {
    type Elem = FormalElement;
    type Pure = FormalTensor;
    type Entry = FormalMonomial;

    fn d(&self) -> usize {
        self.d
    }

    fn face(&self, _n: usize, i: usize, x: &FormalElement) -> Result<FormalElement> {
        let mut out = LinComb::new();
        for (t, c) in x {
            out.add_term(&Integers, delta_b(t, i)?, *c);
        }
        Ok(out)
    }

    fn degeneracy(&self, _n: usize, i: usize, x: &FormalElement) -> Result<FormalElement> {
        let mut out = LinComb::new();
        for (t, c) in x {
            out.add_term(&Integers, sigma_b(t, i)?, *c);
        }
        Ok(out)
    }

    fn pure_degeneracy(&self, _n: usize, i: usize, p: &FormalTensor) -> Result<FormalTensor> {
        sigma_b(p, i)
    }

    fn act(&self, _n: usize, p: &FormalTensor, x: &FormalElement) -> Result<FormalElement> {
        let mut out = LinComb::new();
        for (t, c) in x {
            out.add_term(&Integers, p.mul(t)?, *c);
        }
        Ok(out)
    }

    fn add(&self, x: &FormalElement, y: &FormalElement) -> FormalElement {
        x.plus(&Integers, y)
    }

    fn sub(&self, x: &FormalElement, y: &FormalElement) -> FormalElement {
        x.minus(&Integers, y)
    }

    fn same(&self, _n: usize, x: &FormalElement, y: &FormalElement) -> Result<bool> {
        Ok(x == y)
    }

    fn samples(&self, n: usize, seed: u64) -> Vec<FormalElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let generic = self.pure(FormalTensor::generic(self.d, n, "x"));
        let mut sparse: Vec<(Position, FormalMonomial)> = Vec::new();
        for p in positions(self.d, n) {
            if rng.gen_bool(0.3) {
                sparse.push((p, FormalMonomial::symbol(format!("y{}", rng.gen_range(0..3)))));
            }
        }
        let sparse = FormalTensor::new(self.d, n, sparse).expect("valid positions");
        let mut mixed = self.pure(sparse);
        mixed.add_term(&Integers, FormalTensor::unit(self.d, n), 2);
        vec![generic, mixed]
    }

    fn algebra_samples(&self, n: usize, _seed: u64) -> Vec<FormalTensor> {
        let mut t = FormalTensor::generic(self.d, n, "α");
        t = FormalTensor::new(
            self.d,
            n,
            t.entries().iter().filter(|(p, _)| is_boundary(n, p)).map(|(p, m)| (p.clone(), m.clone())),
        )
        .expect("valid positions");
        vec![t]
    }

    fn entry_mul(&self, a: &FormalMonomial, b: &FormalMonomial) -> FormalMonomial {
        a.mul(b)
    }

    fn pure_from_entries(&self, n: usize, entries: &[(Position, FormalMonomial)]) -> Result<FormalTensor> {
        FormalTensor::new(self.d, n, entries.iter().cloned())
    }
}

impl<F: Field> SimplicialLeftModule for ConcreteBar<F> {
    type Elem = BarVector<F::Elem>;
    type Pure = PureBar<F::Elem>;
    type Entry = Vec<F::Elem>;

    fn d(&self) -> usize {
        ConcreteBar::d(self)
    }

    fn face(&self, _n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem> {
        ConcreteBar::face(self, i, x)
    }

    fn degeneracy(&self, _n: usize, i: usize, x: &Self::Elem) -> Result<Self::Elem> {
        ConcreteBar::degeneracy(self, i, x)
    }

    fn pure_degeneracy(&self, _n: usize, i: usize, p: &Self::Pure) -> Result<Self::Pure> {
        self.degeneracy_pure(i, p)
    }

    fn act(&self, _n: usize, p: &Self::Pure, x: &Self::Elem) -> Result<Self::Elem> {
        self.mul_pure(p, x)
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        ConcreteBar::add(self, x, y)
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        ConcreteBar::sub(self, x, y)
    }

    fn same(&self, _n: usize, x: &Self::Elem, y: &Self::Elem) -> Result<bool> {
        ConcreteBar::same(self, x, y)
    }

    fn samples(&self, n: usize, seed: u64) -> Vec<Self::Elem> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = self.field().one();
        let a = BarVector::pure(one.clone(), self.random_pure(n, 2, &mut rng));
        let b = BarVector::pure(one.clone(), self.random_pure(n, 1, &mut rng));
        let c = self.field().random_nonzero(&mut rng);
        let mixed = ConcreteBar::add(self, &self.scale(&c, &a), &b);
        vec![a, mixed, self.unit(n)]
    }

    fn algebra_samples(&self, n: usize, seed: u64) -> Vec<Self::Pure> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        vec![self.random_boundary_pure(n, 1, &mut rng)]
    }

    fn entry_mul(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        self.algebra().mul(a, b)
    }

    fn pure_from_entries(&self, n: usize, entries: &[(Position, Vec<F::Elem>)]) -> Result<Self::Pure> {
        ConcreteBar::pure_from_entries(self, n, entries)
    }
}

type LevelMap<X> = Arc<dyn Fn(usize, &X) -> Result<X> + Send + Sync>;
type IndexedLevelMap<X> = Arc<dyn Fn(usize, usize, &X) -> Result<X> + Send + Sync>;

/// A family `f_n : B_n → C_n`, named so that homotopies can refer to their
/// endpoints.
#[derive(Clone)]
pub struct PresimplicialMorphism<X> {
    label: String,
    map: LevelMap<X>,
}

impl<X> fmt::Debug for PresimplicialMorphism<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PresimplicialMorphism({})", self.label)
    }
}

impl<X: 'static> PresimplicialMorphism<X> {
    pub fn new(label: impl Into<String>, map: impl Fn(usize, &X) -> Result<X> + Send + Sync + 'static) -> Self {
        PresimplicialMorphism { label: label.into(), map: Arc::new(map) }
    }

    pub fn identity() -> Self
    where
        X: Clone,
    {
        Self::new("id", |_, x: &X| Ok(x.clone()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn apply(&self, n: usize, x: &X) -> Result<X> {
        (self.map)(n, x)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &PresimplicialMorphism<X>) -> Self {
        let (a, b) = (self.map.clone(), first.map.clone());
        PresimplicialMorphism {
            label: format!("{}∘{}", self.label, first.label),
            map: Arc::new(move |n, x| a(n, &b(n, x)?)),
        }
    }
}

/// A presimplicial homotopy `from ∼ to`.
#[derive(Clone)]
pub struct PresimplicialHomotopy<X> {
    from: String,
    to: String,
    map: IndexedLevelMap<X>,
}

impl<X> fmt::Debug for PresimplicialHomotopy<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PresimplicialHomotopy({} ∼ {})", self.from, self.to)
    }
}

impl<X: 'static> PresimplicialHomotopy<X> {
    /// `h(n, j, x) = h_j(x)` for `x` of level `n`.
    pub fn new(
        from: impl Into<String>,
        to: impl Into<String>,
        map: impl Fn(usize, usize, &X) -> Result<X> + Send + Sync + 'static,
    ) -> Self {
        PresimplicialHomotopy { from: from.into(), to: to.into(), map: Arc::new(map) }
    }

    pub fn from_label(&self) -> &str {
        &self.from
    }

    pub fn to_label(&self) -> &str {
        &self.to
    }

    pub fn apply(&self, n: usize, j: usize, x: &X) -> Result<X> {
        if j > n {
            return Err(Error::argument(format!("h_{j} is not defined on level {n}")));
        }
        (self.map)(n, j, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismRelation {
    /// `δ_i f_n = f_{n−1} δ_i`.
    Face,
    /// `f_n(a·x) = a·f_n(x)`.
    Equivariance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MorphismViolation {
    pub relation: MorphismRelation,
    pub i: usize,
    pub n: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismReport {
    pub checked: usize,
    pub violations: Vec<MorphismViolation>,
}

impl MorphismReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomotopyRelation {
    /// `δ_i h_j = h_{j−1} δ_i`, `i < j`.
    FaceBelow,
    /// `δ_i h_i = δ_i h_{i−1}`, `0 < i ≤ n`.
    FaceDiagonal,
    /// `δ_i h_j = h_j δ_{i−1}`, `i > j+1`.
    FaceAbove,
    /// `δ_0 h_0 = f`.
    Start,
    /// `δ_{n+1} h_n = g`.
    End,
    /// `h_i(a·x) = σ_i(a)·h_i(x)`.
    Semilinearity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomotopyViolation {
    pub relation: HomotopyRelation,
    pub i: usize,
    pub j: usize,
    pub n: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomotopyReport {
    pub checked: usize,
    pub violations: Vec<HomotopyViolation>,
}

impl HomotopyReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

fn same_shape<M: SimplicialLeftModule>(b: &M, c: &M) -> Result<()> {
    if b.d() != c.d() {
        return Err(Error::argument(format!(
            "modules over 𝒜^{} and 𝒜^{} cannot be compared",
            b.d(),
            c.d()
        )));
    }
    Ok(())
}

/// Checks that `f` commutes with faces and is `A_n`-linear on levels
/// `0..=n_max`, on the sample elements of `b`.
pub fn check_presimplicial_morphism<M: SimplicialLeftModule>(
    b: &M,
    c: &M,
    f: &PresimplicialMorphism<M::Elem>,
    n_max: usize,
    seed: u64,
) -> Result<MorphismReport> {
    same_shape(b, c)?;
    let mut report = MorphismReport::default();
    let mut record = |ok: bool, relation, i, n| {
        report.checked += 1;
        let v = MorphismViolation { relation, i, n };
        if !ok && !report.violations.contains(&v) {
            report.violations.push(v);
        }
    };
    for n in 0..=n_max {
        for x in b.samples(n, seed.wrapping_add(n as u64)) {
            let fx = f.apply(n, &x)?;
            if n >= 1 {
                for i in 0..=n {
                    let lhs = c.face(n, i, &fx)?;
                    let rhs = f.apply(n - 1, &b.face(n, i, &x)?)?;
                    record(c.same(n - 1, &lhs, &rhs)?, MorphismRelation::Face, i, n);
                }
            }
            for a in b.algebra_samples(n, seed.wrapping_add(n as u64)) {
                let lhs = f.apply(n, &b.act(n, &a, &x)?)?;
                let rhs = c.act(n, &a, &fx)?;
                record(c.same(n, &lhs, &rhs)?, MorphismRelation::Equivariance, 0, n);
            }
        }
    }
    Ok(report)
}

/// Checks every relation of a presimplicial homotopy `h : f ∼ g` on levels
/// `0..=n_max` of `b`, on the sample elements of `b`.
pub fn check_presimplicial_homotopy<M: SimplicialLeftModule>(
    b: &M,
    c: &M,
    h: &PresimplicialHomotopy<M::Elem>,
    f: &PresimplicialMorphism<M::Elem>,
    g: &PresimplicialMorphism<M::Elem>,
    n_max: usize,
    seed: u64,
) -> Result<HomotopyReport> {
    use HomotopyRelation::*;
    same_shape(b, c)?;
    let mut report = HomotopyReport::default();
    let mut record = |ok: bool, relation, i, j, n| {
        report.checked += 1;
        let v = HomotopyViolation { relation, i, j, n };
        if !ok && !report.violations.contains(&v) {
            report.violations.push(v);
        }
    };
    for n in 0..=n_max {
        for x in b.samples(n, seed.wrapping_add(n as u64)) {
            let hx: Vec<M::Elem> = (0..=n).map(|j| h.apply(n, j, &x)).collect::<Result<_>>()?;
            let dx: Vec<M::Elem> =
                if n >= 1 { (0..=n).map(|i| b.face(n, i, &x)).collect::<Result<_>>()? } else { Vec::new() };
            record(c.same(n, &c.face(n + 1, 0, &hx[0])?, &f.apply(n, &x)?)?, Start, 0, 0, n);
            record(c.same(n, &c.face(n + 1, n + 1, &hx[n])?, &g.apply(n, &x)?)?, End, n + 1, n, n);
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = c.face(n + 1, i, &hx[j])?;
                    if i < j {
                        let rhs = h.apply(n - 1, j - 1, &dx[i])?;
                        record(c.same(n, &lhs, &rhs)?, FaceBelow, i, j, n);
                    } else if i == j && i > 0 {
                        let rhs = c.face(n + 1, i, &hx[j - 1])?;
                        record(c.same(n, &lhs, &rhs)?, FaceDiagonal, i, j, n);
                    } else if i > j + 1 {
                        let rhs = h.apply(n - 1, j, &dx[i - 1])?;
                        record(c.same(n, &lhs, &rhs)?, FaceAbove, i, j, n);
                    }
                }
            }
            for a in b.algebra_samples(n, seed.wrapping_add(n as u64)) {
                let ax = b.act(n, &a, &x)?;
                for (j, hxj) in hx.iter().enumerate() {
                    let lhs = h.apply(n, j, &ax)?;
                    let rhs = c.act(n + 1, &c.pure_degeneracy(n, j, &a)?, hxj)?;
                    record(c.same(n + 1, &lhs, &rhs)?, Semilinearity, j, j, n);
                }
            }
        }
    }
    Ok(report)
}

/// `h_i = σ_i f`, a homotopy `f ∼ f`.
pub fn reflexive<M: SimplicialLeftModule + 'static>(
    c: Arc<M>,
    f: &PresimplicialMorphism<M::Elem>,
) -> PresimplicialHomotopy<M::Elem> {
    let f2 = f.clone();
    PresimplicialHomotopy::new(f.label(), f.label(), move |n, i, x| c.degeneracy(n, i, &f2.apply(n, x)?))
}

/// `t_i = σ_i(f + g) − h_i`, a homotopy `g ∼ f` from `h : f ∼ g`.
pub fn symmetric<M: SimplicialLeftModule + 'static>(
    c: Arc<M>,
    f: &PresimplicialMorphism<M::Elem>,
    g: &PresimplicialMorphism<M::Elem>,
    h: &PresimplicialHomotopy<M::Elem>,
) -> Result<PresimplicialHomotopy<M::Elem>> {
    if h.from != f.label || h.to != g.label {
        return Err(Error::argument(format!(
            "homotopy {} ∼ {} does not connect {} and {}",
            h.from, h.to, f.label, g.label
        )));
    }
    let (f2, g2, h2) = (f.clone(), g.clone(), h.clone());
    Ok(PresimplicialHomotopy::new(g.label(), f.label(), move |n, i, x| {
        let sum = c.add(&f2.apply(n, x)?, &g2.apply(n, x)?);
        Ok(c.sub(&c.degeneracy(n, i, &sum)?, &h2.apply(n, i, x)?))
    }))
}

/// `s_i = h_i + t_i − σ_i g`, a homotopy `f ∼ l` from `h : f ∼ g` and
/// `t : g ∼ l`.
pub fn transitive<M: SimplicialLeftModule + 'static>(
    c: Arc<M>,
    h: &PresimplicialHomotopy<M::Elem>,
    t: &PresimplicialHomotopy<M::Elem>,
    g: &PresimplicialMorphism<M::Elem>,
) -> Result<PresimplicialHomotopy<M::Elem>> {
    if h.to != g.label || t.from != g.label {
        return Err(Error::argument(format!(
            "cannot compose {} ∼ {} with {} ∼ {} through {}",
            h.from, h.to, t.from, t.to, g.label
        )));
    }
    let (h2, t2, g2) = (h.clone(), t.clone(), g.clone());
    Ok(PresimplicialHomotopy::new(h.from.clone(), t.to.clone(), move |n, i, x| {
        let sum = c.add(&h2.apply(n, i, x)?, &t2.apply(n, i, x)?);
        Ok(c.sub(&sum, &c.degeneracy(n, i, &g2.apply(n, x)?)?))
    }))
}

/// Multiplication by `v·u` at the first corner and `w` at the last, and by
/// `v` and `w·u` respectively, together with the homotopy between them that
/// multiplies `σ_j(x)` by `v`, `w` at the corners and `u` at the diagonal
/// position `(j+1, …, j+1)`.
pub struct CornerFamily<X> {
    pub f: PresimplicialMorphism<X>,
    pub g: PresimplicialMorphism<X>,
    pub h: PresimplicialHomotopy<X>,
}

pub fn corner_family<M: SimplicialLeftModule + 'static>(
    m: Arc<M>,
    v: M::Entry,
    u: M::Entry,
    w: M::Entry,
    f_label: &str,
    g_label: &str,
) -> CornerFamily<M::Elem> {
    let d = m.d();
    let first = move |_n: usize| vec![0u8; d];
    let last = move |n: usize| vec![(n + 1) as u8; d];
    let vu = m.entry_mul(&v, &u);
    let wu = m.entry_mul(&w, &u);
    let (mf, w1) = (m.clone(), w.clone());
    let f = PresimplicialMorphism::new(f_label, move |n, x| {
        let p = mf.pure_from_entries(n, &[(first(n), vu.clone()), (last(n), w1.clone())])?;
        mf.act(n, &p, x)
    });
    let (mg, v1) = (m.clone(), v.clone());
    let g = PresimplicialMorphism::new(g_label, move |n, x| {
        let p = mg.pure_from_entries(n, &[(first(n), v1.clone()), (last(n), wu.clone())])?;
        mg.act(n, &p, x)
    });
    let mh = m;
    let h = PresimplicialHomotopy::new(f_label, g_label, move |n, j, x| {
        let p = mh.pure_from_entries(
            n + 1,
            &[(first(n + 1), v.clone()), (last(n + 1), w.clone()), (vec![(j + 1) as u8; d], u.clone())],
        )?;
        mh.act(n + 1, &p, &mh.degeneracy(n, j, x)?)
    });
    CornerFamily { f, g, h }
}

/// Applies a map of `ℬ^d` to `M ⊗_{A_n} B_n` in canonical coordinates:
/// `m ⊗ b ↦ m ⊗ f(b)`.
fn induced_on_tensor<F: Field>(
    tp: &ConcreteTensorProduct<F>,
    n: usize,
    out_level: usize,
    x: &TensorElement<F>,
    map: impl Fn(&BarVector<F::Elem>) -> Result<BarVector<F::Elem>>,
) -> Result<TensorElement<F>> {
    let f = tp.field();
    let lifted = tp.phi_inv(n, x)?;
    let mut terms = Vec::new();
    for (m, p) in lifted.terms {
        let image = map(&BarVector::pure(f.one(), p))?;
        if image.level != out_level {
            return Err(Error::argument(format!("map landed in level {}, expected {out_level}", image.level)));
        }
        for (c, q) in image.terms {
            terms.push((m.iter().map(|e| f.mul(&c, e)).collect(), q));
        }
    }
    tp.phi(&TensorOverAn { level: out_level, terms })
}

fn basis_matrix<F: Field>(
    tp: &ConcreteTensorProduct<F>,
    n: usize,
    out_level: usize,
    map: impl Fn(&TensorElement<F>) -> Result<TensorElement<F>>,
) -> Result<SparseMatrix<F>> {
    let f = tp.field();
    let (md, ad, d) = (tp.module().dim(), tp.bar().algebra().dim(), tp.d());
    let src = capped_basis(md, ad, arity(d, n), n, usize::MAX)?;
    let tgt = capped_basis(md, ad, arity(d, out_level), out_level, usize::MAX)?;
    let columns = (0..src.len())
        .map(|k| {
            let y = map(&TensorElement::basis(f, src.decode(k)))?;
            Ok(y.terms().iter().map(|(tag, c)| (tgt.encode(tag) as u32, c.clone())).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    SparseMatrix::from_columns(f, tgt.len(), columns)
}

/// `F_n` on `M ⊗_{A_n} B_n`.
pub fn induced_morphism_matrix<F: Field>(
    tp: &ConcreteTensorProduct<F>,
    f: &PresimplicialMorphism<BarVector<F::Elem>>,
    n: usize,
) -> Result<SparseMatrix<F>> {
    basis_matrix(tp, n, n, |x| induced_on_tensor(tp, n, n, x, |b| f.apply(n, b)))
}

/// `H_n = Σ_i (−1)^i h_i'` from level `n` to `n+1`.
pub fn induced_homotopy_matrix<F: Field>(
    tp: &ConcreteTensorProduct<F>,
    h: &PresimplicialHomotopy<BarVector<F::Elem>>,
    n: usize,
) -> Result<SparseMatrix<F>> {
    let field = tp.field().clone();
    basis_matrix(tp, n, n + 1, |x| {
        let mut acc = TensorElement::zero(arity(tp.d(), n + 1));
        for i in 0..=n {
            let y = induced_on_tensor(tp, n, n + 1, x, |b| h.apply(n, i, b))?;
            acc.add_scaled(&field, &y, &sign(&field, i));
        }
        Ok(acc)
    })
}

fn add_matrices<F: Field>(field: &F, a: &SparseMatrix<F>, b: &SparseMatrix<F>, scale_b: &F::Elem) -> Result<SparseMatrix<F>> {
    let mut trip = Vec::new();
    for (c, col) in a.columns().iter().enumerate() {
        trip.extend(col.iter().map(|(r, v)| (*r as usize, c, v.clone())));
    }
    for (c, col) in b.columns().iter().enumerate() {
        trip.extend(col.iter().map(|(r, v)| (*r as usize, c, field.mul(scale_b, v))));
    }
    SparseMatrix::from_triplets(field, a.rows(), a.cols(), trip)
}

/// Result of transporting (co)homology along a presimplicial homotopy
/// equivalence `f : B ⇄ C : g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    /// Dimensions for `B`, then for `C`, in degrees `0..n_max` (the top
    /// degree of the computed complex is left out since it is only bounded).
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// `F` and `G` commute with the differentials.
    pub chain_maps: bool,
    /// `∂H + H∂ = GF − id` and `∂T + T∂ = FG − id` (dually for cochains).
    pub homotopies: bool,
}

impl TransferReport {
    pub fn equal(&self) -> bool {
        self.source == self.target
    }
}

/// The equivalence data of a transfer.
pub struct Equivalence<'a, X> {
    pub f: &'a PresimplicialMorphism<X>,
    pub g: &'a PresimplicialMorphism<X>,
    /// `g∘f ∼ id_B`.
    pub h: &'a PresimplicialHomotopy<X>,
    /// `f∘g ∼ id_C`.
    pub t: &'a PresimplicialHomotopy<X>,
}

fn validate_equivalence<F: Field>(
    b: &ConcreteBar<F>,
    c: &ConcreteBar<F>,
    eq: &Equivalence<'_, BarVector<F::Elem>>,
    n_max: usize,
) -> Result<()> {
    let id = PresimplicialMorphism::identity();
    let checks = [
        check_presimplicial_morphism(b, c, eq.f, n_max, 11)?.is_empty(),
        check_presimplicial_morphism(c, b, eq.g, n_max, 12)?.is_empty(),
        check_presimplicial_homotopy(b, b, eq.h, &eq.g.after(eq.f), &id, n_max.saturating_sub(1), 13)?.is_empty(),
        check_presimplicial_homotopy(c, c, eq.t, &eq.f.after(eq.g), &id, n_max.saturating_sub(1), 14)?.is_empty(),
    ];
    if checks.iter().all(|&ok| ok) {
        Ok(())
    } else {
        Err(Error::input("the given maps are not a presimplicial homotopy equivalence"))
    }
}

fn tensor_products<F: Field>(
    module: &SymmetricBimodule<F>,
    b: &ConcreteBar<F>,
    c: &ConcreteBar<F>,
    n_max: usize,
) -> Result<(ConcreteTensorProduct<F>, ConcreteTensorProduct<F>)> {
    if b.d() != c.d() {
        return Err(Error::argument("source and target must be over the same 𝒜^d"));
    }
    let tb = ConcreteTensorProduct::new(b.d(), b.algebra().clone(), module.clone(), n_max)?;
    let tc = ConcreteTensorProduct::new(c.d(), c.algebra().clone(), module.clone(), n_max)?;
    Ok((tb, tc))
}

fn square<F: Field>(field: &F, x: &SparseMatrix<F>, y: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
    x.mul(field, y)
}

/// Checks `∂_{n+1} H_n + H_{n−1} ∂_n = G_n F_n − id` at every `n < n_max`.
fn homotopy_formula<F: Field>(
    field: &F,
    complex: &ChainComplex<F>,
    hs: &[SparseMatrix<F>],
    gf: &[SparseMatrix<F>],
    n_max: usize,
) -> Result<bool> {
    let minus = field.neg(&field.one());
    for n in 0..n_max {
        let mut lhs = square(field, complex.boundary(n + 1).expect("n < n_max"), &hs[n])?;
        if n >= 1 {
            let t = square(field, &hs[n - 1], complex.boundary(n).expect("n ≥ 1"))?;
            lhs = add_matrices(field, &lhs, &t, &field.one())?;
        }
        let rhs = add_matrices(field, &gf[n], &SparseMatrix::identity(field, gf[n].rows()), &minus)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Computes `H_•(M ⊗_𝒜 B)` and `H_•(M ⊗_𝒜 C)` in degrees `0..n_max` and
/// checks the chain-level consequences of the equivalence.
pub fn transfer_homology<F: Field>(
    module: &SymmetricBimodule<F>,
    b: &ConcreteBar<F>,
    c: &ConcreteBar<F>,
    eq: &Equivalence<'_, BarVector<F::Elem>>,
    n_max: usize,
) -> Result<TransferReport> {
    validate_equivalence(b, c, eq, n_max)?;
    let (tb, tc) = tensor_products(module, b, c, n_max)?;
    let field = tb.field().clone();
    let cb = tb.complex(n_max, usize::MAX)?;
    let cc = tc.complex(n_max, usize::MAX)?;
    let fm: Vec<_> = (0..=n_max).map(|n| induced_morphism_matrix(&tb, eq.f, n)).collect::<Result<_>>()?;
    let gm: Vec<_> = (0..=n_max).map(|n| induced_morphism_matrix(&tc, eq.g, n)).collect::<Result<_>>()?;
    let mut chain_maps = true;
    for n in 1..=n_max {
        let df = square(&field, cc.boundary(n).unwrap(), &fm[n])?;
        let fd = square(&field, &fm[n - 1], cb.boundary(n).unwrap())?;
        let dg = square(&field, cb.boundary(n).unwrap(), &gm[n])?;
        let gd = square(&field, &gm[n - 1], cc.boundary(n).unwrap())?;
        chain_maps &= df == fd && dg == gd;
    }
    let hm: Vec<_> = (0..n_max).map(|n| induced_homotopy_matrix(&tb, eq.h, n)).collect::<Result<_>>()?;
    let tm: Vec<_> = (0..n_max).map(|n| induced_homotopy_matrix(&tc, eq.t, n)).collect::<Result<_>>()?;
    let gf: Vec<_> = (0..=n_max).map(|n| square(&field, &gm[n], &fm[n])).collect::<Result<_>>()?;
    let fg: Vec<_> = (0..=n_max).map(|n| square(&field, &fm[n], &gm[n])).collect::<Result<_>>()?;
    let homotopies = homotopy_formula(&field, &cb, &hm, &gf, n_max)? && homotopy_formula(&field, &cc, &tm, &fg, n_max)?;
    let hb = homology_dims(&cb)?;
    let hc = homology_dims(&cc)?;
    Ok(TransferReport {
        source: hb.exact_homology(),
        target: hc.exact_homology(),
        chain_maps,
        homotopies,
    })
}

/// Matrix of `X^* : Hom(C_m, N) → Hom(B_n, N)` for a map `X : B_n → C_m`,
/// in the cochain bases of [`cohomology_complex`]. With regular coefficients
/// `X(1 ⊗ e_t) = Σ c · e_u ⊗ e_s`, and then `(X^*ψ)(e_t) = Σ c · e_u · ψ(e_s)`.
///
/// [`cohomology_complex`]: crate::structures::cohomology_complex
pub fn dual_matrix<F: Field>(
    regular: &ConcreteTensorProduct<F>,
    module: &SymmetricBimodule<F>,
    n: usize,
    out_level: usize,
    map: impl Fn(&BarVector<F::Elem>) -> Result<BarVector<F::Elem>>,
) -> Result<SparseMatrix<F>> {
    let field = regular.field();
    let alg = regular.bar().algebra();
    let (ad, md, d) = (alg.dim(), module.dim(), regular.d());
    let src = capped_basis(1, ad, arity(d, n), n, usize::MAX)?;
    let tgt = capped_basis(1, ad, arity(d, out_level), out_level, usize::MAX)?;
    let mut trip = Vec::new();
    for t in 0..src.len() {
        let slots = src.decode(t).slots;
        let terms = alg
            .unit()
            .iter()
            .enumerate()
            .map(|(k, c)| (crate::loday::BasisTag::new(k as u16, slots.clone()), c.clone()));
        let x = TensorElement::from_terms(field, slots.len(), terms)?;
        let y = induced_on_tensor(regular, n, out_level, &x, &map)?;
        for (tag, c) in y.terms().iter() {
            let s = tgt.encode(&crate::loday::BasisTag::new(0, tag.slots.clone()));
            for k in 0..md {
                for (k2, a) in module.act_basis(tag.module as usize, k) {
                    trip.push((*k2 as usize * src.len() + t, k * tgt.len() + s, field.mul(c, a)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(field, md * src.len(), md * tgt.len(), trip)
}

/// Checks `H^*_n δ^n + δ^{n−1} H^*_{n−1} = Φ_n − id` at every `n < n_max`.
fn cohomotopy_formula<F: Field>(
    field: &F,
    complex: &ChainComplex<F>,
    hs: &[SparseMatrix<F>],
    phi: &[SparseMatrix<F>],
    n_max: usize,
) -> Result<bool> {
    let minus = field.neg(&field.one());
    for n in 0..n_max {
        let mut lhs = square(field, &hs[n], complex.coboundary(n).expect("n < n_max"))?;
        if n >= 1 {
            let t = square(field, complex.coboundary(n - 1).expect("n ≥ 1"), &hs[n - 1])?;
            lhs = add_matrices(field, &lhs, &t, &field.one())?;
        }
        let rhs = add_matrices(field, &phi[n], &SparseMatrix::identity(field, phi[n].rows()), &minus)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Computes `H^•(Hom_𝒜(B, 𝒩_d(M)))` and `H^•(Hom_𝒜(C, 𝒩_d(M)))` in degrees
/// `0..n_max` and checks the cochain-level consequences of the equivalence.
pub fn transfer_cohomology<F: Field>(
    module: &SymmetricBimodule<F>,
    b: &ConcreteBar<F>,
    c: &ConcreteBar<F>,
    eq: &Equivalence<'_, BarVector<F::Elem>>,
    n_max: usize,
) -> Result<TransferReport> {
    validate_equivalence(b, c, eq, n_max)?;
    if b.d() != c.d() {
        return Err(Error::argument("source and target must be over the same 𝒜^d"));
    }
    let d = b.d();
    let regular_b = SymmetricBimodule::regular(b.algebra());
    let regular_c = SymmetricBimodule::regular(c.algebra());
    let rb = ConcreteTensorProduct::new(d, b.algebra().clone(), regular_b, n_max)?;
    let rc = ConcreteTensorProduct::new(d, c.algebra().clone(), regular_c, n_max)?;
    let field = rb.field().clone();
    let cb = crate::structures::cohomology_complex(d, b.algebra(), module, n_max, usize::MAX)?;
    let cc = crate::structures::cohomology_complex(d, c.algebra(), module, n_max, usize::MAX)?;
    // F^* : Hom(C, N) → Hom(B, N) and G^* : Hom(B, N) → Hom(C, N).
    let fs: Vec<_> = (0..=n_max).map(|n| dual_matrix(&rb, module, n, n, |x| eq.f.apply(n, x))).collect::<Result<_>>()?;
    let gs: Vec<_> = (0..=n_max).map(|n| dual_matrix(&rc, module, n, n, |x| eq.g.apply(n, x))).collect::<Result<_>>()?;
    let mut cochain_maps = true;
    for n in 0..n_max {
        let df = square(&field, cb.coboundary(n).unwrap(), &fs[n])?;
        let fd = square(&field, &fs[n + 1], cc.coboundary(n).unwrap())?;
        let dg = square(&field, cc.coboundary(n).unwrap(), &gs[n])?;
        let gd = square(&field, &gs[n + 1], cb.coboundary(n).unwrap())?;
        cochain_maps &= df == fd && dg == gd;
    }
    let alternating = |tp: &ConcreteTensorProduct<F>, h: &PresimplicialHomotopy<BarVector<F::Elem>>, n: usize| {
        let bar = tp.bar();
        dual_matrix(tp, module, n, n + 1, |x| {
            let mut acc = BarVector::zero(n + 1);
            for i in 0..=n {
                acc = bar.add(&acc, &bar.scale(&sign(bar.field(), i), &h.apply(n, i, x)?));
            }
            Ok(acc)
        })
    };
    let hs: Vec<_> = (0..n_max).map(|n| alternating(&rb, eq.h, n)).collect::<Result<_>>()?;
    let ts: Vec<_> = (0..n_max).map(|n| alternating(&rc, eq.t, n)).collect::<Result<_>>()?;
    // (g∘f)^* = f^* g^* on Hom(B, N).
    let gf_dual: Vec<_> = (0..=n_max).map(|n| square(&field, &fs[n], &gs[n])).collect::<Result<_>>()?;
    let fg_dual: Vec<_> = (0..=n_max).map(|n| square(&field, &gs[n], &fs[n])).collect::<Result<_>>()?;
    let homotopies = cohomotopy_formula(&field, &cb, &hs, &gf_dual, n_max)?
        && cohomotopy_formula(&field, &cc, &ts, &fg_dual, n_max)?;
    Ok(TransferReport {
        source: cohomology_dims(&cb)?.exact_homology(),
        target: cohomology_dims(&cc)?.exact_homology(),
        chain_maps: cochain_maps,
        homotopies,
    })
}
