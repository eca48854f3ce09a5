//! The Loday functor `ℒ(A,M)` on finite pointed sets and the chain complex
//! of a finite pointed simplicial set.
//!
//! `ℒ(A,M)(v_+) = M ⊗ A^{⊗v}`, and a pointed map `φ: v_+ → w_+` sends
//! `m ⊗ a_1 ⊗ … ⊗ a_v` to `m·b_0 ⊗ b_1 ⊗ … ⊗ b_w` where `b_i` is the product
//! of the `a_j` with `φ(j) = i` (the unit when no `j` maps there).
//!
//! Basis tensors are enumerated with the module index slowest and the
//! algebra slots in positional lexicographic order, so the flat index of
//! `m_k ⊗ e_{s_1} ⊗ … ⊗ e_{s_v}` is `k·n^v + Σ s_t n^{v−t}` for `n = dim A`.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{CommutativeAlgebra, SymmetricBimodule};
use crate::error::{Error, Result};
use crate::field::{sign, Field, Ring};
use crate::formal::{FormalMonomial, FormalPure};
use crate::homology::{ChainComplex, Orientation, SparseMatrix};
use crate::lincomb::LinComb;

/// Default cap on the dimension of a single chain group.
pub const DEFAULT_CAP: usize = 1 << 22;

/// The pointed set `v_+ = {0, 1, …, v}` with basepoint 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointedSet {
    size: usize,
}

impl PointedSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::argument("a pointed set contains at least its basepoint"));
        }
        Ok(PointedSet { size })
    }

    /// `v_+` for `v` non-basepoint elements.
    pub fn plus(v: usize) -> Self {
        PointedSet { size: v + 1 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of non-basepoint elements.
    pub fn arity(&self) -> usize {
        self.size - 1
    }
}

/// A basepoint-preserving map `v_+ → w_+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedMap {
    images: Vec<u32>,
    target_size: usize,
}

impl PointedMap {
    pub fn new(images: Vec<u32>, target_size: usize) -> Result<Self> {
        if images.first() != Some(&0) {
            return Err(Error::argument("a pointed map must send the basepoint 0 to 0"));
        }
        if let Some(bad) = images.iter().find(|&&x| x as usize >= target_size) {
            return Err(Error::argument(format!("image {bad} outside a target of size {target_size}")));
        }
        Ok(PointedMap { images, target_size })
    }

    pub fn identity(size: usize) -> Self {
        PointedMap { images: (0..size as u32).collect(), target_size: size }
    }

    pub fn source(&self) -> PointedSet {
        PointedSet { size: self.images.len() }
    }

    pub fn target(&self) -> PointedSet {
        PointedSet { size: self.target_size }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &PointedMap) -> Result<PointedMap> {
        if then.images.len() != self.target_size {
            return Err(Error::argument("maps are not composable"));
        }
        Ok(PointedMap {
            images: self.images.iter().map(|&x| then.images[x as usize]).collect(),
            target_size: then.target_size,
        })
    }

    /// Source elements `j ≥ 1` grouped by their image.
    pub fn fibers(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.target_size];
        for (j, &t) in self.images.iter().enumerate().skip(1) {
            out[t as usize].push(j as u32);
        }
        out
    }
}

/// A pointed simplicial set with finitely many cells per level, given by
/// its face maps up to `max_level`. Cell 0 of each level is the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePointedSimplicialSet {
    level_sizes: Vec<usize>,
    /// `faces[n][i] = d_i : X_n → X_{n−1}`; `faces[0]` is empty.
    faces: Vec<Vec<PointedMap>>,
}

impl FinitePointedSimplicialSet {
    /// Checks shapes only; see [`check_face_identities`](Self::check_face_identities).
    pub fn new(level_sizes: Vec<usize>, faces: Vec<Vec<PointedMap>>) -> Result<Self> {
        if level_sizes.is_empty() || level_sizes.contains(&0) {
            return Err(Error::input("every level needs at least the basepoint"));
        }
        if faces.len() != level_sizes.len() {
            return Err(Error::input(format!(
                "{} levels but face data for {}",
                level_sizes.len(),
                faces.len()
            )));
        }
        for (n, fs) in faces.iter().enumerate() {
            let expected = if n == 0 { 0 } else { n + 1 };
            if fs.len() != expected {
                return Err(Error::input(format!("level {n} needs {expected} face maps, got {}", fs.len())));
            }
            for (i, f) in fs.iter().enumerate() {
                if f.source().size() != level_sizes[n] || f.target().size() != level_sizes[n - 1] {
                    return Err(Error::input(format!(
                        "face d_{i} at level {n} must map {} cells to {}",
                        level_sizes[n],
                        level_sizes[n - 1]
                    )));
                }
            }
        }
        Ok(FinitePointedSimplicialSet { level_sizes, faces })
    }

    pub fn max_level(&self) -> usize {
        self.level_sizes.len() - 1
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.level_sizes[n]
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    pub fn face(&self, n: usize, i: usize) -> &PointedMap {
        &self.faces[n][i]
    }

    pub fn faces(&self, n: usize) -> &[PointedMap] {
        &self.faces[n]
    }

    /// First violation of `d_i d_j = d_{j−1} d_i` (`i < j`) as `(n, i, j)`.
    pub fn face_identity_violation(&self) -> Option<(usize, usize, usize)> {
        for n in 2..=self.max_level() {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.faces[n][j].then(&self.faces[n - 1][i]).ok()?;
                    let rhs = self.faces[n][i].then(&self.faces[n - 1][j - 1]).ok()?;
                    if lhs != rhs {
                        return Some((n, i, j));
                    }
                }
            }
        }
        None
    }

    pub fn check_face_identities(&self) -> Result<()> {
        match self.face_identity_violation() {
            None => Ok(()),
            Some((n, i, j)) => Err(Error::input(format!(
                "face identity d_{i} d_{j} = d_{} d_{i} fails at level {n}",
                j - 1
            ))),
        }
    }
}

/// A basis tensor `m_module ⊗ e_{slots[0]} ⊗ … ⊗ e_{slots[v−1]}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisTag {
    pub module: u16,
    pub slots: Vec<u16>,
}

impl BasisTag {
    pub fn new(module: u16, slots: Vec<u16>) -> Self {
        BasisTag { module, slots }
    }
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.module)?;
        for s in &self.slots {
            write!(f, "⊗e{s}")?;
        }
        Ok(())
    }
}

/// The basis of `M ⊗ A^{⊗arity}` in its fixed enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorBasis {
    module_dim: usize,
    alg_dim: usize,
    arity: usize,
    len: usize,
}

impl TensorBasis {
    /// Returns `None` if the dimension overflows `usize`.
    pub fn new(module_dim: usize, alg_dim: usize, arity: usize) -> Option<Self> {
        let mut len = module_dim;
        for _ in 0..arity {
            len = len.checked_mul(alg_dim)?;
        }
        Some(TensorBasis { module_dim, alg_dim, arity, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn encode(&self, tag: &BasisTag) -> usize {
        tag.slots
            .iter()
            .fold(tag.module as usize, |acc, &s| acc * self.alg_dim + s as usize)
    }

    /// Decodes into `slots` (length `arity`), returning the module index.
    pub fn decode_into(&self, mut index: usize, slots: &mut [u16]) -> u16 {
        for s in slots.iter_mut().rev() {
            *s = (index % self.alg_dim) as u16;
            index /= self.alg_dim;
        }
        index as u16
    }

    pub fn decode(&self, index: usize) -> BasisTag {
        let mut slots = vec![0; self.arity];
        let module = self.decode_into(index, &mut slots);
        BasisTag { module, slots }
    }
}

/// Dimension of `M ⊗ A^{⊗arity}` as a string, for size-cap messages.
pub fn dimension_string(module_dim: usize, alg_dim: usize, arity: usize) -> String {
    match TensorBasis::new(module_dim, alg_dim, arity) {
        Some(b) => b.len().to_string(),
        None => format!("{module_dim}·{alg_dim}^{arity}"),
    }
}

/// An element of `M ⊗ A^{⊗arity}`.
#[derive(Clone, Debug)]
pub struct TensorElement<F: Ring> {
    arity: usize,
    terms: LinComb<BasisTag, F::Elem>,
}

impl<F: Ring> PartialEq for TensorElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.terms == other.terms
    }
}

impl<F: Ring> Eq for TensorElement<F> {}

impl<F: Field> TensorElement<F> {
    pub fn zero(arity: usize) -> Self {
        TensorElement { arity, terms: LinComb::new() }
    }

    pub fn basis(field: &F, tag: BasisTag) -> Self {
        TensorElement { arity: tag.slots.len(), terms: LinComb::basis(field, tag) }
    }

    pub fn from_terms(
        field: &F,
        arity: usize,
        terms: impl IntoIterator<Item = (BasisTag, F::Elem)>,
    ) -> Result<Self> {
        let mut out = LinComb::new();
        for (tag, c) in terms {
            if tag.slots.len() != arity {
                return Err(Error::argument(format!(
                    "basis tag of arity {} in an element of arity {arity}",
                    tag.slots.len()
                )));
            }
            out.add_term(field, tag, c);
        }
        Ok(TensorElement { arity, terms: out })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &LinComb<BasisTag, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn plus(&self, field: &F, other: &Self) -> Self {
        TensorElement { arity: self.arity, terms: self.terms.plus(field, &other.terms) }
    }

    pub fn minus(&self, field: &F, other: &Self) -> Self {
        TensorElement { arity: self.arity, terms: self.terms.minus(field, &other.terms) }
    }

    pub fn scaled(&self, field: &F, c: &F::Elem) -> Self {
        TensorElement { arity: self.arity, terms: self.terms.scaled(field, c) }
    }

    pub fn add_scaled(&mut self, field: &F, other: &Self, c: &F::Elem) {
        self.terms.add_scaled(field, &other.terms, c);
    }

    /// Dense coordinates in the basis of [`TensorBasis`].
    pub fn to_dense(&self, field: &F, module_dim: usize, alg_dim: usize) -> Vec<F::Elem> {
        let basis = TensorBasis::new(module_dim, alg_dim, self.arity).expect("dense vector fits in memory");
        let mut out = vec![field.zero(); basis.len()];
        for (tag, c) in self.terms.iter() {
            out[basis.encode(tag)] = c.clone();
        }
        out
    }

    pub fn from_sparse(
        field: &F,
        basis: &TensorBasis,
        entries: &[(u32, F::Elem)],
    ) -> Self {
        let mut terms = LinComb::new();
        for (k, c) in entries {
            terms.add_term(field, basis.decode(*k as usize), c.clone());
        }
        TensorElement { arity: basis.arity(), terms }
    }
}

/// Lookup tables for multiplying basis vectors when every product is a
/// scalar multiple of a single basis vector.
#[derive(Clone, Debug)]
struct MonomialTables<E> {
    unit: Option<u16>,
    prod: Vec<Option<(u16, E)>>,
    act: Vec<Option<(u16, E)>>,
    /// `1 · m_k`, used when the basepoint fiber is empty.
    unit_act: Vec<Option<(u16, E)>>,
    /// `dim(A)^k` for `k ≤ 64`, saturating.
    pow: Vec<usize>,
}

/// The pair `(A, M)` with precomputed product tables.
#[derive(Clone, Debug)]
pub struct Coefficients<'a, F: Field> {
    pub alg: &'a CommutativeAlgebra<F>,
    pub module: &'a SymmetricBimodule<F>,
    monomial: Option<MonomialTables<F::Elem>>,
}

impl<'a, F: Field> Coefficients<'a, F> {
    pub fn new(alg: &'a CommutativeAlgebra<F>, module: &'a SymmetricBimodule<F>) -> Result<Self> {
        if module.alg_dim() != alg.dim() {
            return Err(Error::argument(format!(
                "module is over an algebra of dimension {}, not {}",
                module.alg_dim(),
                alg.dim()
            )));
        }
        let single = |v: &[(u16, F::Elem)]| -> Option<Option<(u16, F::Elem)>> {
            match v.len() {
                0 => Some(None),
                1 => Some(Some(v[0].clone())),
                _ => None,
            }
        };
        let n = alg.dim();
        let monomial = (|| {
            let unit = alg.unit_index().map(|u| u as u16);
            let prod = (0..n * n).map(|k| single(alg.product(k / n, k % n))).collect::<Option<Vec<_>>>()?;
            let md = module.dim();
            let act = (0..n * md)
                .map(|k| single(module.act_basis(k / md, k % md)))
                .collect::<Option<Vec<_>>>()?;
            let f = alg.field();
            let unit_act = (0..md)
                .map(|m| {
                    let mut v = vec![f.zero(); md];
                    for (a, ca) in alg.unit().iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
                        for (t, k) in module.act_basis(a, m) {
                            v[*t as usize] = f.add(&v[*t as usize], &f.mul(ca, k));
                        }
                    }
                    let v: Vec<_> = v.into_iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(t, c)| (t as u16, c)).collect();
                    single(&v)
                })
                .collect::<Option<Vec<_>>>()?;
            let pow = std::iter::successors(Some(1usize), |p| Some(p.saturating_mul(n))).take(65).collect();
            Some(MonomialTables { unit, prod, act, unit_act, pow })
        })();
        Ok(Coefficients { alg, module, monomial })
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial.is_some()
    }

    pub fn basis(&self, arity: usize) -> Option<TensorBasis> {
        TensorBasis::new(self.module.dim(), self.alg.dim(), arity)
    }

    /// Sparse coordinates of a product of basis vectors (the unit if empty).
    pub(crate) fn fiber_product(&self, factors: impl Iterator<Item = u16>) -> Vec<(u16, F::Elem)> {
        let f = self.field();
        let n = self.alg.dim();
        let mut cur: Vec<F::Elem> = self.alg.unit().to_vec();
        for a in factors {
            let mut next = vec![f.zero(); n];
            for (k, ck) in cur.iter().enumerate() {
                if f.is_zero(ck) {
                    continue;
                }
                for (t, v) in self.alg.product(k, a as usize) {
                    let t = *t as usize;
                    next[t] = f.add(&next[t], &f.mul(ck, v));
                }
            }
            cur = next;
        }
        cur.into_iter()
            .enumerate()
            .filter(|(_, v)| !f.is_zero(v))
            .map(|(k, v)| (k as u16, v))
            .collect()
    }
}

/// A basis vector `m ⊗ e_{slots}` together with the flat indices of every
/// prefix of its slots, reusable across columns.
#[derive(Clone, Debug, Default)]
pub struct SourceDigits {
    module: u16,
    slots: Vec<u16>,
    /// `prefix[k]` is the index of `slots[..k]` in base `dim(A)`.
    prefix: Vec<usize>,
}

impl SourceDigits {
    pub fn load(&mut self, basis: &TensorBasis, index: usize) {
        self.slots.resize(basis.arity(), 0);
        self.module = basis.decode_into(index, &mut self.slots);
        self.fill_prefix(basis.alg_dim);
    }

    pub fn from_tag(alg_dim: usize, tag: &BasisTag) -> Self {
        let mut d = SourceDigits { module: tag.module, slots: tag.slots.clone(), prefix: Vec::new() };
        d.fill_prefix(alg_dim);
        d
    }

    fn fill_prefix(&mut self, n: usize) {
        self.prefix.clear();
        let mut acc = 0usize;
        self.prefix.push(0);
        for &s in &self.slots {
            acc = acc.wrapping_mul(n).wrapping_add(s as usize);
            self.prefix.push(acc);
        }
    }
}

/// Target slots in order: a run of singleton fibers over consecutive source
/// slots, or a single fiber that needs multiplying out.
#[derive(Clone, Copy, Debug)]
enum Step {
    Run { start: u32, len: u32 },
    Fold(u32),
}

/// The linear map `ℒ(A,M)(φ)` prepared for repeated application.
#[derive(Clone, Debug)]
pub struct InducedMap {
    /// Source slots (1-based) grouped by target element.
    fibers: Vec<Vec<u32>>,
    steps: Vec<Step>,
    /// Some target slot other than the basepoint has an empty preimage.
    has_empty_slot: bool,
    source_arity: usize,
    target_arity: usize,
}

impl InducedMap {
    pub fn new(phi: &PointedMap) -> Self {
        let fibers = phi.fibers();
        let mut steps: Vec<Step> = Vec::new();
        for (w, fiber) in fibers.iter().enumerate().skip(1) {
            match (fiber.as_slice(), steps.last_mut()) {
                ([s], Some(Step::Run { start, len })) if *start + *len == *s => *len += 1,
                ([s], _) => steps.push(Step::Run { start: *s, len: 1 }),
                _ => steps.push(Step::Fold(w as u32)),
            }
        }
        InducedMap {
            has_empty_slot: fibers[1..].iter().any(Vec::is_empty),
            fibers,
            steps,
            source_arity: phi.source().arity(),
            target_arity: phi.target().arity(),
        }
    }

    pub fn source_arity(&self) -> usize {
        self.source_arity
    }

    pub fn target_arity(&self) -> usize {
        self.target_arity
    }

    /// Applies the map to `c · x` for a basis vector `x` and appends the
    /// result, as flat target indices, to `out`.
    pub fn apply_flat<F: Field>(
        &self,
        coeffs: &Coefficients<'_, F>,
        x: &SourceDigits,
        c: &F::Elem,
        out: &mut Vec<(usize, F::Elem)>,
    ) {
        let (module, src) = (x.module, x.slots.as_slice());
        let f = coeffs.field();
        let n = coeffs.alg.dim();
        let arity = self.target_arity;
        if let Some(t) = coeffs.monomial.as_ref().filter(|t| t.unit.is_some() || !self.has_empty_slot) {
            let mut coeff = c.clone();
            let mut fold = |fiber: &[u32]| -> Option<u16> {
                let Some((&first, rest)) = fiber.split_first() else { return t.unit };
                let mut cur = src[first as usize - 1];
                for &s in rest {
                    let (next, k) = t.prod[cur as usize * n + src[s as usize - 1] as usize].as_ref()?;
                    cur = *next;
                    if !f.is_one(k) {
                        coeff = f.mul(&coeff, k);
                    }
                }
                Some(cur)
            };
            let mut index = 0usize;
            for step in &self.steps {
                match *step {
                    Step::Run { start, len } => {
                        let (a, b, p) = (start as usize - 1, (start + len) as usize - 1, t.pow[(len as usize).min(64)]);
                        index = index * p + (x.prefix[b] - x.prefix[a] * p);
                    }
                    Step::Fold(w) => {
                        let Some(slot) = fold(&self.fibers[w as usize]) else { return };
                        index = index * n + slot as usize;
                    }
                }
            }
            let md = coeffs.module.dim();
            let acted = if self.fibers[0].is_empty() {
                &t.unit_act[module as usize]
            } else {
                let Some(b0) = fold(&self.fibers[0]) else { return };
                &t.act[b0 as usize * md + module as usize]
            };
            let Some((m, k)) = acted else { return };
            if !f.is_one(k) {
                coeff = f.mul(&coeff, k);
            }
            out.push((*m as usize * t.pow[arity.min(64)] + index, coeff));
            return;
        }

        // General algebras: expand each fiber product and take the
        // Cartesian product of the resulting sparse vectors.
        let mut slot_vectors = Vec::with_capacity(arity);
        for w in 1..=arity {
            let v = coeffs.fiber_product(self.fibers[w].iter().map(|&s| src[s as usize - 1]));
            if v.is_empty() {
                return;
            }
            slot_vectors.push(v);
        }
        let b0 = coeffs.fiber_product(self.fibers[0].iter().map(|&s| src[s as usize - 1]));
        let md = coeffs.module.dim();
        let mut module_vec = vec![f.zero(); md];
        for (a, ca) in &b0 {
            for (m, k) in coeffs.module.act_basis(*a as usize, module as usize) {
                let m = *m as usize;
                module_vec[m] = f.add(&module_vec[m], &f.mul(ca, k));
            }
        }
        let mut partial: Vec<(usize, F::Elem)> = module_vec
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !f.is_zero(v))
            .map(|(m, v)| (m, f.mul(&v, c)))
            .collect();
        for v in &slot_vectors {
            let mut next = Vec::with_capacity(partial.len() * v.len());
            for (idx, cp) in &partial {
                for (s, cs) in v {
                    next.push((idx * n + *s as usize, f.mul(cp, cs)));
                }
            }
            partial = next;
        }
        out.extend(partial);
    }

    /// Applies the map to an element.
    pub fn apply<F: Field>(
        &self,
        coeffs: &Coefficients<'_, F>,
        x: &TensorElement<F>,
    ) -> Result<TensorElement<F>> {
        if x.arity() != self.source_arity {
            return Err(Error::argument(format!(
                "element of arity {} given to a map from arity {}",
                x.arity(),
                self.source_arity
            )));
        }
        let f = coeffs.field();
        let target = coeffs
            .basis(self.target_arity)
            .ok_or_else(|| Error::argument("target tensor power overflows"))?;
        let mut flat = Vec::new();
        for (tag, c) in x.terms().iter() {
            self.apply_flat(coeffs, &SourceDigits::from_tag(coeffs.alg.dim(), tag), c, &mut flat);
        }
        let mut terms = LinComb::new();
        for (k, c) in flat {
            terms.add_term(f, target.decode(k), c);
        }
        Ok(TensorElement { arity: self.target_arity, terms })
    }

    /// The formal image of a pure tensor of symbols; slot 0 is the module.
    pub fn apply_formal(&self, x: &FormalPure) -> Result<FormalPure> {
        if x.len() != self.source_arity + 1 {
            return Err(Error::argument(format!(
                "formal tensor with {} slots given to a map from arity {}",
                x.len() - 1,
                self.source_arity
            )));
        }
        let mut out: FormalPure = self
            .fibers
            .iter()
            .map(|fiber| FormalMonomial::product(fiber.iter().map(|&s| &x[s as usize])))
            .collect();
        out[0] = x[0].mul(&out[0]);
        Ok(out)
    }
}

/// `ℒ(A,M)(φ)(x)`.
pub fn apply_pointed_map<F: Field>(
    phi: &PointedMap,
    alg: &CommutativeAlgebra<F>,
    module: &SymmetricBimodule<F>,
    x: &TensorElement<F>,
) -> Result<TensorElement<F>> {
    let coeffs = Coefficients::new(alg, module)?;
    InducedMap::new(phi).apply(&coeffs, x)
}

/// `ℒ(A,M)(φ)` on a formal pure tensor.
pub fn apply_pointed_map_formal(phi: &PointedMap, x: &FormalPure) -> Result<FormalPure> {
    InducedMap::new(phi).apply_formal(x)
}

/// Column `col` of `Σ (−1)^i ℒ(d_i)` with the given face maps, as sorted
/// sparse entries.
pub fn boundary_column<F: Field>(
    coeffs: &Coefficients<'_, F>,
    faces: &[InducedMap],
    source: &TensorBasis,
    col: usize,
    scratch: &mut SourceDigits,
) -> Vec<(u32, F::Elem)> {
    let f = coeffs.field();
    scratch.load(source, col);
    let mut raw = Vec::with_capacity(faces.len());
    for (i, face) in faces.iter().enumerate() {
        face.apply_flat(coeffs, scratch, &sign(f, i), &mut raw);
    }
    merge_entries(f, raw)
}

fn merge_entries<F: Field>(f: &F, mut raw: Vec<(usize, F::Elem)>) -> Vec<(u32, F::Elem)> {
    raw.sort_unstable_by_key(|(k, _)| *k);
    let mut out: Vec<(u32, F::Elem)> = Vec::with_capacity(raw.len());
    for (k, v) in raw {
        match out.last_mut() {
            Some((lk, lv)) if *lk as usize == k => *lv = f.add(lv, &v),
            _ => out.push((k as u32, v)),
        }
    }
    out.retain(|(_, v)| !f.is_zero(v));
    out
}

/// Matrix of `Σ (−1)^i ℒ(d_i)` between the tensor powers of the given
/// arities. Columns are computed in parallel and assembled in order.
pub fn alternating_face_matrix<F: Field>(
    coeffs: &Coefficients<'_, F>,
    faces: &[InducedMap],
    source: &TensorBasis,
    target: &TensorBasis,
) -> Result<SparseMatrix<F>> {
    let f = coeffs.field();
    if target.len() > u32::MAX as usize {
        return Err(Error::argument("target dimension exceeds 32-bit row indices"));
    }
    let columns: Vec<Vec<(u32, F::Elem)>> = (0..source.len())
        .into_par_iter()
        .map_init(SourceDigits::default, |scratch, col| boundary_column(coeffs, faces, source, col, scratch))
        .collect();
    SparseMatrix::from_columns(f, target.len(), columns)
}

/// Checks the size cap for a degree, returning the basis on success.
pub fn capped_basis(
    module_dim: usize,
    alg_dim: usize,
    arity: usize,
    degree: usize,
    cap: usize,
) -> Result<TensorBasis> {
    match TensorBasis::new(module_dim, alg_dim, arity) {
        Some(b) if b.len() <= cap && b.len() <= u32::MAX as usize => Ok(b),
        _ => Err(Error::SizeCap { degree, dim: dimension_string(module_dim, alg_dim, arity), cap }),
    }
}

/// The complex `C_n = ℒ(A,M)(X_n)` with `∂_n = Σ (−1)^i d_i^*`, degrees
/// `0..=n_max`.
pub fn chain_complex_from_simplicial_set<F: Field>(
    x: &FinitePointedSimplicialSet,
    alg: &CommutativeAlgebra<F>,
    module: &SymmetricBimodule<F>,
    n_max: usize,
    cap: usize,
) -> Result<ChainComplex<F>> {
    if n_max > x.max_level() {
        return Err(Error::argument(format!(
            "n_max = {n_max} exceeds the simplicial set's max level {}",
            x.max_level()
        )));
    }
    x.check_face_identities()?;
    let coeffs = Coefficients::new(alg, module)?;
    let bases = (0..=n_max)
        .map(|n| capped_basis(module.dim(), alg.dim(), x.level_size(n) - 1, n, cap))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let faces: Vec<InducedMap> = x.faces(n).iter().map(InducedMap::new).collect();
        maps.push(alternating_face_matrix(&coeffs, &faces, &bases[n], &bases[n - 1])?);
    }
    ChainComplex::new(
        alg.field().clone(),
        bases.iter().map(TensorBasis::len).collect(),
        maps,
        Orientation::Homological,
    )
}

/// Verifies `∂_n ∘ ∂_{n+1} = 0` for `1 ≤ n < n_max` while holding only one
/// boundary matrix at a time. Returns the first failing `n`, if any.
pub fn streaming_square_zero<F: Field>(
    coeffs: &Coefficients<'_, F>,
    level_arity: impl Fn(usize) -> usize,
    faces_at: impl Fn(usize) -> Vec<InducedMap>,
    n_max: usize,
    cap: usize,
) -> Result<Option<usize>> {
    let f = coeffs.field();
    let md = coeffs.module.dim();
    let ad = coeffs.alg.dim();
    let mut prev: Option<SparseMatrix<F>> = None;
    for n in 1..=n_max {
        let src = capped_basis(md, ad, level_arity(n), n, cap)?;
        let tgt = capped_basis(md, ad, level_arity(n - 1), n - 1, cap)?;
        let faces = faces_at(n);
        match prev.take() {
            None => {
                prev = Some(alternating_face_matrix(coeffs, &faces, &src, &tgt)?);
            }
            Some(lower) => {
                let init = || (SourceDigits::default(), Vec::new(), Vec::new());
                if n == n_max {
                    let ok = (0..src.len()).into_par_iter().map_init(init, |(scratch, acc, touched), col| {
                        let column = boundary_column(coeffs, &faces, &src, col, scratch);
                        lower.annihilates(f, &column, acc, touched)
                    });
                    if !ok.all(|ok| ok) {
                        return Ok(Some(n - 1));
                    }
                    break;
                }
                let columns: Vec<Option<Vec<(u32, F::Elem)>>> = (0..src.len())
                    .into_par_iter()
                    .map_init(init, |(scratch, acc, touched), col| {
                        let column = boundary_column(coeffs, &faces, &src, col, scratch);
                        lower.annihilates(f, &column, acc, touched).then_some(column)
                    })
                    .collect();
                if columns.iter().any(Option::is_none) {
                    return Ok(Some(n - 1));
                }
                let columns = columns.into_iter().map(Option::unwrap).collect();
                prev = Some(SparseMatrix::from_columns(f, tgt.len(), columns)?);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin_algebra, BuiltinAlgebra};
    use crate::field::Gf;

    fn map(images: &[u32], target: usize) -> PointedMap {
        PointedMap::new(images.to_vec(), target).unwrap()
    }

    #[test]
    fn pointed_maps_preserve_basepoint() {
        assert!(PointedMap::new(vec![1, 0], 2).is_err());
        assert!(PointedMap::new(vec![0, 3], 2).is_err());
        let phi = map(&[0, 1, 1], 2);
        assert_eq!(phi.fibers(), vec![vec![], vec![1, 2]]);
    }

    #[test]
    fn merge_and_basepoint_examples() {
        let f = Gf::default();
        let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(3), &f).unwrap();
        let (a, m) = (&b.algebra, &b.module);
        // m ⊗ x ⊗ x ↦ m ⊗ x²
        let x = TensorElement::basis(&f, BasisTag::new(0, vec![1, 1]));
        let y = apply_pointed_map(&map(&[0, 1, 1], 2), a, m, &x).unwrap();
        assert_eq!(y, TensorElement::basis(&f, BasisTag::new(0, vec![2])));
        // x ⊗ x ↦ x² when the slot goes to the basepoint
        let x = TensorElement::basis(&f, BasisTag::new(1, vec![1]));
        let y = apply_pointed_map(&map(&[0, 0], 1), a, m, &x).unwrap();
        assert_eq!(y, TensorElement::basis(&f, BasisTag::new(2, vec![])));
        // identity
        let x = TensorElement::basis(&f, BasisTag::new(2, vec![0, 1, 2]));
        assert_eq!(apply_pointed_map(&PointedMap::identity(4), a, m, &x).unwrap(), x);
        // arity mismatch
        assert!(apply_pointed_map(&PointedMap::identity(3), a, m, &x).is_err());
    }

    #[test]
    fn empty_fibers_get_the_unit() {
        let f = Gf::default();
        let b = builtin_algebra(BuiltinAlgebra::ProductField(2), &f).unwrap();
        let x = TensorElement::basis(&f, BasisTag::new(0, vec![]));
        let y = apply_pointed_map(&map(&[0], 4), &b.algebra, &b.module, &x).unwrap();
        // the unit of 𝕜×𝕜 is e_0 + e_1, so three unit slots expand to 8 terms
        assert_eq!(y.terms().len(), 8);
    }

    #[test]
    fn basis_round_trip() {
        let b = TensorBasis::new(2, 3, 4).unwrap();
        for k in 0..b.len() {
            assert_eq!(b.encode(&b.decode(k)), k);
        }
        assert_eq!(b.decode(0), BasisTag::new(0, vec![0, 0, 0, 0]));
        assert_eq!(b.decode(1), BasisTag::new(0, vec![0, 0, 0, 1]));
        assert_eq!(b.decode(81), BasisTag::new(1, vec![0, 0, 0, 0]));
        assert!(TensorBasis::new(2, 2, 80).is_none());
    }

    #[test]
    fn bad_face_identity_is_an_input_error() {
        // two levels of size 2; d_0 = d_1 = id at level 1, then a level 2
        // whose faces disagree with the identities.
        let faces = vec![
            vec![],
            vec![PointedMap::identity(2), PointedMap::identity(2)],
            vec![map(&[0, 1], 2), map(&[0, 0], 2), map(&[0, 1], 2)],
        ];
        let x = FinitePointedSimplicialSet::new(vec![2, 2, 2], faces).unwrap();
        assert!(x.face_identity_violation().is_some());
        let f = Gf::default();
        let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(1), &f).unwrap();
        assert!(matches!(
            chain_complex_from_simplicial_set(&x, &b.algebra, &b.module, 2, DEFAULT_CAP),
            Err(Error::Input(_))
        ));
    }
}
