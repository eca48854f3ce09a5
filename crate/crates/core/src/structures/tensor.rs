//! `M ⊗_{𝒜^d} ℬ^d` over a field and the isomorphism `φ` onto the sphere
//! complex.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bar::{ConcreteBar, PureBar};
use super::hypercube::InteriorBijection;
use super::identities::SimplicialObject;
use crate::algebra::{CommutativeAlgebra, SymmetricBimodule};
use crate::error::{Error, Result};
use crate::field::{sign, Field};
use crate::homology::{ChainComplex, Orientation, SparseMatrix};
use crate::lincomb::LinComb;
use crate::loday::{capped_basis, BasisTag, TensorElement};
use crate::sphere::{arity, face_star, SphereComplexSpec};

/// A sum of pure tensors `m ⊗ b` in `M ⊗_{A_n} B_n`; scalars are absorbed
/// into the module vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorOverAn<E> {
    pub level: usize,
    pub terms: Vec<(Vec<E>, PureBar<E>)>,
}

#[derive(Clone, Debug)]
pub struct ConcreteTensorProduct<F: Field> {
    bar: ConcreteBar<F>,
    module: SymmetricBimodule<F>,
}

impl<F: Field> ConcreteTensorProduct<F> {
    /// Levels `0..=max_level` are available; degeneracies need one more.
    pub fn new(
        d: usize,
        alg: CommutativeAlgebra<F>,
        module: SymmetricBimodule<F>,
        max_level: usize,
    ) -> Result<Self> {
        Self::with_bijection(d, alg, module, max_level, InteriorBijection::Natural)
    }

    pub fn with_bijection(
        d: usize,
        alg: CommutativeAlgebra<F>,
        module: SymmetricBimodule<F>,
        max_level: usize,
        bijection: InteriorBijection,
    ) -> Result<Self> {
        if module.alg_dim() != alg.dim() {
            return Err(Error::argument("module and algebra dimensions do not match"));
        }
        let bar = ConcreteBar::with_bijection(d, alg, max_level + 1, bijection)?;
        Ok(ConcreteTensorProduct { bar, module })
    }

    pub fn bar(&self) -> &ConcreteBar<F> {
        &self.bar
    }

    pub fn module(&self) -> &SymmetricBimodule<F> {
        &self.module
    }

    pub fn field(&self) -> &F {
        self.bar.field()
    }

    pub fn d(&self) -> usize {
        self.bar.d()
    }

    fn module_vector(&self, k: usize, c: &F::Elem) -> Vec<F::Elem> {
        let f = self.field();
        (0..self.module.dim()).map(|t| if t == k { c.clone() } else { f.zero() }).collect()
    }

    /// `φ_n^{-1}`: units on the boundary, slot `k` at the interior position of
    /// cell `k`.
    pub fn phi_inv(&self, n: usize, x: &TensorElement<F>) -> Result<TensorOverAn<F::Elem>> {
        let geom = self.bar.geometry(n)?;
        if x.arity() != geom.slots().len() {
            return Err(Error::argument(format!(
                "element of arity {} at level {n}, expected {}",
                x.arity(),
                geom.slots().len()
            )));
        }
        let alg = self.bar.algebra();
        let terms = x
            .terms()
            .iter()
            .map(|(tag, c)| {
                let mut p = self.bar.unit_pure(n);
                for (&pos, &a) in geom.slots().iter().zip(&tag.slots) {
                    p.entries[pos as usize] = alg.basis_vector(a as usize);
                }
                (self.module_vector(tag.module as usize, c), p)
            })
            .collect();
        Ok(TensorOverAn { level: n, terms })
    }

    /// Moves every boundary entry into the module slot.
    pub fn canonical(&self, x: &TensorOverAn<F::Elem>) -> Result<TensorOverAn<F::Elem>> {
        let geom = self.bar.geometry(x.level)?;
        let f = self.field();
        let unit = self.bar.algebra().unit().to_vec();
        let terms = x
            .terms
            .iter()
            .map(|(m, p)| {
                let mut m = m.clone();
                let mut q = p.clone();
                for (k, e) in q.entries.iter_mut().enumerate() {
                    if geom.is_boundary(k) {
                        m = self.module.act(f, e, &m);
                        *e = unit.clone();
                    }
                }
                (m, q)
            })
            .collect();
        Ok(TensorOverAn { level: x.level, terms })
    }

    /// `φ_n`: canonical form, read off in the basis of `M ⊗ A^{⊗C(n,d)}`.
    pub fn phi(&self, x: &TensorOverAn<F::Elem>) -> Result<TensorElement<F>> {
        let c = self.canonical(x)?;
        let geom = self.bar.geometry(x.level)?;
        let f = self.field();
        let slots = geom.slots();
        let mut out: LinComb<BasisTag, F::Elem> = LinComb::new();
        for (m, p) in &c.terms {
            let supports: Vec<Vec<(u16, F::Elem)>> = slots
                .iter()
                .map(|&k| {
                    p.entries[k as usize]
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !f.is_zero(v))
                        .map(|(t, v)| (t as u16, v.clone()))
                        .collect()
                })
                .collect();
            for (mk, mc) in m.iter().enumerate() {
                if f.is_zero(mc) {
                    continue;
                }
                let mut partial: Vec<(Vec<u16>, F::Elem)> = vec![(Vec::new(), mc.clone())];
                for s in &supports {
                    let mut next = Vec::with_capacity(partial.len() * s.len());
                    for (key, c) in &partial {
                        for (t, v) in s {
                            let mut k2 = key.clone();
                            k2.push(*t);
                            next.push((k2, f.mul(c, v)));
                        }
                    }
                    partial = next;
                }
                for (slots, c) in partial {
                    out.add_term(f, BasisTag::new(mk as u16, slots), c);
                }
            }
        }
        TensorElement::from_terms(f, slots.len(), out)
    }

    /// `D_i = δ_i^M ⊗ δ_i^B` before canonicalization.
    pub fn face_over(&self, i: usize, x: &TensorOverAn<F::Elem>) -> Result<TensorOverAn<F::Elem>> {
        if x.level == 0 || i > x.level {
            return Err(Error::argument(format!("D_{i} is not defined on level {}", x.level)));
        }
        let terms = x
            .terms
            .iter()
            .map(|(m, p)| Ok((m.clone(), self.bar.face_pure(i, p)?)))
            .collect::<Result<_>>()?;
        Ok(TensorOverAn { level: x.level - 1, terms })
    }

    /// `S_i = σ_i^M ⊗ σ_i^B` before canonicalization.
    pub fn degeneracy_over(&self, i: usize, x: &TensorOverAn<F::Elem>) -> Result<TensorOverAn<F::Elem>> {
        let terms = x
            .terms
            .iter()
            .map(|(m, p)| Ok((m.clone(), self.bar.degeneracy_pure(i, p)?)))
            .collect::<Result<_>>()?;
        Ok(TensorOverAn { level: x.level + 1, terms })
    }

    /// `φ_{n−1} ∘ D_i ∘ φ_n^{-1}`.
    pub fn face(&self, n: usize, i: usize, x: &TensorElement<F>) -> Result<TensorElement<F>> {
        self.phi(&self.face_over(i, &self.phi_inv(n, x)?)?)
    }

    /// `φ_{n+1} ∘ S_i ∘ φ_n^{-1}`.
    pub fn degeneracy(&self, n: usize, i: usize, x: &TensorElement<F>) -> Result<TensorElement<F>> {
        self.phi(&self.degeneracy_over(i, &self.phi_inv(n, x)?)?)
    }

    /// Matrix of `Σ (−1)^i D_i` from level `n` to `n−1` in the bases of the
    /// sphere complex.
    pub fn boundary_matrix(&self, n: usize, cap: usize) -> Result<SparseMatrix<F>> {
        let (md, ad, d) = (self.module.dim(), self.bar.algebra().dim(), self.d());
        let src = capped_basis(md, ad, arity(d, n), n, cap)?;
        let tgt = capped_basis(md, ad, arity(d, n - 1), n - 1, cap)?;
        let f = self.field();
        let columns = (0..src.len())
            .into_par_iter()
            .map(|col| {
                let x = TensorElement::basis(f, src.decode(col));
                let mut acc = TensorElement::zero(tgt.arity());
                for i in 0..=n {
                    acc.add_scaled(f, &self.face(n, i, &x)?, &sign(f, i));
                }
                Ok(acc.terms().iter().map(|(tag, c)| (tgt.encode(tag) as u32, c.clone())).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_columns(f, tgt.len(), columns)
    }

    /// The complex `M ⊗_{𝒜^d} ℬ^d` through `φ`, degrees `0..=n_max`.
    pub fn complex(&self, n_max: usize, cap: usize) -> Result<ChainComplex<F>> {
        let (md, ad, d) = (self.module.dim(), self.bar.algebra().dim(), self.d());
        let dims = (0..=n_max)
            .map(|n| capped_basis(md, ad, arity(d, n), n, cap).map(|b| b.len()))
            .collect::<Result<Vec<_>>>()?;
        let maps = (1..=n_max).map(|n| self.boundary_matrix(n, cap)).collect::<Result<Vec<_>>>()?;
        ChainComplex::new(self.field().clone(), dims, maps, Orientation::Homological)
    }

    /// Basis elements of level `n`: all of them when there are at most
    /// `limit`, otherwise `limit` distinct ones drawn at random.
    pub fn sample_basis(&self, n: usize, limit: usize, seed: u64) -> Result<Vec<TensorElement<F>>> {
        let (md, ad, d) = (self.module.dim(), self.bar.algebra().dim(), self.d());
        let basis = capped_basis(md, ad, arity(d, n), n, usize::MAX)?;
        let f = self.field();
        let picks: Vec<usize> = if basis.len() <= limit {
            (0..basis.len()).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
            sample(&mut rng, basis.len(), limit).into_vec()
        };
        Ok(picks.into_iter().map(|k| TensorElement::basis(f, basis.decode(k))).collect())
    }
}

/// The concrete tensor product as a simplicial object on canonical
/// coordinates, sampling at most `limit` basis elements per level.
pub struct SampledTensorProduct<'a, F: Field> {
    pub product: &'a ConcreteTensorProduct<F>,
    pub limit: usize,
    pub seed: u64,
}

impl<F: Field> SimplicialObject for SampledTensorProduct<'_, F> {
    type Elem = TensorElement<F>;

    fn face(&self, n: usize, i: usize, x: &TensorElement<F>) -> Result<TensorElement<F>> {
        self.product.face(n, i, x)
    }

    fn degeneracy(&self, n: usize, i: usize, x: &TensorElement<F>) -> Result<TensorElement<F>> {
        self.product.degeneracy(n, i, x)
    }

    fn spanning_set(&self, n: usize) -> Result<Vec<TensorElement<F>>> {
        self.product.sample_basis(n, self.limit, self.seed)
    }

    fn same(&self, _n: usize, x: &TensorElement<F>, y: &TensorElement<F>) -> Result<bool> {
        Ok(x == y)
    }
}

/// Outcome of comparing `d_i^*` with `φ_{n−1} D_i φ_n^{-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MainTheoremReport {
    pub checked: usize,
    /// `(n, i)` pairs where some sampled element disagreed.
    pub failures: Vec<(usize, usize)>,
}

impl MainTheoremReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares `d_i^*` on the sphere complex with the transported face
/// `φ_{n−1} ∘ D_i ∘ φ_n^{-1}` for every `0 ≤ i ≤ n`, `1 ≤ n ≤ n_max`, on at
/// most `samples` basis elements per level.
pub fn verify_main_theorem<F: Field>(
    spec: &SphereComplexSpec<F>,
    n_max: usize,
    samples: usize,
    seed: u64,
    bijection: InteriorBijection,
) -> Result<MainTheoremReport> {
    let tp = ConcreteTensorProduct::with_bijection(
        spec.d,
        spec.algebra.clone(),
        spec.module.clone(),
        n_max,
        bijection,
    )?;
    let mut report = MainTheoremReport::default();
    for n in 1..=n_max {
        for x in tp.sample_basis(n, samples, seed)? {
            for i in 0..=n {
                report.checked += 1;
                let lhs = face_star(spec, n, i, &x)?;
                let rhs = tp.face(n, i, &x)?;
                if lhs != rhs && !report.failures.contains(&(n, i)) {
                    report.failures.push((n, i));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin_algebra, BuiltinAlgebra};
    use crate::field::Gf;
    use crate::structures::identities::check_simplicial_identities;

    fn spec(which: BuiltinAlgebra, d: usize, n_max: usize) -> SphereComplexSpec<Gf> {
        let b = builtin_algebra(which, &Gf::default()).unwrap();
        SphereComplexSpec::new(d, b.algebra, b.module, n_max).unwrap()
    }

    #[test]
    fn faces_agree_with_sphere_faces() {
        for which in BuiltinAlgebra::ALL_SMALL {
            for d in 1..=3 {
                let s = spec(which, d, 4);
                let r = verify_main_theorem(&s, 4, 20, 1, InteriorBijection::Natural).unwrap();
                assert!(r.is_empty(), "{which} d={d}: {:?}", r.failures);
            }
        }
    }

    #[test]
    fn wrong_bijection_is_detected() {
        let s = spec(BuiltinAlgebra::TruncatedPoly(2), 2, 4);
        let r = verify_main_theorem(&s, 4, 50, 1, InteriorBijection::Shifted).unwrap();
        assert!(!r.is_empty());
    }

    #[test]
    fn phi_round_trip_and_identities() {
        let b = builtin_algebra(BuiltinAlgebra::ProductField(2), &Gf::default()).unwrap();
        let tp = ConcreteTensorProduct::new(2, b.algebra, b.module, 4).unwrap();
        for x in tp.sample_basis(3, 20, 3).unwrap() {
            assert_eq!(tp.phi(&tp.phi_inv(3, &x).unwrap()).unwrap(), x);
        }
        let obj = SampledTensorProduct { product: &tp, limit: 12, seed: 5 };
        let r = check_simplicial_identities(&obj, 3).unwrap();
        assert!(r.is_empty(), "{r}");
    }

    #[test]
    fn complex_matches_sphere_complex() {
        let s = spec(BuiltinAlgebra::GroupZ2, 2, 4);
        let tp = ConcreteTensorProduct::new(2, s.algebra.clone(), s.module.clone(), 4).unwrap();
        for n in 1..=4 {
            assert_eq!(
                tp.boundary_matrix(n, usize::MAX).unwrap(),
                crate::sphere::sphere_boundary(&s, n).unwrap()
            );
        }
    }
}
