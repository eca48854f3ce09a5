//! The cochain complex `Hom_{𝒜^d}(ℬ^d, 𝒩_d(M)) ≅ Hom(A^{⊗C(n,d)}, M)`.
//!
//! The basis functional `f_{(k,t)}` sends the basis tensor `e_t` to `m_k`
//! and every other basis tensor to zero, and is indexed like the chain basis
//! element `m_k ⊗ e_t`. The coboundary is
//! `(δf)(x) = Σ_i (−1)^i b_0^{(i)} · f(b^{(i)})`, where face `i` of `X_{n+1}`
//! sends `x` to the fiber products `b^{(i)}` and the basepoint fiber product
//! `b_0^{(i)}` acts on the value.

use rayon::prelude::*;

use crate::algebra::{CommutativeAlgebra, SymmetricBimodule};
use crate::error::{Error, Result};
use crate::field::{sign, Field};
use crate::homology::{ChainComplex, Orientation, SparseMatrix};
use crate::loday::{capped_basis, Coefficients};
use crate::sphere::{arity, face_map};

/// Sparse expansion of `⊗_s (∏ fiber_s)` as `(target index, coefficient)`.
fn expand_slots<F: Field>(
    coeffs: &Coefficients<'_, F>,
    ad: usize,
    fibers: &[Vec<u32>],
    slots: &[u16],
) -> Vec<(usize, F::Elem)> {
    let f = coeffs.field();
    let mut partial: Vec<(usize, F::Elem)> = vec![(0, f.one())];
    for fiber in &fibers[1..] {
        let prod = coeffs.fiber_product(fiber.iter().map(|&s| slots[s as usize - 1]));
        let mut next = Vec::with_capacity(partial.len() * prod.len());
        for (idx, c) in &partial {
            for (t, v) in &prod {
                next.push((idx * ad + *t as usize, f.mul(c, v)));
            }
        }
        partial = next;
    }
    partial
}

/// Matrix of `δ^n : C^n → C^{n+1}`.
pub fn cohomology_coboundary<F: Field>(
    d: usize,
    alg: &CommutativeAlgebra<F>,
    module: &SymmetricBimodule<F>,
    n: usize,
    cap: usize,
) -> Result<SparseMatrix<F>> {
    let coeffs = Coefficients::new(alg, module)?;
    let f = coeffs.field();
    let (md, ad) = (module.dim(), alg.dim());
    let src = capped_basis(md, ad, arity(d, n), n, cap)?;
    let tgt = capped_basis(md, ad, arity(d, n + 1), n + 1, cap)?;
    let tensors_above = tgt.len() / md;
    let tensors_below = src.len() / md;
    let faces: Vec<Vec<Vec<u32>>> = (0..=n + 1).map(|i| face_map(d, n + 1, i).map(|m| m.fibers())).collect::<Result<_>>()?;
    let triplets: Vec<Vec<(usize, usize, F::Elem)>> = (0..tensors_above)
        .into_par_iter()
        .map(|t_above| {
            let tag = tgt.decode(t_above);
            let mut out = Vec::new();
            for (i, fibers) in faces.iter().enumerate() {
                let s = sign(f, i);
                let b0 = coeffs.fiber_product(fibers[0].iter().map(|&j| tag.slots[j as usize - 1]));
                let below = expand_slots(&coeffs, ad, fibers, &tag.slots);
                for (t_below, c) in &below {
                    let c = f.mul(&s, c);
                    for (u, beta) in &b0 {
                        let cb = f.mul(&c, beta);
                        for k in 0..md {
                            for (k2, a) in module.act_basis(*u as usize, k) {
                                let row = *k2 as usize * tensors_above + t_above;
                                let col = k * tensors_below + t_below;
                                out.push((row, col, f.mul(&cb, a)));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    SparseMatrix::from_triplets(f, tgt.len(), src.len(), triplets.into_iter().flatten())
}

/// The cochain complex in degrees `0..=n_max`.
pub fn cohomology_complex<F: Field>(
    d: usize,
    alg: &CommutativeAlgebra<F>,
    module: &SymmetricBimodule<F>,
    n_max: usize,
    cap: usize,
) -> Result<ChainComplex<F>> {
    if d == 0 {
        return Err(Error::argument("sphere dimension must be at least 1"));
    }
    let (md, ad) = (module.dim(), alg.dim());
    let dims = (0..=n_max)
        .map(|n| capped_basis(md, ad, arity(d, n), n, cap).map(|b| b.len()))
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..n_max).map(|n| cohomology_coboundary(d, alg, module, n, cap)).collect::<Result<Vec<_>>>()?;
    ChainComplex::new(alg.field().clone(), dims, maps, Orientation::Cohomological)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin_algebra, BuiltinAlgebra};
    use crate::field::Gf;

    #[test]
    fn squares_to_zero() {
        for which in BuiltinAlgebra::ALL_SMALL {
            let b = builtin_algebra(which, &Gf::default()).unwrap();
            for d in 1..=3 {
                let c = cohomology_complex(d, &b.algebra, &b.module, 4, 1 << 20).unwrap();
                assert_eq!(c.axiom_violation(), None, "{which} d={d}");
            }
        }
    }

    #[test]
    fn degree_zero_is_the_module_for_d_at_least_one() {
        let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(3), &Gf::default()).unwrap();
        let c = cohomology_complex(2, &b.algebra, &b.module, 3, 1 << 20).unwrap();
        let t = crate::homology::cohomology_dims(&c).unwrap();
        assert_eq!(t.rows[0].homology, 3);
    }
}
