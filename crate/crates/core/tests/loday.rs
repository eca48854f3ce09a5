use hochschild::algebra::{builtin_algebra, random_invertible, BuiltinAlgebra, CommutativeAlgebra, SymmetricBimodule};
use hochschild::field::{Field, Gf, Ring};
use hochschild::format::{parse_simplicial_set, write_simplicial_set};
use hochschild::homology::homology_dims;
use hochschild::loday::*;
use hochschild::sphere::sphere_simplicial_set;
use hochschild::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scrambled(which: BuiltinAlgebra, seed: u64) -> (CommutativeAlgebra<Gf>, SymmetricBimodule<Gf>) {
    let f = Gf::default();
    let a = builtin_algebra(which, &f).unwrap().algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = a.change_basis(&random_invertible(&f, a.dim(), &mut rng)).unwrap();
    let m = SymmetricBimodule::regular(&a);
    (a, m)
}

fn random_element(f: &Gf, md: usize, ad: usize, arity: usize, rng: &mut ChaCha8Rng) -> TensorElement<Gf> {
    let terms = (0..3).map(|_| {
        let tag = BasisTag::new(rng.gen_range(0..md) as u16, (0..arity).map(|_| rng.gen_range(0..ad) as u16).collect());
        (tag, f.random(rng))
    });
    TensorElement::from_terms(f, arity, terms.collect::<Vec<_>>()).unwrap()
}

fn pointed_map(source: usize, target: usize) -> impl Strategy<Value = PointedMap> {
    prop::collection::vec(0..target as u32, source - 1).prop_map(move |rest| {
        let mut images = vec![0];
        images.extend(rest);
        PointedMap::new(images, target).unwrap()
    })
}

#[test]
fn single_fiber_merges_factors() {
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(3), &f).unwrap();
    let phi = PointedMap::new(vec![0, 1, 1], 2).unwrap();
    let x = TensorElement::basis(&f, BasisTag::new(1, vec![1, 1]));
    let y = apply_pointed_map(&phi, &b.algebra, &b.module, &x).unwrap();
    assert_eq!(y, TensorElement::basis(&f, BasisTag::new(1, vec![2])));
    let x = TensorElement::basis(&f, BasisTag::new(0, vec![1, 2]));
    assert!(apply_pointed_map(&phi, &b.algebra, &b.module, &x).unwrap().is_zero());
    let x = TensorElement::basis(&f, BasisTag::new(0, vec![1, 1]));
    let y = apply_pointed_map(&phi, &b.algebra, &b.module, &x).unwrap();
    assert_eq!(y, TensorElement::basis(&f, BasisTag::new(0, vec![2])));
}

#[test]
fn slots_sent_to_the_basepoint_act_on_the_module() {
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(3), &f).unwrap();
    let phi = PointedMap::new(vec![0, 0], 1).unwrap();
    let x = TensorElement::basis(&f, BasisTag::new(1, vec![1]));
    let y = apply_pointed_map(&phi, &b.algebra, &b.module, &x).unwrap();
    assert_eq!(y, TensorElement::basis(&f, BasisTag::new(2, vec![])));
}

#[test]
fn empty_fibers_carry_the_unit() {
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::ProductField(2), &f).unwrap();
    // 1_+ → 2_+ hitting only 1: slot 2 gets the unit e_0 + e_1.
    let phi = PointedMap::new(vec![0, 1], 3).unwrap();
    let x = TensorElement::basis(&f, BasisTag::new(0, vec![1]));
    let y = apply_pointed_map(&phi, &b.algebra, &b.module, &x).unwrap();
    let expected = TensorElement::basis(&f, BasisTag::new(0, vec![1, 0]))
        .plus(&f, &TensorElement::basis(&f, BasisTag::new(0, vec![1, 1])));
    assert_eq!(y, expected);
}

#[test]
fn identity_and_arity_mismatch() {
    let f = Gf::default();
    let (a, m) = scrambled(BuiltinAlgebra::TruncatedPoly(3), 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = random_element(&f, 3, 3, 3, &mut rng);
    assert_eq!(apply_pointed_map(&PointedMap::identity(4), &a, &m, &x).unwrap(), x);
    assert!(matches!(apply_pointed_map(&PointedMap::identity(3), &a, &m, &x), Err(Error::Argument(_))));
}

#[test]
fn pointed_maps_must_fix_the_basepoint() {
    assert!(PointedMap::new(vec![1, 1], 2).is_err());
    assert!(PointedMap::new(vec![0, 2], 2).is_err());
    assert!(PointedSet::new(0).is_err());
}

#[test]
fn circle_complex_dimensions() {
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(2), &f).unwrap();
    let x = sphere_simplicial_set(1, 6).unwrap();
    let c = chain_complex_from_simplicial_set(&x, &b.algebra, &b.module, 6, DEFAULT_CAP).unwrap();
    assert_eq!(c.dims(), &[2, 4, 8, 16, 32, 64, 128]);
    assert_eq!(c.axiom_violation(), None);
}

#[test]
fn ground_field_coefficients_give_alternating_sums() {
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(1), &f).unwrap();
    for d in 1..=3 {
        let x = sphere_simplicial_set(d, 6).unwrap();
        let c = chain_complex_from_simplicial_set(&x, &b.algebra, &b.module, 6, DEFAULT_CAP).unwrap();
        for n in 1..=6 {
            let expected = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(c.boundary(n).unwrap().get(&f, 0, 0), expected, "d={d} n={n}");
        }
    }
}

/// The wedge of two circles: each level is the basepoint plus two copies
/// of the circle's cells.
fn wedge_of_circles(max_level: usize) -> FinitePointedSimplicialSet {
    let circle = sphere_simplicial_set(1, max_level).unwrap();
    let sizes: Vec<usize> = circle.level_sizes().iter().map(|s| 2 * s - 1).collect();
    let mut faces = vec![Vec::new()];
    for n in 1..=max_level {
        let below = circle.level_size(n - 1) - 1;
        let here = circle.level_size(n) - 1;
        let maps = circle
            .faces(n)
            .iter()
            .map(|phi| {
                let mut images = vec![0u32];
                for copy in 0..2 {
                    for k in 1..=here {
                        let t = phi.image(k) as u32;
                        images.push(if t == 0 { 0 } else { t + (copy * below) as u32 });
                    }
                }
                PointedMap::new(images, sizes[n - 1]).unwrap()
            })
            .collect();
        faces.push(maps);
    }
    let x = FinitePointedSimplicialSet::new(sizes, faces).unwrap();
    x.check_face_identities().unwrap();
    x
}

#[test]
fn wedge_of_circles_complex() {
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(1), &f).unwrap();
    let x = wedge_of_circles(5);
    let c = chain_complex_from_simplicial_set(&x, &b.algebra, &b.module, 5, DEFAULT_CAP).unwrap();
    assert_eq!(c.axiom_violation(), None);
    let b = builtin_algebra(BuiltinAlgebra::GroupZ2, &f).unwrap();
    let c = chain_complex_from_simplicial_set(&x, &b.algebra, &b.module, 4, DEFAULT_CAP).unwrap();
    assert_eq!(c.dims(), &[2, 8, 32, 128, 512]);
    assert_eq!(c.axiom_violation(), None);
    assert!(homology_dims(&c).is_ok());
}

#[test]
fn broken_face_identities_are_an_input_error() {
    let x = sphere_simplicial_set(1, 3).unwrap();
    let mut faces: Vec<Vec<PointedMap>> = (0..=3).map(|n| x.faces(n).to_vec()).collect();
    faces[2].swap(0, 2);
    let bad = FinitePointedSimplicialSet::new(x.level_sizes().to_vec(), faces).unwrap();
    assert!(bad.face_identity_violation().is_some());
    let f = Gf::default();
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(2), &f).unwrap();
    let r = chain_complex_from_simplicial_set(&bad, &b.algebra, &b.module, 3, DEFAULT_CAP);
    assert!(matches!(r, Err(Error::Input(_))));
}

#[test]
fn simplicial_set_text_round_trip() {
    let x = wedge_of_circles(3);
    let y = parse_simplicial_set(&write_simplicial_set(&x)).unwrap();
    assert_eq!(y.level_sizes(), x.level_sizes());
    for n in 1..=3 {
        assert_eq!(y.faces(n), x.faces(n));
    }
}

/// `ℒ(φ)` on a basis vector by multiplying dense vectors fiber by fiber and
/// expanding the tensor product.
fn dense_image(phi: &PointedMap, a: &CommutativeAlgebra<Gf>, m: &SymmetricBimodule<Gf>, tag: &BasisTag) -> TensorElement<Gf> {
    let f = a.field();
    let fiber_product = |w: usize| {
        (1..=phi.source().arity())
            .filter(|&k| phi.image(k) == w)
            .fold(a.unit().to_vec(), |acc, k| a.mul(&acc, &a.basis_vector(tag.slots[k - 1] as usize)))
    };
    let mut m_vec = vec![0; m.dim()];
    m_vec[tag.module as usize] = 1;
    let module = m.act(f, &fiber_product(0), &m_vec);
    let mut partial: Vec<(BasisTag, u32)> = module
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(k, c)| (BasisTag::new(k as u16, Vec::new()), *c))
        .collect();
    for w in 1..=phi.target().arity() {
        let v = fiber_product(w);
        let mut next = Vec::new();
        for (t, c) in &partial {
            for (s, cs) in v.iter().enumerate().filter(|(_, c)| **c != 0) {
                let mut slots = t.slots.clone();
                slots.push(s as u16);
                next.push((BasisTag::new(t.module, slots), f.mul(c, cs)));
            }
        }
        partial = next;
    }
    TensorElement::from_terms(f, phi.target().arity(), partial).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_maps_match_dense_products(
        phi in (2usize..9, 1usize..8).prop_flat_map(|(v, w)| pointed_map(v, w)),
        pick in 0usize..5,
        seed in 0u64..1000,
    ) {
        let f = Gf::default();
        let b = builtin_algebra(BuiltinAlgebra::ALL_SMALL[pick], &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arity = phi.source().arity();
        let tag = BasisTag::new(
            rng.gen_range(0..b.module.dim()) as u16,
            (0..arity).map(|_| rng.gen_range(0..b.algebra.dim()) as u16).collect(),
        );
        let ours = apply_pointed_map(&phi, &b.algebra, &b.module, &TensorElement::basis(&f, tag.clone())).unwrap();
        prop_assert_eq!(ours, dense_image(&phi, &b.algebra, &b.module, &tag));
    }

    #[test]
    fn induced_maps_are_functorial(
        (phi, psi) in (2usize..6, 1usize..5, 1usize..4)
            .prop_flat_map(|(v, w, u)| (pointed_map(v, w), pointed_map(w, u))),
        seed in 0u64..1000,
        pick in 0usize..5,
    ) {
        let f = Gf::default();
        let (a, m) = scrambled(BuiltinAlgebra::ALL_SMALL[pick], seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&f, m.dim(), a.dim(), phi.source().arity(), &mut rng);
        let composite = phi.then(&psi).unwrap();
        let lhs = apply_pointed_map(&composite, &a, &m, &x).unwrap();
        let rhs = apply_pointed_map(&psi, &a, &m, &apply_pointed_map(&phi, &a, &m, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn induced_maps_are_linear(
        phi in (2usize..6, 1usize..5).prop_flat_map(|(v, w)| pointed_map(v, w)),
        seed in 0u64..1000,
        c in 0u32..101,
    ) {
        let f = Gf::default();
        let (a, m) = scrambled(BuiltinAlgebra::TruncatedPoly(3), seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        let arity = phi.source().arity();
        let x = random_element(&f, 3, 3, arity, &mut rng);
        let y = random_element(&f, 3, 3, arity, &mut rng);
        let map = |z: &TensorElement<Gf>| apply_pointed_map(&phi, &a, &m, z).unwrap();
        let combined = x.scaled(&f, &c).plus(&f, &y);
        prop_assert_eq!(map(&combined), map(&x).scaled(&f, &c).plus(&f, &map(&y)));
    }
}
