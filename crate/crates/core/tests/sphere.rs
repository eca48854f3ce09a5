mod common;

use common::{to_u64, Classical};
use hochschild::algebra::{builtin_algebra, random_invertible, BuiltinAlgebra, SymmetricBimodule};
use hochschild::field::{Gf, Rationals};
use hochschild::formal::{FormalChain, FormalMonomial};
use hochschild::homology::homology_dims;
use hochschild::loday::{chain_complex_from_simplicial_set, BasisTag, TensorElement};
use hochschild::sphere::*;
use hochschild::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tuple(t: &[usize]) -> MonotoneTuple {
    MonotoneTuple(t.to_vec())
}

fn cell(d: usize, n: usize, t: &[usize]) -> SphereCell {
    tuple_to_avector(d, n, &tuple(t)).unwrap()
}

fn spec(which: BuiltinAlgebra, d: usize, n_max: usize) -> SphereComplexSpec<Gf> {
    let b = builtin_algebra(which, &Gf::default()).unwrap();
    SphereComplexSpec::new(d, b.algebra, b.module, n_max).unwrap()
}

#[test]
fn cell_counts() {
    assert_eq!(enumerate_cells(3, 4).len(), 5);
    assert_eq!(enumerate_cells(1, 0), vec![SphereCell::Basepoint]);
    assert_eq!(enumerate_cells(2, 4).len(), 7);
    for d in 1..=4 {
        for n in 0..=9 {
            assert_eq!(enumerate_cells(d, n).len(), 1 + binomial(n, d), "d={d} n={n}");
        }
    }
}

#[test]
fn cells_are_listed_in_tuple_order() {
    let cells = enumerate_cells(3, 4);
    assert_eq!(cells[0], SphereCell::Basepoint);
    let tuples: Vec<Vec<usize>> = cells[1..].iter().map(|c| avector_to_tuple(3, 4, c).unwrap().0).collect();
    assert_eq!(tuples, vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]);
}

#[test]
fn occupancy_to_tuple_examples() {
    let t = |d, n, a: &[usize]| avector_to_tuple(d, n, &SphereCell::Occupancy(a.to_vec())).unwrap().0;
    assert_eq!(t(3, 4, &[1, 0, 0, 0]), vec![2, 2, 2]);
    assert_eq!(t(3, 3, &[0, 0, 0, 0]), vec![1, 1, 1]);
    assert_eq!(t(2, 2, &[0, 0, 0]), vec![1, 1]);
    assert_eq!(avector_to_tuple(2, 5, &SphereCell::Basepoint).unwrap().0, vec![0, 0]);
    assert!(avector_to_tuple(3, 4, &SphereCell::Occupancy(vec![2, 0, 0, 0])).is_err());
    assert!(tuple_to_avector(2, 3, &tuple(&[2, 1])).is_err());
}

#[test]
fn tuple_bijection_is_inverse_on_full_enumerations() {
    for d in 1..=4 {
        for n in 0..=8 {
            for c in enumerate_cells(d, n) {
                let t = avector_to_tuple(d, n, &c).unwrap();
                assert_eq!(tuple_to_avector(d, n, &t).unwrap(), c);
                if let SphereCell::Occupancy(a) = &c {
                    assert_eq!(a.iter().sum::<usize>(), n - d);
                    for s in 0..d {
                        assert_eq!(t.0[s], a[..=s].iter().sum::<usize>() + 1);
                    }
                }
            }
        }
    }
}

#[test]
fn worked_faces_at_d3() {
    assert_eq!(face_cell(3, 4, 2, &cell(3, 4, &[2, 2, 2])).unwrap(), SphereCell::Basepoint);
    assert_eq!(face_cell(3, 4, 0, &cell(3, 4, &[2, 2, 2])).unwrap(), cell(3, 3, &[1, 1, 1]));
    assert_eq!(face_cell(3, 4, 3, &cell(3, 4, &[1, 1, 2])).unwrap(), cell(3, 3, &[1, 1, 1]));
    assert!(matches!(face_cell(3, 4, 5, &SphereCell::Basepoint), Err(Error::Argument(_))));
}

#[test]
fn face_intervals_partition_the_indices() {
    for d in 1..=3 {
        for n in d..=8 {
            for c in enumerate_cells(d, n) {
                let SphereCell::Occupancy(a) = &c else { continue };
                let mut covered = vec![0; n + 1];
                let mut prev = 0;
                for j in 0..=d {
                    let cj = prev + a[j];
                    for i in prev + j..=cj + j {
                        covered[i] += 1;
                    }
                    prev = cj;
                }
                assert!(covered.iter().all(|&k| k == 1), "d={d} n={n} {c}");
            }
        }
    }
}

#[test]
fn cell_level_face_identities() {
    for d in 1..=3 {
        for n in 2..=8 {
            for c in enumerate_cells(d, n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = face_cell(d, n - 1, i, &face_cell(d, n, j, &c).unwrap()).unwrap();
                        let rhs = face_cell(d, n - 1, j - 1, &face_cell(d, n, i, &c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "d={d} n={n} i={i} j={j} {c}");
                    }
                }
            }
        }
    }
}

fn words(ws: &[&str]) -> Vec<FormalMonomial> {
    ws.iter().map(|w| FormalMonomial::from_chars(w)).collect()
}

#[test]
fn formal_faces_at_d3_n4() {
    let x = words(&["m", "a", "b", "c", "d"]);
    assert_eq!(face_star_formal(3, 4, 0, &x).unwrap(), words(&["mabc", "d"]));
    assert_eq!(face_star_formal(3, 4, 2, &x).unwrap(), words(&["mad", "bc"]));
    let expected = FormalChain::from_words(&[
        (1, &["mabc", "d"]),
        (-1, &["mab", "cd"]),
        (1, &["mad", "bc"]),
        (-1, &["mcd", "ab"]),
        (1, &["mbcd", "a"]),
    ]);
    assert_eq!(sphere_boundary_formal(3, 4, &x).unwrap(), expected);
}

#[test]
fn low_levels_are_the_module() {
    for d in 2..=4 {
        for n in 1..d {
            for i in 0..=n {
                assert_eq!(face_star_formal(d, n, i, &words(&["m"])).unwrap(), words(&["m"]));
            }
        }
    }
}

#[test]
fn d1_boundary_is_the_hochschild_differential() {
    let expected = FormalChain::from_words(&[(1, &["ma", "b"]), (-1, &["m", "ab"]), (1, &["mb", "a"])]);
    assert_eq!(sphere_boundary_formal(1, 2, &words(&["m", "a", "b"])).unwrap(), expected);
}

#[test]
fn concrete_face_matches_formal_face() {
    let s = spec(BuiltinAlgebra::TruncatedPoly(3), 3, 4);
    let f = s.field().clone();
    // m = 1, a = x, b = 1, c = x, d = x: d_0 gives x·1·x ⊗ x = x² ⊗ x.
    let x = TensorElement::basis(&f, BasisTag::new(0, vec![1, 0, 1, 1]));
    let y = face_star(&s, 4, 0, &x).unwrap();
    assert_eq!(y, TensorElement::basis(&f, BasisTag::new(2, vec![1])));
    assert!(face_star(&s, 3, 0, &x).is_err());
}

#[test]
fn sphere_complex_dimensions() {
    let c = sphere_complex(&spec(BuiltinAlgebra::TruncatedPoly(2), 3, 5)).unwrap();
    assert_eq!(c.dims(), &[2, 2, 2, 4, 32, 2048]);
    let c = sphere_complex(&spec(BuiltinAlgebra::TruncatedPoly(2), 2, 4)).unwrap();
    assert_eq!(c.dims(), &[2, 2, 4, 16, 128]);
    let s = spec(BuiltinAlgebra::TruncatedPoly(2), 3, 6);
    assert_eq!(s.degree_dim(6), Some(2 << 20));
}

#[test]
fn size_cap_names_the_degree() {
    let s = spec(BuiltinAlgebra::TruncatedPoly(2), 3, 6).with_cap(1000);
    match sphere_complex(&s) {
        Err(Error::SizeCap { degree, .. }) => assert_eq!(degree, 5),
        other => panic!("expected a size error, got {other:?}"),
    }
}

#[test]
fn ground_field_complex_alternates() {
    let s = spec(BuiltinAlgebra::TruncatedPoly(1), 1, 8);
    let c = sphere_complex(&s).unwrap();
    assert!(c.dims().iter().all(|&k| k == 1));
    for n in 1..=8 {
        let expected = if n % 2 == 0 { 1 } else { 0 };
        assert_eq!(sphere_boundary(&s, n).unwrap().get(s.field(), 0, 0), expected, "n={n}");
    }
}

#[test]
fn degree_one_boundary_vanishes_for_higher_spheres() {
    for d in 2..=4 {
        for which in BuiltinAlgebra::ALL_SMALL {
            assert!(sphere_boundary(&spec(which, d, 2), 1).unwrap().is_zero(), "{which} d={d}");
        }
    }
}

#[test]
fn d1_complex_matches_classical_hochschild() {
    for which in BuiltinAlgebra::ALL_SMALL {
        let s = spec(which, 1, 5);
        let oracle = Classical::new(&s.algebra, &s.module);
        for n in 1..=5 {
            let ours = to_u64(sphere_boundary(&s, n).unwrap().to_dense(s.field()));
            assert_eq!(ours, oracle.boundary(n), "{which} n={n}");
        }
    }
}

#[test]
fn sphere_complex_agrees_with_generic_loday_complex() {
    for d in 1..=3 {
        let s = spec(BuiltinAlgebra::GroupZ2, d, 4);
        let x = sphere_simplicial_set(d, 4).unwrap();
        let generic = chain_complex_from_simplicial_set(&x, &s.algebra, &s.module, 4, 1 << 20).unwrap();
        let ours = sphere_complex(&s).unwrap();
        assert_eq!(generic.dims(), ours.dims());
        assert_eq!(generic.maps(), ours.maps(), "d={d}");
    }
}

#[test]
fn rational_and_modular_homology_agree_on_small_cases() {
    let b = builtin_algebra(BuiltinAlgebra::TruncatedPoly(2), &Rationals).unwrap();
    let s = SphereComplexSpec::new(2, b.algebra, b.module, 4).unwrap();
    let over_q = homology_dims(&sphere_complex(&s).unwrap()).unwrap().homology();
    let over_p = homology_dims(&sphere_complex(&spec(BuiltinAlgebra::TruncatedPoly(2), 2, 4)).unwrap()).unwrap().homology();
    assert_eq!(over_q, over_p);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn boundary_squares_to_zero_for_random_algebras(seed in 0u64..10_000, pick in 0usize..5, d in 1usize..=3) {
        let f = Gf::default();
        let which = BuiltinAlgebra::ALL_SMALL[pick];
        let a = builtin_algebra(which, &f).unwrap().algebra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = a.change_basis(&random_invertible(&f, a.dim(), &mut rng)).unwrap();
        let m = SymmetricBimodule::regular(&a);
        let n_max = match (a.dim(), d) {
            (3, 2) => 4,
            (3, 3) => 4,
            _ => 5,
        };
        let s = SphereComplexSpec::new(d, a, m, n_max).unwrap();
        let c = sphere_complex(&s).unwrap();
        prop_assert_eq!(c.axiom_violation(), None);
        prop_assert_eq!(sphere_square_zero(&s).unwrap(), None);
    }
}
