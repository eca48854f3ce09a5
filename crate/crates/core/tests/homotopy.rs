use std::sync::Arc;

use hochschild::algebra::{builtin_algebra, BuiltinAlgebra};
use hochschild::field::{Field, Gf};
use hochschild::formal::FormalMonomial;
use hochschild::homotopy::*;
use hochschild::structures::bar::ConcreteBar;
use hochschild::Error;
use proptest::prelude::*;

fn sym(s: &str) -> FormalMonomial {
    FormalMonomial::symbol(s)
}

fn formal(d: usize) -> Arc<FormalBarModule> {
    Arc::new(FormalBarModule { d })
}

#[test]
fn corner_family_at_d3() {
    let m = formal(3);
    let c = corner_family(m.clone(), sym("v"), sym("u"), sym("w"), "f", "g");
    let r = check_presimplicial_morphism(&*m, &*m, &c.f, 3, 1).unwrap();
    assert!(r.is_empty() && r.checked > 0, "{:?}", r.violations);
    assert!(check_presimplicial_morphism(&*m, &*m, &c.g, 3, 1).unwrap().is_empty());
    let r = check_presimplicial_homotopy(&*m, &*m, &c.h, &c.f, &c.g, 2, 1).unwrap();
    assert!(r.is_empty(), "{:?}", r.violations);
}

#[test]
fn endpoints_are_not_interchangeable() {
    let m = formal(2);
    let c = corner_family(m.clone(), sym("v"), sym("u"), sym("w"), "f", "g");
    let r = check_presimplicial_homotopy(&*m, &*m, &c.h, &c.g, &c.f, 2, 3).unwrap();
    assert!(r.violations.iter().any(|v| v.relation == HomotopyRelation::Start));
    assert!(r.violations.iter().any(|v| v.relation == HomotopyRelation::End));
}

#[test]
fn shifted_degeneracies_break_the_face_relations() {
    let m = formal(2);
    let c = corner_family(m.clone(), sym("v"), sym("u"), sym("w"), "f", "g");
    let (mh, inner) = (m.clone(), c.h.clone());
    let bad = PresimplicialHomotopy::new("f", "g", move |n, j, x| {
        if j == n {
            inner.apply(n, j, x)
        } else {
            let y = inner.apply(n, j, x)?;
            let z = mh.face(n + 1, j + 1, &y)?;
            mh.degeneracy(n, j + 1, &z)
        }
    });
    let r = check_presimplicial_homotopy(&*m, &*m, &bad, &c.f, &c.g, 2, 5).unwrap();
    assert!(!r.is_empty());
}

#[test]
fn interior_multiplication_is_not_a_morphism() {
    let m = formal(2);
    let mm = m.clone();
    let f = PresimplicialMorphism::new("interior", move |n, x| {
        let p = mm.pure_from_entries(n, &[(vec![1, 1], sym("z"))])?;
        mm.act(n, &p, x)
    });
    let r = check_presimplicial_morphism(&*m, &*m, &f, 3, 0).unwrap();
    assert!(r.violations.iter().any(|v| v.relation == MorphismRelation::Face));
}

#[test]
fn symmetry_twice_returns_a_homotopy_in_the_original_direction() {
    for d in 1..=3 {
        let m = formal(d);
        let c = corner_family(m.clone(), sym("v"), sym("u"), sym("w"), "f", "g");
        let back = symmetric(m.clone(), &c.f, &c.g, &c.h).unwrap();
        let again = symmetric(m.clone(), &c.g, &c.f, &back).unwrap();
        assert_eq!((again.from_label(), again.to_label()), ("f", "g"));
        let r = check_presimplicial_homotopy(&*m, &*m, &again, &c.f, &c.g, 2, d as u64).unwrap();
        assert!(r.is_empty(), "d={d} {:?}", r.violations);
    }
}

#[test]
fn constructors_check_labels() {
    let m = formal(1);
    let c = corner_family(m.clone(), sym("v"), sym("u"), sym("w"), "f", "g");
    assert!(matches!(symmetric(m.clone(), &c.g, &c.f, &c.h), Err(Error::Argument(_))));
    assert!(matches!(transitive(m.clone(), &c.h, &c.h, &c.g), Err(Error::Argument(_))));
}

#[test]
fn composites_of_morphisms_are_morphisms() {
    let m = formal(2);
    let first = corner_family(m.clone(), sym("a"), sym("b"), sym("c"), "f", "g");
    let second = corner_family(m.clone(), sym("p"), sym("q"), sym("r"), "k", "l");
    let composite = second.g.after(&first.f);
    let r = check_presimplicial_morphism(&*m, &*m, &composite, 3, 9).unwrap();
    assert!(r.is_empty(), "{:?}", r.violations);
    let id = PresimplicialMorphism::identity();
    let x = &m.samples(2, 4)[0];
    assert_eq!(first.f.after(&id).apply(2, x).unwrap(), first.f.apply(2, x).unwrap());
}

fn bar_and_module(d: usize, which: BuiltinAlgebra, top: usize) -> (Arc<ConcreteBar<Gf>>, hochschild::algebra::SymmetricBimodule<Gf>) {
    let b = builtin_algebra(which, &Gf::default()).unwrap();
    (Arc::new(ConcreteBar::new(d, b.algebra, top).unwrap()), b.module)
}

#[test]
fn cohomology_transfers_along_a_rescaling() {
    let field = Gf::default();
    for which in [BuiltinAlgebra::TruncatedPoly(2), BuiltinAlgebra::GroupZ2] {
        let (bar, module) = bar_and_module(2, which, 5);
        let refl = reflexive(bar.clone(), &PresimplicialMorphism::identity());
        let (b1, b2) = (bar.clone(), bar.clone());
        let c = 5u32;
        let c_inv = field.inv(&c).unwrap();
        let f = PresimplicialMorphism::new("c", move |_n, x| Ok(b1.scale(&c, x)));
        let g = PresimplicialMorphism::new("c⁻¹", move |_n, x| Ok(b2.scale(&c_inv, x)));
        let eq = Equivalence { f: &f, g: &g, h: &refl, t: &refl };
        let r = transfer_cohomology(&module, &bar, &bar, &eq, 4).unwrap();
        assert!(r.equal() && r.chain_maps && r.homotopies, "{which}: {r:?}");
        assert_eq!(r.source[0], module.dim(), "{which}");
    }
}

#[test]
fn transfer_rejects_a_one_sided_rescaling() {
    let (bar, module) = bar_and_module(1, BuiltinAlgebra::TruncatedPoly(2), 5);
    let id = PresimplicialMorphism::identity();
    let refl = reflexive(bar.clone(), &id);
    let b1 = bar.clone();
    let f = PresimplicialMorphism::new("3", move |_n, x| Ok(b1.scale(&3, x)));
    let eq = Equivalence { f: &f, g: &id, h: &refl, t: &refl };
    assert!(matches!(transfer_homology(&module, &bar, &bar, &eq, 4), Err(Error::Input(_))));
    assert!(matches!(transfer_cohomology(&module, &bar, &bar, &eq, 4), Err(Error::Input(_))));
}

fn word() -> impl Strategy<Value = FormalMonomial> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 0..3).prop_map(FormalMonomial::from_symbols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn corner_families_are_homotopies(v in word(), u in word(), w in word(), d in 1usize..=3, seed in 0u64..100) {
        let m = formal(d);
        let c = corner_family(m.clone(), v, u, w, "f", "g");
        let top = if d == 3 { 1 } else { 2 };
        let r = check_presimplicial_homotopy(&*m, &*m, &c.h, &c.f, &c.g, top, seed).unwrap();
        prop_assert!(r.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn transitivity_chains_three_families(v in word(), u in word(), w in word(), x in word(), seed in 0u64..100) {
        let m = formal(2);
        let first = corner_family(m.clone(), v.mul(&x), u.clone(), w.clone(), "f", "g");
        let second = corner_family(m.clone(), v, x, w.mul(&u), "g", "l");
        let s = transitive(m.clone(), &first.h, &second.h, &first.g).unwrap();
        let r = check_presimplicial_homotopy(&*m, &*m, &s, &first.f, &second.g, 2, seed).unwrap();
        prop_assert!(r.is_empty(), "{:?}", r.violations);
    }
}
