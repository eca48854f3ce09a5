//! The property battery behind `hochschild verify`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{builtin_algebra, BuiltinAlgebra};
use crate::error::{Error, Result};
use crate::field::{Gf, Ring};
use crate::formal::FormalMonomial;
use crate::homotopy::{
    check_presimplicial_homotopy, check_presimplicial_morphism, corner_family, reflexive, symmetric, transitive,
    FormalBarModule,
};
use crate::sphere::SphereComplexSpec;
use crate::structures::{
    act_a_on_b, check_simplicial_identities, delta_a, delta_b, delta_b_skip_merge, sigma_a, sigma_b,
    sigma_minus_one, verify_main_theorem, BarVector, ConcreteBar, FormalBar, FormalBoundary,
    FormalBoundaryTensor, FormalTensor, FormalTensorProduct, InteriorBijection,
};

/// Deliberate faults for checking that the battery notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Corruption {
    #[default]
    None,
    /// Faces of `ℬ^d` drop one merge.
    Delta,
    /// `φ_n` uses a rotated interior bijection.
    Phi,
}

impl FromStr for Corruption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Corruption::None),
            "delta" => Ok(Corruption::Delta),
            "phi" => Ok(Corruption::Phi),
            _ => Err(Error::argument(format!("unknown corruption `{s}` (expected delta or phi)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Battery {
    pub d: usize,
    pub n_max: usize,
    pub corruption: Corruption,
    /// Basis elements per `(i, n)` in the main-theorem check.
    pub samples: usize,
    pub seed: u64,
    pub field: Gf,
}

impl Battery {
    pub fn new(d: usize, n_max: usize) -> Self {
        Battery { d, n_max, corruption: Corruption::None, samples: 50, seed: 1, field: Gf::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub checked: usize,
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "PASS  {} ({} checks)", c.name, c.checked)?,
                Some(why) => writeln!(f, "FAIL  {}: {why}", c.name)?,
            }
        }
        Ok(())
    }
}

struct Recorder {
    name: String,
    checked: usize,
    failure: Option<String>,
}

impl Recorder {
    fn new(name: impl Into<String>) -> Self {
        Recorder { name: name.into(), checked: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { name: self.name, checked: self.checked, failure: self.failure }
    }
}

fn from_identities(name: &str, report: crate::structures::IdentityReport) -> CheckOutcome {
    let failure = report.violations.first().map(|v| v.to_string());
    CheckOutcome { name: name.into(), checked: report.checked, failure }
}

fn bar_face(corruption: Corruption, t: &FormalTensor, i: usize) -> Result<FormalTensor> {
    if corruption == Corruption::Delta {
        delta_b_skip_merge(t, i)
    } else {
        delta_b(t, i)
    }
}

/// `δ_i(α·x) = δ_i α · δ_i x` and `σ_i(α·x) = σ_i α · σ_i x`.
fn module_compatibility(b: &Battery) -> Result<CheckOutcome> {
    let mut rec = Recorder::new(format!("ℬ^{} is a simplicial 𝒜^{}-module", b.d, b.d));
    for n in 0..=b.n_max {
        let alpha = FormalBoundaryTensor::generic(b.d, n, "α");
        let x = FormalTensor::generic(b.d, n, "x");
        let ax = act_a_on_b(&alpha, &x)?;
        if n >= 1 {
            for i in 0..=n {
                let lhs = bar_face(b.corruption, &ax, i)?;
                let rhs = act_a_on_b(&delta_a(&alpha, i)?, &bar_face(b.corruption, &x, i)?)?;
                rec.check(lhs == rhs, || format!("δ_{i} at level {n}"));
            }
        }
        for i in 0..=n {
            let lhs = sigma_b(&ax, i)?;
            let rhs = act_a_on_b(&sigma_a(&alpha, i)?, &sigma_b(&x, i)?)?;
            rec.check(lhs == rhs, || format!("σ_{i} at level {n}"));
        }
    }
    Ok(rec.finish())
}

/// `δ_0 σ_{−1} = id` and `δ_{i+1} σ_{−1} = σ_{−1} δ_i` on formal tensors.
fn formal_extra_degeneracy(b: &Battery) -> Result<CheckOutcome> {
    let mut rec = Recorder::new("extra degeneracy on formal tensors");
    for n in 0..=b.n_max {
        let x = FormalTensor::generic(b.d, n, "x");
        let sx = sigma_minus_one(&x);
        rec.check(bar_face(b.corruption, &sx, 0)? == x, || format!("δ_0σ_(-1) at level {n}"));
        if n >= 1 {
            for i in 0..=n {
                let lhs = bar_face(b.corruption, &sx, i + 1)?;
                let rhs = sigma_minus_one(&bar_face(b.corruption, &x, i)?);
                rec.check(lhs == rhs, || format!("δ_{}σ_(-1) at level {n}", i + 1));
            }
        }
    }
    Ok(rec.finish())
}

fn small_algebras() -> [BuiltinAlgebra; 4] {
    [
        BuiltinAlgebra::TruncatedPoly(1),
        BuiltinAlgebra::TruncatedPoly(2),
        BuiltinAlgebra::ProductField(2),
        BuiltinAlgebra::GroupZ2,
    ]
}

/// `∂σ_{−1} + σ_{−1}∂ = id` on the augmented concrete complex.
fn concrete_contraction(b: &Battery) -> Result<CheckOutcome> {
    let mut rec = Recorder::new("extra degeneracy contracts the augmented ℬ^d(A)");
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    for which in [BuiltinAlgebra::TruncatedPoly(2), BuiltinAlgebra::GroupZ2] {
        let alg = builtin_algebra(which, &b.field)?.algebra;
        let bar = ConcreteBar::new(b.d, alg, b.n_max + 1)?;
        for n in 0..=b.n_max {
            for _ in 0..3 {
                let x = BarVector::pure(b.field.one(), bar.random_pure(n, 2, &mut rng));
                rec.check(bar.contraction_holds(&x)?, || format!("{which} at level {n}"));
            }
        }
    }
    Ok(rec.finish())
}

fn main_theorem(b: &Battery) -> Result<CheckOutcome> {
    let mut rec = Recorder::new("d_i^* = φ_(n-1) ∘ D_i ∘ φ_n^(-1)");
    let bijection =
        if b.corruption == Corruption::Phi { InteriorBijection::Shifted } else { InteriorBijection::Natural };
    for which in small_algebras() {
        let built = builtin_algebra(which, &b.field)?;
        let spec = SphereComplexSpec::new(b.d, built.algebra, built.module, b.n_max)?;
        let report = verify_main_theorem(&spec, b.n_max, b.samples, b.seed, bijection)?;
        rec.checked += report.checked;
        if let Some((n, i)) = report.failures.first() {
            rec.check(false, || format!("{which}: face {i} at level {n}"));
        }
    }
    Ok(rec.finish())
}

fn homotopy_constructors(b: &Battery) -> Result<CheckOutcome> {
    let mut rec = Recorder::new("homotopy constructors");
    let m = Arc::new(FormalBarModule { d: b.d });
    let sym = FormalMonomial::symbol;
    let top = b.n_max;
    let first = corner_family(m.clone(), sym("a").mul(&sym("p")), sym("u"), sym("w"), "f", "g");
    let second = corner_family(m.clone(), sym("a"), sym("p"), sym("w").mul(&sym("u")), "g", "l");
    let (f, g, l) = (&first.f, &first.g, &second.g);
    for (name, map) in [("f", f), ("g", g), ("l", l)] {
        let r = check_presimplicial_morphism(&*m, &*m, map, top, b.seed)?;
        rec.checked += r.checked;
        rec.check(r.is_empty(), || format!("{name} is not a presimplicial morphism: {:?}", r.violations[0]));
    }
    let cases = [
        ("h : f ∼ g", first.h.clone(), f, g),
        ("t : g ∼ l", second.h.clone(), g, l),
        ("reflexive f ∼ f", reflexive(m.clone(), f), f, f),
        ("symmetric g ∼ f", symmetric(m.clone(), f, g, &first.h)?, g, f),
        ("transitive f ∼ l", transitive(m.clone(), &first.h, &second.h, g)?, f, l),
    ];
    for (name, h, from, to) in cases {
        let r = check_presimplicial_homotopy(&*m, &*m, &h, from, to, top, b.seed)?;
        rec.checked += r.checked;
        rec.check(r.is_empty(), || format!("{name}: {:?}", r.violations[0]));
    }
    Ok(rec.finish())
}

/// Runs every check and collects the outcomes; a check that errors counts
/// as failed.
pub fn run_battery(b: &Battery) -> Result<VerifyReport> {
    if b.d == 0 {
        return Err(Error::argument("sphere dimension must be at least 1"));
    }
    let bar = FormalBar { skip_merge: b.corruption == Corruption::Delta, ..FormalBar::new(b.d) };
    let mut report = VerifyReport::default();
    let mut push = |name: &str, outcome: Result<CheckOutcome>| {
        report.checks.push(outcome.unwrap_or_else(|e| CheckOutcome {
            name: name.into(),
            checked: 0,
            failure: Some(e.to_string()),
        }))
    };
    let d = b.d;
    push(
        "simplicial identities of 𝒜^d",
        check_simplicial_identities(&FormalBoundary { d }, b.n_max)
            .map(|r| from_identities(&format!("simplicial identities of 𝒜^{d}"), r)),
    );
    push(
        "simplicial identities of ℬ^d",
        check_simplicial_identities(&bar, b.n_max).map(|r| from_identities(&format!("simplicial identities of ℬ^{d}"), r)),
    );
    push(
        "simplicial identities of M ⊗ ℬ^d",
        check_simplicial_identities(&FormalTensorProduct { d }, b.n_max)
            .map(|r| from_identities(&format!("simplicial identities of M ⊗_𝒜 ℬ^{d}"), r)),
    );
    push("module compatibility", module_compatibility(b));
    push("extra degeneracy", formal_extra_degeneracy(b));
    push("contraction", concrete_contraction(b));
    push("main theorem", main_theorem(b));
    push("homotopy constructors", homotopy_constructors(b));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_at_small_sizes() {
        for d in 1..=2 {
            let r = run_battery(&Battery::new(d, 3)).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(r.checks.len(), 8);
        }
    }

    #[test]
    fn corruptions_are_caught() {
        for c in [Corruption::Delta, Corruption::Phi] {
            let b = Battery { corruption: c, ..Battery::new(2, 3) };
            let r = run_battery(&b).unwrap();
            assert!(!r.passed(), "{c:?} went unnoticed");
        }
    }
}
