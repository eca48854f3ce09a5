//! Formal symbols.
//!
//! A [`FormalMonomial`] is a multiset of symbol names standing for an
//! unevaluated commutative product. The maps of the simplicial structures
//! only ever move, merge or insert tensor entries, so their identities can
//! be checked on formal symbols without expanding products in a basis.

use std::collections::BTreeMap;
use std::fmt;

/// A commutative monomial in named symbols. The empty monomial is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalMonomial {
    symbols: Vec<String>,
}

impl FormalMonomial {
    pub fn unit() -> Self {
        FormalMonomial::default()
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        FormalMonomial { symbols: vec![name.into()] }
    }

    pub fn from_symbols<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        symbols.sort();
        FormalMonomial { symbols }
    }

    /// Splits a word into single-character symbols: `"mab"` is `m·a·b`, and
    /// `"1"` or `""` is the unit.
    pub fn from_chars(word: &str) -> Self {
        if word == "1" {
            return Self::unit();
        }
        Self::from_symbols(word.chars().map(|c| c.to_string()))
    }

    pub fn is_unit(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn mul(&self, other: &FormalMonomial) -> FormalMonomial {
        let mut symbols = Vec::with_capacity(self.symbols.len() + other.symbols.len());
        let (mut i, mut j) = (0, 0);
        while i < self.symbols.len() && j < other.symbols.len() {
            if self.symbols[i] <= other.symbols[j] {
                symbols.push(self.symbols[i].clone());
                i += 1;
            } else {
                symbols.push(other.symbols[j].clone());
                j += 1;
            }
        }
        symbols.extend_from_slice(&self.symbols[i..]);
        symbols.extend_from_slice(&other.symbols[j..]);
        FormalMonomial { symbols }
    }

    pub fn mul_assign(&mut self, other: &FormalMonomial) {
        if !other.is_unit() {
            *self = self.mul(other);
        }
    }

    pub fn product<'a, I: IntoIterator<Item = &'a FormalMonomial>>(factors: I) -> FormalMonomial {
        factors.into_iter().fold(FormalMonomial::unit(), |acc, f| acc.mul(f))
    }
}

impl fmt::Display for FormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "1");
        }
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) { "" } else { "·" };
        write!(f, "{}", self.symbols.join(sep))
    }
}

/// A pure formal tensor `m ⊗ a_1 ⊗ … ⊗ a_v`; slot 0 is the module slot.
pub type FormalPure = Vec<FormalMonomial>;

/// An integer combination of pure formal tensors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalChain {
    terms: BTreeMap<FormalPure, i64>,
}

impl FormalChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, tensor: FormalPure, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(tensor) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Builds a chain from `(coefficient, [slot words])`, each slot word
    /// split into single-character symbols (see [`FormalMonomial::from_chars`]).
    pub fn from_words(terms: &[(i64, &[&str])]) -> Self {
        let mut out = Self::new();
        for (c, slots) in terms {
            out.add_term(slots.iter().map(|w| FormalMonomial::from_chars(w)).collect(), *c);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FormalPure, &i64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for FormalChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (tensor, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if k == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}·", c.abs())?;
            }
            let words: Vec<String> = tensor.iter().map(ToString::to_string).collect();
            write!(f, "{}", words.join("⊗"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn monomial() -> impl Strategy<Value = FormalMonomial> {
        prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "m"]), 0..5)
            .prop_map(FormalMonomial::from_symbols)
    }

    proptest! {
        #[test]
        fn monomials_form_a_commutative_monoid(x in monomial(), y in monomial(), z in monomial()) {
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&FormalMonomial::unit()), x.clone());
            prop_assert_eq!(x.mul(&y).degree(), x.degree() + y.degree());
        }
    }

    #[test]
    fn display_and_words() {
        assert_eq!(FormalMonomial::from_chars("cab").to_string(), "abc");
        assert_eq!(FormalMonomial::from_chars("1").to_string(), "1");
        let chain = FormalChain::from_words(&[(1, &["ma", "b"]), (-1, &["m", "ab"])]);
        assert_eq!(chain.to_string(), "am⊗b - m⊗ab");
    }

    #[test]
    fn chain_terms_cancel() {
        let mut c = FormalChain::from_words(&[(1, &["m", "a"])]);
        c.add_term(vec![FormalMonomial::from_chars("m"), FormalMonomial::from_chars("a")], -1);
        assert!(c.is_empty());
    }
}
