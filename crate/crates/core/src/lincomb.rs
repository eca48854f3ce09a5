use std::collections::btree_map;
use std::collections::BTreeMap;

use crate::field::Ring;

/// A finite linear combination of ordered basis keys.
///
/// Zero coefficients are never stored, so structural equality of two
/// combinations is equality of the vectors they represent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord, V> {
    terms: BTreeMap<K, V>,
}

impl<K: Ord, V> Default for LinComb<K, V> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, V: Clone> LinComb<K, V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single<R: Ring<Elem = V>>(ring: &R, key: K, coeff: V) -> Self {
        let mut out = Self::new();
        out.add_term(ring, key, coeff);
        out
    }

    pub fn basis<R: Ring<Elem = V>>(ring: &R, key: K) -> Self {
        Self::single(ring, key, ring.one())
    }

    pub fn add_term<R: Ring<Elem = V>>(&mut self, ring: &R, key: K, coeff: V) {
        if ring.is_zero(&coeff) {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                let s = ring.add(e.get(), &coeff);
                if ring.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign<R: Ring<Elem = V>>(&mut self, ring: &R, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(ring, k.clone(), v.clone());
        }
    }

    pub fn add_scaled<R: Ring<Elem = V>>(&mut self, ring: &R, other: &Self, c: &V) {
        if ring.is_zero(c) {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(ring, k.clone(), ring.mul(v, c));
        }
    }

    pub fn plus<R: Ring<Elem = V>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(ring, other);
        out
    }

    pub fn minus<R: Ring<Elem = V>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(ring, other, &ring.neg(&ring.one()));
        out
    }

    pub fn scaled<R: Ring<Elem = V>>(&self, ring: &R, c: &V) -> Self {
        let mut out = Self::new();
        out.add_scaled(ring, self, c);
        out
    }

    /// Applies a linear map given on basis keys.
    pub fn map_linear<K2, R, M>(&self, ring: &R, mut on_basis: M) -> LinComb<K2, V>
    where
        K2: Ord + Clone,
        R: Ring<Elem = V>,
        M: FnMut(&K) -> LinComb<K2, V>,
    {
        let mut out = LinComb::new();
        for (k, v) in &self.terms {
            out.add_scaled(ring, &on_basis(k), v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        self.terms.get(key)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, V> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, V> {
        self.terms.keys()
    }
}

impl<K: Ord, V> IntoIterator for LinComb<K, V> {
    type Item = (K, V);
    type IntoIter = btree_map::IntoIter<K, V>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, K: Ord, V> IntoIterator for &'a LinComb<K, V> {
    type Item = (&'a K, &'a V);
    type IntoIter = btree_map::Iter<'a, K, V>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;

    #[test]
    fn cancellation_removes_terms() {
        let f = Gf::new(5).unwrap();
        let mut x = LinComb::single(&f, "a", 2);
        x.add_term(&f, "a", 3);
        assert!(x.is_zero());
        x.add_term(&f, "b", 0);
        assert!(x.is_zero());
    }

    #[test]
    fn minus_self_is_zero() {
        let f = Gf::new(7).unwrap();
        let mut x = LinComb::single(&f, 1u8, 3);
        x.add_term(&f, 2u8, 4);
        assert!(x.minus(&f, &x).is_zero());
        assert_eq!(x.scaled(&f, &2).get(&1), Some(&6));
    }
}
