//! Exact ground fields.
//!
//! Two fields are provided behind the same [`Field`] trait: prime fields
//! GF(p) with `u32` residues, and the rationals backed by `BigRational`
//! (always reduced, positive denominator). Field elements carry no context;
//! the field value itself (e.g. the modulus) is passed alongside.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::homology::{rank, SparseMatrix};

/// Commutative ring operations on context-free elements.
pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn format(&self, a: &Self::Elem) -> String;
}

/// An exact field with a rank oracle for sparse matrices over it.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// 0 for the rationals, p for GF(p).
    fn characteristic(&self) -> u64;

    fn descriptor(&self) -> FieldDescriptor;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;

    /// A random element; for the rationals, one with small numerator and
    /// denominator so that exact arithmetic stays cheap.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// A random nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Exact rank of a sparse matrix over this field.
    fn rank(&self, m: &SparseMatrix<Self>) -> usize;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Prime(u32),
    Rational,
}

impl Default for FieldDescriptor {
    fn default() -> Self {
        FieldDescriptor::Prime(DEFAULT_PRIME)
    }
}

pub const DEFAULT_PRIME: u32 = 101;

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(p) => write!(f, "gfp:{p}"),
            FieldDescriptor::Rational => write!(f, "rational"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" || s == "rationals" || s == "q" {
            return Ok(FieldDescriptor::Rational);
        }
        if let Some(p) = s.strip_prefix("gfp:") {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::argument(format!("bad prime in field descriptor `{s}`")))?;
            Gf::new(p)?;
            return Ok(FieldDescriptor::Prime(p));
        }
        Err(Error::argument(format!("unknown field `{s}` (expected gfp:P or rational)")))
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut q = 2u64;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// The prime field GF(p), p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gf {
    p: u32,
    /// `⌊(2^64 − 1)/p⌋`, for Barrett reduction of products.
    barrett: u64,
}

impl Gf {
    pub fn new(p: u32) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::argument(format!("{p} is not a prime below 2^31")));
        }
        Ok(Gf::with_prime(p))
    }

    fn with_prime(p: u32) -> Self {
        Gf { p, barrett: u64::MAX / p as u64 }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

impl Default for Gf {
    fn default() -> Self {
        Gf::with_prime(DEFAULT_PRIME)
    }
}

impl Ring for Gf {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    #[inline]
    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a + *b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        // x < 2^62, so the quotient estimate is off by at most one.
        let x = *a as u64 * *b as u64;
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let r = (x - q * self.p as u64) as u32;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
}

impl Field for Gf {
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a % self.p == 0 {
            None
        } else {
            Some(self.pow(*a, self.p as u64 - 2))
        }
    }

    fn characteristic(&self) -> u64 {
        self.p as u64
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }

    fn parse_elem(&self, s: &str) -> Result<u32> {
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.parse().map_err(|_| Error::input(format!("bad number `{s}`")))?;
            let d: i64 = den.parse().map_err(|_| Error::input(format!("bad number `{s}`")))?;
            let d = self.from_i64(d);
            let di = self
                .inv(&d)
                .ok_or_else(|| Error::input(format!("denominator of `{s}` vanishes mod {}", self.p)))?;
            return Ok(self.mul(&self.from_i64(n), &di));
        }
        let v: i64 = s.parse().map_err(|_| Error::input(format!("bad number `{s}`")))?;
        Ok(self.from_i64(v))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn rank(&self, m: &SparseMatrix<Self>) -> usize {
        rank::rank_mod_p(m, self.p)
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let bad = || Error::input(format!("bad rational `{s}`"));
        match s.split_once('/') {
            Some((num, den)) => {
                let n: BigInt = num.parse().map_err(|_| bad())?;
                let d: BigInt = den.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::input(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let n: i64 = rng.gen_range(-6..=6);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rank(&self, m: &SparseMatrix<Self>) -> usize {
        rank::rank_rational(m)
    }
}

/// Plain machine integers, used as coefficients of formal symbolic chains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a * b
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> i64 {
        v
    }
    fn format(&self, a: &i64) -> String {
        a.to_string()
    }
}

/// Sign `(-1)^i` as a field element.
pub fn sign<F: Ring>(field: &F, i: usize) -> F::Elem {
    if i % 2 == 0 {
        field.one()
    } else {
        field.neg(&field.one())
    }
}
