//! Prime-field arithmetic over `F_p` with a runtime modulus.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime in [2, 2^61)")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("cannot parse field element from {0:?}")]
    Parse(String),
}

/// Largest admissible modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 61;

/// A prime modulus `2 <= p < 2^61`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < MAX_PRIME && is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Smallest prime strictly greater than `n`, or `None` past `2^61`.
    pub fn next_above(n: u64) -> Option<Self> {
        let mut c = n.checked_add(1)?.max(2);
        while c < MAX_PRIME {
            if is_prime(c) {
                return Some(Prime(c));
            }
            c += 1;
        }
        None
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, p: self }
    }

    pub fn one(self) -> FieldElement {
        FieldElement { value: 1 % self.0, p: self }
    }

    pub fn elem(self, v: u64) -> FieldElement {
        FieldElement { value: v % self.0, p: self }
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        let m = self.0 as i128;
        let r = (v as i128).rem_euclid(m);
        FieldElement { value: r as u64, p: self }
    }

    /// Uniform sample from `[0, p)`.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElement {
        FieldElement { value: rng.gen_range(0..self.0), p: self }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Canonical representative in `[0, p)` together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: Prime,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.p
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn inverse(self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        // Extended Euclid on (value, p).
        let (mut r0, mut r1) = (self.p.0 as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.p.from_i128(t0))
    }

    pub fn pow(self, e: u64) -> FieldElement {
        FieldElement { value: pow_mod(self.value, e, self.p.0), p: self.p }
    }

    /// Representative in `(-p/2, p/2]`, handy for printing small negatives.
    pub fn signed(self) -> i64 {
        if self.value > self.p.0 / 2 {
            -((self.p.0 - self.value) as i64)
        } else {
            self.value as i64
        }
    }

    pub fn parse(s: &str, p: Prime) -> Result<FieldElement, FieldError> {
        let t = s.trim();
        if let Ok(v) = t.parse::<i64>() {
            return Ok(p.from_i64(v));
        }
        t.parse::<u64>().map(|v| p.elem(v)).map_err(|_| FieldError::Parse(s.to_string()))
    }
}

impl Prime {
    fn from_i128(self, v: i128) -> FieldElement {
        FieldElement { value: v.rem_euclid(self.0 as i128) as u64, p: self }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, o: FieldElement) -> FieldElement {
        debug_assert_eq!(self.p, o.p);
        let m = self.p.0;
        let s = self.value + o.value;
        FieldElement { value: if s >= m { s - m } else { s }, p: self.p }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, o: FieldElement) -> FieldElement {
        debug_assert_eq!(self.p, o.p);
        let m = self.p.0;
        let v = if self.value >= o.value { self.value - o.value } else { self.value + m - o.value };
        FieldElement { value: v, p: self.p }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, o: FieldElement) -> FieldElement {
        debug_assert_eq!(self.p, o.p);
        FieldElement { value: mul_mod(self.value, o.value, self.p.0), p: self.p }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> FieldElement {
        let v = if self.value == 0 { 0 } else { self.p.0 - self.value };
        FieldElement { value: v, p: self.p }
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, o: FieldElement) {
        *self = *self + o;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, o: FieldElement) {
        *self = *self - o;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, o: FieldElement) {
        *self = *self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ext_euclid_inverse(a: i64, m: i64) -> i64 {
        // Independent oracle: search for v with a*v = 1 mod m.
        (1..m).find(|v| (a * v).rem_euclid(m) == 1).unwrap()
    }

    #[test]
    fn small_inverses() {
        let p7 = Prime::new(7).unwrap();
        assert_eq!(p7.elem(3).inverse().unwrap().value(), 5);
        let p2 = Prime::new(2).unwrap();
        assert_eq!(p2.elem(1).inverse().unwrap().value(), 1);
        let p = Prime::new(10007).unwrap();
        let inv = p.elem(1234).inverse().unwrap();
        assert_eq!(inv.value() as i64, ext_euclid_inverse(1234, 10007));
        assert_eq!((p.elem(1234) * inv).value(), 1);
    }

    #[test]
    fn zero_has_no_inverse() {
        let p = Prime::new(7).unwrap();
        assert_eq!(p.zero().inverse(), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn rejects_composites_and_out_of_range() {
        for n in [0u64, 1, 4, 9, 561, 1 << 61, (1 << 61) + 1] {
            assert!(Prime::new(n).is_err(), "{n}");
        }
        assert!(Prime::new((1 << 61) - 1).is_ok());
        assert_eq!(Prime::next_above(1_000_000).unwrap().get(), 1_000_003);
        assert_eq!(Prime::next_above(0).unwrap().get(), 2);
    }

    #[test]
    fn sampling_is_reproducible_and_in_range() {
        let p = Prime::new(101).unwrap();
        let a: Vec<u64> = {
            let mut r = ChaCha8Rng::seed_from_u64(7);
            (0..50).map(|_| p.sample(&mut r).value()).collect()
        };
        let b: Vec<u64> = {
            let mut r = ChaCha8Rng::seed_from_u64(7);
            (0..50).map(|_| p.sample(&mut r).value()).collect()
        };
        assert_eq!(a, b);
        let two = Prime::new(2).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(1);
        assert!((0..100).all(|_| two.sample(&mut r).value() < 2));
    }

    #[test]
    fn sampling_passes_chi_square() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let p = Prime::new(101).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let mut counts = vec![0u64; 101];
        for _ in 0..n {
            counts[p.sample(&mut r).value() as usize] += 1;
        }
        let expected = n as f64 / 101.0;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let critical = ChiSquared::new(100.0).unwrap().inverse_cdf(0.999);
        assert!(stat < critical, "chi2 {stat} >= {critical}");
    }

    fn arb_triple() -> impl Strategy<Value = (u64, u64, u64, u64)> {
        prop_oneof![Just(2u64), Just(7), Just(10007), Just((1u64 << 61) - 1)]
            .prop_flat_map(|p| (Just(p), 0..p, 0..p, 0..p))
    }

    proptest! {
        #[test]
        fn field_axioms((p, a, b, c) in arb_triple()) {
            let p = Prime::new(p).unwrap();
            let (a, b, c) = (p.elem(a), p.elem(b), p.elem(c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - b + b, a);
            prop_assert_eq!(a + (-a), p.zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inverse().unwrap(), p.one());
            }
        }

        #[test]
        fn text_round_trip((p, a, _b, _c) in arb_triple()) {
            let p = Prime::new(p).unwrap();
            let e = p.elem(a);
            prop_assert_eq!(FieldElement::parse(&e.to_string(), p).unwrap(), e);
        }
    }
}
