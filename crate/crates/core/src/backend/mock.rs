//! Exponent-bookkeeping backend over a small prime.
//!
//! An element is stored as its discrete logarithm with respect to the fixed
//! generator of its group. Exponentiation scales the log, the group law adds
//! logs, and the pairing multiplies them. Nothing here is hiding; the point
//! is that every identity of the scheme becomes exact integer equality.

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{BackendTag, GroupElement, GroupKind, PairingBackend, ScalarField};
use crate::error::{BackendError, CodecError};

const MIN_MODULUS: u64 = 101;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these witnesses cover every `u64`.
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue modulo the mock prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MockScalar {
    value: u64,
    modulus: u64,
}

impl MockScalar {
    pub fn new(value: u64, modulus: u64) -> Self {
        MockScalar { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Debug for MockScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for MockScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        MockScalar { value: s as u64, modulus: self.modulus }
    }
}

impl Neg for MockScalar {
    type Output = Self;
    fn neg(self) -> Self {
        MockScalar {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for MockScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for MockScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        MockScalar {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl ScalarField for MockScalar {
    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        Some(MockScalar {
            value: pow_mod(self.value, self.modulus - 2, self.modulus),
            modulus: self.modulus,
        })
    }

    fn encode(&self) -> Vec<u8> {
        self.value.to_be_bytes().to_vec()
    }

    fn decode_like(template: &Self, bytes: &[u8]) -> Result<Self, CodecError> {
        let value = decode_u64(bytes)?;
        if value >= template.modulus {
            return Err(CodecError::OutOfRange);
        }
        Ok(MockScalar { value, modulus: template.modulus })
    }
}

fn decode_u64(bytes: &[u8]) -> Result<u64, CodecError> {
    let arr: [u8; 8] = bytes.try_into().map_err(|_| CodecError::BadLength {
        expected: 8,
        found: bytes.len(),
    })?;
    Ok(u64::from_be_bytes(arr))
}

/// Marker for which group a [`MockElem`] belongs to.
pub trait MockKind: Copy + Eq + Hash + Send + Sync + 'static {
    const KIND: GroupKind;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct G1Tag;
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct G2Tag;
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GtTag;

impl MockKind for G1Tag {
    const KIND: GroupKind = GroupKind::G1;
}
impl MockKind for G2Tag {
    const KIND: GroupKind = GroupKind::G2;
}
impl MockKind for GtTag {
    const KIND: GroupKind = GroupKind::Gt;
}

/// A mock group element, stored as its discrete log.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MockElem<K: MockKind> {
    log: u64,
    modulus: u64,
    _kind: PhantomData<K>,
}

pub type MockG1 = MockElem<G1Tag>;
pub type MockG2 = MockElem<G2Tag>;
pub type MockGt = MockElem<GtTag>;

impl<K: MockKind> MockElem<K> {
    pub fn from_log(log: u64, modulus: u64) -> Self {
        MockElem { log: log % modulus, modulus, _kind: PhantomData }
    }

    /// Discrete log with respect to the fixed generator of the group.
    pub fn log(&self) -> u64 {
        self.log
    }

    pub fn log_scalar(&self) -> MockScalar {
        MockScalar::new(self.log, self.modulus)
    }
}

impl<K: MockKind> fmt::Debug for MockElem<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", K::KIND.label(), self.log)
    }
}

impl<K: MockKind> Mul for MockElem<K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let s = (self.log as u128 + rhs.log as u128) % self.modulus as u128;
        MockElem::from_log(s as u64, self.modulus)
    }
}

impl<K: MockKind> GroupElement for MockElem<K> {
    type Scalar = MockScalar;
    const KIND: GroupKind = K::KIND;

    fn pow_raw(&self, s: &MockScalar) -> Self {
        MockElem::from_log(mul_mod(self.log, s.value, self.modulus), self.modulus)
    }

    fn inverse(&self) -> Self {
        MockElem::from_log((self.modulus - self.log) % self.modulus, self.modulus)
    }

    fn is_identity(&self) -> bool {
        self.log == 0
    }

    fn encode(&self) -> Vec<u8> {
        self.log.to_be_bytes().to_vec()
    }

    fn decode_like(template: &Self, bytes: &[u8]) -> Result<Self, CodecError> {
        let log = decode_u64(bytes)?;
        if log >= template.modulus {
            return Err(CodecError::OutOfRange);
        }
        Ok(MockElem::from_log(log, template.modulus))
    }
}

/// Mock bilinear group of prime order `p`, with a seed for reproducible draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MockBackend {
    p: u64,
    seed: u64,
}

impl MockBackend {
    pub fn new(p: u64, seed: u64) -> Result<Self, BackendError> {
        if p < MIN_MODULUS || !is_prime(p) {
            return Err(BackendError::InvalidModulus(p));
        }
        Ok(MockBackend { p, seed })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A fresh RNG stream determined by the suite seed.
    pub fn seeded_rng(&self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.seed)
    }

    pub fn scalar(&self, v: u64) -> MockScalar {
        MockScalar::new(v, self.p)
    }
}

impl PairingBackend for MockBackend {
    type Scalar = MockScalar;
    type G1 = MockG1;
    type G2 = MockG2;
    type Gt = MockGt;

    fn tag(&self) -> BackendTag {
        BackendTag::Mock
    }

    fn order_be_bytes(&self) -> Vec<u8> {
        self.p.to_be_bytes().to_vec()
    }

    fn params(&self) -> Vec<u8> {
        let mut out = self.p.to_be_bytes().to_vec();
        out.extend(self.seed.to_be_bytes());
        out
    }

    fn from_params(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() != 16 {
            return Err(CodecError::BadLength { expected: 16, found: bytes.len() });
        }
        let p = decode_u64(&bytes[..8])?;
        let seed = decode_u64(&bytes[8..])?;
        MockBackend::new(p, seed).map_err(|_| CodecError::OutOfRange)
    }

    fn scalar_from_u64(&self, v: u64) -> MockScalar {
        MockScalar::new(v, self.p)
    }

    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> MockScalar {
        MockScalar::new(rng.gen_range(0..self.p), self.p)
    }

    fn scalar_from_be_bytes_mod_order(&self, bytes: &[u8]) -> MockScalar {
        let p = self.p as u128;
        let v = bytes.iter().fold(0u128, |acc, &b| (acc * 256 + b as u128) % p);
        MockScalar::new(v as u64, self.p)
    }

    fn g1_generator(&self) -> MockG1 {
        MockElem::from_log(1, self.p)
    }

    fn g2_generator(&self) -> MockG2 {
        MockElem::from_log(1, self.p)
    }

    fn g1_identity(&self) -> MockG1 {
        MockElem::from_log(0, self.p)
    }

    fn g2_identity(&self) -> MockG2 {
        MockElem::from_log(0, self.p)
    }

    fn gt_identity(&self) -> MockGt {
        MockElem::from_log(0, self.p)
    }

    fn pairing_raw(&self, a: &MockG1, b: &MockG2) -> MockGt {
        MockElem::from_log(mul_mod(a.log, b.log, self.p), self.p)
    }

    fn multi_pairing_raw(&self, a: &[MockG1], b: &[MockG2]) -> MockGt {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.pairing_raw(x, y))
            .fold(self.gt_identity(), |acc, v| acc * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_559));
    }

    #[test]
    fn scalar_arithmetic() {
        let b = MockBackend::new(101, 0).unwrap();
        let a = b.scalar(100);
        assert_eq!((a + b.scalar(5)).value(), 4);
        assert_eq!((b.scalar(3) - b.scalar(5)).value(), 99);
        assert_eq!((-b.scalar(0)).value(), 0);
        assert_eq!((b.scalar(7) * b.scalar(15)).value(), 4);
        let inv = b.scalar(7).inverse().unwrap();
        assert_eq!((inv * b.scalar(7)).value(), 1);
        assert!(b.scalar(0).inverse().is_none());
    }

    #[test]
    fn wide_reduction() {
        let b = MockBackend::new(1009, 0).unwrap();
        assert_eq!(b.scalar_from_be_bytes_mod_order(&[0x01, 0x00]).value(), 256);
        assert_eq!(b.scalar_from_be_bytes_mod_order(&[0x03, 0xf1]).value(), 0);
        assert_eq!(b.scalar_from_be_bytes_mod_order(&[0xff; 64]).value(),
            (0..64).fold(0u64, |acc, _| (acc * 256 + 255) % 1009));
    }

    #[test]
    fn decode_rejects_out_of_range() {
        let b = MockBackend::new(101, 0).unwrap();
        let t = b.g1_identity();
        assert!(matches!(MockG1::decode_like(&t, &101u64.to_be_bytes()), Err(CodecError::OutOfRange)));
        assert!(matches!(MockG1::decode_like(&t, &[1, 2, 3]), Err(CodecError::BadLength { .. })));
    }
}
