//! Asymmetric bilinear groups behind a common interface.
//!
//! Two implementations exist: [`Bls12Backend`] over the BLS12-381 curve, and
//! [`MockBackend`], which represents every element by its discrete logarithm
//! modulo a small prime. The mock makes every algebraic identity of the scheme
//! checkable with exact integer arithmetic.
//!
//! All scheme code goes through [`GroupSuite`], which records expensive
//! operations into the active [`counter`] scope (if any).

mod bls;
pub mod counter;
mod mock;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;

pub use bls::{Bls12Backend, BlsG1, BlsG2, BlsGt};
pub use counter::{CostVector, OpClass, OperationCounter};
pub use mock::{MockBackend, MockElem, MockG1, MockG2, MockGt, MockScalar};

use crate::error::{BackendError, CodecError};

/// Which of the three groups an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    G1,
    G2,
    Gt,
}

impl GroupKind {
    pub fn label(self) -> &'static str {
        match self {
            GroupKind::G1 => "G1",
            GroupKind::G2 => "G2",
            GroupKind::Gt => "GT",
        }
    }
}

/// One-byte identifier written in front of every serialized suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum BackendTag {
    Bls12_381 = 0x01,
    Mock = 0xf0,
}

impl BackendTag {
    pub fn from_byte(b: u8) -> Result<Self, CodecError> {
        match b {
            0x01 => Ok(BackendTag::Bls12_381),
            0xf0 => Ok(BackendTag::Mock),
            other => Err(CodecError::UnknownBackend(other)),
        }
    }
}

/// Exponents in `Z_p`.
pub trait ScalarField:
    Copy
    + Debug
    + Eq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    fn encode(&self) -> Vec<u8>;
    /// Decodes using `template` for context (the mock needs its modulus).
    fn decode_like(template: &Self, bytes: &[u8]) -> Result<Self, CodecError>;
}

/// An element of `G`, `Ĝ` or `G_T`, written multiplicatively.
///
/// The `*_raw` methods do not touch operation counters; scheme code uses the
/// counted wrappers on [`GroupSuite`].
pub trait GroupElement: Copy + Debug + Eq + Send + Sync + 'static + Mul<Output = Self> {
    type Scalar: ScalarField;
    const KIND: GroupKind;

    fn pow_raw(&self, s: &Self::Scalar) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;

    /// `∏ bases[i]^scalars[i]`; callers guarantee equal, non-zero lengths.
    fn multi_pow_raw(bases: &[Self], scalars: &[Self::Scalar]) -> Self {
        bases
            .iter()
            .zip(scalars)
            .map(|(b, s)| b.pow_raw(s))
            .reduce(|a, b| a * b)
            .expect("non-empty multi-exponentiation")
    }

    fn encode(&self) -> Vec<u8>;
    fn decode_like(template: &Self, bytes: &[u8]) -> Result<Self, CodecError>;
}

/// A concrete choice of `(p, G, Ĝ, G_T, e)`.
pub trait PairingBackend: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Scalar: ScalarField;
    type G1: GroupElement<Scalar = Self::Scalar>;
    type G2: GroupElement<Scalar = Self::Scalar>;
    type Gt: GroupElement<Scalar = Self::Scalar>;

    fn tag(&self) -> BackendTag;
    /// Group order as big-endian bytes.
    fn order_be_bytes(&self) -> Vec<u8>;
    /// Backend parameters written after the tag when a suite is serialized.
    fn params(&self) -> Vec<u8>;
    fn from_params(bytes: &[u8]) -> Result<Self, CodecError>;

    fn scalar_from_u64(&self, v: u64) -> Self::Scalar;
    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Scalar;
    /// Interprets `bytes` as a big-endian integer and reduces it modulo `p`.
    fn scalar_from_be_bytes_mod_order(&self, bytes: &[u8]) -> Self::Scalar;

    fn g1_generator(&self) -> Self::G1;
    fn g2_generator(&self) -> Self::G2;
    fn g1_identity(&self) -> Self::G1;
    fn g2_identity(&self) -> Self::G2;
    fn gt_identity(&self) -> Self::Gt;

    fn pairing_raw(&self, a: &Self::G1, b: &Self::G2) -> Self::Gt;
    fn multi_pairing_raw(&self, a: &[Self::G1], b: &[Self::G2]) -> Self::Gt;
}

/// A bilinear group description plus counted group operations.
///
/// Cheap to clone; immutable after construction.
#[derive(Clone, Debug)]
pub struct GroupSuite<B: PairingBackend> {
    backend: B,
}

impl GroupSuite<MockBackend> {
    /// Mock suite over `Z_p`. `p` must be a prime `≥ 101`.
    pub fn mock(p: u64, seed: u64) -> Result<Self, BackendError> {
        Ok(Self::new(MockBackend::new(p, seed)?))
    }
}

impl GroupSuite<Bls12Backend> {
    /// The default concrete suite, BLS12-381.
    pub fn bls12_381() -> Self {
        Self::new(Bls12Backend)
    }

    /// Looks up a concrete type-III curve by name.
    pub fn concrete(curve_id: &str) -> Result<Self, BackendError> {
        match curve_id.to_ascii_lowercase().as_str() {
            "default" | "bls12-381" | "bls12_381" => Ok(Self::bls12_381()),
            _ => Err(BackendError::UnknownCurve(curve_id.to_string())),
        }
    }
}

impl<B: PairingBackend> GroupSuite<B> {
    pub fn new(backend: B) -> Self {
        GroupSuite { backend }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn tag(&self) -> BackendTag {
        self.backend.tag()
    }

    /// Tag byte followed by the backend parameters.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.tag() as u8];
        out.extend(self.backend.params());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let (&tag, rest) = bytes.split_first().ok_or(CodecError::Truncated)?;
        let tag = BackendTag::from_byte(tag)?;
        let backend = B::from_params(rest)?;
        if backend.tag() != tag {
            return Err(CodecError::BackendMismatch);
        }
        Ok(Self::new(backend))
    }

    pub fn g1(&self) -> B::G1 {
        self.backend.g1_generator()
    }

    pub fn g2(&self) -> B::G2 {
        self.backend.g2_generator()
    }

    /// `e(g, ĝ)` for the fixed generators. Not counted.
    pub fn gt_generator(&self) -> B::Gt {
        self.backend.pairing_raw(&self.g1(), &self.g2())
    }

    pub fn scalar(&self, v: u64) -> B::Scalar {
        self.backend.scalar_from_u64(v)
    }

    pub fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> B::Scalar {
        self.backend.random_scalar(rng)
    }

    /// Uniform non-zero scalar.
    pub fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> B::Scalar {
        loop {
            let s = self.backend.random_scalar(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn exp<E: GroupElement<Scalar = B::Scalar>>(&self, base: &E, s: &B::Scalar) -> E {
        counter::record(OpClass::Exp(E::KIND));
        base.pow_raw(s)
    }

    pub fn multi_exp<E: GroupElement<Scalar = B::Scalar>>(
        &self,
        bases: &[E],
        scalars: &[B::Scalar],
    ) -> Result<E, BackendError> {
        if bases.len() != scalars.len() {
            return Err(BackendError::LengthMismatch {
                left: bases.len(),
                right: scalars.len(),
            });
        }
        if bases.is_empty() {
            return Err(BackendError::Empty);
        }
        counter::record(OpClass::MultiExp(E::KIND, bases.len()));
        Ok(E::multi_pow_raw(bases, scalars))
    }

    pub fn pair(&self, a: &B::G1, b: &B::G2) -> B::Gt {
        counter::record(OpClass::Pair);
        self.backend.pairing_raw(a, b)
    }

    pub fn multi_pair(&self, a: &[B::G1], b: &[B::G2]) -> Result<B::Gt, BackendError> {
        if a.len() != b.len() {
            return Err(BackendError::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        if a.is_empty() {
            return Err(BackendError::Empty);
        }
        counter::record(OpClass::MultiPair(a.len()));
        Ok(self.backend.multi_pairing_raw(a, b))
    }
}
