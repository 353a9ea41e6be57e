use std::ops::Mul;

use ark_bls12_381::{Bls12_381, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{CurveGroup, Group, VariableBaseMSM};
use ark_ff::{BigInteger, Field, PrimeField, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use rand::RngCore;

use super::{BackendTag, GroupElement, GroupKind, PairingBackend, ScalarField};
use crate::error::CodecError;

type Gt = PairingOutput<Bls12_381>;

impl ScalarField for Fr {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn inverse(&self) -> Option<Self> {
        Field::inverse(self)
    }

    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32);
        self.serialize_compressed(&mut out).expect("vec write");
        out
    }

    fn decode_like(_: &Self, bytes: &[u8]) -> Result<Self, CodecError> {
        let mut reader = bytes;
        let v = Fr::deserialize_compressed(&mut reader).map_err(|_| CodecError::InvalidElement)?;
        if !reader.is_empty() {
            return Err(CodecError::TrailingBytes);
        }
        Ok(v)
    }
}

fn encode_canonical<T: CanonicalSerialize>(v: &T) -> Vec<u8> {
    let mut out = Vec::with_capacity(v.compressed_size());
    v.serialize_compressed(&mut out).expect("vec write");
    out
}

fn decode_canonical<T: CanonicalDeserialize>(bytes: &[u8]) -> Result<T, CodecError> {
    let mut reader = bytes;
    // Validation includes the subgroup check.
    let v = T::deserialize_compressed(&mut reader).map_err(|_| CodecError::InvalidElement)?;
    if !reader.is_empty() {
        return Err(CodecError::TrailingBytes);
    }
    Ok(v)
}

/// Element of `G` on BLS12-381.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlsG1(pub G1Projective);

/// Element of `Ĝ` on BLS12-381.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlsG2(pub G2Projective);

/// Element of `G_T` on BLS12-381.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlsGt(pub Gt);

macro_rules! curve_element {
    ($name:ident, $proj:ty, $affine:ty, $kind:expr) => {
        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                $name(self.0 + rhs.0)
            }
        }

        impl GroupElement for $name {
            type Scalar = Fr;
            const KIND: GroupKind = $kind;

            fn pow_raw(&self, s: &Fr) -> Self {
                $name(self.0 * s)
            }

            fn inverse(&self) -> Self {
                $name(-self.0)
            }

            fn is_identity(&self) -> bool {
                self.0.is_zero()
            }

            fn multi_pow_raw(bases: &[Self], scalars: &[Fr]) -> Self {
                let proj: Vec<$proj> = bases.iter().map(|b| b.0).collect();
                let affine: Vec<$affine> = <$proj>::normalize_batch(&proj);
                $name(<$proj as VariableBaseMSM>::msm(&affine, scalars).expect("equal lengths"))
            }

            fn encode(&self) -> Vec<u8> {
                encode_canonical(&self.0.into_affine())
            }

            fn decode_like(_: &Self, bytes: &[u8]) -> Result<Self, CodecError> {
                let a: $affine = decode_canonical(bytes)?;
                Ok($name(a.into()))
            }
        }
    };
}

curve_element!(BlsG1, G1Projective, G1Affine, GroupKind::G1);
curve_element!(BlsG2, G2Projective, G2Affine, GroupKind::G2);

impl Mul for BlsGt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        BlsGt(self.0 + rhs.0)
    }
}

impl GroupElement for BlsGt {
    type Scalar = Fr;
    const KIND: GroupKind = GroupKind::Gt;

    fn pow_raw(&self, s: &Fr) -> Self {
        BlsGt(self.0 * s)
    }

    fn inverse(&self) -> Self {
        BlsGt(-self.0)
    }

    fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    fn encode(&self) -> Vec<u8> {
        encode_canonical(&self.0)
    }

    fn decode_like(_: &Self, bytes: &[u8]) -> Result<Self, CodecError> {
        let v: Gt = decode_canonical(bytes)?;
        // PairingOutput deserialization does not check membership in the
        // order-p subgroup of F_{p^12}^*.
        if v.0.pow(Fr::MODULUS) != <Bls12_381 as Pairing>::TargetField::ONE {
            return Err(CodecError::InvalidElement);
        }
        Ok(BlsGt(v))
    }
}

/// BLS12-381 (type III, ~128-bit security).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bls12Backend;

const CURVE_BLS12_381: u8 = 0x01;

impl PairingBackend for Bls12Backend {
    type Scalar = Fr;
    type G1 = BlsG1;
    type G2 = BlsG2;
    type Gt = BlsGt;

    fn tag(&self) -> BackendTag {
        BackendTag::Bls12_381
    }

    fn order_be_bytes(&self) -> Vec<u8> {
        Fr::MODULUS.to_bytes_be()
    }

    fn params(&self) -> Vec<u8> {
        vec![CURVE_BLS12_381]
    }

    fn from_params(bytes: &[u8]) -> Result<Self, CodecError> {
        match bytes {
            [CURVE_BLS12_381] => Ok(Bls12Backend),
            _ => Err(CodecError::BackendMismatch),
        }
    }

    fn scalar_from_u64(&self, v: u64) -> Fr {
        Fr::from(v)
    }

    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Fr {
        // 512 bits reduced mod a 255-bit order: statistical distance 2^-257.
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Fr::from_be_bytes_mod_order(&wide)
    }

    fn scalar_from_be_bytes_mod_order(&self, bytes: &[u8]) -> Fr {
        Fr::from_be_bytes_mod_order(bytes)
    }

    fn g1_generator(&self) -> BlsG1 {
        BlsG1(G1Projective::generator())
    }

    fn g2_generator(&self) -> BlsG2 {
        BlsG2(G2Projective::generator())
    }

    fn g1_identity(&self) -> BlsG1 {
        BlsG1(G1Projective::zero())
    }

    fn g2_identity(&self) -> BlsG2 {
        BlsG2(G2Projective::zero())
    }

    fn gt_identity(&self) -> BlsGt {
        BlsGt(Gt::zero())
    }

    fn pairing_raw(&self, a: &BlsG1, b: &BlsG2) -> BlsGt {
        BlsGt(Bls12_381::pairing(a.0, b.0))
    }

    fn multi_pairing_raw(&self, a: &[BlsG1], b: &[BlsG2]) -> BlsGt {
        let xs = G1Projective::normalize_batch(&a.iter().map(|x| x.0).collect::<Vec<_>>());
        let ys = G2Projective::normalize_batch(&b.iter().map(|y| y.0).collect::<Vec<_>>());
        BlsGt(Bls12_381::multi_pairing(xs, ys))
    }
}
