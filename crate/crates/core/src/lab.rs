//! Semi-functional keys and ciphertexts.
//!
//! These algorithms need the setup trapdoor and break anonymity outright.
//! They exist so the test suite can exercise the dual-system structure of
//! the scheme: semi-functional mass added along `f = g^{y_f}` cancels against
//! normal counterparts and survives (as a `G_T` residual) when both sides
//! are semi-functional.

use rand::RngCore;

use crate::backend::{GroupElement, GroupSuite, PairingBackend, ScalarField};
use crate::error::SchemeError;
use crate::scheme::{
    self, Ciphertext, DelegateRandomness, Identity, KeyGenRandomness, MasterKey, PrivateKey,
    PublicParams, TrapdoorTranscript,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiFunctionalParams<B: PairingBackend> {
    pub y_f: B::Scalar,
    /// `g^{y_f}`
    pub f: B::G1,
    /// `ĝ^{y_f}`
    pub f_hat: B::G2,
    pub nu: B::Scalar,
    pub phi2: B::Scalar,
}

pub fn sf_params<B: PairingBackend, R: RngCore + ?Sized>(
    transcript: &TrapdoorTranscript<B::Scalar>,
    pp: &PublicParams<B>,
    rng: &mut R,
) -> SemiFunctionalParams<B> {
    sf_params_with(transcript, pp, pp.suite.random_scalar(rng))
}

pub fn sf_params_with<B: PairingBackend>(
    transcript: &TrapdoorTranscript<B::Scalar>,
    pp: &PublicParams<B>,
    y_f: B::Scalar,
) -> SemiFunctionalParams<B> {
    let suite = &pp.suite;
    let g_hat = suite.g2().pow_raw(&transcript.g_hat_exp);
    SemiFunctionalParams {
        y_f,
        f: pp.g[0].pow_raw(&y_f),
        f_hat: g_hat.pow_raw(&y_f),
        nu: transcript.nu,
        phi2: transcript.phi2,
    }
}

/// Exponents of a semi-functional key. A type-1 key has `z_k3 = z_k1` and
/// `z_k4 = z_k2`; a type-2 key draws them independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SfKeyRandomness<S> {
    pub s_k1: S,
    pub z_k1: S,
    /// One per delegation level `m+1..l`.
    pub z_k2: Vec<S>,
    pub s_k2: S,
    pub z_k3: S,
    pub z_k4: Vec<S>,
}

impl<S: ScalarField> SfKeyRandomness<S> {
    pub fn sample_type1<B, R>(suite: &GroupSuite<B>, levels: usize, rng: &mut R) -> Self
    where
        B: PairingBackend<Scalar = S>,
        R: RngCore + ?Sized,
    {
        let s_k1 = suite.random_scalar(rng);
        let z_k1 = suite.random_scalar(rng);
        let z_k2: Vec<S> = (0..levels).map(|_| suite.random_scalar(rng)).collect();
        let s_k2 = suite.random_scalar(rng);
        SfKeyRandomness { s_k1, z_k1, z_k3: z_k1, z_k4: z_k2.clone(), z_k2, s_k2 }
    }

    pub fn sample_type2<B, R>(suite: &GroupSuite<B>, levels: usize, rng: &mut R) -> Self
    where
        B: PairingBackend<Scalar = S>,
        R: RngCore + ?Sized,
    {
        let mut r = Self::sample_type1(suite, levels, rng);
        r.z_k3 = suite.random_scalar(rng);
        r.z_k4 = (0..levels).map(|_| suite.random_scalar(rng)).collect();
        r
    }

    pub fn is_type1(&self) -> bool {
        self.z_k3 == self.z_k1 && self.z_k4 == self.z_k2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SfCiphertextRandomness<S> {
    pub s_c: S,
    pub z_c: S,
}

/// Multiplies `(f̂^{−ν})^e` and `f̂^e` into the first two components.
fn add_sf_mass<B: PairingBackend>(block: &mut [B::G2; 3], sfp: &SemiFunctionalParams<B>, e: B::Scalar) {
    block[0] = block[0] * sfp.f_hat.pow_raw(&(-sfp.nu * e));
    block[1] = block[1] * sfp.f_hat.pow_raw(&e);
}

/// A normal key built from `normal`, with the semi-functional factors of
/// `sf` multiplied in. Third components are left alone.
pub fn keygen_sf_with<B: PairingBackend>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    normal: &KeyGenRandomness<B::Scalar>,
    sf: &SfKeyRandomness<B::Scalar>,
) -> Result<PrivateKey<B>, SchemeError> {
    let mut sk = scheme::keygen_with(id, mk, pp, normal)?;
    let levels = sk.l3.len();
    if [sf.z_k2.len(), sf.z_k4.len()] != [levels, levels] {
        return Err(SchemeError::RandomnessShape);
    }
    add_sf_mass(&mut sk.k1, sfp, sf.s_k1 * sf.z_k1);
    add_sf_mass(&mut sk.k2, sfp, sf.s_k1);
    for (block, z) in sk.l3.iter_mut().zip(&sf.z_k2) {
        add_sf_mass(block, sfp, sf.s_k1 * *z);
    }
    add_sf_mass(&mut sk.r1, sfp, sf.s_k2 * sf.z_k3);
    add_sf_mass(&mut sk.r2, sfp, sf.s_k2);
    for (block, z) in sk.r3.iter_mut().zip(&sf.z_k4) {
        add_sf_mass(block, sfp, sf.s_k2 * *z);
    }
    Ok(sk)
}

fn keygen_sf<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    rng: &mut R,
    type2: bool,
) -> Result<(PrivateKey<B>, SfKeyRandomness<B::Scalar>), SchemeError> {
    let levels = pp.max_depth.checked_sub(id.depth()).ok_or(SchemeError::DepthExceeded {
        depth: id.depth(),
        max: pp.max_depth,
    })?;
    let normal = KeyGenRandomness::sample(&pp.suite, levels, rng);
    let sf = if type2 {
        SfKeyRandomness::sample_type2(&pp.suite, levels, rng)
    } else {
        SfKeyRandomness::sample_type1(&pp.suite, levels, rng)
    };
    Ok((keygen_sf_with(id, mk, pp, sfp, &normal, &sf)?, sf))
}

pub fn keygen_sf1<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    rng: &mut R,
) -> Result<(PrivateKey<B>, SfKeyRandomness<B::Scalar>), SchemeError> {
    keygen_sf(id, mk, pp, sfp, rng, false)
}

pub fn keygen_sf2<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    rng: &mut R,
) -> Result<(PrivateKey<B>, SfKeyRandomness<B::Scalar>), SchemeError> {
    keygen_sf(id, mk, pp, sfp, rng, true)
}

/// A type-1 key whose `z_k1` is the given ciphertext exponent `z_c`.
pub fn nominal_sf1_keygen<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    z_c: B::Scalar,
    rng: &mut R,
) -> Result<(PrivateKey<B>, SfKeyRandomness<B::Scalar>), SchemeError> {
    let levels = pp.max_depth.checked_sub(id.depth()).ok_or(SchemeError::DepthExceeded {
        depth: id.depth(),
        max: pp.max_depth,
    })?;
    let normal = KeyGenRandomness::sample(&pp.suite, levels, rng);
    let mut sf = SfKeyRandomness::sample_type1(&pp.suite, levels, rng);
    sf.z_k1 = z_c;
    sf.z_k3 = z_c;
    Ok((keygen_sf_with(id, mk, pp, sfp, &normal, &sf)?, sf))
}

/// A normal ciphertext with encryption exponent `t`, times
/// `f^{s_c}, f^{−φ2 s_c}` on `C_{1,2}, C_{1,3}` and the same raised to `z_c`
/// on `C_{2,2}, C_{2,3}`.
pub fn encrypt_sf_with<B: PairingBackend>(
    id: &Identity<B>,
    msg: &B::Gt,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    t: &B::Scalar,
    sf: &SfCiphertextRandomness<B::Scalar>,
) -> Result<Ciphertext<B>, SchemeError> {
    let mut ct = scheme::encrypt_with(id, msg, pp, t)?;
    let neg_phi2 = -sfp.phi2;
    ct.c1[1] = ct.c1[1] * sfp.f.pow_raw(&sf.s_c);
    ct.c1[2] = ct.c1[2] * sfp.f.pow_raw(&(neg_phi2 * sf.s_c));
    ct.c2[1] = ct.c2[1] * sfp.f.pow_raw(&(sf.s_c * sf.z_c));
    ct.c2[2] = ct.c2[2] * sfp.f.pow_raw(&(neg_phi2 * sf.s_c * sf.z_c));
    Ok(ct)
}

pub fn encrypt_sf<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    msg: &B::Gt,
    pp: &PublicParams<B>,
    sfp: &SemiFunctionalParams<B>,
    rng: &mut R,
) -> Result<(Ciphertext<B>, SfCiphertextRandomness<B::Scalar>), SchemeError> {
    let t = pp.suite.random_scalar(rng);
    let sf = SfCiphertextRandomness {
        s_c: pp.suite.random_scalar(rng),
        z_c: pp.suite.random_scalar(rng),
    };
    Ok((encrypt_sf_with(id, msg, pp, sfp, &t, &sf)?, sf))
}

/// `true_msg · decrypt(ct, sk)^{-1}`: the factor that semi-functional mass
/// strips from the recovered message. Identity whenever decryption succeeds.
///
/// For a semi-functional ciphertext and key this is
/// `e(f, f̂)^{s_c·(e_1 − e_2·z_c)}`, where `e_1`, `e_2` are the `f̂`
/// exponents carried by `K_{1,2}` and `K_{2,2}` (`s_k1·z_k1` and `s_k1` for
/// a fresh key).
pub fn decrypt_residual<B: PairingBackend>(
    ct: &Ciphertext<B>,
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
    true_msg: &B::Gt,
) -> Result<B::Gt, SchemeError> {
    Ok(*true_msg * scheme::decrypt(ct, sk, pp)?.inverse())
}

/// Same-level re-randomization with the key's own randomization blocks:
/// decryption and delegation blocks absorb `R^{γ1}`, randomization blocks
/// are raised to `γ2`, and every block gets fresh `ŵ` exponents. `delta3`
/// and `delta6` carry one entry per delegation level of the key.
pub fn rerandomize_with<B: PairingBackend>(
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
    rand: &DelegateRandomness<B::Scalar>,
) -> Result<PrivateKey<B>, SchemeError> {
    let levels = sk.l3.len();
    if sk.r3.len() != levels || rand.delta3.len() != levels || rand.delta6.len() != levels {
        return Err(SchemeError::RandomnessShape);
    }
    let w = &pp.w;
    let mix = |acc: Option<&[B::G2; 3]>, src: &[B::G2; 3], gamma: &B::Scalar, delta: &B::Scalar| {
        std::array::from_fn(|k| {
            let m = src[k].pow_raw(gamma) * w[k].pow_raw(delta);
            acc.map_or(m, |a| a[k] * m)
        })
    };
    Ok(PrivateKey {
        identity: sk.identity.clone(),
        k1: mix(Some(&sk.k1), &sk.r1, &rand.gamma1, &rand.delta1),
        k2: mix(Some(&sk.k2), &sk.r2, &rand.gamma1, &rand.delta2),
        l3: sk
            .l3
            .iter()
            .zip(&sk.r3)
            .zip(&rand.delta3)
            .map(|((l, r), d)| mix(Some(l), r, &rand.gamma1, d))
            .collect(),
        r1: mix(None, &sk.r1, &rand.gamma2, &rand.delta4),
        r2: mix(None, &sk.r2, &rand.gamma2, &rand.delta5),
        r3: sk.r3.iter().zip(&rand.delta6).map(|(r, d)| mix(None, r, &rand.gamma2, d)).collect(),
    })
}
