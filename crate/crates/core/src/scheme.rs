//! Setup, KeyGen, Delegate, Encrypt and Decrypt.
//!
//! Every public exponent triple is orthogonal to `(φ1, φ2, 1)`: the
//! ciphertext carries powers of `(1, ν, −τ)` and the keys carry powers of
//! `(ŵ^{φ1}, ŵ^{φ2}, ŵ)`, with `τ = φ1 + ν φ2`. The `ŵ` randomizers therefore
//! vanish in decryption while still masking which identity a key or
//! ciphertext belongs to.
//!
//! Each algorithm has an `*_with` variant that takes its random exponents
//! explicitly, so tests can force degenerate values and read back the
//! randomness a key was built from.

use rand::RngCore;

use crate::backend::{GroupElement, GroupSuite, PairingBackend, ScalarField};
use crate::error::SchemeError;
use crate::identity::HierarchicalIdentity;

pub type Identity<B> = HierarchicalIdentity<<B as PairingBackend>::Scalar>;

/// Public parameters.
#[derive(Clone, Debug)]
pub struct PublicParams<B: PairingBackend> {
    pub suite: GroupSuite<B>,
    pub max_depth: usize,
    /// `(g, g^ν, g^{−τ})`
    pub g: [B::G1; 3],
    /// `(h, h^ν, h^{−τ})`
    pub h: [B::G1; 3],
    /// `(u_i, u_i^ν, u_i^{−τ})` for `i = 1..l`
    pub u: Vec<[B::G1; 3]>,
    /// `(ŵ^{φ1}, ŵ^{φ2}, ŵ)`
    pub w: [B::G2; 3],
    /// `Ω = e(g, ĝ)^α`
    pub omega: B::Gt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterKey<B: PairingBackend> {
    pub g_hat: B::G2,
    pub g_hat_alpha: B::G2,
    pub h_hat: B::G2,
    pub u_hat: Vec<B::G2>,
}

/// Private key for an identity of depth `m`.
///
/// `k1`, `k2` decrypt; `l3[j]` is the delegation block for level
/// `m + 1 + j`; `r1`, `r2`, `r3` are the randomization blocks used to
/// re-randomize delegated keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateKey<B: PairingBackend> {
    pub identity: Identity<B>,
    pub k1: [B::G2; 3],
    pub k2: [B::G2; 3],
    pub l3: Vec<[B::G2; 3]>,
    pub r1: [B::G2; 3],
    pub r2: [B::G2; 3],
    pub r3: Vec<[B::G2; 3]>,
}

impl<B: PairingBackend> PrivateKey<B> {
    pub fn depth(&self) -> usize {
        self.identity.depth()
    }

    pub fn element_count(&self) -> usize {
        6 * (2 + self.l3.len())
    }

    fn check_shape(&self, pp: &PublicParams<B>) -> Result<(), SchemeError> {
        let levels = pp.max_depth.checked_sub(self.depth()).ok_or(SchemeError::Malformed)?;
        if self.l3.len() != levels || self.r3.len() != levels {
            return Err(SchemeError::Malformed);
        }
        Ok(())
    }
}

/// Six elements of `G` and one of `G_T`, whatever the identity depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext<B: PairingBackend> {
    pub c: B::Gt,
    /// `(g^t, (g^ν)^t, (g^{−τ})^t)`
    pub c1: [B::G1; 3],
    /// The same triple over `h ∏ u_i^{I_i}`.
    pub c2: [B::G1; 3],
}

/// The setup exponents. Holding this breaks anonymity; it exists for tests
/// and for the semi-functional algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapdoorTranscript<S> {
    pub nu: S,
    pub phi1: S,
    pub phi2: S,
    pub tau: S,
    pub alpha: S,
    pub y_h: S,
    pub y_u: Vec<S>,
    pub y_w: S,
    /// Discrete log of the sampled `g` relative to the suite generator.
    pub g_exp: S,
    /// Discrete log of the sampled `ĝ` relative to the suite generator.
    pub g_hat_exp: S,
}

impl<S: ScalarField> TrapdoorTranscript<S> {
    pub fn sample<B, R>(suite: &GroupSuite<B>, max_depth: usize, rng: &mut R) -> Self
    where
        B: PairingBackend<Scalar = S>,
        R: RngCore + ?Sized,
    {
        let g_exp = suite.random_nonzero_scalar(rng);
        let g_hat_exp = suite.random_nonzero_scalar(rng);
        let nu = suite.random_scalar(rng);
        let phi1 = suite.random_scalar(rng);
        let phi2 = suite.random_scalar(rng);
        let y_h = suite.random_scalar(rng);
        let y_u = (0..max_depth).map(|_| suite.random_scalar(rng)).collect();
        let y_w = suite.random_nonzero_scalar(rng);
        let alpha = suite.random_scalar(rng);
        TrapdoorTranscript {
            nu,
            phi1,
            phi2,
            tau: phi1 + nu * phi2,
            alpha,
            y_h,
            y_u,
            y_w,
            g_exp,
            g_hat_exp,
        }
    }
}

/// Generates `(MK, PP)` for hierarchies of depth at most `max_depth`.
pub fn setup<B: PairingBackend, R: RngCore + ?Sized>(
    suite: &GroupSuite<B>,
    max_depth: usize,
    rng: &mut R,
) -> Result<(MasterKey<B>, PublicParams<B>), SchemeError> {
    check_max_depth(max_depth)?;
    let transcript = TrapdoorTranscript::sample(suite, max_depth, rng);
    setup_from(suite, max_depth, &transcript)
}

/// Like [`setup`] but also returns the trapdoor exponents. Test use only.
pub fn setup_with_transcript<B: PairingBackend, R: RngCore + ?Sized>(
    suite: &GroupSuite<B>,
    max_depth: usize,
    rng: &mut R,
) -> Result<(MasterKey<B>, PublicParams<B>, TrapdoorTranscript<B::Scalar>), SchemeError> {
    check_max_depth(max_depth)?;
    let transcript = TrapdoorTranscript::sample(suite, max_depth, rng);
    let (mk, pp) = setup_from(suite, max_depth, &transcript)?;
    Ok((mk, pp, transcript))
}

fn check_max_depth(max_depth: usize) -> Result<(), SchemeError> {
    if max_depth == 0 {
        return Err(SchemeError::ZeroDepth);
    }
    if max_depth > u16::MAX as usize {
        return Err(SchemeError::DepthTooLarge(max_depth));
    }
    Ok(())
}

/// Deterministic setup from given exponents.
pub fn setup_from<B: PairingBackend>(
    suite: &GroupSuite<B>,
    max_depth: usize,
    t: &TrapdoorTranscript<B::Scalar>,
) -> Result<(MasterKey<B>, PublicParams<B>), SchemeError> {
    check_max_depth(max_depth)?;
    if t.y_u.len() != max_depth {
        return Err(SchemeError::RandomnessShape);
    }
    let neg_tau = -t.tau;
    let triple = |base: B::G1| [base, suite.exp(&base, &t.nu), suite.exp(&base, &neg_tau)];

    let g = suite.exp(&suite.g1(), &t.g_exp);
    let g_hat = suite.exp(&suite.g2(), &t.g_hat_exp);

    let g_triple = triple(g);
    let h = triple(suite.exp(&g, &t.y_h));
    let u = t.y_u.iter().map(|y| triple(suite.exp(&g, y))).collect();

    let g_hat_alpha = suite.exp(&g_hat, &t.alpha);
    let h_hat = suite.exp(&g_hat, &t.y_h);
    let u_hat = t.y_u.iter().map(|y| suite.exp(&g_hat, y)).collect();
    let w_hat = suite.exp(&g_hat, &t.y_w);
    let w = [suite.exp(&w_hat, &t.phi1), suite.exp(&w_hat, &t.phi2), w_hat];

    let omega = suite.pair(&g, &g_hat_alpha);

    let mk = MasterKey { g_hat, g_hat_alpha, h_hat, u_hat };
    let pp = PublicParams { suite: suite.clone(), max_depth, g: g_triple, h, u, w, omega };
    Ok((mk, pp))
}

/// Random exponents of one KeyGen call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyGenRandomness<S> {
    pub r1: S,
    pub c1: S,
    pub c2: S,
    /// One per delegation level `m+1..l`.
    pub c3: Vec<S>,
    pub r2: S,
    pub c4: S,
    pub c5: S,
    pub c6: Vec<S>,
}

impl<S: ScalarField> KeyGenRandomness<S> {
    pub fn sample<B, R>(suite: &GroupSuite<B>, levels: usize, rng: &mut R) -> Self
    where
        B: PairingBackend<Scalar = S>,
        R: RngCore + ?Sized,
    {
        KeyGenRandomness {
            r1: suite.random_scalar(rng),
            c1: suite.random_scalar(rng),
            c2: suite.random_scalar(rng),
            c3: (0..levels).map(|_| suite.random_scalar(rng)).collect(),
            r2: suite.random_scalar(rng),
            c4: suite.random_scalar(rng),
            c5: suite.random_scalar(rng),
            c6: (0..levels).map(|_| suite.random_scalar(rng)).collect(),
        }
    }
}

/// Random exponents of one Delegate call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelegateRandomness<S> {
    pub gamma1: S,
    pub delta1: S,
    pub delta2: S,
    /// One per remaining delegation level `m+2..l`.
    pub delta3: Vec<S>,
    pub gamma2: S,
    pub delta4: S,
    pub delta5: S,
    pub delta6: Vec<S>,
}

impl<S: ScalarField> DelegateRandomness<S> {
    pub fn sample<B, R>(suite: &GroupSuite<B>, levels: usize, rng: &mut R) -> Self
    where
        B: PairingBackend<Scalar = S>,
        R: RngCore + ?Sized,
    {
        DelegateRandomness {
            gamma1: suite.random_scalar(rng),
            delta1: suite.random_scalar(rng),
            delta2: suite.random_scalar(rng),
            delta3: (0..levels).map(|_| suite.random_scalar(rng)).collect(),
            gamma2: suite.random_scalar(rng),
            delta4: suite.random_scalar(rng),
            delta5: suite.random_scalar(rng),
            delta6: (0..levels).map(|_| suite.random_scalar(rng)).collect(),
        }
    }
}

fn check_identity<B: PairingBackend>(
    id: &Identity<B>,
    pp: &PublicParams<B>,
) -> Result<(), SchemeError> {
    if id.depth() > pp.max_depth {
        return Err(SchemeError::DepthExceeded { depth: id.depth(), max: pp.max_depth });
    }
    Ok(())
}

/// `(ŵ^{φ1})^c·base^e, (ŵ^{φ2})^c, ŵ^c`: one two-term multi-exponentiation
/// and two exponentiations.
fn w_block<B: PairingBackend>(
    suite: &GroupSuite<B>,
    w: &[B::G2; 3],
    base: &B::G2,
    e: &B::Scalar,
    c: &B::Scalar,
) -> Result<[B::G2; 3], SchemeError> {
    Ok([suite.multi_exp(&[*base, w[0]], &[*e, *c])?, suite.exp(&w[1], c), suite.exp(&w[2], c)])
}

/// `ĥ ∏ û_i^{I_i}` as one `(m+1)`-term multi-exponentiation, or `ĥ` at the root.
fn identity_product_g2<B: PairingBackend>(
    suite: &GroupSuite<B>,
    id: &Identity<B>,
    mk: &MasterKey<B>,
) -> Result<B::G2, SchemeError> {
    if id.depth() == 0 {
        return Ok(mk.h_hat);
    }
    let mut bases = vec![mk.h_hat];
    bases.extend_from_slice(&mk.u_hat[..id.depth()]);
    let mut exps = vec![suite.scalar(1)];
    exps.extend_from_slice(id.components());
    Ok(suite.multi_exp(&bases, &exps)?)
}

pub fn keygen<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    rng: &mut R,
) -> Result<PrivateKey<B>, SchemeError> {
    check_identity(id, pp)?;
    let rand = KeyGenRandomness::sample(&pp.suite, pp.max_depth - id.depth(), rng);
    keygen_with(id, mk, pp, &rand)
}

pub fn keygen_with<B: PairingBackend>(
    id: &Identity<B>,
    mk: &MasterKey<B>,
    pp: &PublicParams<B>,
    rand: &KeyGenRandomness<B::Scalar>,
) -> Result<PrivateKey<B>, SchemeError> {
    check_identity(id, pp)?;
    if mk.u_hat.len() != pp.max_depth {
        return Err(SchemeError::Malformed);
    }
    let m = id.depth();
    let levels = pp.max_depth - m;
    if rand.c3.len() != levels || rand.c6.len() != levels {
        return Err(SchemeError::RandomnessShape);
    }
    let suite = &pp.suite;
    let w = &pp.w;
    let product = identity_product_g2(suite, id, mk)?;

    let mut k1 = w_block(suite, w, &product, &rand.r1, &rand.c1)?;
    k1[0] = mk.g_hat_alpha * k1[0];
    let k2 = w_block(suite, w, &mk.g_hat, &rand.r1, &rand.c2)?;
    let l3 = mk.u_hat[m..]
        .iter()
        .zip(&rand.c3)
        .map(|(u, c)| w_block(suite, w, u, &rand.r1, c))
        .collect::<Result<_, _>>()?;

    let r1 = w_block(suite, w, &product, &rand.r2, &rand.c4)?;
    let r2 = w_block(suite, w, &mk.g_hat, &rand.r2, &rand.c5)?;
    let r3 = mk.u_hat[m..]
        .iter()
        .zip(&rand.c6)
        .map(|(u, c)| w_block(suite, w, u, &rand.r2, c))
        .collect::<Result<_, _>>()?;

    Ok(PrivateKey { identity: id.clone(), k1, k2, l3, r1, r2, r3 })
}

fn check_delegation<B: PairingBackend>(
    child: &Identity<B>,
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
) -> Result<(), SchemeError> {
    let m = sk.depth();
    if child.depth() != m + 1 {
        return Err(SchemeError::NotOneStepExtension { from: m, to: child.depth() });
    }
    check_identity(child, pp)?;
    if !sk.identity.is_prefix_of(child) {
        return Err(SchemeError::NotPrefix);
    }
    sk.check_shape(pp)
}

/// Derives the key for `child`, which must extend `sk`'s identity by one level.
pub fn delegate<B: PairingBackend, R: RngCore + ?Sized>(
    child: &Identity<B>,
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
    rng: &mut R,
) -> Result<PrivateKey<B>, SchemeError> {
    check_delegation(child, sk, pp)?;
    let rand = DelegateRandomness::sample(&pp.suite, pp.max_depth - child.depth(), rng);
    delegate_with(child, sk, pp, &rand)
}

/// The delegated key's exponents are `r1' = r1 + r2·γ1`, `r2' = r2·γ2`, and
/// all `ŵ` exponents are refreshed by the `δ` values.
pub fn delegate_with<B: PairingBackend>(
    child: &Identity<B>,
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
    rand: &DelegateRandomness<B::Scalar>,
) -> Result<PrivateKey<B>, SchemeError> {
    check_delegation(child, sk, pp)?;
    let remaining = pp.max_depth - child.depth();
    if rand.delta3.len() != remaining || rand.delta6.len() != remaining {
        return Err(SchemeError::RandomnessShape);
    }
    let suite = &pp.suite;
    let w = &pp.w;
    let id_next = child.components()[sk.depth()];
    let (l_next, l_rest) = sk.l3.split_first().ok_or(SchemeError::Malformed)?;
    let (r_next, r_rest) = sk.r3.split_first().ok_or(SchemeError::Malformed)?;

    // R_1 R_{3,m+1}^{I} and K_1 L_{3,m+1}^{I}, componentwise.
    let folded_r1: [B::G2; 3] = std::array::from_fn(|k| sk.r1[k] * suite.exp(&r_next[k], &id_next));
    let folded_k1: [B::G2; 3] = std::array::from_fn(|k| sk.k1[k] * suite.exp(&l_next[k], &id_next));

    let mix = |acc: Option<&[B::G2; 3]>,
               src: &[B::G2; 3],
               gamma: &B::Scalar,
               delta: &B::Scalar|
     -> Result<[B::G2; 3], SchemeError> {
        let mut out = [w[0]; 3];
        for k in 0..3 {
            let m = suite.multi_exp(&[src[k], w[k]], &[*gamma, *delta])?;
            out[k] = match acc {
                Some(a) => a[k] * m,
                None => m,
            };
        }
        Ok(out)
    };

    let k1 = mix(Some(&folded_k1), &folded_r1, &rand.gamma1, &rand.delta1)?;
    let k2 = mix(Some(&sk.k2), &sk.r2, &rand.gamma1, &rand.delta2)?;
    let l3 = l_rest
        .iter()
        .zip(r_rest)
        .zip(&rand.delta3)
        .map(|((l, r), d)| mix(Some(l), r, &rand.gamma1, d))
        .collect::<Result<_, _>>()?;

    let r1 = mix(None, &folded_r1, &rand.gamma2, &rand.delta4)?;
    let r2 = mix(None, &sk.r2, &rand.gamma2, &rand.delta5)?;
    let r3 = r_rest
        .iter()
        .zip(&rand.delta6)
        .map(|(r, d)| mix(None, r, &rand.gamma2, d))
        .collect::<Result<_, _>>()?;

    Ok(PrivateKey { identity: child.clone(), k1, k2, l3, r1, r2, r3 })
}

pub fn encrypt<B: PairingBackend, R: RngCore + ?Sized>(
    id: &Identity<B>,
    msg: &B::Gt,
    pp: &PublicParams<B>,
    rng: &mut R,
) -> Result<Ciphertext<B>, SchemeError> {
    let t = pp.suite.random_scalar(rng);
    encrypt_with(id, msg, pp, &t)
}

pub fn encrypt_with<B: PairingBackend>(
    id: &Identity<B>,
    msg: &B::Gt,
    pp: &PublicParams<B>,
    t: &B::Scalar,
) -> Result<Ciphertext<B>, SchemeError> {
    check_identity(id, pp)?;
    if pp.u.len() != pp.max_depth {
        return Err(SchemeError::Malformed);
    }
    let suite = &pp.suite;
    let n = id.depth();
    let mut exps = vec![suite.scalar(1)];
    exps.extend_from_slice(id.components());

    let mut c2 = pp.h;
    for (k, slot) in c2.iter_mut().enumerate() {
        if n > 0 {
            let mut bases = vec![pp.h[k]];
            bases.extend(pp.u[..n].iter().map(|u| u[k]));
            *slot = suite.multi_exp(&bases, &exps)?;
        }
        *slot = suite.exp(slot, t);
    }
    let c1 = std::array::from_fn(|k| suite.exp(&pp.g[k], t));
    let c = suite.exp(&pp.omega, t) * *msg;
    Ok(Ciphertext { c, c1, c2 })
}

/// `C · ∏ e(C_{1,i}, K_{1,i})^{-1} · ∏ e(C_{2,i}, K_{2,i})`.
///
/// Anonymity means the ciphertext's identity is unknown here, so a key for a
/// different identity yields an unrelated element rather than an error.
pub fn decrypt<B: PairingBackend>(
    ct: &Ciphertext<B>,
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
) -> Result<B::Gt, SchemeError> {
    sk.check_shape(pp)?;
    let suite = &pp.suite;
    let blind = suite.multi_pair(&ct.c1, &sk.k1)?;
    let unblind = suite.multi_pair(&ct.c2, &sk.k2)?;
    Ok(ct.c * blind.inverse() * unblind)
}
