//! Predicted operation counts, and a harness that checks them against the
//! instrumented backend.
//!
//! Counts follow one fixed strategy per algorithm:
//!
//! * Identity products (`ĥ ∏ û_i^{I_i}` in KeyGen, and the three `G`
//!   products in Encrypt) are one `(d+1)`-term multi-exponentiation each,
//!   absent at the root.
//! * Every `(ŵ^{φ1})^c·x^e` key component is a two-term multi-exponentiation;
//!   the companion `(ŵ^{φ2})^c` and `ŵ^c` are plain exponentiations.
//! * Delegate folds `L_{3,m+1}^{I}` and `R_{3,m+1}^{I}` in with six plain
//!   exponentiations and mixes every block with two-term multi-exponentiations.
//! * Setup samples `g`, `ĝ` and all public bases by exponentiating the fixed
//!   generators; those exponentiations are counted.
//!
//! [`published_formula`] gives the published lower bounds for comparison. They
//! agree on every per-level slope; the constants of Setup, KeyGen and
//! Delegate differ (see the README).

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::Serialize;

use crate::backend::counter::count_ops;
use crate::backend::{CostVector, GroupKind, GroupSuite, OpClass, PairingBackend};
use crate::error::SchemeError;
use crate::identity::HierarchicalIdentity;
use crate::scheme::{self, Identity, PublicParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Setup,
    KeyGen,
    Delegate,
    Encrypt,
    Decrypt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Setup, Algorithm::KeyGen, Algorithm::Delegate, Algorithm::Encrypt, Algorithm::Decrypt];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Setup => "setup",
            Algorithm::KeyGen => "keygen",
            Algorithm::Delegate => "delegate",
            Algorithm::Encrypt => "encrypt",
            Algorithm::Decrypt => "decrypt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Checks `0 ≤ d ≤ l` (`d < l` for Delegate, whose input key must leave a
/// level to delegate to). For Delegate, `d` is the depth of the input key.
pub fn check_cell(alg: Algorithm, l: usize, d: usize) -> Result<(), SchemeError> {
    if l == 0 {
        return Err(SchemeError::ZeroDepth);
    }
    let depth = if alg == Algorithm::Delegate { d + 1 } else { d };
    if depth > l {
        return Err(SchemeError::DepthExceeded { depth, max: l });
    }
    Ok(())
}

const EXP_G1: OpClass = OpClass::Exp(GroupKind::G1);
const EXP_G2: OpClass = OpClass::Exp(GroupKind::G2);
const EXP_GT: OpClass = OpClass::Exp(GroupKind::Gt);
const MEXP2_G2: OpClass = OpClass::MultiExp(GroupKind::G2, 2);

fn identity_product(v: &mut CostVector, kind: GroupKind, d: usize, times: u64) {
    if d > 0 {
        v.add(OpClass::MultiExp(kind, d + 1), times);
    }
}

/// Exact counts for the strategy described in the module docs.
pub fn predicted_counts(alg: Algorithm, l: usize, d: usize) -> Result<CostVector, SchemeError> {
    check_cell(alg, l, d)?;
    let (l, levels) = (l as u64, (l - d) as u64);
    let mut v = CostVector::default();
    match alg {
        Algorithm::Setup => {
            v.add(EXP_G1, 3 * l + 6);
            v.add(EXP_G2, l + 6);
            v.add(OpClass::Pair, 1);
        }
        Algorithm::KeyGen => {
            v.add(EXP_G2, 4 * levels + 8);
            v.add(MEXP2_G2, 2 * levels + 4);
            identity_product(&mut v, GroupKind::G2, d, 1);
        }
        Algorithm::Delegate => {
            v.add(EXP_G2, 6);
            v.add(MEXP2_G2, 6 * levels + 6);
        }
        Algorithm::Encrypt => {
            v.add(EXP_G1, 6);
            v.add(EXP_GT, 1);
            identity_product(&mut v, GroupKind::G1, d, 3);
        }
        Algorithm::Decrypt => {
            v.add(OpClass::MultiPair(3), 2);
        }
    }
    Ok(v)
}

/// The published cost lower bounds, with the identity-product term read as
/// one `(d+1)`-term multi-exponentiation.
pub fn published_formula(alg: Algorithm, l: usize, d: usize) -> Result<CostVector, SchemeError> {
    check_cell(alg, l, d)?;
    let (l, levels) = (l as u64, (l - d) as u64);
    let mut v = CostVector::default();
    match alg {
        Algorithm::Setup => {
            v.add(EXP_G1, 2 * l + 4);
            v.add(EXP_G2, 2);
            v.add(OpClass::Pair, 1);
        }
        Algorithm::KeyGen => {
            v.add(EXP_G2, 4 * levels + 4);
            v.add(MEXP2_G2, 2 * levels + 2);
            identity_product(&mut v, GroupKind::G2, d, 1);
        }
        Algorithm::Delegate => {
            v.add(EXP_G2, 9);
            v.add(MEXP2_G2, 6 * levels + 6);
        }
        Algorithm::Encrypt | Algorithm::Decrypt => return predicted_counts(alg, l as usize, d),
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCheck {
    pub algorithm: Algorithm,
    pub l: usize,
    pub d: usize,
    pub predicted: CostVector,
    pub measured: CostVector,
}

impl CountCheck {
    pub fn matches(&self) -> bool {
        self.predicted == self.measured
    }
}

fn random_identity<B: PairingBackend, R: RngCore + ?Sized>(
    suite: &GroupSuite<B>,
    depth: usize,
    rng: &mut R,
) -> Identity<B> {
    let comps = (0..depth).map(|_| suite.random_nonzero_scalar(rng)).collect();
    HierarchicalIdentity::new(comps).expect("non-zero components")
}

/// Runs `alg` once at `(l, d)` under a fresh counter. Inputs (parameters,
/// parent keys, ciphertexts) are prepared outside the counted region.
pub fn measure_counts<B: PairingBackend, R: RngCore + ?Sized>(
    alg: Algorithm,
    l: usize,
    d: usize,
    suite: &GroupSuite<B>,
    rng: &mut R,
) -> Result<CountCheck, SchemeError> {
    let predicted = predicted_counts(alg, l, d)?;
    let measured = if alg == Algorithm::Setup {
        let (res, counts) = count_ops(|| scheme::setup(suite, l, rng));
        res?;
        counts
    } else {
        let (mk, pp) = scheme::setup(suite, l, rng)?;
        measure_with(alg, d, &mk, &pp, rng)?
    };
    Ok(CountCheck { algorithm: alg, l, d, predicted, measured })
}

fn measure_with<B: PairingBackend, R: RngCore + ?Sized>(
    alg: Algorithm,
    d: usize,
    mk: &scheme::MasterKey<B>,
    pp: &PublicParams<B>,
    rng: &mut R,
) -> Result<CostVector, SchemeError> {
    let suite = &pp.suite;
    let id = random_identity(suite, d, rng);
    let (res, counts) = match alg {
        Algorithm::Setup => unreachable!("handled by the caller"),
        Algorithm::KeyGen => {
            let rand = scheme::KeyGenRandomness::sample(suite, pp.max_depth - d, rng);
            count_ops(|| scheme::keygen_with(&id, mk, pp, &rand).map(drop))
        }
        Algorithm::Delegate => {
            let parent = scheme::keygen(&id, mk, pp, rng)?;
            let child = id.child(suite.random_nonzero_scalar(rng))?;
            let rand = scheme::DelegateRandomness::sample(suite, pp.max_depth - d - 1, rng);
            count_ops(|| scheme::delegate_with(&child, &parent, pp, &rand).map(drop))
        }
        Algorithm::Encrypt => {
            let t = suite.random_scalar(rng);
            count_ops(|| scheme::encrypt_with(&id, &pp.omega, pp, &t).map(drop))
        }
        Algorithm::Decrypt => {
            let sk = scheme::keygen(&id, mk, pp, rng)?;
            let ct = scheme::encrypt(&id, &pp.omega, pp, rng)?;
            count_ops(|| scheme::decrypt(&ct, &sk, pp).map(drop))
        }
    };
    res?;
    Ok(counts)
}

/// True iff the instrumented counts equal [`predicted_counts`] class by class.
pub fn verify_counts<B: PairingBackend, R: RngCore + ?Sized>(
    alg: Algorithm,
    l: usize,
    d: usize,
    suite: &GroupSuite<B>,
    rng: &mut R,
) -> Result<bool, SchemeError> {
    Ok(measure_counts(alg, l, d, suite, rng)?.matches())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keygen_published_formula_at_root() {
        let v = published_formula(Algorithm::KeyGen, 30, 0).unwrap();
        assert_eq!(v.get(EXP_G2), 124);
        assert_eq!(v.get(MEXP2_G2), 62);
        assert_eq!(v.iter().count(), 2);
    }

    #[test]
    fn keygen_full_depth_product() {
        let v = predicted_counts(Algorithm::KeyGen, 5, 5).unwrap();
        assert_eq!(v.get(OpClass::MultiExp(GroupKind::G2, 6)), 1);
        assert_eq!(v.get(EXP_G2), 8);
    }

    #[test]
    fn keygen_depth_one_product_merges_with_two_term_class() {
        let v = predicted_counts(Algorithm::KeyGen, 4, 1).unwrap();
        assert_eq!(v.get(MEXP2_G2), 2 * 3 + 4 + 1);
    }

    #[test]
    fn delegate_two_term_count() {
        assert_eq!(predicted_counts(Algorithm::Delegate, 10, 3).unwrap().get(MEXP2_G2), 48);
        assert!(predicted_counts(Algorithm::Delegate, 10, 10).is_err());
    }

    #[test]
    fn encrypt_depth_two() {
        let v = predicted_counts(Algorithm::Encrypt, 7, 2).unwrap();
        let expected = CostVector::default()
            .with(EXP_G1, 6)
            .with(EXP_GT, 1)
            .with(OpClass::MultiExp(GroupKind::G1, 3), 3);
        assert_eq!(v, expected);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(predicted_counts(Algorithm::KeyGen, 3, 4).is_err());
        assert!(predicted_counts(Algorithm::Setup, 0, 0).is_err());
    }

    #[test]
    fn parse_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sign".parse::<Algorithm>().is_err());
    }
}
