//! Exponent-level checks of KeyGen, Delegate and Encrypt.
//!
//! On the mock backend every element is its discrete log, so the expected
//! logs are recomputed here from the setup transcript and the explicit
//! randomness with plain `u128` arithmetic.

use ahibe::backend::{MockBackend, MockScalar};
use ahibe::scheme::{self, DelegateRandomness, KeyGenRandomness, TrapdoorTranscript};
use ahibe::{GroupElement, GroupSuite, HierarchicalIdentity, PairingBackend};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const P: u64 = 1009;

fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn neg(a: u64) -> u64 {
    (P - a % P) % P
}

fn v(s: &MockScalar) -> u64 {
    s.value()
}

struct Fixture {
    mk: scheme::MasterKey<MockBackend>,
    pp: scheme::PublicParams<MockBackend>,
    t: TrapdoorTranscript<MockScalar>,
    rng: ChaCha20Rng,
}

fn fixture(l: usize, seed: u64) -> Fixture {
    let suite = GroupSuite::mock(P, seed).unwrap();
    let mut rng = suite.backend().seeded_rng();
    let (mk, pp, t) = scheme::setup_with_transcript(&suite, l, &mut rng).unwrap();
    Fixture { mk, pp, t, rng }
}

fn ident(suite: &GroupSuite<MockBackend>, comps: &[u64]) -> HierarchicalIdentity<MockScalar> {
    HierarchicalIdentity::new(comps.iter().map(|&c| suite.scalar(c)).collect()).unwrap()
}

/// `y_h + Σ y_{u_i} I_i`
fn id_exponent(t: &TrapdoorTranscript<MockScalar>, comps: &[u64]) -> u64 {
    comps.iter().zip(&t.y_u).fold(v(&t.y_h), |acc, (&i, y)| add(acc, mul(v(y), i)))
}

/// Expected logs of a block `(x̂·e + W1·c, W2·c, W3·c)`.
fn block(t: &TrapdoorTranscript<MockScalar>, e: u64, c: u64) -> [u64; 3] {
    let xh = v(&t.g_hat_exp);
    let w3 = mul(xh, v(&t.y_w));
    [add(mul(xh, e), mul(mul(w3, v(&t.phi1)), c)), mul(mul(w3, v(&t.phi2)), c), mul(w3, c)]
}

#[test]
fn setup_logs() {
    let f = fixture(3, 11);
    let (xg, nu, tau) = (v(&f.t.g_exp), v(&f.t.nu), v(&f.t.tau));
    assert_eq!(tau, add(v(&f.t.phi1), mul(nu, v(&f.t.phi2))));
    let triple = |e: u64| [mul(xg, e), mul(mul(xg, e), nu), mul(mul(xg, e), neg(tau))];
    assert_eq!(f.pp.g.map(|x| x.log()), triple(1));
    assert_eq!(f.pp.h.map(|x| x.log()), triple(v(&f.t.y_h)));
    for (u, y) in f.pp.u.iter().zip(&f.t.y_u) {
        assert_eq!(u.map(|x| x.log()), triple(v(y)));
    }
    let xh = v(&f.t.g_hat_exp);
    let w3 = mul(xh, v(&f.t.y_w));
    assert_eq!(f.pp.w.map(|x| x.log()), [mul(w3, v(&f.t.phi1)), mul(w3, v(&f.t.phi2)), w3]);
    assert_eq!(f.pp.omega.log(), mul(mul(xg, xh), v(&f.t.alpha)));
    assert_eq!(f.mk.g_hat_alpha.log(), mul(xh, v(&f.t.alpha)));
}

fn check_keygen_logs(l: usize, comps: &[u64], seed: u64) {
    let mut f = fixture(l, seed);
    let id = ident(&f.pp.suite, comps);
    let m = comps.len();
    let r = KeyGenRandomness::sample(&f.pp.suite, l - m, &mut f.rng);
    let sk = scheme::keygen_with(&id, &f.mk, &f.pp, &r).unwrap();
    let t = &f.t;
    let xh = v(&t.g_hat_exp);
    let pe = id_exponent(t, comps);
    let (r1, r2) = (v(&r.r1), v(&r.r2));

    let mut k1 = block(t, mul(pe, r1), v(&r.c1));
    k1[0] = add(k1[0], mul(xh, v(&t.alpha)));
    assert_eq!(sk.k1.map(|x| x.log()), k1);
    assert_eq!(sk.k2.map(|x| x.log()), block(t, r1, v(&r.c2)));
    assert_eq!(sk.r1.map(|x| x.log()), block(t, mul(pe, r2), v(&r.c4)));
    assert_eq!(sk.r2.map(|x| x.log()), block(t, r2, v(&r.c5)));
    for j in 0..l - m {
        let y = v(&t.y_u[m + j]);
        assert_eq!(sk.l3[j].map(|x| x.log()), block(t, mul(y, r1), v(&r.c3[j])));
        assert_eq!(sk.r3[j].map(|x| x.log()), block(t, mul(y, r2), v(&r.c6[j])));
    }
}

#[test]
fn keygen_logs_root_mid_and_leaf() {
    check_keygen_logs(4, &[], 1);
    check_keygen_logs(4, &[17, 400], 2);
    check_keygen_logs(4, &[5, 6, 7, 8], 3);
}

#[test]
fn encrypt_logs() {
    let f = fixture(3, 5);
    let comps = [9, 1008];
    let id = ident(&f.pp.suite, &comps);
    let (tt, m) = (321, 77);
    let msg = f.pp.suite.gt_generator().pow_raw(&f.pp.suite.scalar(m));
    let ct = scheme::encrypt_with(&id, &msg, &f.pp, &f.pp.suite.scalar(tt)).unwrap();
    let (xg, nu, tau) = (v(&f.t.g_exp), v(&f.t.nu), v(&f.t.tau));
    let triple = |e: u64| [mul(xg, e), mul(mul(xg, e), nu), mul(mul(xg, e), neg(tau))];
    assert_eq!(ct.c1.map(|x| x.log()), triple(tt));
    assert_eq!(ct.c2.map(|x| x.log()), triple(mul(id_exponent(&f.t, &comps), tt)));
    let expected_c = add(mul(mul(mul(xg, v(&f.t.g_hat_exp)), v(&f.t.alpha)), tt), m);
    assert_eq!(ct.c.log(), expected_c);
}

/// The KeyGen randomness a delegated key is equivalent to.
fn derived_randomness<S: ahibe::ScalarField>(
    parent: &KeyGenRandomness<S>,
    d: &DelegateRandomness<S>,
    i: S,
) -> KeyGenRandomness<S> {
    let g1 = d.gamma1;
    let g2 = d.gamma2;
    let c4_folded = parent.c4 + i * parent.c6[0];
    KeyGenRandomness {
        r1: parent.r1 + g1 * parent.r2,
        c1: parent.c1 + i * parent.c3[0] + g1 * c4_folded + d.delta1,
        c2: parent.c2 + g1 * parent.c5 + d.delta2,
        c3: (0..d.delta3.len()).map(|j| parent.c3[j + 1] + g1 * parent.c6[j + 1] + d.delta3[j]).collect(),
        r2: g2 * parent.r2,
        c4: g2 * c4_folded + d.delta4,
        c5: g2 * parent.c5 + d.delta5,
        c6: (0..d.delta6.len()).map(|j| g2 * parent.c6[j + 1] + d.delta6[j]).collect(),
    }
}

fn check_delegate_matches_keygen<B: PairingBackend>(
    suite: &GroupSuite<B>,
    l: usize,
    m: usize,
    rng: &mut ChaCha20Rng,
) {
    let (mk, pp) = scheme::setup(suite, l, rng).unwrap();
    let comps: Vec<_> = (0..=m).map(|_| suite.random_nonzero_scalar(rng)).collect();
    let parent_id = HierarchicalIdentity::new(comps[..m].to_vec()).unwrap();
    let child_id = HierarchicalIdentity::new(comps.clone()).unwrap();
    let pr = KeyGenRandomness::sample(suite, l - m, rng);
    let parent = scheme::keygen_with(&parent_id, &mk, &pp, &pr).unwrap();
    let dr = DelegateRandomness::sample(suite, l - m - 1, rng);
    let child = scheme::delegate_with(&child_id, &parent, &pp, &dr).unwrap();
    let expected = scheme::keygen_with(&child_id, &mk, &pp, &derived_randomness(&pr, &dr, comps[m])).unwrap();
    assert_eq!(child, expected);
}

#[test]
fn delegate_equals_keygen_with_derived_randomness_mock() {
    let suite = GroupSuite::mock(P, 1).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    for l in 1..=5 {
        for m in 0..l {
            check_delegate_matches_keygen(&suite, l, m, &mut rng);
        }
    }
}

#[test]
fn delegate_equals_keygen_with_derived_randomness_concrete() {
    let suite = GroupSuite::bls12_381();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    check_delegate_matches_keygen(&suite, 3, 0, &mut rng);
    check_delegate_matches_keygen(&suite, 3, 2, &mut rng);
}

#[test]
fn wrong_identity_residual_exponent() {
    // Decrypting an encryption for (a, b) with the key for (a, b') leaves
    // e(g, ĝ)^{-x_g·x̂·t·r_1·y_{u_2}·(b' − b)} on top of the message.
    let mut f = fixture(2, 21);
    let (a, b, b2, tt) = (3u64, 7u64, 8u64, 55u64);
    let r = KeyGenRandomness::sample(&f.pp.suite, 0, &mut f.rng);
    let sk = scheme::keygen_with(&ident(&f.pp.suite, &[a, b2]), &f.mk, &f.pp, &r).unwrap();
    let msg = f.pp.suite.gt_generator();
    let ct = scheme::encrypt_with(&ident(&f.pp.suite, &[a, b]), &msg, &f.pp, &f.pp.suite.scalar(tt)).unwrap();
    let out = scheme::decrypt(&ct, &sk, &f.pp).unwrap();
    let scale = mul(mul(v(&f.t.g_exp), v(&f.t.g_hat_exp)), tt);
    let e = mul(mul(mul(scale, v(&r.r1)), v(&f.t.y_u[1])), add(b2, neg(b)));
    assert_eq!(out.log(), add(1, neg(e)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mock_round_trip(
        seed in any::<u64>(),
        comps in proptest::collection::vec(1u64..P, 0..=4),
        m in 0u64..P,
    ) {
        let suite = GroupSuite::mock(P, seed).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (mk, pp) = scheme::setup(&suite, 4, &mut rng).unwrap();
        let id = ident(&suite, &comps);
        let sk = scheme::keygen(&id, &mk, &pp, &mut rng).unwrap();
        let msg = suite.gt_generator().pow_raw(&suite.scalar(m));
        let ct = scheme::encrypt(&id, &msg, &pp, &mut rng).unwrap();
        prop_assert_eq!(scheme::decrypt(&ct, &sk, &pp).unwrap(), msg);
    }

    #[test]
    fn mock_delegation_chain_round_trip(seed in any::<u64>(), comps in proptest::collection::vec(1u64..P, 1..=4)) {
        let suite = GroupSuite::mock(P, seed).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (mk, pp) = scheme::setup(&suite, 4, &mut rng).unwrap();
        let mut sk = scheme::keygen(&HierarchicalIdentity::root(), &mk, &pp, &mut rng).unwrap();
        for depth in 1..=comps.len() {
            sk = scheme::delegate(&ident(&suite, &comps[..depth]), &sk, &pp, &mut rng).unwrap();
        }
        prop_assert_eq!(sk.element_count(), 6 * (2 + 4 - comps.len()));
        let id = ident(&suite, &comps);
        let ct = scheme::encrypt(&id, &pp.omega, &pp, &mut rng).unwrap();
        prop_assert_eq!(scheme::decrypt(&ct, &sk, &pp).unwrap(), pp.omega);
    }
}
