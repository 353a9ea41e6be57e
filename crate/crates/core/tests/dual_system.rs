//! Semi-functional keys and ciphertexts on the mock backend.
//!
//! Expected exponents are recomputed with plain modular arithmetic from the
//! transcript and the returned randomness. Logs are taken relative to the
//! sampled `g`, `ĝ` and `e(g, ĝ)`.

use ahibe::backend::{MockBackend, MockScalar};
use ahibe::lab::{self, SfCiphertextRandomness, SfKeyRandomness};
use ahibe::scheme::{self, DelegateRandomness, KeyGenRandomness, TrapdoorTranscript};
use ahibe::{GroupElement, GroupSuite, HierarchicalIdentity, PairingBackend, ScalarField};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

struct Zp(u64);

impl Zp {
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: u64) -> u64 {
        // Fermat
        let (mut acc, mut base, mut e) = (1u64, a % self.0, self.0 - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

struct Lab {
    zp: Zp,
    mk: scheme::MasterKey<MockBackend>,
    pp: scheme::PublicParams<MockBackend>,
    t: TrapdoorTranscript<MockScalar>,
    sfp: lab::SemiFunctionalParams<MockBackend>,
    rng: ChaCha20Rng,
}

impl Lab {
    fn new(p: u64, seed: u64, l: usize) -> Self {
        let suite = GroupSuite::mock(p, seed).unwrap();
        let mut rng = suite.backend().seeded_rng();
        let (mk, pp, t) = scheme::setup_with_transcript(&suite, l, &mut rng).unwrap();
        let sfp = lab::sf_params(&t, &pp, &mut rng);
        Lab { zp: Zp(p), mk, pp, t, sfp, rng }
    }

    fn id(&self, comps: &[u64]) -> HierarchicalIdentity<MockScalar> {
        HierarchicalIdentity::new(comps.iter().map(|&c| self.pp.suite.scalar(c)).collect()).unwrap()
    }

    fn msg(&mut self) -> ahibe::backend::MockGt {
        let s = self.pp.suite.random_scalar(&mut self.rng);
        self.pp.suite.gt_generator().pow_raw(&s)
    }

    /// log relative to ĝ
    fn rel2(&self, log: u64) -> u64 {
        self.zp.mul(log, self.zp.inv(self.t.g_hat_exp.value()))
    }

    /// log relative to g
    fn rel1(&self, log: u64) -> u64 {
        self.zp.mul(log, self.zp.inv(self.t.g_exp.value()))
    }

    /// log relative to e(g, ĝ)
    fn rel_t(&self, log: u64) -> u64 {
        self.rel1(self.rel2(log))
    }

    fn y_f(&self) -> u64 {
        self.sfp.y_f.value()
    }
}

#[test]
fn sf_params_logs() {
    let l = Lab::new(101, 7, 2);
    assert_eq!(l.rel2(l.sfp.f_hat.log()), l.y_f());
    assert_eq!(l.rel1(l.sfp.f.log()), l.y_f());
    let neg_phi2 = -l.t.phi2;
    let expected = l.zp.sub(0, l.zp.mul(l.y_f(), l.t.phi2.value()));
    assert_eq!(l.rel1(l.sfp.f.pow_raw(&neg_phi2).log()), expected);
}

#[test]
fn sf1_key_component_difference() {
    let mut l = Lab::new(101, 7, 3);
    let id = l.id(&[4, 9]);
    let normal = KeyGenRandomness::sample(&l.pp.suite, 1, &mut l.rng);
    let sf = SfKeyRandomness::sample_type1(&l.pp.suite, 1, &mut l.rng);
    let key = lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf).unwrap();
    let plain = scheme::keygen_with(&id, &l.mk, &l.pp, &normal).unwrap();
    let zp = &l.zp;
    let diff = l.rel2(zp.sub(key.k1[1].log(), plain.k1[1].log()));
    assert_eq!(diff, zp.mul(zp.mul(l.y_f(), sf.s_k1.value()), sf.z_k1.value()));
    // f̂^{-ν} factor on the first component
    let diff0 = l.rel2(zp.sub(key.k1[0].log(), plain.k1[0].log()));
    assert_eq!(diff0, zp.sub(0, zp.mul(diff, l.t.nu.value())));
    assert_eq!(key.k1[2], plain.k1[2]);
    assert_eq!(key.r3[0][2], plain.r3[0][2]);
}

#[test]
fn sf2_randomization_block_difference() {
    let mut l = Lab::new(101, 7, 3);
    let id = l.id(&[4]);
    let normal = KeyGenRandomness::sample(&l.pp.suite, 2, &mut l.rng);
    let sf = SfKeyRandomness::sample_type2(&l.pp.suite, 2, &mut l.rng);
    let key = lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf).unwrap();
    let plain = scheme::keygen_with(&id, &l.mk, &l.pp, &normal).unwrap();
    let zp = &l.zp;
    let diff = l.rel2(zp.sub(key.r1[1].log(), plain.r1[1].log()));
    assert_eq!(diff, zp.mul(zp.mul(l.y_f(), sf.s_k2.value()), sf.z_k3.value()));
    let diff = l.rel2(zp.sub(key.r3[1][1].log(), plain.r3[1][1].log()));
    assert_eq!(diff, zp.mul(zp.mul(l.y_f(), sf.s_k2.value()), sf.z_k4[1].value()));
}

#[test]
fn sf_ciphertext_component_difference() {
    let mut l = Lab::new(101, 7, 2);
    let id = l.id(&[3]);
    let t = l.pp.suite.scalar(12);
    let sf = SfCiphertextRandomness { s_c: l.pp.suite.scalar(40), z_c: l.pp.suite.scalar(66) };
    let m = l.msg();
    let ct = lab::encrypt_sf_with(&id, &m, &l.pp, &l.sfp, &t, &sf).unwrap();
    let plain = scheme::encrypt_with(&id, &m, &l.pp, &t).unwrap();
    let zp = &l.zp;
    let diff = l.rel1(zp.sub(ct.c1[2].log(), plain.c1[2].log()));
    assert_eq!(diff, zp.sub(0, zp.mul(zp.mul(l.y_f(), l.t.phi2.value()), 40)));
    assert_eq!(ct.c, plain.c);
    assert_eq!(ct.c1[0], plain.c1[0]);
    assert_eq!(ct.c2[0], plain.c2[0]);
}

#[test]
fn type2_with_matched_exponents_is_type1() {
    let mut l = Lab::new(101, 7, 3);
    let id = l.id(&[5]);
    let normal = KeyGenRandomness::sample(&l.pp.suite, 2, &mut l.rng);
    let mut sf2 = SfKeyRandomness::sample_type2(&l.pp.suite, 2, &mut l.rng);
    sf2.z_k3 = sf2.z_k1;
    sf2.z_k4 = sf2.z_k2.clone();
    assert!(sf2.is_type1());
    let sf1 = SfKeyRandomness { ..sf2.clone() };
    let a = lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf2).unwrap();
    let b = lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf1).unwrap();
    assert_eq!(a.to_bytes(&l.pp), b.to_bytes(&l.pp));
}

/// `(z from decryption blocks, z from randomization blocks)` recovered as
/// ratios of the `f̂` mass in the second components.
fn recovered_z(l: &Lab, key: &ahibe::PrivateKey<MockBackend>, plain: &ahibe::PrivateKey<MockBackend>) -> (u64, u64) {
    let zp = &l.zp;
    let mass = |a: u64, b: u64| zp.sub(a, b);
    let zk1 = zp.mul(mass(key.k1[1].log(), plain.k1[1].log()), zp.inv(mass(key.k2[1].log(), plain.k2[1].log())));
    let zk3 = zp.mul(mass(key.r1[1].log(), plain.r1[1].log()), zp.inv(mass(key.r2[1].log(), plain.r2[1].log())));
    (zk1, zk3)
}

#[test]
fn type1_and_type2_exponent_consistency() {
    let mut collisions = 0;
    for seed in 0..50 {
        let mut l = Lab::new(1009, seed, 2);
        let id = l.id(&[2]);
        let normal = KeyGenRandomness::sample(&l.pp.suite, 1, &mut l.rng);
        let plain = scheme::keygen_with(&id, &l.mk, &l.pp, &normal).unwrap();
        let mut sf1 = SfKeyRandomness::sample_type1(&l.pp.suite, 1, &mut l.rng);
        let mut sf2 = SfKeyRandomness::sample_type2(&l.pp.suite, 1, &mut l.rng);
        if [sf1.s_k1, sf1.s_k2, sf2.s_k1, sf2.s_k2, l.sfp.y_f].iter().any(ScalarField::is_zero) {
            // ratios undefined; force non-zero mass
            for s in [&mut sf1.s_k1, &mut sf1.s_k2, &mut sf2.s_k1, &mut sf2.s_k2] {
                *s = l.pp.suite.scalar(1);
            }
            if l.sfp.y_f.is_zero() {
                continue;
            }
        }
        let k1 = lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf1).unwrap();
        let (a, b) = recovered_z(&l, &k1, &plain);
        assert_eq!((a, b), (sf1.z_k1.value(), sf1.z_k1.value()));

        let k2 = lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf2).unwrap();
        let (a, b) = recovered_z(&l, &k2, &plain);
        assert_eq!((a, b), (sf2.z_k1.value(), sf2.z_k3.value()));
        if a == b {
            collisions += 1;
        }
    }
    // each draw collides with probability 1/1009
    assert!(collisions <= 2, "{collisions} collisions");
}

#[test]
fn cancellation_lattice_100_seeds() {
    for p in [101, 1009] {
        let mut sf_failures_identity = 0;
        for seed in 0..100 {
            let mut l = Lab::new(p, seed, 3);
            let id = l.id(&[6, 2]);
            let m = l.msg();
            let pp = &l.pp;
            let one = pp.suite.backend().gt_identity();

            let sk = scheme::keygen(&id, &l.mk, pp, &mut l.rng).unwrap();
            let ct = scheme::encrypt(&id, &m, pp, &mut l.rng).unwrap();
            let (sk1, _) = lab::keygen_sf1(&id, &l.mk, pp, &l.sfp, &mut l.rng).unwrap();
            let (sk2, sf2) = lab::keygen_sf2(&id, &l.mk, pp, &l.sfp, &mut l.rng).unwrap();
            let (sct, sfc) = lab::encrypt_sf(&id, &m, pp, &l.sfp, &mut l.rng).unwrap();
            let (nominal, _) = lab::nominal_sf1_keygen(&id, &l.mk, pp, &l.sfp, sfc.z_c, &mut l.rng).unwrap();

            let res = |ct, sk| lab::decrypt_residual(ct, sk, pp, &m).unwrap();
            assert_eq!(res(&ct, &sk), one);
            assert_eq!(res(&sct, &sk), one);
            assert_eq!(res(&ct, &sk1), one);
            assert_eq!(res(&ct, &sk2), one);
            assert_eq!(res(&sct, &nominal), one);

            let r = res(&sct, &sk2);
            let zp = &l.zp;
            let expected = zp.mul(
                zp.mul(zp.mul(l.y_f(), l.y_f()), zp.mul(sfc.s_c.value(), sf2.s_k1.value())),
                zp.sub(sf2.z_k1.value(), sfc.z_c.value()),
            );
            assert_eq!(l.rel_t(r.log()), expected, "p={p} seed={seed}");
            if r == one {
                sf_failures_identity += 1;
            }
        }
        // identity only when y_f, s_c, s_k1 or z_k1 − z_c vanishes mod p
        assert!(sf_failures_identity <= 12, "p={p}: {sf_failures_identity}");
    }
}

#[test]
fn nominal_key_with_other_z_c_fails() {
    let mut l = Lab::new(101, 7, 2);
    let id = l.id(&[1, 2]);
    let m = l.msg();
    let t = l.pp.suite.scalar(33);
    let sfc = SfCiphertextRandomness { s_c: l.pp.suite.scalar(5), z_c: l.pp.suite.scalar(10) };
    let ct = lab::encrypt_sf_with(&id, &m, &l.pp, &l.sfp, &t, &sfc).unwrap();
    let (key, sf) = lab::nominal_sf1_keygen(&id, &l.mk, &l.pp, &l.sfp, l.pp.suite.scalar(11), &mut l.rng).unwrap();
    let r = lab::decrypt_residual(&ct, &key, &l.pp, &m).unwrap();
    let zp = &l.zp;
    let expected = zp.mul(zp.mul(zp.mul(l.y_f(), l.y_f()), zp.mul(5, sf.s_k1.value())), 1);
    assert_eq!(l.rel_t(r.log()), expected);
    if !sf.s_k1.is_zero() && l.y_f() != 0 {
        assert_ne!(scheme::decrypt(&ct, &key, &l.pp).unwrap(), m);
    }
}

#[test]
fn residual_after_rerandomization() {
    for seed in 0..20 {
        let mut l = Lab::new(1009, seed, 3);
        let id = l.id(&[8]);
        let m = l.msg();
        let (sk2, sf2) = lab::keygen_sf2(&id, &l.mk, &l.pp, &l.sfp, &mut l.rng).unwrap();
        let (sct, sfc) = lab::encrypt_sf(&id, &m, &l.pp, &l.sfp, &mut l.rng).unwrap();
        let rand = DelegateRandomness::sample(&l.pp.suite, 2, &mut l.rng);
        let rr = lab::rerandomize_with(&sk2, &l.pp, &rand).unwrap();
        let r = lab::decrypt_residual(&sct, &rr, &l.pp, &m).unwrap();

        let zp = &l.zp;
        let (sk1v, sk2v, zk1, zk3, g) =
            (sf2.s_k1.value(), sf2.s_k2.value(), sf2.z_k1.value(), sf2.z_k3.value(), rand.gamma1.value());
        let e1 = zp.add(zp.mul(sk1v, zk1), zp.mul(zp.mul(sk2v, zk3), g));
        let e2 = zp.add(sk1v, zp.mul(sk2v, g));
        let inner = zp.sub(e1, zp.mul(e2, sfc.z_c.value()));
        let expected = zp.mul(zp.mul(zp.mul(l.y_f(), l.y_f()), sfc.s_c.value()), inner);
        assert_eq!(l.rel_t(r.log()), expected, "seed={seed}");

        // normal ciphertexts still decrypt under the re-randomized key
        let ct = scheme::encrypt(&id, &m, &l.pp, &mut l.rng).unwrap();
        assert_eq!(scheme::decrypt(&ct, &rr, &l.pp).unwrap(), m);
    }
}

#[test]
fn zero_sf_exponents_reproduce_normal_algorithms() {
    let mut l = Lab::new(1009, 3, 2);
    let id = l.id(&[8, 9]);
    let normal = KeyGenRandomness::sample(&l.pp.suite, 0, &mut l.rng);
    let zero = l.pp.suite.scalar(0);
    let sf = SfKeyRandomness { s_k1: zero, z_k1: zero, z_k2: vec![], s_k2: zero, z_k3: zero, z_k4: vec![] };
    assert_eq!(
        lab::keygen_sf_with(&id, &l.mk, &l.pp, &l.sfp, &normal, &sf).unwrap().to_bytes(&l.pp),
        scheme::keygen_with(&id, &l.mk, &l.pp, &normal).unwrap().to_bytes(&l.pp)
    );
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let t = l.pp.suite.random_scalar(&mut rng);
    let m = l.msg();
    let sfc = SfCiphertextRandomness { s_c: zero, z_c: l.pp.suite.scalar(4) };
    assert_eq!(
        lab::encrypt_sf_with(&id, &m, &l.pp, &l.sfp, &t, &sfc).unwrap().to_bytes(&l.pp),
        scheme::encrypt_with(&id, &m, &l.pp, &t).unwrap().to_bytes(&l.pp)
    );
}
