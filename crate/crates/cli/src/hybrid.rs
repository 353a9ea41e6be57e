//! KEM-DEM wrapper: the scheme encrypts a random `G_T` element, whose
//! encoding keys ChaCha20-Poly1305 for the message body.
//!
//! Container: `"AHCT"`, version byte, header length (`u32`, big-endian),
//! header (an encoded scheme ciphertext), 12-byte nonce, AEAD body. The
//! header is bound as associated data.

use ahibe::scheme;
use ahibe::{Ciphertext, GroupElement, HierarchicalIdentity, PairingBackend, PrivateKey, PublicParams};
use chacha20poly1305::aead::{Aead, Payload};
use chacha20poly1305::{ChaCha20Poly1305, Key, KeyInit, Nonce};
use hkdf::Hkdf;
use rand::RngCore;
use sha2::Sha256;

use crate::error::CliError;

pub const MAGIC: &[u8; 4] = b"AHCT";
pub const VERSION: u8 = 1;
const INFO: &[u8] = b"ahibe kem-dem v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybridCiphertext {
    pub header: Vec<u8>,
    pub nonce: [u8; 12],
    pub body: Vec<u8>,
}

impl HybridCiphertext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        out.push(VERSION);
        out.extend((self.header.len() as u32).to_be_bytes());
        out.extend(&self.header);
        out.extend(self.nonce);
        out.extend(&self.body);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CliError> {
        let rest = bytes.strip_prefix(MAGIC).ok_or(CliError::Container("bad magic"))?;
        let (&version, rest) = rest.split_first().ok_or(CliError::Container("truncated"))?;
        if version != VERSION {
            return Err(CliError::Container("unsupported version"));
        }
        if rest.len() < 4 {
            return Err(CliError::Container("truncated"));
        }
        let (len, rest) = rest.split_at(4);
        let len = u32::from_be_bytes(len.try_into().expect("4 bytes")) as usize;
        if rest.len() < len + 12 {
            return Err(CliError::Container("truncated"));
        }
        let (header, rest) = rest.split_at(len);
        let (nonce, body) = rest.split_at(12);
        Ok(HybridCiphertext { header: header.to_vec(), nonce: nonce.try_into().expect("12 bytes"), body: body.to_vec() })
    }
}

fn derive_key<E: GroupElement>(kem_secret: &E) -> Key {
    let mut okm = [0u8; 32];
    Hkdf::<Sha256>::new(None, &kem_secret.encode()).expand(INFO, &mut okm).expect("32 bytes is a valid HKDF length");
    okm.into()
}

pub fn seal<B: PairingBackend, R: RngCore + ?Sized>(
    id: &HierarchicalIdentity<B::Scalar>,
    msg: &[u8],
    pp: &PublicParams<B>,
    rng: &mut R,
) -> Result<HybridCiphertext, CliError> {
    let s = pp.suite.random_scalar(rng);
    let secret = pp.suite.exp(&pp.suite.gt_generator(), &s);
    let header = scheme::encrypt(id, &secret, pp, rng)?.to_bytes(pp);
    let mut nonce = [0u8; 12];
    rng.fill_bytes(&mut nonce);
    let body = ChaCha20Poly1305::new(&derive_key(&secret))
        .encrypt(Nonce::from_slice(&nonce), Payload { msg, aad: &header })
        .expect("in-memory encryption");
    Ok(HybridCiphertext { header, nonce, body })
}

/// Nothing is returned unless the tag verifies.
pub fn open<B: PairingBackend>(
    hct: &HybridCiphertext,
    sk: &PrivateKey<B>,
    pp: &PublicParams<B>,
) -> Result<Vec<u8>, CliError> {
    let ct = Ciphertext::from_bytes(&hct.header, pp)?;
    let secret = scheme::decrypt(&ct, sk, pp)?;
    ChaCha20Poly1305::new(&derive_key(&secret))
        .decrypt(Nonce::from_slice(&hct.nonce), Payload { msg: &hct.body, aad: &hct.header })
        .map_err(|_| CliError::Auth)
}
