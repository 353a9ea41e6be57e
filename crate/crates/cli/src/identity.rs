use std::fmt;
use std::str::FromStr;

use ahibe::{GroupSuite, HierarchicalIdentity, PairingBackend, ScalarField};
use sha2::{Digest, Sha512};

const DOMAIN: &[u8] = b"ahibe identity v1";

/// A `/`-separated list of non-empty UTF-8 labels, e.g. `corp/eng/alice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityPath(Vec<String>);

impl IdentityPath {
    pub fn new(labels: Vec<String>) -> Result<Self, String> {
        if labels.is_empty() {
            return Err("identity path is empty".into());
        }
        if labels.iter().any(String::is_empty) {
            return Err("identity path contains an empty label".into());
        }
        Ok(IdentityPath(labels))
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl FromStr for IdentityPath {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        IdentityPath::new(s.split('/').map(str::to_string).collect())
    }
}

impl fmt::Display for IdentityPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("/"))
    }
}

/// One SHA-512 digest per attempt over
/// `DOMAIN ‖ level ‖ len(label) ‖ label ‖ counter`, reduced mod `p`. A zero
/// residue is retried with the next counter value.
pub fn hash_label<B: PairingBackend>(suite: &GroupSuite<B>, level: usize, label: &str) -> B::Scalar {
    (0..=u8::MAX)
        .map(|counter| {
            let digest = Sha512::new()
                .chain_update(DOMAIN)
                .chain_update((level as u32).to_be_bytes())
                .chain_update((label.len() as u32).to_be_bytes())
                .chain_update(label.as_bytes())
                .chain_update([counter])
                .finalize();
            suite.backend().scalar_from_be_bytes_mod_order(&digest)
        })
        .find(|s| !s.is_zero())
        .expect("256 consecutive zero residues")
}

pub fn hash_identity<B: PairingBackend>(path: &IdentityPath, suite: &GroupSuite<B>) -> HierarchicalIdentity<B::Scalar> {
    let comps = path.labels().iter().enumerate().map(|(i, l)| hash_label(suite, i, l)).collect();
    HierarchicalIdentity::new(comps).expect("hashed components are non-zero")
}
