//! Anonymous hierarchical identity-based encryption over asymmetric
//! (type III) pairings.
//!
//! Ciphertexts have constant size (six `G` elements and one `G_T` element) and
//! reveal nothing about the recipient identity. Keys support one-level-at-a-time
//! delegation down to a maximum depth fixed at setup.
//!
//! ```
//! use ahibe::{GroupSuite, HierarchicalIdentity, scheme};
//! use rand::SeedableRng;
//!
//! let suite = GroupSuite::mock(1009, 1).unwrap();
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
//! let (mk, pp) = scheme::setup(&suite, 3, &mut rng).unwrap();
//! let alice = HierarchicalIdentity::new(vec![suite.scalar(5), suite.scalar(9)]).unwrap();
//! let sk = scheme::keygen(&alice, &mk, &pp, &mut rng).unwrap();
//! let msg = suite.gt_generator();
//! let ct = scheme::encrypt(&alice, &msg, &pp, &mut rng).unwrap();
//! assert_eq!(scheme::decrypt(&ct, &sk, &pp).unwrap(), msg);
//! ```

pub mod backend;
pub mod bench;
pub mod codec;
pub mod cost;
pub mod error;
pub mod identity;
#[cfg(any(test, feature = "lab"))]
pub mod lab;
pub mod scheme;

pub use backend::{GroupElement, GroupKind, GroupSuite, PairingBackend, ScalarField};
pub use error::{BackendError, CodecError, SchemeError};
pub use identity::HierarchicalIdentity;
pub use scheme::{Ciphertext, MasterKey, PrivateKey, PublicParams};
