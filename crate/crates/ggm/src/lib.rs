//! Symbolic independence checks for pairing-based decisional assumptions in
//! the generic group model.
//!
//! ```
//! use ggm_check::{builtin, check_assumption};
//!
//! let v = check_assumption(&builtin(5).unwrap()).unwrap();
//! assert!(v.generic_secure);
//! assert_eq!(v.bound.to_string(), "3(q+12)²·4/p");
//! ```

mod builtins;
mod check;
mod error;
mod poly;
mod span;

pub use builtins::builtin;
pub use check::{check_assumption, dependent_on, pairing_dependent, AssumptionInstance, Bound, ChallengeGroup, Verdict};
pub use error::GgmError;
pub use poly::{FormalPoly, Monomial};
pub use span::SpanBasis;
