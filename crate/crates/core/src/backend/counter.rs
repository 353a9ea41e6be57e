//! Opt-in operation counting.
//!
//! Counting is scoped per thread: [`OperationCounter::measure`] activates a
//! counter for the duration of a closure, and every counted group operation
//! executed on that thread is added to all active counters. Outside a scope
//! recording is a thread-local emptiness check.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Serialize, Serializer};

use super::GroupKind;

/// Classes of expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpClass {
    Exp(GroupKind),
    /// m-term multi-exponentiation.
    MultiExp(GroupKind, usize),
    Pair,
    /// m-term multi-pairing.
    MultiPair(usize),
}

impl fmt::Display for OpClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpClass::Exp(k) => write!(f, "exp_{}", k.label()),
            OpClass::MultiExp(k, m) => write!(f, "mexp_{}({m})", k.label()),
            OpClass::Pair => f.write_str("pair"),
            OpClass::MultiPair(m) => write!(f, "mpair({m})"),
        }
    }
}

/// Operation counts keyed by class. Classes with a zero count are absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostVector {
    counts: BTreeMap<OpClass, u64>,
}

impl CostVector {
    pub fn add(&mut self, class: OpClass, n: u64) {
        if n > 0 {
            *self.counts.entry(class).or_insert(0) += n;
        }
    }

    pub fn with(mut self, class: OpClass, n: u64) -> Self {
        self.add(class, n);
        self
    }

    pub fn get(&self, class: OpClass) -> u64 {
        self.counts.get(&class).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (OpClass, u64)> + '_ {
        self.counts.iter().map(|(c, n)| (*c, *n))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total of all classes in `kind` that are exponentiations (single or multi).
    pub fn total_exps(&self, kind: GroupKind) -> u64 {
        self.iter()
            .filter(|(c, _)| matches!(c, OpClass::Exp(k) | OpClass::MultiExp(k, _) if *k == kind))
            .map(|(_, n)| n)
            .sum()
    }

    /// Per-class difference `self - earlier`, for snapshot diffs.
    pub fn since(&self, earlier: &CostVector) -> CostVector {
        let mut out = CostVector::default();
        for (c, n) in self.iter() {
            out.add(c, n.saturating_sub(earlier.get(c)));
        }
        out
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{")?;
        for (i, (c, n)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}: {n}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for CostVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.iter().map(|(c, n)| (c.to_string(), n)))
    }
}

/// A shareable counter handle. Clones observe the same counts.
#[derive(Clone, Debug, Default)]
pub struct OperationCounter {
    inner: Arc<Mutex<CostVector>>,
}

thread_local! {
    static ACTIVE: RefCell<Vec<OperationCounter>> = const { RefCell::new(Vec::new()) };
}

struct ScopeGuard;

impl Drop for ScopeGuard {
    fn drop(&mut self) {
        ACTIVE.with(|a| {
            a.borrow_mut().pop();
        });
    }
}

impl OperationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `f` with this counter active on the current thread.
    pub fn measure<R>(&self, f: impl FnOnce() -> R) -> R {
        ACTIVE.with(|a| a.borrow_mut().push(self.clone()));
        let _guard = ScopeGuard;
        f()
    }

    pub fn snapshot(&self) -> CostVector {
        self.inner.lock().expect("counter lock").clone()
    }

    pub fn reset(&self) {
        *self.inner.lock().expect("counter lock") = CostVector::default();
    }
}

/// Runs `f` under a fresh counter and returns its result with the counts.
pub fn count_ops<R>(f: impl FnOnce() -> R) -> (R, CostVector) {
    let counter = OperationCounter::new();
    let out = counter.measure(f);
    (out, counter.snapshot())
}

pub(crate) fn record(class: OpClass) {
    ACTIVE.with(|a| {
        for c in a.borrow().iter() {
            c.inner.lock().expect("counter lock").add(class, 1);
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_recorded_outside_scope() {
        let c = OperationCounter::new();
        record(OpClass::Pair);
        assert!(c.snapshot().is_empty());
    }

    #[test]
    fn nested_scopes_and_snapshot_diff() {
        let outer = OperationCounter::new();
        let inner = OperationCounter::new();
        outer.measure(|| {
            record(OpClass::Pair);
            let before = outer.snapshot();
            inner.measure(|| record(OpClass::MultiPair(3)));
            let diff = outer.snapshot().since(&before);
            assert_eq!(diff, CostVector::default().with(OpClass::MultiPair(3), 1));
        });
        assert_eq!(outer.snapshot().get(OpClass::Pair), 1);
        assert_eq!(outer.snapshot().get(OpClass::MultiPair(3)), 1);
        assert_eq!(inner.snapshot().get(OpClass::Pair), 0);
    }

    #[test]
    fn scopes_are_per_thread() {
        let c = OperationCounter::new();
        c.measure(|| {
            std::thread::spawn(|| record(OpClass::Pair)).join().unwrap();
        });
        assert!(c.snapshot().is_empty());
    }

    #[test]
    fn display_and_json() {
        let v = CostVector::default()
            .with(OpClass::Exp(GroupKind::G2), 4)
            .with(OpClass::MultiExp(GroupKind::G2, 2), 2);
        assert_eq!(v.to_string(), "{exp_G2: 4, mexp_G2(2): 2}");
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"exp_G2":4,"mexp_G2(2)":2}"#);
        assert_eq!(v.total_exps(GroupKind::G2), 6);
    }
}
