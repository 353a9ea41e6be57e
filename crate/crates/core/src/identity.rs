use crate::backend::ScalarField;
use crate::error::SchemeError;

/// An identity vector `(I_1, …, I_c)` with every component in `Z_p^*`.
///
/// Depth 0 is the root: a key for the root can delegate to every depth-1
/// identity, and encrypting to it is well defined (only the root key
/// decrypts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchicalIdentity<S> {
    components: Vec<S>,
}

impl<S: ScalarField> HierarchicalIdentity<S> {
    pub fn new(components: Vec<S>) -> Result<Self, SchemeError> {
        if let Some(index) = components.iter().position(|c| c.is_zero()) {
            return Err(SchemeError::ZeroComponent { index });
        }
        Ok(HierarchicalIdentity { components })
    }

    pub fn root() -> Self {
        HierarchicalIdentity { components: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn is_prefix_of(&self, other: &Self) -> bool {
        self.depth() <= other.depth() && other.components[..self.depth()] == self.components[..]
    }

    /// This identity extended by one component.
    pub fn child(&self, component: S) -> Result<Self, SchemeError> {
        if component.is_zero() {
            return Err(SchemeError::ZeroComponent { index: self.depth() });
        }
        let mut components = self.components.clone();
        components.push(component);
        Ok(HierarchicalIdentity { components })
    }

    /// The first `depth` components.
    pub fn prefix(&self, depth: usize) -> Self {
        HierarchicalIdentity { components: self.components[..depth.min(self.depth())].to_vec() }
    }
}
