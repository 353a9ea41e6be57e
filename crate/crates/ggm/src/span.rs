//! Linear spans of polynomials over `Q`, by incremental Gaussian elimination.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::poly::{FormalPoly, Monomial};

/// An echelon basis: each stored polynomial is monic in its leading
/// monomial, and leading monomials are distinct.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: BTreeMap<Monomial, FormalPoly>,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn of<'a>(polys: impl IntoIterator<Item = &'a FormalPoly>) -> Self {
        let mut b = SpanBasis::new();
        for p in polys {
            b.insert(p);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The remainder of `p` after eliminating every basis pivot. Zero iff
    /// `p` lies in the span.
    pub fn reduce(&self, p: &FormalPoly) -> FormalPoly {
        let mut work = p.clone();
        let mut rem = FormalPoly::zero();
        while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match self.rows.get(&m) {
                // the row's other monomials are all below `m`
                Some(row) => work.sub_scaled(row, &c),
                None => {
                    let t = FormalPoly::term(m, c);
                    work = &work - &t;
                    rem = &rem + &t;
                }
            }
        }
        rem
    }

    pub fn contains(&self, p: &FormalPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p`; returns false if it was already in the span.
    pub fn insert(&mut self, p: &FormalPoly) -> bool {
        let rem = self.reduce(p);
        let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let inv = BigRational::from_integer(1.into()) / c;
        self.rows.insert(m, rem.scale(&inv));
        true
    }
}
