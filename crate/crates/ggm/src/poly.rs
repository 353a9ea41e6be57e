//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::GgmError;

/// A power product of named variables. Variables with exponent zero are
/// never stored, so the empty monomial is the constant `1`.
///
/// Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    powers: BTreeMap<String, u32>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.powers.cmp(&other.powers))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(name: &str) -> Self {
        Monomial::default().times_var(name, 1)
    }

    fn times_var(mut self, name: &str, e: u32) -> Self {
        if e > 0 {
            *self.powers.entry(name.to_string()).or_insert(0) += e;
        }
        self
    }

    pub fn degree(&self) -> u32 {
        self.powers.values().sum()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.powers.keys().map(String::as_str)
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        rhs.powers.iter().fold(self.clone(), |m, (v, e)| m.times_var(v, *e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.powers.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match e {
                1 => write!(f, "{v}")?,
                _ => write!(f, "{v}^{e}")?,
            }
        }
        Ok(())
    }
}

/// `Σ c_m · m` with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FormalPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl FormalPoly {
    pub fn zero() -> Self {
        FormalPoly::default()
    }

    pub fn one() -> Self {
        FormalPoly::from_monomial(Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        FormalPoly::from_monomial(Monomial::var(name))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        FormalPoly::term(m, BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = FormalPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: i64) -> Self {
        FormalPoly::term(Monomial::one(), BigRational::from_integer(c.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree of any term; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The term with the largest monomial.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().flat_map(Monomial::variables)
    }

    pub fn scale(&self, c: &BigRational) -> FormalPoly {
        if c.is_zero() {
            return FormalPoly::zero();
        }
        FormalPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// `self − c·other`, in place.
    pub fn sub_scaled(&mut self, other: &FormalPoly, c: &BigRational) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), -(x * c));
        }
    }
}

impl Add for &FormalPoly {
    type Output = FormalPoly;
    fn add(self, rhs: &FormalPoly) -> FormalPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FormalPoly {
    type Output = FormalPoly;
    fn sub(self, rhs: &FormalPoly) -> FormalPoly {
        let mut out = self.clone();
        out.sub_scaled(rhs, &BigRational::one());
        out
    }
}

impl Neg for &FormalPoly {
    type Output = FormalPoly;
    fn neg(self) -> FormalPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &FormalPoly {
    type Output = FormalPoly;
    fn mul(self, rhs: &FormalPoly) -> FormalPoly {
        let mut out = FormalPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1 * m2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest degree first, then alphabetical
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.powers.cmp(&b.0.powers)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let is_one = m.powers.is_empty();
            if a.is_one() {
                write!(f, "{m}")?;
            } else if is_one {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Parses `A*B^2 + 2*C - 3/4*D + 1`. Juxtaposition is not multiplication;
/// every factor is separated by `*`. Variables start with a letter.
impl FromStr for FormalPoly {
    type Err = GgmError;

    fn from_str(s: &str) -> Result<Self, GgmError> {
        let err = |msg: String| GgmError::Parse { line: 0, msg };
        let mut out = FormalPoly::zero();
        let mut rest = s.trim();
        if rest.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = BigRational::one();
            if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r.trim_start();
            } else if !first {
                return Err(err(format!("expected `+` or `-` before `{rest}`")));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            let (m, c) = parse_term(term.trim()).map_err(err)?;
            out.add_term(m, c * sign);
            rest = tail.trim_start();
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(Monomial, BigRational), String> {
    if term.is_empty() {
        return Err("missing term".into());
    }
    let mut m = Monomial::one();
    let mut c = BigRational::one();
    for factor in term.split('*') {
        let factor = factor.trim();
        let first = factor.chars().next().ok_or("empty factor")?;
        if first.is_ascii_digit() {
            c *= parse_rational(factor)?;
        } else if first.is_alphabetic() {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (factor, 1),
            };
            if !name.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                return Err(format!("bad variable name `{name}`"));
            }
            m = m.times_var(name, exp);
        } else {
            return Err(format!("unexpected `{factor}`"));
        }
    }
    Ok((m, c))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let int = |x: &str| x.trim().parse::<BigInt>().map_err(|_| format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err("division by zero".into());
            }
            Ok(BigRational::new(int(n)?, d))
        }
        None => Ok(BigRational::from_integer(int(s)?)),
    }
}
