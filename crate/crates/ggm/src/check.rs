//! Dependence tests and the generic advantage bound.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::GgmError;
use crate::poly::FormalPoly;
use crate::span::SpanBasis;

/// Where the challenge element lives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ChallengeGroup {
    #[default]
    G,
    Ghat,
    Gt,
}

impl fmt::Display for ChallengeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChallengeGroup::G => "G",
            ChallengeGroup::Ghat => "Ghat",
            ChallengeGroup::Gt => "GT",
        })
    }
}

impl FromStr for ChallengeGroup {
    type Err = GgmError;

    fn from_str(s: &str) -> Result<Self, GgmError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g" | "g1" => Ok(ChallengeGroup::G),
            "ghat" | "g2" => Ok(ChallengeGroup::Ghat),
            "gt" => Ok(ChallengeGroup::Gt),
            other => Err(GgmError::InvalidInstance(format!("unknown challenge group `{other}`"))),
        }
    }
}

/// `P` over G, `Q` over Ĝ, `R` over G_T, and the two challenge candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionInstance {
    pub name: String,
    pub p: Vec<FormalPoly>,
    pub q: Vec<FormalPoly>,
    pub r: Vec<FormalPoly>,
    pub t: [FormalPoly; 2],
    pub challenge: ChallengeGroup,
}

impl AssumptionInstance {
    pub fn validate(&self) -> Result<(), GgmError> {
        if self.p.is_empty() || self.q.is_empty() || self.r.is_empty() {
            return Err(GgmError::InvalidInstance("P, Q and R must be non-empty".into()));
        }
        if self.t[0] == self.t[1] {
            return Err(GgmError::InvalidInstance("T0 and T1 must differ".into()));
        }
        Ok(())
    }

    /// The set `T` is tested against for plain dependence, and the set it
    /// gets paired with. For a Ĝ challenge the two source groups trade places.
    fn sides(&self) -> (&[FormalPoly], &[FormalPoly]) {
        match self.challenge {
            ChallengeGroup::Ghat => (&self.q, &self.p),
            _ => (&self.p, &self.q),
        }
    }
}

/// `α·T = Σ β_i·P_i` for some `α ≠ 0`.
pub fn dependent_on(t: &FormalPoly, p: &[FormalPoly]) -> bool {
    SpanBasis::of(p).contains(t)
}

fn products(a: &[FormalPoly], b: &[FormalPoly]) -> Vec<FormalPoly> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Whether some nontrivial combination of `{T·Q_i}` falls in
/// `span(P×Q ∪ R)`.
pub fn pairing_dependent(t: &FormalPoly, p: &[FormalPoly], q: &[FormalPoly], r: &[FormalPoly]) -> bool {
    let known = SpanBasis::of(products(p, q).iter().chain(r));
    // a combination that vanishes already in Q is not a real relation
    let mut q_basis = SpanBasis::new();
    let q_indep: Vec<&FormalPoly> = q.iter().filter(|qi| q_basis.insert(qi)).collect();
    let mut joint = known;
    let fresh = q_indep.iter().filter(|qi| joint.insert(&(t * qi))).count();
    fresh < q_indep.len()
}

/// `3(q + 2l)²·t / p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub l: usize,
    pub t: u32,
}

impl Bound {
    /// The numerator for `q` instructions.
    pub fn numerator(&self, q: u64) -> BigInt {
        let s = BigInt::from(q) + BigInt::from(2 * self.l);
        BigInt::from(3) * &s * &s * BigInt::from(self.t)
    }

    pub fn evaluate(&self, q: u64, p: &BigInt) -> BigRational {
        BigRational::new(self.numerator(q), p.clone())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "3(q+{})²·{}/p", 2 * self.l, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub t_dependent_on_p: [bool; 2],
    pub pairing_dependent: [bool; 2],
    pub generic_secure: bool,
    pub bound: Bound,
    /// `{e(T_b, Q_j)}_j` (or the swapped pairing for a Ĝ challenge); empty
    /// for a G_T challenge.
    pub pairing_products: [Vec<FormalPoly>; 2],
}

pub fn check_assumption(inst: &AssumptionInstance) -> Result<Verdict, GgmError> {
    inst.validate()?;
    let (base, other) = inst.sides();
    let cross = products(&inst.p, &inst.q);
    let mut dep = [false; 2];
    let mut pdep = [false; 2];
    let mut prods: [Vec<FormalPoly>; 2] = Default::default();
    for b in 0..2 {
        let t = &inst.t[b];
        if inst.challenge == ChallengeGroup::Gt {
            dep[b] = dependent_on(t, &[cross.as_slice(), &inst.r].concat());
        } else {
            dep[b] = dependent_on(t, base);
            pdep[b] = pairing_dependent(t, base, other, &inst.r);
            prods[b] = other.iter().map(|o| t * o).collect();
        }
    }
    let degree = inst
        .p
        .iter()
        .chain(&inst.q)
        .chain(&inst.r)
        .chain(&inst.t)
        .chain(&cross)
        .chain(prods.iter().flatten())
        .map(FormalPoly::degree)
        .max()
        .unwrap_or(0);
    let l = inst.p.len().max(inst.q.len()).max(inst.r.len());
    Ok(Verdict {
        t_dependent_on_p: dep,
        pairing_dependent: pdep,
        generic_secure: !dep.iter().chain(&pdep).any(|&x| x),
        bound: Bound { l, t: degree },
        pairing_products: prods,
    })
}

/// Parses the line-oriented instance format:
///
/// ```text
/// name: my assumption
/// challenge: G
/// P: 1
/// P: A, B
/// Q: 1
/// T0: A*B
/// T1: D
/// ```
///
/// Each `P`/`Q`/`R` line adds one or more comma-separated polynomials.
/// `R` defaults to `{1}`; `challenge` defaults to `G`.
impl FromStr for AssumptionInstance {
    type Err = GgmError;

    fn from_str(s: &str) -> Result<Self, GgmError> {
        let mut name = String::from("custom");
        let mut challenge = ChallengeGroup::G;
        let (mut p, mut q, mut r) = (Vec::new(), Vec::new(), Vec::new());
        let (mut t0, mut t1) = (None, None);
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |e: GgmError| match e {
                GgmError::Parse { msg, .. } => GgmError::Parse { line: line_no, msg },
                GgmError::InvalidInstance(msg) => GgmError::Parse { line: line_no, msg },
                other => other,
            };
            let (key, value) = line.split_once(':').ok_or(GgmError::Parse {
                line: line_no,
                msg: "expected `KEY: value`".into(),
            })?;
            let list = |v: &str| -> Result<Vec<FormalPoly>, GgmError> {
                v.split(',').map(|x| x.parse::<FormalPoly>().map_err(at_line)).collect()
            };
            match key.trim() {
                "name" => name = value.trim().to_string(),
                "challenge" => challenge = value.parse().map_err(at_line)?,
                "P" => p.extend(list(value)?),
                "Q" => q.extend(list(value)?),
                "R" => r.extend(list(value)?),
                "T0" => t0 = Some(value.parse().map_err(at_line)?),
                "T1" => t1 = Some(value.parse().map_err(at_line)?),
                other => {
                    return Err(GgmError::Parse { line: line_no, msg: format!("unknown section `{other}`") })
                }
            }
        }
        if r.is_empty() {
            r.push(FormalPoly::one());
        }
        let missing = |k: &str| GgmError::InvalidInstance(format!("missing {k}"));
        let inst = AssumptionInstance {
            name,
            p,
            q,
            r,
            t: [t0.ok_or_else(|| missing("T0"))?, t1.ok_or_else(|| missing("T1"))?],
            challenge,
        };
        inst.validate()?;
        Ok(inst)
    }
}
