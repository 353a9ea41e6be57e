//! The five decisional assumptions the scheme's security rests on.

use crate::check::{AssumptionInstance, ChallengeGroup};
use crate::error::GgmError;
use crate::poly::FormalPoly;

fn polys(list: &[&str]) -> Vec<FormalPoly> {
    list.iter().map(|s| s.parse().expect("builtin polynomial")).collect()
}

fn poly(s: &str) -> FormalPoly {
    s.parse().expect("builtin polynomial")
}

/// Builtin assumption `n` in `1..=5`. `T1` always introduces the fresh
/// variable `D`.
pub fn builtin(n: usize) -> Result<AssumptionInstance, GgmError> {
    let (name, p, q, t0, challenge) = match n {
        1 => (
            "LW1",
            polys(&["1", "A", "B", "A*B^2", "B^2", "B^3", "C", "A*C", "B*C", "B^2*C", "B^3*C"]),
            polys(&["1", "B"]),
            "A*B^2*C",
            ChallengeGroup::G,
        ),
        2 => (
            "LW2",
            polys(&["1", "A", "A^2", "B*X", "A*B*X", "A^2*X"]),
            polys(&["1", "A", "B", "C"]),
            "B*C",
            ChallengeGroup::Ghat,
        ),
        3 => ("SXDH", polys(&["1"]), polys(&["1", "A", "B"]), "A*B", ChallengeGroup::Ghat),
        4 => ("DBDH", polys(&["1", "A", "B", "C"]), polys(&["1", "A", "B", "C"]), "A*B*C", ChallengeGroup::Gt),
        5 => (
            "asymmetric 3-party DH",
            polys(&["1", "A", "B", "C", "A*B", "A^2*B"]),
            polys(&["1", "A", "B"]),
            "A*B*C",
            ChallengeGroup::G,
        ),
        _ => return Err(GgmError::UnknownBuiltin(n)),
    };
    Ok(AssumptionInstance {
        name: name.to_string(),
        p,
        q,
        r: vec![FormalPoly::one()],
        t: [poly(t0), poly("D")],
        challenge,
    })
}
