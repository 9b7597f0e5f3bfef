//! The commuting requirement on A, B and the relation `[G,F] = [B̄H, B̄F]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tower::{field_bracket, normalize_expr, LieExpr, Tower};
use crate::error::{Error, Result};
use crate::liealg::OpenAlgebra;
use crate::scalar::{ConstraintReducer, ExactScalar};

/// Reading of the undefined symbol B̄.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BbarInterpretation {
    #[default]
    Inverse,
    Identity,
}

impl FromStr for BbarInterpretation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inverse" => Ok(BbarInterpretation::Inverse),
            "identity" => Ok(BbarInterpretation::Identity),
            o => Err(Error::InvalidParameter(format!("bbar interpretation must be inverse or identity, got `{o}`"))),
        }
    }
}

impl fmt::Display for BbarInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BbarInterpretation::Inverse => write!(f, "inverse"),
            BbarInterpretation::Identity => write!(f, "identity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstrReport {
    pub ab_commutes: bool,
    /// Rows of `AB − BA`.
    pub ab_commutator: Vec<Vec<ExactScalar>>,
    /// `[G,F] − [B̄H, B̄F]`, reduced modulo the target constraint.
    pub difference: LieExpr,
}

pub fn matrix_commutator(a: &[Vec<ExactScalar>], b: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let n = a.len();
    let mul = |x: &[Vec<ExactScalar>], y: &[Vec<ExactScalar>], r: usize, c: usize| {
        (0..n).fold(ExactScalar::zero(), |acc, m| &acc + &(&x[r][m] * &y[m][c]))
    };
    (0..n).map(|r| (0..n).map(|c| &mul(a, b, r, c) - &mul(b, a, r, c)).collect()).collect()
}

/// Scalar `b` with `B = b·I`, if B has that form.
fn scalar_of(b: &[Vec<ExactScalar>]) -> Option<ExactScalar> {
    let d = b.first()?.first()?.clone();
    for (r, row) in b.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            let want = if r == c { &d } else { &ExactScalar::zero() };
            if x != want {
                return None;
            }
        }
    }
    Some(d)
}

fn det2(b: &[Vec<ExactScalar>]) -> Option<ExactScalar> {
    match b.len() {
        1 => Some(b[0][0].clone()),
        2 => Some(&(&b[0][0] * &b[1][1]) - &(&b[0][1] * &b[1][0])),
        _ => None,
    }
}

/// Check `[A,B] = 0` and evaluate `[G,F] − [B̄H, B̄F]` in `alg`.
/// Only `B = b·I` is supported, where `[B̄H, B̄F] = b^{-2} [H,F]` under the
/// inverse reading.
pub fn check_constr_relation(t: &Tower, alg: &OpenAlgebra, bbar: BbarInterpretation) -> Result<ConstrReport> {
    let ab_commutator = matrix_commutator(&t.a, &t.b);
    let ab_commutes = ab_commutator.iter().flatten().all(ExactScalar::is_zero);
    if det2(&t.b).is_some_and(|d| d.is_zero()) {
        return Err(Error::SingularB);
    }
    let factor = match bbar {
        BbarInterpretation::Identity => ExactScalar::one(),
        BbarInterpretation::Inverse => {
            let b = scalar_of(&t.b)
                .ok_or_else(|| Error::Unsupported("B̄ is only evaluated for B a multiple of the identity".into()))?;
            let inv = b.recip().ok_or(Error::SingularB)?;
            &inv * &inv
        }
    };
    let reducer = ConstraintReducer::new(&t.params, 1);
    let lhs = field_bracket(&t.g, &t.f, alg);
    let rhs = field_bracket(&t.h, &t.f, alg).scale(&factor);
    let difference = normalize_expr(&reducer.reduce(&lhs.sub(&rhs)), alg);
    Ok(ConstrReport { ab_commutes, ab_commutator, difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolong::tower::{build_reduction, Reduction};
    use crate::scalar::ModelParams;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn scalar_pair_commutes() {
        let mut t = build_reduction(Reduction::I, &ModelParams::compact());
        t.a = vec![vec![s(3)]];
        t.b = vec![vec![s(2)]];
        let r = check_constr_relation(&t, &OpenAlgebra::new(), BbarInterpretation::Inverse).unwrap();
        assert!(r.ab_commutes);
    }

    #[test]
    fn noncommuting_pair_reported() {
        let p = ModelParams::new(crate::scalar::Gamma2::Compact, 2).unwrap();
        let mut t = build_reduction(Reduction::I, &p);
        t.a = vec![vec![s(0), s(1)], vec![s(0), s(0)]];
        t.b = vec![vec![s(1), s(0)], vec![s(0), s(2)]];
        let r = check_constr_relation(&t, &OpenAlgebra::new(), BbarInterpretation::Identity).unwrap();
        assert!(!r.ab_commutes);
        assert_eq!(r.ab_commutator[0][1], s(1));
    }

    #[test]
    fn singular_b_rejected() {
        let mut t = build_reduction(Reduction::I, &ModelParams::compact());
        t.b = vec![vec![s(0)]];
        assert!(matches!(
            check_constr_relation(&t, &OpenAlgebra::new(), BbarInterpretation::Inverse),
            Err(Error::SingularB)
        ));
    }
}
