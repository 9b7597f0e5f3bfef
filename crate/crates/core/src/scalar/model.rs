//! Model parameters and reduction modulo the target-manifold constraint
//! `(ΓS)·S = γ²` together with its total derivatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::exact::ExactScalar;
use super::field::{Coefficient, FieldExpr, Monomial, ScalarExpr};
use super::jet::{Jet, JetSymbol};
use crate::error::{Error, Result};

/// γ² ∈ {+1, −1}: sphere (compact) or hyperboloid (noncompact) target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gamma2 {
    Compact,
    Noncompact,
}

impl Gamma2 {
    pub fn sign(self) -> i64 {
        match self {
            Gamma2::Compact => 1,
            Gamma2::Noncompact => -1,
        }
    }

    pub fn value(self) -> ExactScalar {
        ExactScalar::from_int(self.sign())
    }

    pub fn as_f64(self) -> f64 {
        self.sign() as f64
    }
}

impl FromStr for Gamma2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" | "compact" => Ok(Gamma2::Compact),
            "-1" | "noncompact" => Ok(Gamma2::Noncompact),
            other => Err(Error::InvalidParameter(format!("gamma2 must be +1 or -1, got `{other}`"))),
        }
    }
}

impl fmt::Display for Gamma2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma2::Compact => write!(f, "+1"),
            Gamma2::Noncompact => write!(f, "-1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma2: Gamma2,
    /// Number of pseudopotentials ξ_1..ξ_N.
    pub n_xi: u8,
}

impl ModelParams {
    pub fn new(gamma2: Gamma2, n_xi: u8) -> Result<Self> {
        if n_xi == 0 {
            return Err(Error::InvalidParameter("pseudopotential dimension must be positive".into()));
        }
        Ok(ModelParams { gamma2, n_xi })
    }

    pub fn compact() -> Self {
        ModelParams { gamma2: Gamma2::Compact, n_xi: 1 }
    }

    pub fn noncompact() -> Self {
        ModelParams { gamma2: Gamma2::Noncompact, n_xi: 1 }
    }

    /// Diagonal entry Γ_ii of Γ = diag(1, 1, γ²).
    pub fn gamma_entry(&self, comp: u8) -> ExactScalar {
        if comp == 3 {
            self.gamma2.value()
        } else {
            ExactScalar::one()
        }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::compact()
    }
}

fn binom(n: u8, k: u8) -> i64 {
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (n - j) as i64 / (j + 1) as i64;
    }
    r
}

struct Rule {
    lhs: Monomial,
    rhs: ScalarExpr,
}

/// Rewrites polynomials modulo the constraint ideal generated by
/// `(ΓS)·S − γ²` and its total derivatives up to a fixed order.
/// Leading monomials are `S3²` and `S3·S3_α`.
pub struct ConstraintReducer {
    rules: Vec<Rule>,
}

impl ConstraintReducer {
    pub fn new(params: &ModelParams, max_order: u8) -> Self {
        let g2 = params.gamma2.value();
        let mut rules = Vec::new();
        let var = |j: Jet| ScalarExpr::symbol(JetSymbol::Field(j));

        // S3² → γ²(γ² − S1² − S2²)
        let rhs = ScalarExpr::scalar(ExactScalar::one())
            .sub(&var(Jet::s(1)).pow(2).add(&var(Jet::s(2)).pow(2)).scale(&g2));
        rules.push(Rule { lhs: Monomial::from_factors([(JetSymbol::s(3), 2)]), rhs });

        for order in 1..=max_order {
            for dx in 0..=order {
                for dy in 0..=(order - dx) {
                    let dt = order - dx - dy;
                    let alpha = (dx, dy, dt);
                    let mut rhs = ScalarExpr::zero();
                    for c in 1..=2u8 {
                        rhs = rhs.sub(&var(Jet::s(c)).mul(&var(Jet::new(c, dx, dy, dt))).scale(&g2));
                    }
                    let half_g2 = &g2 * &ExactScalar::from_ratio(1, 2);
                    for bx in 0..=dx {
                        for by in 0..=dy {
                            for bt in 0..=dt {
                                let inner = (bx, by, bt) != (0, 0, 0) && (bx, by, bt) != alpha;
                                if !inner {
                                    continue;
                                }
                                let coef = binom(dx, bx) * binom(dy, by) * binom(dt, bt);
                                for c in 1..=3u8 {
                                    let w = &params.gamma_entry(c) * &ExactScalar::from_int(coef);
                                    let p = var(Jet::new(c, bx, by, bt))
                                        .mul(&var(Jet::new(c, dx - bx, dy - by, dt - bt)));
                                    rhs = rhs.sub(&p.scale(&(&w * &half_g2)));
                                }
                            }
                        }
                    }
                    let lhs = Monomial::from_factors([
                        (JetSymbol::s(3), 1),
                        (JetSymbol::jet(3, dx, dy, dt), 1),
                    ]);
                    rules.push(Rule { lhs, rhs });
                }
            }
        }
        ConstraintReducer { rules }
    }

    pub fn reduce<C: Coefficient>(&self, e: &FieldExpr<C>) -> FieldExpr<C> {
        let mut cur = e.clone();
        loop {
            let mut next = FieldExpr::zero();
            let mut changed = false;
            for (m, c) in cur.terms() {
                match self.rules.iter().find(|r| m.divisible_by(&r.lhs)) {
                    Some(r) => {
                        let rest = m.div(&r.lhs).expect("divisibility checked");
                        next = next.add(&r.rhs.times_coeff(c).mul_monomial(&rest));
                        changed = true;
                    }
                    None => next.add_term(m.clone(), c.clone()),
                }
            }
            if !changed {
                return next;
            }
            cur = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(j: Jet) -> ScalarExpr {
        ScalarExpr::symbol(JetSymbol::Field(j))
    }

    #[test]
    fn constraint_itself_reduces_to_zero() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let r = ConstraintReducer::new(&p, 2);
            let mut c = ScalarExpr::scalar(-p.gamma2.value());
            for i in 1..=3 {
                c = c.add(&v(Jet::s(i)).pow(2).scale(&p.gamma_entry(i)));
            }
            assert!(r.reduce(&c).is_zero(), "{c}");
        }
    }

    #[test]
    fn second_derivative_identity() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let r = ConstraintReducer::new(&p, 2);
            // Γ S_x·S_y + Γ S·S_xy
            let mut c = ScalarExpr::zero();
            for i in 1..=3 {
                let g = p.gamma_entry(i);
                c = c.add(&v(Jet::sx(i)).mul(&v(Jet::sy(i))).scale(&g));
                c = c.add(&v(Jet::s(i)).mul(&v(Jet::new(i, 1, 1, 0))).scale(&g));
            }
            assert!(r.reduce(&c).is_zero());
        }
    }
}
