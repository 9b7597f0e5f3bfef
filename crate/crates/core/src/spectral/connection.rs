//! Connection components Γ1, Γ2, Γ3 from the tower data, and export of the
//! associated linear problem.

use std::fmt;
use std::str::FromStr;

use super::constraint::total_derivative;
use super::matrix::{mat_commutator, mul_left, MatExpr, Matrix2};
use super::rep::MatrixTower;
use crate::cli::{Report, Section, Status};
use crate::error::{Error, Result};
use crate::scalar::{Coord, ExactScalar, ModelParams};

/// With ξ a column vector, `Γ^m B^k_m` is the k-th entry of `B·Γ`, so the
/// tower relations read
/// `H = BΓ1 − AΓ2`, `F = Γ2 − BΓ3`, `G = Γ1 − AΓ3`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionComponents {
    pub gamma1: MatExpr,
    pub gamma2: MatExpr,
    pub gamma3: MatExpr,
    /// Description of the free part of Γ3, when there is one.
    pub gauge: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConnectionOutcome {
    Solved(ConnectionComponents),
    /// `H − BG + AF` with `[A,B] = 0` and a nonzero obstruction.
    Infeasible { obstruction: MatExpr },
    /// `[B,A]` nonzero but singular; not decided.
    Undecided { reason: String },
}

impl ConnectionOutcome {
    pub fn solved(&self) -> Option<&ConnectionComponents> {
        match self {
            ConnectionOutcome::Solved(c) => Some(c),
            _ => None,
        }
    }
}

pub fn solve_connection(
    m: &MatrixTower,
    a: &Matrix2,
    b: &Matrix2,
    c: &Matrix2,
) -> Result<ConnectionOutcome> {
    if *c != Matrix2::identity() {
        return Err(Error::InvalidParameter("connection solving requires C = identity".into()));
    }
    // Γ1 = G + AΓ3, Γ2 = F + BΓ3  ⇒  H = BG − AF + [B,A]Γ3.
    let rest = m.h.sub(&mul_left(b, &m.g)).add(&mul_left(a, &m.f));
    let ba = b.commutator(a);
    if ba.is_zero() {
        if !rest.is_zero() {
            return Ok(ConnectionOutcome::Infeasible { obstruction: rest });
        }
        return Ok(ConnectionOutcome::Solved(ConnectionComponents {
            gamma1: m.g.clone(),
            gamma2: m.f.clone(),
            gamma3: MatExpr::zero(),
            gauge: Some("Gamma3 = T arbitrary; Gamma1 = G + A*T, Gamma2 = F + B*T".into()),
        }));
    }
    let Some(inv) = ba.inverse() else {
        return Ok(ConnectionOutcome::Undecided { reason: format!("[B,A] = {ba} is singular") });
    };
    let g3 = mul_left(&inv, &rest);
    Ok(ConnectionOutcome::Solved(ConnectionComponents {
        gamma1: m.g.add(&mul_left(a, &g3)),
        gamma2: m.f.add(&mul_left(b, &g3)),
        gamma3: g3,
        gauge: None,
    }))
}

/// Residuals of the three tower relations for given components.
pub fn connection_residuals(c: &ConnectionComponents, m: &MatrixTower, a: &Matrix2, b: &Matrix2) -> [MatExpr; 3] {
    [
        mul_left(b, &c.gamma1).sub(&mul_left(a, &c.gamma2)).sub(&m.h),
        c.gamma2.sub(&mul_left(b, &c.gamma3)).sub(&m.f),
        c.gamma1.sub(&mul_left(a, &c.gamma3)).sub(&m.g),
    ]
}

/// Sign s in `ξ_x = s Γ1 ξ` etc.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SectionSign {
    #[default]
    Minus,
    Plus,
}

impl SectionSign {
    pub fn value(self) -> i64 {
        match self {
            SectionSign::Minus => -1,
            SectionSign::Plus => 1,
        }
    }
}

impl FromStr for SectionSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "-" | "minus" | "-1" => Ok(SectionSign::Minus),
            "+" | "plus" | "+1" | "1" => Ok(SectionSign::Plus),
            _ => Err(Error::InvalidParameter(format!("section sign `{s}`"))),
        }
    }
}

impl fmt::Display for SectionSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == SectionSign::Minus { "-" } else { "+" })
    }
}

/// For `ξ_a = U_a ξ`, the cross-derivative condition of the pair (a,b) is
/// `D_b U_a − D_a U_b + [U_a, U_b] = 0`, time derivatives on shell.
pub fn compatibility(c: &ConnectionComponents, sign: SectionSign, p: &ModelParams) -> Vec<(String, MatExpr)> {
    let s = ExactScalar::from_int(sign.value());
    let u = [c.gamma1.scale(&s), c.gamma2.scale(&s), c.gamma3.scale(&s)];
    let names = ["x", "y", "t"];
    let mut out = Vec::new();
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let e = total_derivative(p, &u[i], Coord::ALL[j])
            .sub(&total_derivative(p, &u[j], Coord::ALL[i]))
            .add(&mat_commutator(&u[i], &u[j]));
        out.push((format!("{}{}", names[i], names[j]), crate::scalar::ConstraintReducer::new(p, 3).reduce(&e)));
    }
    out
}

pub fn export_spectral_problem(c: &ConnectionComponents, sign: SectionSign, p: &ModelParams) -> Report {
    let mut r = Report::new("spectral")
        .with_config("gamma2", p.gamma2)
        .with_config("section_sign", sign);
    let mut sys = Section::new("linear_system", Status::Info);
    for (k, g) in [("xi_x", &c.gamma1), ("xi_y", &c.gamma2), ("xi_t", &c.gamma3)] {
        sys.push(k, format!("{sign}({g}) xi"));
    }
    if let Some(gauge) = &c.gauge {
        sys.push("gauge", gauge);
    }
    r.push(sys);
    let comp = compatibility(c, sign, p);
    let all_zero = comp.iter().all(|(_, e)| e.is_zero());
    let mut s = Section::new("compatibility", Status::Info);
    s.push("form", "D_b U_a - D_a U_b + [U_a,U_b], U = sign*Gamma");
    for (k, e) in comp {
        s.push(k, if e.is_zero() { "0".to_string() } else { e.to_string() });
    }
    s.push("identically_zero", all_zero);
    r.push(s);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolong::{build_reduction, Reduction};
    use crate::scalar::{Jet, JetSymbol, ScalarExpr};
    use crate::spectral::{instantiate_tower, pauli_rep};

    fn sc(n: i64) -> Matrix2 {
        Matrix2::identity().scale(&ExactScalar::from_int(n))
    }

    fn tower_i() -> MatrixTower {
        let t = build_reduction(Reduction::I, &ModelParams::compact());
        instantiate_tower(&t, &pauli_rep(Reduction::I)).unwrap()
    }

    #[test]
    fn scalar_obstruction_formula() {
        let m = tower_i();
        let (a, b) = (3, -2);
        let out = solve_connection(&m, &sc(a), &sc(b), &Matrix2::identity()).unwrap();
        let expect = m.h.sub(&m.g.scale(&ExactScalar::from_int(b))).add(&m.f.scale(&ExactScalar::from_int(a)));
        assert_eq!(out, ConnectionOutcome::Infeasible { obstruction: expect.clone() });
        // the σ2 content of H comes from X4 alone and survives
        let s2 = expect.constant_term().pauli_coords_doubled()[1].clone();
        assert!(!s2.is_zero());
    }

    #[test]
    fn consistent_input_gives_gauge_family() {
        let mut m = tower_i();
        let (a, b) = (sc(1), sc(2));
        m.h = mul_left(&b, &m.g).sub(&mul_left(&a, &m.f));
        let c = solve_connection(&m, &a, &b, &Matrix2::identity()).unwrap();
        let c = c.solved().expect("solvable").clone();
        assert!(c.gauge.is_some());
        assert!(connection_residuals(&c, &m, &a, &b).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn invertible_commutator_fixes_gamma3() {
        let m = tower_i();
        let (a, b) = (Matrix2::pauli(1), Matrix2::pauli(2));
        let c = solve_connection(&m, &a, &b, &Matrix2::identity()).unwrap();
        let c = c.solved().expect("[B,A] = -2iσ3 is invertible").clone();
        assert!(c.gauge.is_none());
        assert!(connection_residuals(&c, &m, &a, &b).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn abelian_constants_are_compatible() {
        let c = ConnectionComponents {
            gamma1: MatExpr::constant(sc(2)),
            gamma2: MatExpr::constant(Matrix2::identity().scale(&ExactScalar::i())),
            gamma3: MatExpr::constant(sc(-1)),
            gauge: None,
        };
        let p = ModelParams::compact();
        assert!(compatibility(&c, SectionSign::Minus, &p).iter().all(|(_, e)| e.is_zero()));
        let r = export_spectral_problem(&c, SectionSign::Minus, &p);
        assert_eq!(r.section("compatibility").unwrap().get("identically_zero"), Some("true"));
        assert_eq!(Report::parse_text(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn compatibility_has_each_pair() {
        // Γ1 = S1 σ1, Γ2 = σ2: xy entry = −D_y(S1)σ1 + [σ1,σ2] S1 = −S1y σ1 + 2i S1 σ3
        let s1 = ScalarExpr::symbol(JetSymbol::s(1));
        let c = ConnectionComponents {
            gamma1: s1.times_coeff(&Matrix2::pauli(1)),
            gamma2: MatExpr::constant(Matrix2::pauli(2)),
            gamma3: MatExpr::zero(),
            gauge: None,
        };
        let comp = compatibility(&c, SectionSign::Minus, &ModelParams::compact());
        let keys: Vec<_> = comp.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["xy", "xt", "yt"]);
        let two_i = &ExactScalar::from_int(2) * &ExactScalar::i();
        let expect = ScalarExpr::symbol(JetSymbol::Field(Jet::sy(1)))
            .times_coeff(&Matrix2::pauli(1))
            .neg()
            .add(&s1.times_coeff(&Matrix2::pauli(3).scale(&two_i)));
        assert_eq!(comp[0].1, expect);
    }
}
