//! The fundamental constraint in a matrix realization, and total derivatives.

use super::matrix::{mat_commutator, MatExpr};
use super::rep::MatrixTower;
use crate::exterior::evolution_rhs;
use crate::prolong::BracketConvention;
use crate::scalar::{Coefficient, ConstraintReducer, Coord, FieldExpr, Jet, JetSymbol, ModelParams, ScalarExpr};

fn var(j: Jet) -> ScalarExpr {
    ScalarExpr::symbol(JetSymbol::Field(j))
}

/// `Σ_i ∂e/∂S_i · S_i,dir`.
pub fn transport<C: Coefficient>(e: &FieldExpr<C>, dir: fn(u8) -> Jet) -> FieldExpr<C> {
    let mut out = FieldExpr::zero();
    for i in 1..=3 {
        out = out.add(&e.differentiate(&JetSymbol::s(i)).mul_scalar_expr(&var(dir(i))));
    }
    out
}

/// `D_c S^(α)` with time derivatives taken on shell (`S_t` from the evolution
/// equation, differentiated in x and y as needed). Jets that already carry a
/// t-derivative are advanced formally.
fn total_of_jet(p: &ModelParams, j: Jet, c: Coord) -> ScalarExpr {
    if c != Coord::T || j.dt > 0 {
        return var(j.derive(c));
    }
    let mut e = evolution_rhs(p, j.comp);
    for _ in 0..j.dx {
        e = total_derivative(p, &e, Coord::X);
    }
    for _ in 0..j.dy {
        e = total_derivative(p, &e, Coord::Y);
    }
    e
}

/// Total derivative in `c` of a jet polynomial.
pub fn total_derivative<C: Coefficient>(p: &ModelParams, e: &FieldExpr<C>, c: Coord) -> FieldExpr<C> {
    let mut out = FieldExpr::zero();
    for s in e.symbols() {
        if let JetSymbol::Field(j) = s {
            let d = e.differentiate(&s);
            out = out.add(&d.mul_scalar_expr(&total_of_jet(p, j, c)));
        }
    }
    out
}

/// `F_S·S_x − G_S·S_y ± [G,F]` evaluated with the matrix commutator
/// (`GF − FG` under the default convention), reduced modulo the constraint.
pub fn verify_fundamental_constraint(m: &MatrixTower, conv: BracketConvention, p: &ModelParams) -> MatExpr {
    let comm = mat_commutator(&m.g, &m.f).scale(&crate::scalar::ExactScalar::from_int(conv.sign()));
    let r = transport(&m.f, Jet::sx).sub(&transport(&m.g, Jet::sy)).add(&comm);
    ConstraintReducer::new(p, 1).reduce(&r)
}
