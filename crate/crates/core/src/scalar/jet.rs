//! Jet-space symbols: base coordinates, field jets, pseudopotentials,
//! total-derivative markers, and the undetermined prolongation functions.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    X,
    Y,
    T,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::X, Coord::Y, Coord::T];

    pub fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
            Coord::T => "t",
        }
    }
}

/// Component `comp` (1..=3) of S differentiated `dx`, `dy`, `dt` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Jet {
    pub comp: u8,
    pub dx: u8,
    pub dy: u8,
    pub dt: u8,
}

impl Jet {
    pub fn s(comp: u8) -> Self {
        Jet { comp, dx: 0, dy: 0, dt: 0 }
    }

    pub fn new(comp: u8, dx: u8, dy: u8, dt: u8) -> Self {
        Jet { comp, dx, dy, dt }
    }

    pub fn sx(comp: u8) -> Self {
        Jet::new(comp, 1, 0, 0)
    }

    pub fn sy(comp: u8) -> Self {
        Jet::new(comp, 0, 1, 0)
    }

    pub fn order(&self) -> u8 {
        self.dx + self.dy + self.dt
    }

    pub fn derive(&self, c: Coord) -> Jet {
        let mut j = *self;
        match c {
            Coord::X => j.dx += 1,
            Coord::Y => j.dy += 1,
            Coord::T => j.dt += 1,
        }
        j
    }

    /// `S_i`, `S_ix` or `S_iy`: the fiber coordinates of the exterior system.
    pub fn is_eds_coordinate(&self) -> bool {
        self.dt == 0 && self.dx + self.dy <= 1
    }

    fn sort_key(&self) -> (u8, u8, u8, u8, u8) {
        // x-derivatives before y before t at equal order, then component.
        (self.order(), u8::MAX - self.dx, u8::MAX - self.dy, u8::MAX - self.dt, self.comp)
    }
}

impl Ord for Jet {
    fn cmp(&self, o: &Self) -> Ordering {
        self.sort_key().cmp(&o.sort_key())
    }
}

impl PartialOrd for Jet {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.comp)?;
        if self.order() > 0 {
            write!(f, "_")?;
            for _ in 0..self.dx {
                write!(f, "x")?;
            }
            for _ in 0..self.dy {
                write!(f, "y")?;
            }
            for _ in 0..self.dt {
                write!(f, "t")?;
            }
        }
        Ok(())
    }
}

/// The undetermined functions of the prolongation ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UnknownFn {
    H,
    F,
    G,
}

impl UnknownFn {
    pub fn name(self) -> &'static str {
        match self {
            UnknownFn::H => "H",
            UnknownFn::F => "F",
            UnknownFn::G => "G",
        }
    }
}

/// Argument of an undetermined function: a first jet of S or a ξ component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FnArg {
    Field(Jet),
    Xi(u8),
}

impl fmt::Display for FnArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnArg::Field(j) => write!(f, "{j}"),
            FnArg::Xi(m) => write!(f, "xi{m}"),
        }
    }
}

/// Component `comp` of H, F or G with a sorted multiset of partial derivatives.
/// The function depends on (S, S_x, S_y; ξ_1..ξ_n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unknown {
    pub func: UnknownFn,
    pub comp: u8,
    pub n_xi: u8,
    pub derivs: Vec<FnArg>,
}

impl Unknown {
    pub fn new(func: UnknownFn, comp: u8, n_xi: u8) -> Self {
        Unknown { func, comp, n_xi, derivs: Vec::new() }
    }

    pub fn depends_on(&self, a: &FnArg) -> bool {
        match a {
            FnArg::Field(j) => j.is_eds_coordinate(),
            FnArg::Xi(m) => *m >= 1 && *m <= self.n_xi,
        }
    }

    pub fn arguments(&self) -> Vec<FnArg> {
        let mut out = Vec::new();
        for c in 1..=3 {
            out.push(FnArg::Field(Jet::s(c)));
        }
        for c in 1..=3 {
            out.push(FnArg::Field(Jet::sx(c)));
        }
        for c in 1..=3 {
            out.push(FnArg::Field(Jet::sy(c)));
        }
        for m in 1..=self.n_xi {
            out.push(FnArg::Xi(m));
        }
        out
    }

    pub fn derived(&self, a: FnArg) -> Unknown {
        let mut u = self.clone();
        u.derivs.push(a);
        u.derivs.sort();
        u
    }

    pub fn xi_derivative_count(&self) -> usize {
        self.derivs.iter().filter(|a| matches!(a, FnArg::Xi(_))).count()
    }

    /// The same function with all ξ-derivatives removed.
    pub fn without_xi_derivs(&self) -> Unknown {
        let mut u = self.clone();
        u.derivs.retain(|a| !matches!(a, FnArg::Xi(_)));
        u
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.func.name(), self.comp)?;
        if !self.derivs.is_empty() {
            let d: Vec<String> = self.derivs.iter().map(|a| a.to_string()).collect();
            write!(f, "_{{{}}}", d.join(","))?;
        }
        Ok(())
    }
}

/// Constant matrix entries of the ansatz (`A^k_m`, `B^k_m`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParamMatrix {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JetSymbol {
    Coord(Coord),
    Field(Jet),
    Xi(u8),
    /// Total-derivative marker applied to a field jet, produced by sectioning.
    Total(Coord, Jet),
    TotalXi(Coord, u8),
    Unknown(Unknown),
    Param { matrix: ParamMatrix, row: u8, col: u8 },
}

/// Result of `∂ sym / ∂ s` for a single symbol.
pub enum Partial {
    Zero,
    One,
    Sym(JetSymbol),
}

impl JetSymbol {
    pub fn s(comp: u8) -> Self {
        JetSymbol::Field(Jet::s(comp))
    }

    pub fn sx(comp: u8) -> Self {
        JetSymbol::Field(Jet::sx(comp))
    }

    pub fn sy(comp: u8) -> Self {
        JetSymbol::Field(Jet::sy(comp))
    }

    pub fn jet(comp: u8, dx: u8, dy: u8, dt: u8) -> Self {
        JetSymbol::Field(Jet::new(comp, dx, dy, dt))
    }

    pub fn unknown(func: UnknownFn, comp: u8, n_xi: u8) -> Self {
        JetSymbol::Unknown(Unknown::new(func, comp, n_xi))
    }

    pub fn is_total_marker(&self) -> bool {
        matches!(self, JetSymbol::Total(..) | JetSymbol::TotalXi(..))
    }

    fn as_fn_arg(&self) -> Option<FnArg> {
        match self {
            JetSymbol::Field(j) => Some(FnArg::Field(*j)),
            JetSymbol::Xi(m) => Some(FnArg::Xi(*m)),
            _ => None,
        }
    }

    pub fn partial(&self, s: &JetSymbol) -> Partial {
        if self == s {
            return Partial::One;
        }
        if let JetSymbol::Unknown(u) = self {
            if let Some(a) = s.as_fn_arg() {
                if u.depends_on(&a) {
                    return Partial::Sym(JetSymbol::Unknown(u.derived(a)));
                }
            }
        }
        Partial::Zero
    }

    /// Highest derivative order of S carried by this symbol.
    pub fn jet_order(&self) -> u8 {
        match self {
            JetSymbol::Field(j) => j.order(),
            JetSymbol::Total(_, j) => j.order() + 1,
            _ => 0,
        }
    }
}

impl fmt::Display for JetSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetSymbol::Coord(c) => write!(f, "{}", c.name()),
            JetSymbol::Field(j) => write!(f, "{j}"),
            JetSymbol::Xi(m) => write!(f, "xi{m}"),
            JetSymbol::Total(c, j) => write!(f, "D{}({j})", c.name()),
            JetSymbol::TotalXi(c, m) => write!(f, "D{}(xi{m})", c.name()),
            JetSymbol::Unknown(u) => write!(f, "{u}"),
            JetSymbol::Param { matrix, row, col } => {
                let n = match matrix {
                    ParamMatrix::A => "A",
                    ParamMatrix::B => "B",
                };
                write!(f, "{n}{row}{col}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_marker_distinct_from_jet() {
        let d = JetSymbol::Total(Coord::X, Jet::s(1));
        assert_ne!(d, JetSymbol::sx(1));
        assert!(d.is_total_marker());
    }

    #[test]
    fn one_form_order_of_jets() {
        let mut v = vec![Jet::sy(1), Jet::sx(2), Jet::s(3), Jet::sx(1), Jet::s(1)];
        v.sort();
        assert_eq!(v, vec![Jet::s(1), Jet::s(3), Jet::sx(1), Jet::sx(2), Jet::sy(1)]);
    }

    #[test]
    fn unknown_partial_records_derivative() {
        let h = JetSymbol::unknown(UnknownFn::H, 1, 1);
        match h.partial(&JetSymbol::sx(2)) {
            Partial::Sym(JetSymbol::Unknown(u)) => assert_eq!(u.derivs, vec![FnArg::Field(Jet::sx(2))]),
            _ => panic!("expected derivative symbol"),
        }
        assert!(matches!(h.partial(&JetSymbol::jet(1, 2, 0, 0)), Partial::Zero));
    }
}
