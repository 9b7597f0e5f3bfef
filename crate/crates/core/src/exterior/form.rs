//! Graded exterior forms over jet coordinates.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{
    Coefficient, Coord, ExactScalar, FieldExpr, FnArg, Jet, JetSymbol, RingCoefficient, ScalarExpr,
};

/// Maximum form degree handled.
pub const MAX_DEGREE: usize = 5;

/// Basis 1-forms, in their fixed order: dx, dy, dt, dS_i, dS_i_x, dS_i_y, dξ_m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OneForm {
    Dx,
    Dy,
    Dt,
    DField(Jet),
    DXi(u8),
}

impl OneForm {
    pub fn base(c: Coord) -> Self {
        match c {
            Coord::X => OneForm::Dx,
            Coord::Y => OneForm::Dy,
            Coord::T => OneForm::Dt,
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, OneForm::Dx | OneForm::Dy | OneForm::Dt)
    }

    /// The differential of a coordinate symbol, if it has one.
    pub fn of_symbol(s: &JetSymbol) -> Option<OneForm> {
        match s {
            JetSymbol::Coord(c) => Some(OneForm::base(*c)),
            JetSymbol::Field(j) => Some(OneForm::DField(*j)),
            JetSymbol::Xi(m) => Some(OneForm::DXi(*m)),
            _ => None,
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneForm::Dx => write!(f, "dx"),
            OneForm::Dy => write!(f, "dy"),
            OneForm::Dt => write!(f, "dt"),
            OneForm::DField(j) => write!(f, "d{j}"),
            OneForm::DXi(m) => write!(f, "dxi{m}"),
        }
    }
}

/// Sort a wedge word, returning the sign of the permutation, or `None`
/// when a factor repeats.
pub fn canonical_word(word: &[OneForm]) -> Option<(i64, Vec<OneForm>)> {
    let mut v = word.to_vec();
    let mut sign = 1;
    // insertion sort counts transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

pub fn word_string(w: &[OneForm]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("∧")
}

/// A homogeneous exterior form of fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffForm<C> {
    degree: usize,
    terms: BTreeMap<Vec<OneForm>, FieldExpr<C>>,
}

pub type ScalarForm = DiffForm<ExactScalar>;

impl<C: Coefficient> DiffForm<C> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "form degree {degree} exceeds {MAX_DEGREE}");
        DiffForm { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: FieldExpr<C>) -> Self {
        let mut out = Self::zero(0);
        out.add_term(&[], f);
        out
    }

    /// `coef · w_1 ∧ … ∧ w_p` for an arbitrary (unsorted) word.
    pub fn monomial(word: &[OneForm], coef: FieldExpr<C>) -> Self {
        let mut out = Self::zero(word.len());
        out.add_term(word, coef);
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add_term(&mut self, word: &[OneForm], coef: FieldExpr<C>) {
        assert_eq!(word.len(), self.degree, "degree mismatch");
        let Some((sign, w)) = canonical_word(word) else { return };
        let coef = if sign < 0 { coef.neg() } else { coef };
        let sum = match self.terms.remove(&w) {
            Some(old) => old.add(&coef),
            None => coef,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<OneForm>, &FieldExpr<C>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a word, with the sign of its sorting permutation applied.
    pub fn coefficient(&self, word: &[OneForm]) -> FieldExpr<C> {
        match canonical_word(word) {
            Some((sign, w)) => {
                let c = self.terms.get(&w).cloned().unwrap_or_default();
                if sign < 0 {
                    c.neg()
                } else {
                    c
                }
            }
            None => FieldExpr::zero(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        DiffForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn map_coeffs(&self, f: impl Fn(&FieldExpr<C>) -> FieldExpr<C>) -> Self {
        let mut out = Self::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w, f(c));
        }
        out
    }

    /// Left multiplication by a scalar function.
    pub fn mul_function(&self, f: &ScalarExpr) -> Self {
        self.map_coeffs(|c| c.mul_scalar_expr(f))
    }

    /// Wedge with a scalar form on the left: `s ∧ self`.
    pub fn wedge_left_scalar(&self, s: &ScalarForm) -> Self {
        let degree = s.degree + self.degree;
        assert!(degree <= MAX_DEGREE, "wedge exceeds maximum degree");
        let mut out = Self::zero(degree);
        for (w1, c1) in &s.terms {
            for (w2, c2) in &self.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(&w, c2.mul_scalar_expr(c1));
            }
        }
        out
    }

    /// Exterior derivative. Undetermined functions contribute through
    /// their declared arguments; section markers and constant parameters are
    /// inert.
    pub fn ext_d(&self) -> Self {
        let mut out = Self::zero(self.degree + 1);
        for (w, c) in &self.terms {
            for (sym, df) in coordinate_partials(c) {
                let mut word = vec![sym];
                word.extend_from_slice(w);
                out.add_term(&word, df);
            }
        }
        out
    }

    /// Pull back onto a formal solution: each fiber differential becomes
    /// its total-derivative expansion in dx, dy, dt.
    pub fn section(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (w, c) in &self.terms {
            let mut acc = ScalarForm::function(ScalarExpr::int(1));
            for f in w {
                acc = acc.wedge(&section_one_form(f));
            }
            out = out.add(&DiffForm::function(c.clone()).wedge_left_scalar(&acc));
        }
        out
    }

    /// Substitute scalar polynomials for symbols in every coefficient.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<JetSymbol, ScalarExpr>,
    ) -> crate::Result<Self> {
        let mut out = Self::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w, c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Deterministic text: one `coeff * word` line per term, sorted by word.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (w, c) in &self.terms {
            let coeff = if c.len() == 1 { c.to_string() } else { format!("({c})") };
            s.push_str(&format!("{coeff} * {}\n", word_string(w)));
        }
        s
    }
}

impl<C: RingCoefficient> DiffForm<C> {
    pub fn one_form(f: OneForm) -> Self {
        Self::monomial(&[f], FieldExpr::one())
    }

    pub fn basis(word: &[OneForm]) -> Self {
        Self::monomial(word, FieldExpr::one())
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let degree = self.degree + o.degree;
        assert!(degree <= MAX_DEGREE, "wedge exceeds maximum degree");
        let mut out = Self::zero(degree);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(&w, c1.mul(c2));
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for DiffForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.to_text().trim_end())
    }
}

/// `(dc, ∂f/∂c)` for every coordinate c that f depends on.
fn coordinate_partials<C: Coefficient>(f: &FieldExpr<C>) -> Vec<(OneForm, FieldExpr<C>)> {
    let mut coords = std::collections::BTreeSet::new();
    for s in f.symbols() {
        match &s {
            JetSymbol::Unknown(u) => {
                for a in u.arguments() {
                    coords.insert(match a {
                        FnArg::Field(j) => JetSymbol::Field(j),
                        FnArg::Xi(m) => JetSymbol::Xi(m),
                    });
                }
            }
            other => {
                if OneForm::of_symbol(other).is_some() {
                    coords.insert(other.clone());
                }
            }
        }
    }
    coords
        .into_iter()
        .filter_map(|c| {
            let d = f.differentiate(&c);
            (!d.is_zero()).then(|| (OneForm::of_symbol(&c).expect("coordinate"), d))
        })
        .collect()
}

fn section_one_form(f: &OneForm) -> ScalarForm {
    let mut out = ScalarForm::zero(1);
    match f {
        OneForm::Dx | OneForm::Dy | OneForm::Dt => out.add_term(&[*f], ScalarExpr::int(1)),
        OneForm::DField(j) => {
            for c in Coord::ALL {
                out.add_term(&[OneForm::base(c)], ScalarExpr::symbol(JetSymbol::Total(c, *j)));
            }
        }
        OneForm::DXi(m) => {
            for c in Coord::ALL {
                out.add_term(&[OneForm::base(c)], ScalarExpr::symbol(JetSymbol::TotalXi(c, *m)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: JetSymbol) -> ScalarExpr {
        ScalarExpr::symbol(s)
    }

    #[test]
    fn dx_wedge_dy() {
        let f = ScalarForm::one_form(OneForm::Dx).wedge(&ScalarForm::one_form(OneForm::Dy));
        assert_eq!(f.coefficient(&[OneForm::Dx, OneForm::Dy]), ScalarExpr::int(1));
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn nilpotent() {
        let dx = ScalarForm::one_form(OneForm::Dx);
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn bilinear_wedge() {
        let a = ScalarForm::monomial(&[OneForm::Dx], sym(JetSymbol::s(1)));
        let b = ScalarForm::basis(&[OneForm::Dy, OneForm::Dt]);
        let w = a.wedge(&b);
        assert_eq!(w, ScalarForm::monomial(&[OneForm::Dx, OneForm::Dy, OneForm::Dt], sym(JetSymbol::s(1))));
    }

    #[test]
    fn d_of_function() {
        let f = ScalarForm::function(sym(JetSymbol::s(1)));
        assert_eq!(f.ext_d(), ScalarForm::one_form(OneForm::DField(Jet::s(1))));
    }

    #[test]
    fn d_leibniz_example() {
        // d(S1·S2x dx) = S2x dS1∧dx + S1 dS2x∧dx
        let a = ScalarForm::monomial(&[OneForm::Dx], sym(JetSymbol::s(1)).mul(&sym(JetSymbol::sx(2))));
        let expect = ScalarForm::monomial(&[OneForm::DField(Jet::s(1)), OneForm::Dx], sym(JetSymbol::sx(2)))
            .add(&ScalarForm::monomial(&[OneForm::DField(Jet::sx(2)), OneForm::Dx], sym(JetSymbol::s(1))));
        assert_eq!(a.ext_d(), expect);
    }

    #[test]
    fn section_of_base_form_is_identity() {
        let f = ScalarForm::basis(&[OneForm::Dx, OneForm::Dy]);
        assert_eq!(f.section(), f);
    }

    #[test]
    fn text_is_sorted() {
        let f = ScalarForm::basis(&[OneForm::Dy, OneForm::Dt]).add(&ScalarForm::basis(&[OneForm::Dx, OneForm::Dy]));
        assert_eq!(f.to_text(), "1 * dx∧dy\n1 * dy∧dt\n");
    }
}
