//! Formal bracket words and their linear combinations.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Coefficient, ExactScalar};

/// A generator or a formal bracket of two terms. The derived order is the
/// normalization order: generators by index, then bracket words by
/// (left, right).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieTerm {
    Gen(u32),
    Br(Box<LieTerm>, Box<LieTerm>),
}

impl LieTerm {
    pub fn br(a: LieTerm, b: LieTerm) -> LieTerm {
        LieTerm::Br(Box::new(a), Box::new(b))
    }

    /// Nesting depth: 0 for a generator.
    pub fn depth(&self) -> usize {
        match self {
            LieTerm::Gen(_) => 0,
            LieTerm::Br(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn contains_gen(&self, k: u32) -> bool {
        match self {
            LieTerm::Gen(i) => *i == k,
            LieTerm::Br(a, b) => a.contains_gen(k) || b.contains_gen(k),
        }
    }

    pub fn generators(&self, out: &mut Vec<u32>) {
        match self {
            LieTerm::Gen(i) => out.push(*i),
            LieTerm::Br(a, b) => {
                a.generators(out);
                b.generators(out);
            }
        }
    }

    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> LieTerm {
        match self {
            LieTerm::Gen(i) => LieTerm::Gen(f(*i)),
            LieTerm::Br(a, b) => LieTerm::br(a.relabel(f), b.relabel(f)),
        }
    }
}

impl fmt::Display for LieTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieTerm::Gen(i) => write!(f, "X{i}"),
            LieTerm::Br(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Finite ExactScalar-linear combination of terms; never stores zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieElement {
    terms: BTreeMap<LieTerm, ExactScalar>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn gen(i: u32) -> Self {
        Self::term(LieTerm::Gen(i), ExactScalar::one())
    }

    pub fn term(t: LieTerm, c: ExactScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(t, c);
        e
    }

    /// Unnormalized formal bracket of two elements, expanded bilinearly.
    pub fn bracket_word(a: &LieElement, b: &LieElement) -> Self {
        let mut out = Self::zero();
        for (ta, ca) in &a.terms {
            for (tb, cb) in &b.terms {
                out.add_term(LieTerm::br(ta.clone(), tb.clone()), ca * cb);
            }
        }
        out
    }

    pub fn add_term(&mut self, t: LieTerm, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(t);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LieTerm, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &LieTerm) -> ExactScalar {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ExactScalar::from_int(-1))
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * s);
        }
        out
    }

    /// Largest term in the normalization order.
    pub fn max_term(&self) -> Option<(&LieTerm, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn min_term(&self) -> Option<(&LieTerm, &ExactScalar)> {
        self.terms.iter().next()
    }

    /// Maximum bracket depth over terms.
    pub fn depth(&self) -> usize {
        self.terms.keys().map(LieTerm::depth).max().unwrap_or(0)
    }

    /// True when every term is a bare generator.
    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|t| matches!(t, LieTerm::Gen(_)))
    }

    /// The single term of a one-term element.
    pub fn as_single(&self) -> Option<(&LieTerm, &ExactScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn mentions(&self, k: u32) -> bool {
        self.terms.keys().any(|t| t.contains_gen(k))
    }

    pub fn generators(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for t in self.terms.keys() {
            t.generators(&mut v);
        }
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.add_term(t.relabel(f), c.clone());
        }
        out
    }
}

impl Coefficient for LieElement {
    fn zero() -> Self {
        LieElement::zero()
    }
    fn is_zero(&self) -> bool {
        LieElement::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, s: &ExactScalar) -> Self {
        self.scale(s)
    }
}

fn term_string(t: &LieTerm, c: &ExactScalar) -> String {
    if c.is_one() {
        t.to_string()
    } else if *c == ExactScalar::from_int(-1) {
        format!("-{t}")
    } else {
        format!("{c}*{t}")
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (t, c)) in self.terms.iter().enumerate() {
            let s = term_string(t, c);
            match (k, s.strip_prefix('-')) {
                (0, _) => write!(f, "{s}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_signs() {
        let e = LieElement::term(LieTerm::br(LieTerm::Gen(4), LieTerm::Gen(11)), ExactScalar::one())
            .sub(&LieElement::term(LieTerm::br(LieTerm::Gen(5), LieTerm::Gen(10)), ExactScalar::one()));
        assert_eq!(e.to_string(), "[X4,X11] - [X5,X10]");
        let c = &(&ExactScalar::from_int(2) * &ExactScalar::i()) * &ExactScalar::lambda();
        assert_eq!(LieElement::term(LieTerm::Gen(3), c).to_string(), "2*i*lambda*X3");
    }

    #[test]
    fn term_order() {
        let g = LieTerm::Gen(12);
        let b = LieTerm::br(LieTerm::Gen(3), LieTerm::Gen(12));
        let c = LieTerm::br(LieTerm::Gen(4), LieTerm::Gen(11));
        assert!(g < b && b < c);
    }
}
