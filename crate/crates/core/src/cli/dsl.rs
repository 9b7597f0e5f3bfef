//! The relation language used for bracket tables and closing conditions.
//!
//! ```text
//! # comment
//! [X1, X4] = X6
//! X12 = 2*i*lambda*X3
//! [X3, X12] = [X4, X11] - [X5, X10]
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::liealg::{LieElement, OpenAlgebra, Provenance};
use crate::scalar::{ExactScalar, Gauss};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Gen(u32),
    Bracket(Box<LinComb>, Box<LinComb>),
}

/// Terms in written order; the empty combination is `0`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinComb(pub Vec<(ExactScalar, Atom)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    /// `[Xi, Xj] = rhs`
    BracketDef { i: u32, j: u32, rhs: LinComb },
    /// `Xk = rhs`
    Substitution { k: u32, rhs: LinComb },
    Relation { lhs: (ExactScalar, Atom), rhs: LinComb },
}

fn as_plain_gen(c: &LinComb) -> Option<u32> {
    match c.0.as_slice() {
        [(k, Atom::Gen(i))] if k.is_one() => Some(*i),
        _ => None,
    }
}

impl Statement {
    /// Classify `lhs = rhs` by the shape of the left-hand side.
    pub fn new(lhs: (ExactScalar, Atom), rhs: LinComb) -> Self {
        if lhs.0.is_one() {
            match &lhs.1 {
                Atom::Gen(k) => return Statement::Substitution { k: *k, rhs },
                Atom::Bracket(a, b) => {
                    if let (Some(i), Some(j)) = (as_plain_gen(a), as_plain_gen(b)) {
                        return Statement::BracketDef { i, j, rhs };
                    }
                }
            }
        }
        Statement::Relation { lhs, rhs }
    }

    pub fn rhs(&self) -> &LinComb {
        match self {
            Statement::BracketDef { rhs, .. } | Statement::Substitution { rhs, .. } | Statement::Relation { rhs, .. } => rhs,
        }
    }
}

// ---------------------------------------------------------------- tokens

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Int(BigInt),
    Gen(u32),
    I,
    Lambda,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Gen(k) => format!("`X{k}`"),
            Tok::I => "`i`".into(),
            Tok::Lambda => "`lambda`".into(),
            Tok::End => "end of line".into(),
        }
    }
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>> {
    let err = |col: usize, expected: &str| Error::Parse { line: lineno, column: col, expected: expected.into() };
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            k += 1;
        } else if c.is_ascii_digit() {
            let s = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[s..k].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() {
            let s = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            let word: String = chars[s..k].iter().collect();
            let tok = match word.as_str() {
                "i" => Tok::I,
                "lambda" => Tok::Lambda,
                w => match w.strip_prefix('X').and_then(|d| d.parse::<u32>().ok()) {
                    Some(n) if n > 0 => Tok::Gen(n),
                    _ => return Err(err(col, "a generator `X<n>` (n ≥ 1), `i` or `lambda`")),
                },
            };
            out.push((tok, col));
        } else {
            return Err(err(col, "a token"));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

fn expected(set: &[&str]) -> String {
    match set {
        [one] => one.to_string(),
        _ => format!("one of {}", set.join(", ")),
    }
}

const TERM_START: [&str; 6] = ["`X<n>`", "`[`", "an integer", "`i`", "`lambda`", "`(`"];
const FACTOR_START: [&str; 4] = ["an integer", "`i`", "`lambda`", "`(`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, set: &[&str]) -> Result<T> {
        let (t, col) = &self.toks[self.pos];
        Err(Error::Parse {
            line: self.line,
            column: *col,
            expected: format!("{} (found {})", expected(set), t.describe()),
        })
    }

    fn expect(&mut self, t: Tok, name: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    fn statement(&mut self) -> Result<Statement> {
        let (c, atom) = match self.term()? {
            (c, Some(a)) => (c, a),
            (_, None) => return self.fail(&["`*`", "`X<n>`", "`[`"]),
        };
        self.expect(Tok::Eq, "`=`")?;
        let rhs = self.sum()?;
        if *self.peek() != Tok::End {
            return self.fail(&["`+`", "`-`", "end of line"]);
        }
        Ok(Statement::new((c, atom), rhs))
    }

    fn sum(&mut self) -> Result<LinComb> {
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let (c, atom) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            match atom {
                Some(a) => out.push((c, a)),
                None if c.is_zero() => {}
                None => return self.fail(&["`*`", "`X<n>`", "`[`"]),
            }
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(LinComb(out)),
            };
            self.bump();
        }
    }

    /// `coeff? atom`; a bare coefficient comes back with no atom.
    fn term(&mut self) -> Result<(ExactScalar, Option<Atom>)> {
        let mut coeff = ExactScalar::one();
        loop {
            match self.peek() {
                Tok::Gen(_) | Tok::LBrack => return Ok((coeff, Some(self.atom()?))),
                Tok::Int(_) | Tok::I | Tok::Lambda | Tok::LParen => {
                    coeff = &coeff * &self.product()?;
                    match self.peek() {
                        Tok::Star => {
                            self.bump();
                            if !matches!(self.peek(), Tok::Gen(_) | Tok::LBrack) {
                                return self.fail(&["`X<n>`", "`[`"]);
                            }
                        }
                        Tok::Gen(_) | Tok::LBrack => {}
                        _ => return Ok((coeff, None)),
                    }
                }
                _ => return self.fail(&TERM_START),
            }
        }
    }

    /// `factor (('*'|'/') factor)*`, stopping before `* atom`.
    fn product(&mut self) -> Result<ExactScalar> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star if !matches!(self.toks[self.pos + 1].0, Tok::Gen(_) | Tok::LBrack) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.toks[self.pos].1;
                    let d = self.factor()?;
                    let r = d.recip().ok_or_else(|| Error::Parse {
                        line: self.line,
                        column: col,
                        expected: "an invertible (single-term, nonzero) divisor".into(),
                    })?;
                    acc = &acc * &r;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExactScalar> {
        let base = match self.bump() {
            Tok::Int(n) => ExactScalar::from_gauss(Gauss::real(BigRational::from_integer(n))),
            Tok::I => ExactScalar::i(),
            Tok::Lambda => ExactScalar::lambda(),
            Tok::LParen => {
                let v = self.scalar_sum()?;
                self.expect(Tok::RParen, "`)`")?;
                v
            }
            _ => {
                self.pos -= 1;
                return self.fail(&FACTOR_START);
            }
        };
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let col = self.toks[self.pos].1;
        let Tok::Int(n) = self.peek().clone() else { return self.fail(&["an integer exponent"]) };
        self.bump();
        let n: u32 = n.try_into().map_err(|_| Error::Parse { line: self.line, column: col, expected: "a small exponent".into() })?;
        let p = base.pow(n);
        if !neg {
            return Ok(p);
        }
        p.recip().ok_or_else(|| Error::Parse { line: self.line, column: col, expected: "an invertible base".into() })
    }

    fn scalar_sum(&mut self) -> Result<ExactScalar> {
        let mut sign = 1;
        if matches!(self.peek(), Tok::Minus | Tok::Plus) {
            sign = if self.bump() == Tok::Minus { -1 } else { 1 };
        }
        let mut acc = ExactScalar::zero();
        loop {
            let p = self.product()?;
            acc = if sign < 0 { &acc - &p } else { &acc + &p };
            match self.peek() {
                Tok::Plus => sign = 1,
                Tok::Minus => sign = -1,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.bump() {
            Tok::Gen(k) => Ok(Atom::Gen(k)),
            Tok::LBrack => {
                let a = self.sum()?;
                if *self.peek() != Tok::Comma {
                    return self.fail(&["`,`", "`+`", "`-`"]);
                }
                self.bump();
                let b = self.sum()?;
                if *self.peek() != Tok::RBrack {
                    return self.fail(&["`]`", "`+`", "`-`"]);
                }
                self.bump();
                Ok(Atom::Bracket(Box::new(a), Box::new(b)))
            }
            _ => {
                self.pos -= 1;
                self.fail(&["`X<n>`", "`[`"])
            }
        }
    }
}

pub fn parse_algebra_dsl(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let toks = lex(line, n + 1)?;
        if toks.len() == 1 {
            continue;
        }
        let mut p = Parser { toks, pos: 0, line: n + 1 };
        out.push(p.statement()?);
    }
    Ok(out)
}

/// A standalone coefficient such as `-3/2*i*lambda^-1`.
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let mut p = Parser { toks: lex(text, 1)?, pos: 0, line: 1 };
    let v = p.scalar_sum()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`+`", "`-`", "`*`", "`/`", "end of input"]);
    }
    Ok(v)
}

// ---------------------------------------------------------------- printer

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(exponent, value, imaginary)` if the scalar is a single real or imaginary λ-power.
fn simple(c: &ExactScalar) -> Option<(i32, BigRational, bool)> {
    if c.num_terms() != 1 {
        return None;
    }
    let (e, g) = c.terms().next()?;
    match (g.re.is_zero(), g.im.is_zero()) {
        (false, true) => Some((e, g.re.clone(), false)),
        (true, false) => Some((e, g.im.clone(), true)),
        _ => None,
    }
}

fn simple_text(e: i32, r: &BigRational, imag: bool) -> String {
    let mut parts = Vec::new();
    if !r.is_one() || (!imag && e == 0) {
        parts.push(rational_text(r));
    }
    if imag {
        parts.push("i".into());
    }
    match e {
        0 => {}
        1 => parts.push("lambda".into()),
        _ => parts.push(format!("lambda^{e}")),
    }
    parts.join("*")
}

fn is_negative(c: &ExactScalar) -> bool {
    simple(c).is_some_and(|(_, r, _)| r.is_negative())
}

/// A coefficient in a position that admits no leading sign.
pub fn coeff_text(c: &ExactScalar) -> String {
    if let Some((e, r, im)) = simple(c) {
        if r.is_positive() {
            return simple_text(e, &r, im);
        }
    }
    let mut pieces = Vec::new();
    for (e, g) in c.terms() {
        for (r, im) in [(&g.re, false), (&g.im, true)] {
            if !r.is_zero() {
                pieces.push((r.is_negative(), simple_text(e, &r.abs(), im)));
            }
        }
    }
    if pieces.is_empty() {
        return "0".into();
    }
    let mut s = String::from("(");
    for (k, (neg, p)) in pieces.iter().enumerate() {
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(p);
    }
    s.push(')');
    s
}

fn term_text(c: &ExactScalar, a: &Atom) -> String {
    if c.is_one() {
        a.to_string()
    } else {
        format!("{}*{a}", coeff_text(c))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(k) => write!(f, "X{k}"),
            Atom::Bracket(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, a)) in self.0.iter().enumerate() {
            let neg = is_negative(c);
            let shown = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&term_text(&shown, a))?;
        }
        Ok(())
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::BracketDef { i, j, rhs } => write!(f, "[X{i}, X{j}] = {rhs}"),
            Statement::Substitution { k, rhs } => write!(f, "X{k} = {rhs}"),
            Statement::Relation { lhs, rhs } => write!(f, "{} = {rhs}", term_text(&lhs.0, &lhs.1)),
        }
    }
}

pub fn print_statements(s: &[Statement]) -> String {
    s.iter().map(|s| format!("{s}\n")).collect()
}

// ---------------------------------------------------------------- semantics

pub fn atom_to_lie(a: &Atom) -> LieElement {
    match a {
        Atom::Gen(k) => LieElement::gen(*k),
        Atom::Bracket(x, y) => LieElement::bracket_word(&to_lie(x), &to_lie(y)),
    }
}

pub fn to_lie(c: &LinComb) -> LieElement {
    c.0.iter().fold(LieElement::zero(), |acc, (k, a)| acc.add(&atom_to_lie(a).scale(k)))
}

/// Bracket table and relations, plus any substitutions (kept separate as a
/// closing map).
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub algebra: OpenAlgebra,
    pub closing: BTreeMap<u32, LieElement>,
}

/// A definition `[Xi,Xj] = Xk` with Xk not yet known names the bracket.
pub fn build_algebra(stmts: &[Statement]) -> Result<AlgebraSpec> {
    let mut alg = OpenAlgebra::new();
    let mut closing = BTreeMap::new();
    let mut relations = Vec::new();
    for s in stmts {
        match s {
            Statement::BracketDef { i, j, rhs } => match as_plain_gen(rhs) {
                Some(k) if !alg.has_generator(k) && k != *i && k != *j => {
                    alg.declare(*i);
                    alg.declare(*j);
                    alg.name_bracket(*i, *j, k, Provenance::Bracket(*i, *j))?
                }
                _ => {
                    let v = to_lie(rhs);
                    for g in v.generators() {
                        alg.declare(g);
                    }
                    alg.set_bracket(*i, *j, v)?
                }
            },
            Statement::Substitution { k, rhs } => {
                closing.insert(*k, to_lie(rhs));
            }
            Statement::Relation { lhs, rhs } => {
                relations.push(atom_to_lie(&lhs.1).scale(&lhs.0).sub(&to_lie(rhs)));
            }
        }
    }
    for r in relations {
        for g in r.generators() {
            alg.declare(g);
        }
        alg.add_relation(&r)?;
    }
    Ok(AlgebraSpec { algebra: alg, closing })
}

pub fn load_algebra(text: &str) -> Result<AlgebraSpec> {
    build_algebra(&parse_algebra_dsl(text)?)
}

/// Table entries as bracket definitions, in key order.
pub fn algebra_to_dsl(a: &OpenAlgebra) -> String {
    let mut out = String::new();
    for ((i, j), v) in a.table() {
        out.push_str(&format!("[X{i}, X{j}] = {}\n", lie_to_lincomb(v)));
    }
    out
}

fn lie_term_atom(t: &crate::liealg::LieTerm) -> Atom {
    match t {
        crate::liealg::LieTerm::Gen(k) => Atom::Gen(*k),
        crate::liealg::LieTerm::Br(a, b) => Atom::Bracket(
            Box::new(LinComb(vec![(ExactScalar::one(), lie_term_atom(a))])),
            Box::new(LinComb(vec![(ExactScalar::one(), lie_term_atom(b))])),
        ),
    }
}

pub fn lie_to_lincomb(e: &LieElement) -> LinComb {
    LinComb(e.terms().map(|(t, c)| (c.clone(), lie_term_atom(t))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(s: &str) -> Statement {
        let mut v = parse_algebra_dsl(s).unwrap();
        assert_eq!(v.len(), 1);
        v.pop().unwrap()
    }

    #[test]
    fn bracket_definition() {
        let s = one("[X1, X4] = X6");
        assert_eq!(s, Statement::BracketDef { i: 1, j: 4, rhs: LinComb(vec![(ExactScalar::one(), Atom::Gen(6))]) });
    }

    #[test]
    fn substitution_with_coefficient() {
        let Statement::Substitution { k, rhs } = one("X12 = 2*i*lambda*X3") else { panic!() };
        assert_eq!(k, 12);
        let c = &(&ExactScalar::from_int(2) * &ExactScalar::i()) * &ExactScalar::lambda();
        assert_eq!(rhs.0, vec![(c, Atom::Gen(3))]);
    }

    #[test]
    fn missing_comma_reported() {
        match parse_algebra_dsl("[X1 X4] = X6") {
            Err(Error::Parse { line, column, expected }) => {
                assert_eq!((line, column), (1, 5));
                assert!(expected.contains("`,`"), "{expected}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_and_comments() {
        let v = parse_algebra_dsl("# table\n\n[X1, X2] = 0   # abelian\n").unwrap();
        assert_eq!(v, vec![Statement::BracketDef { i: 1, j: 2, rhs: LinComb::default() }]);
    }

    #[test]
    fn fractional_and_negative_powers() {
        let Statement::Substitution { rhs, .. } = one("X1 = -(i/2)*lambda^-1*X12") else { panic!() };
        let c = -(&(&ExactScalar::i() * &ExactScalar::from_ratio(1, 2)) * &ExactScalar::lambda_pow(-1));
        assert_eq!(rhs.0, vec![(c, Atom::Gen(12))]);
        assert_eq!(one("X1 = -i/(2*lambda)*X12"), one("X1 = -(i/2)*lambda^-1*X12"));
    }

    #[test]
    fn standalone_scalar() {
        assert_eq!(parse_scalar("-3/2").unwrap(), ExactScalar::from_ratio(-3, 2));
        assert_eq!(parse_scalar("2*i*lambda").unwrap(), &(&ExactScalar::from_int(2) * &ExactScalar::i()) * &ExactScalar::lambda());
        assert!(parse_scalar("2 X1").is_err());
    }

    #[test]
    fn bare_nonzero_scalar_rejected() {
        assert!(parse_algebra_dsl("X1 = 2").is_err());
        assert!(parse_algebra_dsl("X1 = X2 +").is_err());
        assert!(parse_algebra_dsl("2 = X2").is_err());
    }

    #[test]
    fn print_round_trip_examples() {
        for src in ["[X3, X12] = [X4, X11] - [X5, X10]", "X12 = 2*i*lambda*X3", "2*[X1, X2] = (1 + i)*X3 - 3/4*lambda^-2*X4"] {
            let s = one(src);
            assert_eq!(one(&s.to_string()), s, "{s}");
        }
    }

    #[test]
    fn relation_builds_algebra() {
        let spec = load_algebra("[X1, X2] = X3\n[X1, X3] = 0\n[X2, X3] = 0\nX3 = 0\n").unwrap();
        assert_eq!(spec.algebra.bracket_entry(1, 2), Some(LieElement::gen(3)));
        assert_eq!(spec.algebra.provenance(3), Some(Provenance::Bracket(1, 2)));
        assert_eq!(spec.closing[&3], LieElement::zero());
    }
}
