//! Multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] carries its own ordered variable list; two polynomials
//! only combine arithmetically when their variable lists agree. Parsing
//! follows a small ASCII grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' UINT)?
//! atom   := INT | INT '/' INT | IDENT | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2x`, `x y`) is rejected. The canonical printed
//! form lists terms in descending degree-lexicographic order with explicit
//! `*`, and parses back to the same polynomial.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{format_rational, int, Rational};

const MAX_EXPONENT: u32 = 4096;

/// Exponent vector, one entry per ambient variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Descending degree-lexicographic comparison used for printing.
    pub fn cmp_deglex(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: Vec<String>) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::one(n), c)])
    }

    pub fn variable(vars: Vec<String>, i: usize) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::var(n, i), Rational::one())])
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(
        vars: Vec<String>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), p.vars.len(), "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert_eq!(
            self.vars, other.vars,
            "polynomials over different variable lists"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars.clone());
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut out = Polynomial::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(self.vars.clone(), Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, c * int(i64::from(e)));
        }
        out
    }

    pub fn partials(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.partial(i)).collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars(), "point dimension mismatch");
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc + v
        })
    }

    /// Common total degree of all terms, `None` when the terms disagree.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        self.weighted_degree(&vec![1; self.nvars()])
            .map(|d| d.map(|d| d as u32))
    }

    /// Common weighted degree `Σ wᵢ·eᵢ`, `None` when the terms disagree.
    pub fn weighted_degree(&self, weights: &[u64]) -> Result<Option<u64>> {
        if weights.len() != self.nvars() {
            return Err(Error::Invalid(format!(
                "{} weights for {} variables",
                weights.len(),
                self.nvars()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::Invalid("weights must be positive".into()));
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let wdeg = |m: &Monomial| -> u64 {
            m.0.iter()
                .zip(weights)
                .map(|(&e, &w)| u64::from(e) * w)
                .sum()
        };
        let mut degrees = self.terms.keys().map(wdeg);
        let first = degrees.next().expect("nonzero polynomial has a term");
        Ok(degrees.all(|d| d == first).then_some(first))
    }

    /// Substitutes a polynomial (over a common target variable list) for
    /// every variable.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_default();
        let mut out = Polynomial::zero(target.clone());
        let mut power_cache: Vec<Vec<Polynomial>> = vec![Vec::new(); images.len()];
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut power_cache[i];
                if cache.is_empty() {
                    cache.push(Polynomial::constant(target.clone(), Rational::one()));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[i]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Rank of the Hessian at the origin.
    ///
    /// Requires a singular germ: zero constant term and zero linear part.
    pub fn hessian_rank_at_origin(&self) -> Result<usize> {
        if self.order_at_origin().is_some_and(|o| o < 2) {
            return Err(Error::NotSingularGerm);
        }
        Ok(self.hessian_at_origin().rank())
    }

    /// Matrix of second partials evaluated at 0.
    pub fn hessian_at_origin(&self) -> QMatrix {
        let n = self.nvars();
        QMatrix::from_fn(n, n, |i, j| {
            let mut m = Monomial::one(n);
            m.0[i] += 1;
            m.0[j] += 1;
            let c = self.coefficient(&m);
            if i == j {
                c * int(2)
            } else {
                c
            }
        })
    }

    /// Lowest total degree among the terms (the order of vanishing at 0).
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Same polynomial over a different variable list of equal length.
    pub fn renamed(&self, vars: Vec<String>) -> Polynomial {
        assert_eq!(vars.len(), self.nvars());
        Polynomial {
            vars,
            terms: self.terms.clone(),
        }
    }

    /// Terms sorted by descending degree-lex order.
    fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.cmp_deglex(a.0));
        t
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            self.vars[i].clone()
                        } else {
                            format!("{}^{}", self.vars[i], e)
                        }
                    })
                    .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.join(","), self)
    }
}

/// A point of projective space with rational homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivePoint(Vec<Rational>);

impl ProjectivePoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::Invalid(
                "projective point with all coordinates zero".into(),
            ));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// Index of the first nonzero coordinate.
    pub fn chart(&self) -> usize {
        self.0
            .iter()
            .position(|c| !c.is_zero())
            .expect("invariant: some coordinate nonzero")
    }

    /// Coordinates scaled so that the chart coordinate is 1.
    pub fn normalized(&self) -> Vec<Rational> {
        let s = self.0[self.chart()].recip();
        self.0.iter().map(|c| c * &s).collect()
    }
}

/// Dehomogenizes `f` in the first chart where `p` is nonzero and moves `p`
/// to the origin. The result lives in the remaining variables.
pub fn localize_at(f: &Polynomial, p: &ProjectivePoint) -> Result<Polynomial> {
    if p.coords().len() != f.nvars() {
        return Err(Error::Invalid(format!(
            "point has {} coordinates, polynomial has {} variables",
            p.coords().len(),
            f.nvars()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.homogeneous_degree()?.is_none() {
        return Err(Error::Invalid("polynomial is not homogeneous".into()));
    }
    let chart = p.chart();
    let q = p.normalized();
    let affine: Vec<String> = f
        .vars()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != chart)
        .map(|(_, v)| v.clone())
        .collect();
    let mut images = Vec::with_capacity(f.nvars());
    let mut next = 0;
    for (i, qi) in q.iter().enumerate() {
        if i == chart {
            images.push(Polynomial::constant(affine.clone(), Rational::one()));
        } else {
            let shifted = Polynomial::variable(affine.clone(), next)
                .add(&Polynomial::constant(affine.clone(), qi.clone()));
            images.push(shifted);
            next += 1;
        }
    }
    Ok(f.compose(&images))
}

/// True iff `f(p) = 0` and every partial derivative vanishes at `p`.
pub fn is_singular_point(f: &Polynomial, p: &ProjectivePoint) -> Result<bool> {
    if p.coords().len() != f.nvars() {
        return Err(Error::Invalid(
            "point dimension does not match polynomial".into(),
        ));
    }
    let x = p.coords();
    Ok(f.eval(x).is_zero() && f.partials().iter().all(|d| d.eval(x).is_zero()))
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits parse as integer"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
            }
        };
        column += i - start;
        out.push((tok, pos));
    }
    Ok(out)
}

#[derive(Debug)]
enum Expr {
    Num(Rational),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(e)) => {
                    let e: u32 = u32::try_from(e)
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| syntax(pos, format!("exponent exceeds {MAX_EXPONENT}")))?;
                    return self.after_operand(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(syntax(pos, "expected a non-negative integer exponent")),
            }
        }
        self.after_operand(base)
    }

    /// Rejects juxtaposition such as `2x` or `x(y)`.
    fn after_operand(&self, e: Expr) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) => Err(syntax(
                self.pos(),
                "implicit multiplication is not allowed; use `*`",
            )),
            Some(Tok::Caret) => Err(syntax(self.pos(), "chained `^` is not allowed")),
            _ => Ok(e),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => Ok(Expr::Num(Rational::new(n, d))),
                        Some(Tok::Int(_)) => Err(syntax(dpos, "zero denominator")),
                        _ => Err(syntax(dpos, "expected an integer denominator")),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => Ok(Expr::Var(name)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cpos = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(syntax(cpos, "expected `)`")),
                }
            }
            Some(t) => Err(syntax(pos, format!("unexpected token {t:?}"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn collect_vars(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(v) => {
            out.insert(v.clone());
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Neg(a) | Expr::Pow(a, _) => collect_vars(a, out),
    }
}

fn evaluate(e: &Expr, vars: &[String]) -> Result<Polynomial> {
    Ok(match e {
        Expr::Num(q) => Polynomial::constant(vars.to_vec(), q.clone()),
        Expr::Var(v) => {
            let i = vars
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            Polynomial::variable(vars.to_vec(), i)
        }
        Expr::Add(a, b) => evaluate(a, vars)?.add(&evaluate(b, vars)?),
        Expr::Sub(a, b) => evaluate(a, vars)?.sub(&evaluate(b, vars)?),
        Expr::Mul(a, b) => evaluate(a, vars)?.mul(&evaluate(b, vars)?),
        Expr::Neg(a) => evaluate(a, vars)?.neg(),
        Expr::Pow(a, k) => evaluate(a, vars)?.pow(*k),
    })
}

fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let end = {
        let lines: Vec<&str> = text.split('\n').collect();
        Pos {
            line: lines.len(),
            column: lines.last().map_or(0, |l| l.chars().count()) + 1,
        }
    };
    let mut p = Parser { toks, at: 0, end };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Orders identifiers by alphabetic stem, then numeric suffix, so that
/// `x2 < x10`.
fn natural_key(name: &str) -> (String, Option<BigInt>, String) {
    let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, digits) = name.split_at(split);
    (stem.to_string(), digits.parse().ok(), name.to_string())
}

/// Parses with variables inferred from the text, in natural order.
pub fn parse(text: &str) -> Result<Polynomial> {
    let e = parse_expr(text)?;
    let mut names = BTreeSet::new();
    collect_vars(&e, &mut names);
    let mut vars: Vec<String> = names.into_iter().collect();
    vars.sort_by_key(|v| natural_key(v));
    evaluate(&e, &vars)
}

/// Parses against a declared variable list; other identifiers are errors.
pub fn parse_with_vars(text: &str, vars: &[String]) -> Result<Polynomial> {
    let unique: BTreeSet<&String> = vars.iter().collect();
    if unique.len() != vars.len() {
        return Err(Error::Invalid("duplicate variable names".into()));
    }
    if let Some(bad) = vars.iter().find(|v| !is_identifier(v)) {
        return Err(Error::Invalid(format!(
            "`{bad}` is not a valid variable name"
        )));
    }
    evaluate(&parse_expr(text)?, vars)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
