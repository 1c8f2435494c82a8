//! Sparse exact multivariate polynomials with a deterministic graded
//! lexicographic term order, plus the plain-text grammar used by scenario
//! files (`x^2 - y^3`, `*` optional, rational coefficients).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::order::OrderValue;

/// Ambient polynomial ring: an ordered variable list over a coefficient field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ring {
    vars: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new(vars: Vec<String>, field: Field) -> Result<Ring, Error> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::NameCollision(v.clone()));
            }
        }
        Ok(Ring { vars, field })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Extends the ambient with one fresh variable.
    pub fn extend(&self, name: &str) -> Result<Ring, Error> {
        if self.vars.iter().any(|v| v == name) {
            return Err(Error::NameCollision(name.to_string()));
        }
        let mut vars = self.vars.clone();
        vars.push(name.to_string());
        Ok(Ring { vars, field: self.field })
    }

    /// A fresh line-coordinate name: `s`, or `s1`, `s2`, ... on collision.
    pub fn fresh_var(&self) -> String {
        if !self.vars.iter().any(|v| v == "s") {
            return "s".to_string();
        }
        let mut i = 1;
        loop {
            let cand = format!("s{i}");
            if !self.vars.iter().any(|v| v == &cand) {
                return cand;
            }
            i += 1;
        }
    }
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Coeff) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        if !ring.field.is_zero(&c) {
            p.terms.insert(Monomial(vec![0; ring.dim()]), c);
        }
        p
    }

    pub fn variable(ring: &Ring, idx: usize) -> Polynomial {
        let mut e = vec![0; ring.dim()];
        e[idx] = 1;
        let mut p = Polynomial::zero(ring);
        p.terms.insert(Monomial(e), ring.field.one());
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    fn insert_term(&mut self, m: Monomial, c: Coeff) {
        let field = self.ring.field;
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = field.add(existing, &c);
                if field.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                if !field.is_zero(&c) {
                    self.terms.insert(m, c);
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.ring.field;
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let field = self.ring.field;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                out.insert_term(m, field.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        let field = self.ring.field;
        let mut out = Polynomial::zero(&self.ring);
        for (m, a) in &self.terms {
            out.insert_term(m.clone(), field.mul(a, c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(&self.ring, self.ring.field.one());
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Least total degree of a term, i.e. the order at the origin.
    pub fn order_at_origin(&self) -> OrderValue {
        match self.terms.keys().map(|m| m.degree()).min() {
            Some(n) => OrderValue::Finite(n),
            None => OrderValue::Infinity,
        }
    }

    fn check_point(&self, p: &[Coeff]) -> Result<(), Error> {
        if p.len() != self.ring.dim() {
            return Err(Error::VariableMismatch { expected: self.ring.dim(), got: p.len() });
        }
        Ok(())
    }

    /// g(x) = f(x + p), exact.
    pub fn translate(&self, p: &[Coeff]) -> Result<Polynomial, Error> {
        self.check_point(p)?;
        if p.iter().all(|c| self.ring.field.is_zero(c)) {
            return Ok(self.clone());
        }
        let maps: Vec<Polynomial> = (0..self.ring.dim())
            .map(|i| Polynomial::variable(&self.ring, i).add(&Polynomial::constant(&self.ring, p[i].clone())))
            .collect();
        Ok(self.substitute(&maps))
    }

    /// Order of f in the regular local ring at p: the least total order of
    /// a divided-power derivative not vanishing at p. Evaluating derivatives
    /// directly avoids translating high-degree polynomials.
    pub fn order_at(&self, p: &[Coeff]) -> Result<OrderValue, Error> {
        self.check_point(p)?;
        if self.is_zero() {
            return Ok(OrderValue::Infinity);
        }
        if p.iter().all(|c| self.ring.field.is_zero(c)) {
            return Ok(self.order_at_origin());
        }
        let field = self.ring.field;
        let max = self.total_degree().unwrap();
        // power tables p_i^e for e up to the degree in each variable
        let powers: Vec<Vec<Coeff>> = (0..self.ring.dim())
            .map(|i| {
                let top = self.degree_in(i).unwrap_or(0);
                let mut row = Vec::with_capacity(top as usize + 1);
                row.push(field.one());
                for _ in 0..top {
                    let last = row.last().unwrap().clone();
                    row.push(field.mul(&last, &p[i]));
                }
                row
            })
            .collect();
        let mut index = vec![0u32; self.ring.dim()];
        for k in 0..=max {
            if self.level_has_nonzero_derivative(k, 0, &mut index, &powers) {
                return Ok(OrderValue::Finite(k));
            }
        }
        unreachable!("a nonzero polynomial has finite order everywhere")
    }

    /// Walks the multi-indices of total order `k` (positions >= `from` still
    /// free) and reports whether some D^(a)f is nonzero at the tabled point.
    fn level_has_nonzero_derivative(
        &self,
        k: u32,
        from: usize,
        index: &mut Vec<u32>,
        powers: &[Vec<Coeff>],
    ) -> bool {
        if from + 1 == index.len() {
            index[from] = k;
            let hit = !self.ring.field.is_zero(&self.hasse_eval(index, powers));
            index[from] = 0;
            return hit;
        }
        for a in 0..=k {
            index[from] = a;
            if self.level_has_nonzero_derivative(k - a, from + 1, index, powers) {
                index[from] = 0;
                return true;
            }
        }
        index[from] = 0;
        false
    }

    /// D^(a)f evaluated from precomputed coordinate power tables.
    fn hasse_eval(&self, a: &[u32], powers: &[Vec<Coeff>]) -> Coeff {
        let field = self.ring.field;
        let mut acc = field.zero();
        'terms: for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, (&e, &ai)) in m.0.iter().zip(a.iter()).enumerate() {
                if e < ai {
                    continue 'terms;
                }
                let b = field.binomial(e, ai);
                if field.is_zero(&b) {
                    continue 'terms;
                }
                term = field.mul(&term, &b);
                term = field.mul(&term, &powers[i][(e - ai) as usize]);
            }
            acc = field.add(&acc, &term);
        }
        acc
    }

    pub fn eval(&self, p: &[Coeff]) -> Result<Coeff, Error> {
        self.check_point(p)?;
        let field = self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = field.mul(&term, &p[i]);
                }
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Substitutes each variable by the corresponding polynomial.
    pub fn substitute(&self, maps: &[Polynomial]) -> Polynomial {
        assert_eq!(maps.len(), self.ring.dim());
        let target = maps.first().map(|m| m.ring.clone()).unwrap_or_else(|| self.ring.clone());
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&maps[i].pow(e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Divided-power derivative of order `a` in the given variable:
    /// x^e maps to binom(e, a) x^{e-a}.
    pub fn hasse_derivative(&self, var: usize, a: u32) -> Polynomial {
        assert!(var < self.ring.dim());
        let field = self.ring.field;
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e < a {
                continue;
            }
            let b = field.binomial(e, a);
            if field.is_zero(&b) {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - a;
            out.insert_term(Monomial(exps), field.mul(c, &b));
        }
        out
    }

    /// Least exponent of `var` over all terms; None for the zero polynomial.
    pub fn min_exponent(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).min()
    }

    /// Exact division by var^n; errors when some term has a smaller exponent.
    pub fn divide_by_var_power(&self, var: usize, n: u32) -> Result<Polynomial, Error> {
        if n == 0 {
            return Ok(self.clone());
        }
        if let Some(min) = self.min_exponent(var) {
            if min < n {
                return Err(Error::InexactTransform {
                    var: self.ring.vars[var].clone(),
                    power: n,
                });
            }
        }
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[var] -= n;
            out.terms.insert(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Point blow-up substitution at the origin: x_i -> x_chart * x_i for
    /// i != chart. On exponents: the chart exponent becomes the total degree.
    pub fn blowup_substitute(&self, chart: usize) -> Polynomial {
        assert!(chart < self.ring.dim());
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[chart] = m.degree();
            out.insert_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Re-expresses the polynomial in an extended ring (old variables keep
    /// their positions; new trailing variables get exponent zero).
    pub fn lift_to(&self, ring: &Ring) -> Polynomial {
        assert!(ring.dim() >= self.ring.dim());
        assert_eq!(&ring.vars[..self.ring.dim()], &self.ring.vars[..]);
        let pad = ring.dim() - self.ring.dim();
        let mut out = Polynomial::zero(ring);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.extend(std::iter::repeat(0).take(pad));
            out.terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Partial evaluation of one variable at a field element.
    pub fn eval_var(&self, var: usize, value: &Coeff) -> Polynomial {
        let field = self.ring.field;
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for _ in 0..m.0[var] {
                coeff = field.mul(&coeff, value);
            }
            let mut exps = m.0.clone();
            exps[var] = 0;
            out.insert_term(Monomial(exps), coeff);
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Coefficient of var^k, as a polynomial in the remaining variables
    /// (still expressed in the full ambient ring).
    pub fn coefficient_of(&self, var: usize, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut exps = m.0.clone();
                exps[var] = 0;
                out.terms.insert(Monomial(exps), c.clone());
            }
        }
        out
    }

    /// Coefficient of the graded-lex leading term.
    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.values().next_back()
    }

    /// Scales so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => {
                let inv = self.ring.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    pub fn parse(ring: &Ring, input: &str) -> Result<Polynomial, Error> {
        Parser::new(ring, input).parse()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (neg, mag) = match c {
                Coeff::Q(q) if q < &num::BigRational::from_integer(0.into()) => {
                    (true, Coeff::Q(-q))
                }
                other => (false, other.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

// Recursive-descent parser for the plain-text polynomial grammar.

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Parser<'a> {
    ring: &'a Ring,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, input: &str) -> Parser<'a> {
        let mut tokens = Vec::new();
        let bytes = input.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    tokens.push((i, Token::Plus));
                    i += 1;
                }
                '-' => {
                    tokens.push((i, Token::Minus));
                    i += 1;
                }
                '*' => {
                    tokens.push((i, Token::Star));
                    i += 1;
                }
                '^' => {
                    tokens.push((i, Token::Caret));
                    i += 1;
                }
                '(' => {
                    tokens.push((i, Token::LParen));
                    i += 1;
                }
                ')' => {
                    tokens.push((i, Token::RParen));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    // a slash directly between digits makes a rational literal
                    if i < bytes.len()
                        && bytes[i] == b'/'
                        && i + 1 < bytes.len()
                        && bytes[i + 1].is_ascii_digit()
                    {
                        i += 1;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                    tokens.push((start, Token::Number(input[start..i].to_string())));
                }
                _ if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len()
                        && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    tokens.push((start, Token::Ident(input[start..i].to_string())));
                }
                _ => {
                    tokens.push((i, Token::Ident(c.to_string())));
                    i += 1;
                }
            }
        }
        Parser { ring, tokens, pos: 0, input_len: input.len() }
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.input_len)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::PolyParse { offset: self.offset(), msg: msg.into() }
    }

    fn parse(mut self) -> Result<Polynomial, Error> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial, Error> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Plus) => {
                self.bump();
            }
            Some(Token::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                // juxtaposition: `2x`, `x y`, `3(x+1)`
                Some(Token::Number(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32, Error> {
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            match self.bump() {
                Some(Token::Number(n)) if !n.contains('/') => n
                    .parse()
                    .map_err(|_| self.err(format!("bad exponent `{n}`"))),
                other => Err(self.err(format!("expected integer exponent, got {other:?}"))),
            }
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Polynomial, Error> {
        match self.bump() {
            Some(Token::Number(n)) => {
                let c = self
                    .ring
                    .field()
                    .parse(&n)
                    .map_err(|e| self.err(e.to_string()))?;
                let base = Polynomial::constant(self.ring, c);
                let e = self.exponent()?;
                Ok(base.pow(e))
            }
            Some(Token::Ident(name)) => {
                let idx = self
                    .ring
                    .var_index(&name)
                    .ok_or_else(|| self.err(format!("undeclared variable `{name}`")))?;
                let e = self.exponent()?;
                let mut exps = vec![0; self.ring.dim()];
                exps[idx] = e;
                let mut p = Polynomial::zero(self.ring);
                p.insert_term(Monomial(exps), self.ring.field().one());
                Ok(p)
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Token::RParen) {
                    return Err(self.err("expected `)`"));
                }
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            other => Err(self.err(format!("expected factor, got {other:?}"))),
        }
    }
}
